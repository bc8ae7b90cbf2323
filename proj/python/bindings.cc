// Copyright (c) 2026 The mrs Authors. All Rights Reserved
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mrs._core: Python access to the codec, partitioner, streaming flag
// parser, the wire-protocol client and an in-process daemon.

#include <pybind11/pybind11.h>
#include <pybind11/eval.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include "mrs/cli/streaming_args.h"
#include "mrs/engine/partition.h"
#include "mrs/jobd/daemon.h"
#include "mrs/jobd/net.h"
#include "mrs/streaming/codec.h"

namespace py = pybind11;

namespace {

PyObject* mrs_error = nullptr;

[[noreturn]] void Raise(const mrs::Status& st) {
  py::object err = py::reinterpret_borrow<py::object>(mrs_error)(
      st.ToString(), std::string(mrs::ErrorCodeName(st.code())));
  PyErr_SetObject(mrs_error, err.ptr());
  throw py::error_already_set();
}

template <typename T>
T Unwrap(mrs::Result<T> r) {
  if (!r.ok()) Raise(r.status());
  return std::move(r).value();
}

// Daemon + TCP server in this process, for tests and notebooks.
class LocalDaemon {
 public:
  LocalDaemon(const std::string& data_dir, int nodes, int capacity, uint64_t block_size,
              int replication) {
    mrs::jobd::DaemonConfig c;
    c.data_dir = data_dir;
    c.nodes = nodes;
    c.capacity = capacity;
    c.block_size = block_size;
    c.replication = replication;
    daemon_ = std::make_unique<mrs::jobd::Daemon>(c);
    if (auto st = daemon_->Start(); !st.ok()) Raise(st);
    server_ = std::make_unique<mrs::jobd::Server>(*daemon_);
    if (auto st = server_->Start("127.0.0.1:0"); !st.ok()) Raise(st);
  }
  std::string address() const { return server_->address().ToString(); }
  void stop() {
    if (server_) server_->Stop();
  }

 private:
  std::unique_ptr<mrs::jobd::Daemon> daemon_;
  std::unique_ptr<mrs::jobd::Server> server_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mrs native core";

  py::dict ns;
  py::exec(R"(
class MrsError(RuntimeError):
    """Raised for daemon and core errors; `code` is the wire error name."""
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code
)",
           py::globals(), ns);
  py::object cls = ns["MrsError"];
  cls.attr("__module__") = "mrs";
  m.attr("MrsError") = cls;
  mrs_error = cls.ptr();

  m.def("fnv1a64", [](py::bytes key) { return mrs::engine::Fnv1a64(std::string(key)); });
  m.def("partition", [](py::bytes key, int num_reducers) {
    if (num_reducers < 1) throw py::value_error("num_reducers must be >= 1");
    return mrs::engine::Partition(std::string(key), num_reducers);
  });
  m.def("encode_record", [](py::bytes key, py::bytes value) {
    return py::bytes(Unwrap(mrs::streaming::EncodeRecord({std::string(key), std::string(value)})));
  });
  m.def("decode_worker_line", [](py::bytes line) {
    auto r = mrs::streaming::DecodeWorkerLine(std::string(line));
    return py::make_tuple(py::bytes(r.key), py::bytes(r.value));
  });
  m.def("parse_streaming_args", [](const std::vector<std::string>& argv) {
    auto a = Unwrap(mrs::cli::ParseStreamingArgs(argv));
    py::dict d;
    d["inputformat"] = a.inputformat;
    d["input"] = a.input;
    d["output"] = a.output;
    d["mapper"] = a.mapper;
    d["reducer"] = a.reducer ? py::object(py::str(*a.reducer)) : py::none();
    d["files"] = a.files;
    d["num_reduce_tasks"] = a.num_reduce_tasks;
    d["jobname"] = a.jobname ? py::object(py::str(*a.jobname)) : py::none();
    return d;
  });

  py::class_<mrs::jobd::Client>(m, "Client")
      .def(py::init<std::string>(), py::arg("address"))
      .def_property_readonly("address", &mrs::jobd::Client::address)
      // JSON text in, JSON text out; daemon errors are returned, not raised.
      .def("call_json", [](const mrs::jobd::Client& c, const std::string& request) {
        mrs::jobd::Json req;
        try {
          req = mrs::jobd::Json::parse(request);
        } catch (const std::exception& e) {
          throw py::value_error(e.what());
        }
        mrs::Result<mrs::jobd::Json> r(mrs::Status(mrs::ErrorCode::kIOError, ""));
        {
          py::gil_scoped_release release;
          r = c.Call(req);
        }
        return Unwrap(std::move(r)).dump();
      });

  py::class_<LocalDaemon>(m, "LocalDaemon")
      .def(py::init<const std::string&, int, int, uint64_t, int>(), py::arg("data_dir"),
           py::arg("nodes") = 4, py::arg("capacity") = 2, py::arg("block_size") = 1 << 20,
           py::arg("replication") = 2)
      .def_property_readonly("address", &LocalDaemon::address)
      .def("stop", &LocalDaemon::stop, py::call_guard<py::gil_scoped_release>());
}
