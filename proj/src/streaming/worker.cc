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

#include "mrs/streaming/worker.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>
#include <mutex>
#include <thread>

extern char** environ;

namespace mrs::streaming {

namespace fs = std::filesystem;

namespace {

constexpr size_t kFeedBatchBytes = 64 * 1024;
constexpr int kPollMillis = 20;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { Close(); }

  int get() const { return fd_; }
  bool open() const { return fd_ >= 0; }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  void Reset(int fd) {
    Close();
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void SetNonBlocking(int fd) {
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
}

std::string ResolveExecutable(const std::string& argv0, const fs::path& workdir) {
  if (!workdir.empty()) {
    std::error_code ec;
    const fs::path staged = workdir / fs::path(argv0).filename();
    if (fs::is_regular_file(staged, ec)) return staged.string();
  }
  return argv0;
}

std::vector<std::string> BuildEnvironment(
    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::map<std::string, std::string> vars;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view kv(*e);
    const size_t eq = kv.find('=');
    if (eq == std::string_view::npos) continue;
    vars[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
  }
  for (const auto& [k, v] : extra) vars[k] = v;
  std::vector<std::string> out;
  out.reserve(vars.size());
  for (const auto& [k, v] : vars) out.push_back(k + "=" + v);
  return out;
}

void AppendTail(std::string* tail, std::string_view chunk) {
  tail->append(chunk);
  if (tail->size() > kStderrTailBytes) {
    tail->erase(0, tail->size() - kStderrTailBytes);
  }
}

void KillGroup(pid_t pid) {
  ::kill(-pid, SIGKILL);
  ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
}

int DecodeExit(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

std::vector<std::string> SplitCommandLine(std::string_view cmd) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < cmd.size()) {
    while (i < cmd.size() && std::isspace(static_cast<unsigned char>(cmd[i]))) ++i;
    size_t j = i;
    while (j < cmd.size() && !std::isspace(static_cast<unsigned char>(cmd[j]))) ++j;
    if (j > i) out.emplace_back(cmd.substr(i, j - i));
    i = j;
  }
  return out;
}

LineSource VectorSource(const std::vector<std::string>& lines) {
  size_t next = 0;
  return [&lines, next](std::string* line) mutable {
    if (next >= lines.size()) return false;
    *line = lines[next++];
    return true;
  };
}

Result<ProcessOutcome> RunProcess(const WorkerSpec& spec, const LineSource& input,
                                  const ChunkSink& output) {
  if (spec.argv.empty()) {
    return Status(ErrorCode::kSpawnFailed, "empty command line");
  }
  IgnoreSigpipe();

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    return Status(ErrorCode::kSpawnFailed, std::strerror(errno));
  }
  Fd in_r(in_pipe[0]), in_w(in_pipe[1]);
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    return Status(ErrorCode::kSpawnFailed, std::strerror(errno));
  }
  Fd out_r(out_pipe[0]), out_w(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    return Status(ErrorCode::kSpawnFailed, std::strerror(errno));
  }
  Fd err_r(err_pipe[0]), err_w(err_pipe[1]);

  const std::string exe = ResolveExecutable(spec.argv[0], spec.workdir);
  std::vector<std::string> args = spec.argv;
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::vector<std::string> env = BuildEnvironment(spec.env);
  std::vector<char*> envp;
  for (auto& e : env) envp.push_back(e.data());
  envp.push_back(nullptr);

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in_r.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&fa, out_w.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&fa, err_w.get(), STDERR_FILENO);
  if (!spec.workdir.empty()) {
    posix_spawn_file_actions_addchdir_np(&fa, spec.workdir.c_str());
  }
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t defaults, empty;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  sigemptyset(&empty);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setsigmask(&attr, &empty);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF |
                                      POSIX_SPAWN_SETSIGMASK);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, exe.c_str(), &fa, &attr, argv.data(),
                                envp.data());
  posix_spawn_file_actions_destroy(&fa);
  posix_spawnattr_destroy(&attr);
  in_r.Close();
  out_w.Close();
  err_w.Close();
  if (rc != 0) {
    return Status(ErrorCode::kSpawnFailed, exe + ": " + std::strerror(rc));
  }

  SetNonBlocking(in_w.get());
  SetNonBlocking(out_r.get());
  SetNonBlocking(err_r.get());

  const auto deadline = std::chrono::steady_clock::now() + spec.timeout;
  ProcessOutcome outcome;
  std::string feed;
  size_t feed_pos = 0;
  bool source_done = !input;
  bool broken_pipe = false;
  Status sink_status;
  char buf[1 << 16];

  auto fail = [&](ErrorCode code, std::string msg) -> Result<ProcessOutcome> {
    KillGroup(pid);
    if (!outcome.stderr_tail.empty()) msg += "; stderr: " + outcome.stderr_tail;
    return Status(code, std::move(msg));
  };

  while (in_w.open() || out_r.open() || err_r.open()) {
    if (in_w.open() && feed_pos == feed.size()) {
      feed.clear();
      feed_pos = 0;
      std::string line;
      while (!source_done && feed.size() < kFeedBatchBytes) {
        if (!input(&line)) {
          source_done = true;
        } else {
          feed += line;
          feed += kRecordSeparator;
        }
      }
      if (feed.empty()) in_w.Close();
    }

    pollfd fds[3];
    nfds_t n = 0;
    int in_idx = -1, out_idx = -1, err_idx = -1;
    if (in_w.open()) {
      in_idx = static_cast<int>(n);
      fds[n++] = {in_w.get(), POLLOUT, 0};
    }
    if (out_r.open()) {
      out_idx = static_cast<int>(n);
      fds[n++] = {out_r.get(), POLLIN, 0};
    }
    if (err_r.open()) {
      err_idx = static_cast<int>(n);
      fds[n++] = {err_r.get(), POLLIN, 0};
    }
    if (n == 0) break;
    const int pr = ::poll(fds, n, kPollMillis);
    if (pr < 0 && errno != EINTR) {
      return fail(ErrorCode::kWorkerFailed, std::string("poll: ") + std::strerror(errno));
    }
    if (spec.cancel != nullptr && spec.cancel->load()) {
      return fail(ErrorCode::kCancelled, "worker cancelled");
    }
    if (std::chrono::steady_clock::now() > deadline) {
      return fail(ErrorCode::kTimeout, "worker exceeded time limit");
    }
    if (pr <= 0) continue;

    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t w = ::write(in_w.get(), feed.data() + feed_pos, feed.size() - feed_pos);
      if (w > 0) {
        feed_pos += static_cast<size_t>(w);
      } else if (w < 0 && errno != EAGAIN && errno != EINTR) {
        broken_pipe = (errno == EPIPE);
        in_w.Close();
      }
    }
    if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      for (;;) {
        const ssize_t r = ::read(out_r.get(), buf, sizeof(buf));
        if (r > 0) {
          if (output) {
            sink_status = output(std::string_view(buf, static_cast<size_t>(r)));
            if (!sink_status.ok()) {
              return fail(ErrorCode::kWorkerFailed,
                          "bad worker output: " + sink_status.ToString());
            }
          }
          continue;
        }
        if (r == 0) out_r.Close();
        else if (errno != EAGAIN && errno != EINTR) out_r.Close();
        break;
      }
    }
    if (err_idx >= 0 && (fds[err_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      for (;;) {
        const ssize_t r = ::read(err_r.get(), buf, sizeof(buf));
        if (r > 0) {
          AppendTail(&outcome.stderr_tail, std::string_view(buf, static_cast<size_t>(r)));
          continue;
        }
        if (r == 0) err_r.Close();
        else if (errno != EAGAIN && errno != EINTR) err_r.Close();
        break;
      }
    }
  }

  int status = 0;
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) {
      return Status(ErrorCode::kWorkerFailed, std::string("waitpid: ") + std::strerror(errno));
    }
    if (spec.cancel != nullptr && spec.cancel->load()) {
      return fail(ErrorCode::kCancelled, "worker cancelled");
    }
    if (std::chrono::steady_clock::now() > deadline) {
      return fail(ErrorCode::kTimeout, "worker exceeded time limit");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  // Stray children of a shell script may still hold the group alive.
  ::kill(-pid, SIGKILL);

  outcome.exit_code = DecodeExit(status);
  if (broken_pipe && outcome.exit_code == 0) {
    std::string msg = "broken pipe: worker stopped reading its input";
    if (!outcome.stderr_tail.empty()) msg += "; stderr: " + outcome.stderr_tail;
    return Status(ErrorCode::kWorkerFailed, std::move(msg));
  }
  return outcome;
}

Result<ProcessOutcome> RunRecordWorker(
    const WorkerSpec& spec, const LineSource& input,
    const std::function<Status(Record&&)>& sink) {
  LineSplitter splitter;
  auto on_line = [&](std::string_view line) { return sink(DecodeWorkerLine(line)); };
  auto outcome = RunProcess(spec, input, [&](std::string_view chunk) {
    return splitter.Feed(chunk, on_line);
  });
  if (!outcome.ok()) return outcome;
  if (outcome->exit_code == 0) {
    MRS_RETURN_IF_ERROR(splitter.Finish(on_line));
  }
  return outcome;
}

Result<WorkerResult> SpawnWorker(const WorkerSpec& spec, const LineSource& input) {
  WorkerResult result;
  auto outcome = RunRecordWorker(spec, input, [&](Record&& r) {
    result.records.push_back(std::move(r));
    return Status::OK();
  });
  if (!outcome.ok()) return outcome.status();
  result.exit_code = outcome->exit_code;
  result.stderr_tail = std::move(outcome->stderr_tail);
  if (result.exit_code != 0) result.records.clear();
  return result;
}

}  // namespace mrs::streaming
