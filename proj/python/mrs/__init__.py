# Copyright 2026 The mrs Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the mrs native core."""

import base64
import json

from ._core import (  # noqa: F401
    LocalDaemon,
    MrsError,
    decode_worker_line,
    encode_record,
    fnv1a64,
    parse_streaming_args,
    partition,
)
from ._core import Client as _NativeClient

__all__ = [
    "Client",
    "LocalDaemon",
    "MrsError",
    "decode_worker_line",
    "encode_record",
    "fnv1a64",
    "parse_streaming_args",
    "partition",
]


class Client:
    """Thin wire-protocol client; every method is one request."""

    def __init__(self, address="127.0.0.1:7070"):
        self._native = _NativeClient(address)

    @property
    def address(self):
        return self._native.address

    def call(self, request):
        response = json.loads(self._native.call_json(json.dumps(request)))
        if not response.get("ok"):
            raise MrsError(
                f"{response.get('error')}: {response.get('message')}", response.get("error")
            )
        return response

    def put(self, path, data):
        return self.call({"op": "put", "path": path, "data": base64.b64encode(data).decode()})

    def get(self, path):
        return base64.b64decode(self.call({"op": "get", "path": path})["data"])

    def ls(self, prefix="/"):
        return self.call({"op": "ls", "prefix": prefix})["files"]

    def submit(self, **spec):
        return self.call({"op": "submit", **spec})["id"]

    def wait(self, job_id, timeout_ms=None):
        req = {"op": "wait", "id": job_id}
        if timeout_ms is not None:
            req["timeout_ms"] = timeout_ms
        return self.call(req)["status"]
