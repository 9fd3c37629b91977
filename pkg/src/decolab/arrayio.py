"""Self-describing binary array container and JSON sidecar manifests.

Every exported array lives in a fixed-layout file: a 64-byte header
(magic "WDLB", u32 format version, u8 dtype code, u8 rank, four u64
dimensions, zero padding), then the row-major payload.  Everything is
little-endian on disk regardless of host, so files are bit-exact across
platforms.  Provenance (seed, parameter hash, timestamps, digests) does
not go in the header; it belongs to the JSON sidecar next to the file.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError

MAGIC = b"WDLB"
VERSION = 1
HEADER = struct.Struct("<4sIBB4Q")  # 42 bytes used, zero-padded to 64
HEADER_SIZE = 64
MAX_RANK = 4

# on-disk dtype codes; all payloads little-endian
_CODE_TO_DTYPE = {
    1: np.dtype("<f8"),
    2: np.dtype("<c16"),
    3: np.dtype("<i8"),
}
_KIND_TO_CODE = {"f": 1, "c": 2, "i": 3}


def _dtype_code(dtype: np.dtype) -> int:
    code = _KIND_TO_CODE.get(dtype.kind)
    if code is None or _CODE_TO_DTYPE[code].itemsize != dtype.itemsize:
        raise ConfigError(f"unsupported array dtype {dtype}")
    return code


def write_array(path, arr) -> str:
    """Write arr to path in container format; returns the file's sha256."""
    arr = np.asarray(arr)
    if arr.ndim == 0 or arr.ndim > MAX_RANK:
        raise ConfigError(f"array rank must be 1..{MAX_RANK}, got {arr.ndim}")
    code = _dtype_code(arr.dtype)
    dims = list(arr.shape) + [0] * (MAX_RANK - arr.ndim)
    header = HEADER.pack(MAGIC, VERSION, code, arr.ndim, *dims)
    header += b"\0" * (HEADER_SIZE - len(header))
    payload = np.ascontiguousarray(arr, dtype=_CODE_TO_DTYPE[code]).tobytes()
    blob = header + payload
    Path(path).write_bytes(blob)
    return hashlib.sha256(blob).hexdigest()


def read_array(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    if len(blob) < HEADER_SIZE:
        raise ConfigError(f"{path}: truncated header")
    magic, version, code, rank, *dims = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ConfigError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ConfigError(f"{path}: unsupported format version {version}")
    if not 1 <= rank <= MAX_RANK:
        raise ConfigError(f"{path}: bad rank {rank}")
    dtype = _CODE_TO_DTYPE.get(code)
    if dtype is None:
        raise ConfigError(f"{path}: unknown dtype code {code}")
    shape = tuple(dims[:rank])
    want = int(np.prod(shape)) * dtype.itemsize
    payload = blob[HEADER_SIZE:]
    if len(payload) != want:
        raise ConfigError(
            f"{path}: payload is {len(payload)} bytes, header promises {want}"
        )
    arr = np.frombuffer(payload, dtype=dtype).reshape(shape)
    return arr.astype(dtype.newbyteorder("="), copy=True)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def params_hash(snapshot: dict) -> str:
    """Stable hash of a (nested, JSON-safe) configuration snapshot."""
    canon = json.dumps(snapshot, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def write_manifest(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def read_manifest(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from None
