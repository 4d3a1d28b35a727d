"""Tensor and form serialization.

JSON layout: ``{"shape": [...], "entries": [...]}`` with the entries flat in
row-major order; complex entries are ``[re, im]`` pairs.

Binary layout (little-endian): magic ``b"HLGT"``, ``uint32`` order,
``uint32`` flags (bit 0 = complex), ``order`` x ``uint64`` shape, then the
entries as ``float64`` (interleaved ``re, im`` when complex).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .exponents import as_exponent_vector
from .mforms import MultilinearForm
from .tensor_norms import as_tensor

MAGIC = b"HLGT"


def tensor_to_json(t) -> dict:
    a = as_tensor(t)
    flat = a.ravel()
    if np.iscomplexobj(a):
        entries = [[float(z.real), float(z.imag)] for z in flat]
    else:
        entries = [float(z) for z in flat]
    return {"shape": list(a.shape), "entries": entries}


def tensor_from_json(obj: dict) -> np.ndarray:
    try:
        shape = tuple(int(n) for n in obj["shape"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("tensor JSON needs 'shape' and 'entries'") from exc
    if not shape or any(n < 1 for n in shape):
        raise ValueError(f"invalid tensor shape {list(shape)}")
    if entries and isinstance(entries[0], list):
        arr = np.array([complex(re, im) for re, im in entries])
    else:
        arr = np.array(entries, dtype=float)
    if arr.size != int(np.prod(shape)):
        raise ValueError(f"tensor shape {list(shape)} needs {int(np.prod(shape))} entries, got {arr.size}")
    return as_tensor(arr.reshape(shape))


def dumps_tensor_binary(t) -> bytes:
    a = as_tensor(t)
    cplx = np.iscomplexobj(a)
    header = MAGIC + struct.pack("<II", a.ndim, 1 if cplx else 0)
    header += struct.pack(f"<{a.ndim}Q", *a.shape)
    payload = a.astype("<c16" if cplx else "<f8").tobytes(order="C")
    return header + payload


def loads_tensor_binary(data: bytes) -> np.ndarray:
    if data[:4] != MAGIC:
        raise ValueError("not a tensor file: bad magic")
    order, flags = struct.unpack_from("<II", data, 4)
    shape = struct.unpack_from(f"<{order}Q", data, 12)
    offset = 12 + 8 * order
    dtype = "<c16" if flags & 1 else "<f8"
    count = int(np.prod(shape))
    expected = offset + count * np.dtype(dtype).itemsize
    if len(data) != expected:
        raise ValueError(f"tensor file truncated or oversized: {len(data)} bytes, expected {expected}")
    arr = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
    return as_tensor(arr.astype(complex if flags & 1 else float).reshape(shape))


def load_tensor(path) -> np.ndarray:
    """Read a tensor from ``.json`` or the binary format (any other suffix)."""
    path = Path(path)
    try:
        if path.suffix.lower() == ".json":
            return tensor_from_json(json.loads(path.read_text()))
        return loads_tensor_binary(path.read_bytes())
    except OSError as exc:
        raise OSError(f"cannot read tensor {path}: {exc.strerror}") from exc


def save_tensor(t, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(tensor_to_json(t)))
    else:
        path.write_bytes(dumps_tensor_binary(t))


def form_to_json(T: MultilinearForm) -> dict:
    return {"tensor": tensor_to_json(T.coeffs), "domain_p": T.domain_p.to_json(), "field": T.field}


def form_from_json(obj: dict) -> MultilinearForm:
    try:
        return MultilinearForm(tensor_from_json(obj["tensor"]), as_exponent_vector(obj["domain_p"]),
                               obj.get("field", ""))
    except KeyError as exc:
        raise ValueError(f"form JSON is missing {exc}") from exc
