"""Bit-exact binary snapshot formats and atomic file writes.

Field snapshots ("FLD1"): magic, then little-endian u32 n, u32 ncomp,
f64 time, then ncomp blocks of n*n f64 in row-major order with the x index
fastest.  Flow-map snapshots ("FMP1"): magic, u32 m, f64 time, then m*m
records of (eta1, eta2, T11, T12, T21, T22, Tinv11, Tinv12, Tinv21, Tinv22)
as f64, x index fastest.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .flowmap import FlowMap

FIELD_MAGIC = b"FLD1"
FLOWMAP_MAGIC = b"FMP1"


def atomic_write(path, data: bytes) -> None:
    """Write via a temp file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _x_fastest(block: np.ndarray) -> np.ndarray:
    # arrays are indexed [i=x, j=y]; the wire order scans x within each y row
    return np.ascontiguousarray(block.T, dtype="<f8")


def encode_field(values: np.ndarray, time: float) -> bytes:
    """values: (n, n) or (ncomp, n, n) physical samples."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    ncomp, n, n2 = arr.shape
    if n != n2:
        raise ValueError("field snapshot requires a square grid")
    head = FIELD_MAGIC + struct.pack("<IId", n, ncomp, time)
    body = b"".join(_x_fastest(arr[c]).tobytes() for c in range(ncomp))
    return head + body


def write_field_snapshot(path, values: np.ndarray, time: float) -> None:
    atomic_write(path, encode_field(values, time))


def read_field_snapshot(path):
    """Returns (values (ncomp, n, n), time)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != FIELD_MAGIC:
        raise ValueError(f"{path}: not a field snapshot (bad magic {raw[:4]!r})")
    n, ncomp, time = struct.unpack_from("<IId", raw, 4)
    expect = 4 + 16 + ncomp * n * n * 8
    if len(raw) != expect:
        raise ValueError(f"{path}: truncated snapshot ({len(raw)} bytes, expected {expect})")
    flat = np.frombuffer(raw, dtype="<f8", offset=20)
    values = flat.reshape(ncomp, n, n).transpose(0, 2, 1).copy()
    return values, time


def encode_flowmap(fm: FlowMap) -> bytes:
    m = fm.m
    head = FLOWMAP_MAGIC + struct.pack("<Id", m, fm.t)
    rec = np.empty((m, m, 10))
    rec[..., 0:2] = fm.eta
    rec[..., 2:6] = fm.tangent.reshape(m, m, 4)
    rec[..., 6:10] = fm.tangent_inv.reshape(m, m, 4)
    body = np.ascontiguousarray(rec.transpose(1, 0, 2), dtype="<f8").tobytes()
    return head + body


def write_flowmap_snapshot(path, fm: FlowMap) -> None:
    atomic_write(path, encode_flowmap(fm))


def read_flowmap_snapshot(path) -> FlowMap:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != FLOWMAP_MAGIC:
        raise ValueError(f"{path}: not a flow-map snapshot (bad magic {raw[:4]!r})")
    m, time = struct.unpack_from("<Id", raw, 4)
    expect = 4 + 12 + m * m * 10 * 8
    if len(raw) != expect:
        raise ValueError(f"{path}: truncated snapshot ({len(raw)} bytes, expected {expect})")
    rec = np.frombuffer(raw, dtype="<f8", offset=16).reshape(m, m, 10).transpose(1, 0, 2)
    return FlowMap(
        m=m,
        eta=rec[..., 0:2].copy(),
        tangent=rec[..., 2:6].reshape(m, m, 2, 2).copy(),
        tangent_inv=rec[..., 6:10].reshape(m, m, 2, 2).copy(),
        t=time,
    )
