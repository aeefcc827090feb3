"""Signal files, cover files and key=value configs.

Binary signal layout (little endian)::

    b"AMOD1"            5-byte magic
    uint32 dim          1 or 2
    uint32 N            samples per axis
    float64 L           period per axis
    float64[2 N^dim]    interleaved (re, im) samples in C order

CSV signals have a header row and columns ``x, re, im`` (``x1, x2, re, im``
in two dimensions), one sample per row in grid order.
"""

from __future__ import annotations

import csv
import json
import math
import struct

import numpy as np

from .cover import CoverParams, make_cover
from .grid import Grid, GridSignal

MAGIC = b"AMOD1"
_HEADER = struct.Struct("<5sIId")


def write_amod(path, f):
    g = f.grid
    data = np.ascontiguousarray(f.samples, dtype=np.complex128)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, g.dim, g.N, float(g.L)))
        fh.write(data.view(np.float64).astype("<f8").tobytes())


def read_amod(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size or raw[:5] != MAGIC:
        raise ValueError(f"{path}: not an AMOD1 file")
    _, dim, N, L = _HEADER.unpack_from(raw)
    grid = Grid(N, L, dim)
    body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    expected = 2 * N ** dim
    if body.size != expected:
        raise ValueError(f"{path}: expected {expected} float64 values, found {body.size}")
    samples = (body[0::2] + 1j * body[1::2]).reshape(grid.shape)
    return GridSignal(grid, samples)


def write_csv(path, f):
    g = f.grid
    pts = g.x_points().reshape(-1, g.dim)
    vals = f.samples.reshape(-1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re", "im"] if g.dim == 1 else ["x1", "x2", "re", "im"])
        for x, v in zip(pts, vals):
            w.writerow([*(repr(float(c)) for c in x), repr(float(v.real)), repr(float(v.imag))])


def read_csv(path):
    """Read a CSV signal; ``N`` and ``L`` are inferred from the ``x`` column."""
    arr = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    ncol = arr.shape[1]
    if ncol not in (3, 4):
        raise ValueError(f"{path}: expected 3 or 4 columns, found {ncol}")
    dim = ncol - 2
    total = arr.shape[0]
    N = int(round(total ** (1.0 / dim)))
    if N ** dim != total:
        raise ValueError(f"{path}: {total} rows do not form a square grid")
    if N < 2:
        raise ValueError(f"{path}: need at least two samples per axis")
    x = arr[:N, dim - 1]
    L = N * float(x[1] - x[0])
    grid = Grid(N, L, dim)
    if not np.allclose(arr[:, :dim], grid.x_points().reshape(-1, dim), atol=1e-9 * L):
        raise ValueError(f"{path}: sample positions do not match a centred grid with N={N}, L={L:g}")
    samples = (arr[:, dim] + 1j * arr[:, dim + 1]).reshape(grid.shape)
    return GridSignal(grid, samples)


def read_signal(path):
    """Dispatch on content: AMOD1 magic means binary, anything else CSV."""
    with open(path, "rb") as fh:
        head = fh.read(5)
    return read_amod(path) if head == MAGIC else read_csv(path)


def write_signal(path, f):
    if str(path).endswith(".csv"):
        write_csv(path, f)
    else:
        write_amod(path, f)


def write_cover(path, params):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_cover(path):
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    params = CoverParams(float(d["alpha"]), int(d.get("dim", 1)), d.get("C"), int(d.get("k_max", 32)))
    return make_cover(params)


def _parse_scalar(text):
    t = text.strip()
    low = t.lower()
    if low in ("inf", "+inf", "infinity"):
        return math.inf
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        return t


def parse_config(text):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {n}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if not key:
            raise ValueError(f"config line {n}: empty key")
        out[key] = _parse_scalar(value)
    return out


def read_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
