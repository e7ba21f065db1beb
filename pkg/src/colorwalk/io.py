"""Text file formats.

Graph file:     "n m" then m lines "u v", 0 <= u < v < n, ascending
                lexicographic order.
Partition file: n lines, line i = class of vertex i.
Coloring file:  n lines, line i = color of vertex i.
Trace file:     "n k" then k lines "vertex new_color".

All values decimal, newline-terminated. Writers go through a temp file and
rename, so a failed run never leaves a partial artifact behind.
"""

from __future__ import annotations

import os
import tempfile
from typing import Iterable, Iterator

import numpy as np

from .coloring import Coloring, Move, Trace
from .errors import FormatError
from .graphs import Graph, Partition, _graph_from_sorted_codes, partition_from_class_of


def _atomic_write(path: str, line_iter: Iterable[str]) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-colorwalk-")
    try:
        with os.fdopen(fd, "w") as f:
            for line in line_iter:
                f.write(line)
                f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_ints(path: str, lineno: int, text: str, count: int) -> list[int]:
    parts = text.split()
    if len(parts) != count:
        raise FormatError(path, lineno, f"expected {count} fields, found {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(path, lineno, f"non-integer field in {text!r}") from None


def write_graph(path: str, g: Graph) -> None:
    def lines():
        yield f"{g.n} {g.m}"
        for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
            yield f"{u} {v}"
    _atomic_write(path, lines())


def read_graph(path: str) -> Graph:
    with open(path) as f:
        header = f.readline()
        if not header:
            raise FormatError(path, 1, "empty file")
        n, m = _parse_ints(path, 1, header, 2)
        if n < 0 or m < 0:
            raise FormatError(path, 1, "negative n or m")
        codes = np.empty(m, dtype=np.int64)
        prev = -1
        for i in range(m):
            lineno = i + 2
            line = f.readline()
            if not line:
                raise FormatError(path, lineno, f"expected {m} edge lines, file ended early")
            u, v = _parse_ints(path, lineno, line, 2)
            if not (0 <= u < v < n):
                raise FormatError(path, lineno, f"edge ({u}, {v}) violates 0 <= u < v < n")
            code = u * n + v
            if code <= prev:
                raise FormatError(path, lineno, "edges not in ascending lexicographic order")
            prev = code
            codes[i] = code
        if f.readline():
            raise FormatError(path, m + 2, "trailing content after edge list")
    return _graph_from_sorted_codes(n, codes)


def write_partition(path: str, part: Partition) -> None:
    _atomic_write(path, (str(c) for c in part.class_of.tolist()))


def read_partition(path: str, q: int | None = None) -> Partition:
    values = _read_int_column(path)
    if values.size and values.min() < 0:
        raise FormatError(path, int(np.argmin(values)) + 1, "negative class index")
    return partition_from_class_of(values, q)


def write_coloring(path: str, c: Coloring) -> None:
    _atomic_write(path, (str(x) for x in c.colors.tolist()))


def read_coloring(path: str, palette_hint: int = -1) -> Coloring:
    values = _read_int_column(path)
    if values.size and values.min() < 0:
        raise FormatError(path, int(np.argmin(values)) + 1, "negative color")
    return Coloring(values, palette_hint)


def _read_int_column(path: str) -> np.ndarray:
    out: list[int] = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                raise FormatError(path, lineno, "blank line")
            (value,) = _parse_ints(path, lineno, line, 1)
            out.append(value)
    return np.asarray(out, dtype=np.int64)


def write_trace(path: str, trace: Trace) -> None:
    def lines():
        yield f"{trace.start.n} {len(trace.moves)}"
        for v, c in trace.moves:
            yield f"{v} {c}"
    _atomic_write(path, lines())


def read_trace_header(path: str) -> tuple[int, int]:
    with open(path) as f:
        header = f.readline()
        if not header:
            raise FormatError(path, 1, "empty file")
        n, k = _parse_ints(path, 1, header, 2)
    if n < 0 or k < 0:
        raise FormatError(path, 1, "negative n or k")
    return n, k


def iter_trace_moves(path: str) -> Iterator[Move]:
    """Stream moves from a trace file without materializing them."""
    n, k = read_trace_header(path)
    with open(path) as f:
        f.readline()
        for i in range(k):
            lineno = i + 2
            line = f.readline()
            if not line:
                raise FormatError(path, lineno, f"expected {k} move lines, file ended early")
            v, c = _parse_ints(path, lineno, line, 2)
            if not 0 <= v < n:
                raise FormatError(path, lineno, f"vertex {v} out of range")
            if c < 0:
                raise FormatError(path, lineno, "negative color")
            yield Move(v, c)
        if f.readline():
            raise FormatError(path, k + 2, "trailing content after move list")


def read_trace(path: str, start: Coloring) -> Trace:
    n, _ = read_trace_header(path)
    if start.n != n:
        raise FormatError(path, 1, f"trace n={n} does not match start coloring n={start.n}")
    return Trace(start=start, moves=list(iter_trace_moves(path)))


def write_records(path: str, items: list[tuple[str, object]]) -> None:
    """key=value lines, in the given order."""
    _atomic_write(path, (f"{k}={_fmt(v)}" for k, v in items))


def write_csv(path: str, header: list[str], rows: Iterable[list[object]]) -> None:
    def lines():
        yield ",".join(header)
        for row in rows:
            yield ",".join(_fmt(x) for x in row)
    _atomic_write(path, lines())


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
