import os

import numpy as np
import pytest

from colorwalk import FormatError, Move, Trace, build_graph, coloring_of, gen_gnm
from colorwalk import io as cwio
from colorwalk.graphs import partition_from_class_of


class TestGraphFiles:
    def test_round_trip(self, tmp_path):
        g = gen_gnm(30, 80, seed=3)
        path = tmp_path / "g.txt"
        cwio.write_graph(str(path), g)
        back = cwio.read_graph(str(path))
        assert back.n == g.n
        assert np.array_equal(back.edges(), g.edges())
        assert np.array_equal(back.nbrs, g.nbrs)

    def test_header_format(self, tmp_path):
        g = build_graph(3, [(0, 2), (0, 1)])
        path = tmp_path / "g.txt"
        cwio.write_graph(str(path), g)
        assert path.read_text() == "3 2\n0 1\n0 2\n"

    def test_rejects_unordered_edges(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("3 2\n0 2\n0 1\n")
        with pytest.raises(FormatError) as exc:
            cwio.read_graph(str(path))
        assert exc.value.line == 3

    def test_rejects_u_not_less_than_v(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("3 1\n2 0\n")
        with pytest.raises(FormatError) as exc:
            cwio.read_graph(str(path))
        assert exc.value.line == 2

    def test_rejects_truncated_file(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("3 2\n0 1\n")
        with pytest.raises(FormatError, match="ended early"):
            cwio.read_graph(str(path))

    def test_rejects_trailing_garbage(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("2 1\n0 1\nextra\n")
        with pytest.raises(FormatError, match="trailing"):
            cwio.read_graph(str(path))

    def test_rejects_non_integer(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("2 1\n0 x\n")
        with pytest.raises(FormatError, match="non-integer"):
            cwio.read_graph(str(path))


class TestColumnFiles:
    def test_partition_round_trip(self, tmp_path):
        part = partition_from_class_of([0, 2, 1, 2, 0])
        path = tmp_path / "p.txt"
        cwio.write_partition(str(path), part)
        back = cwio.read_partition(str(path))
        assert back.class_of.tolist() == [0, 2, 1, 2, 0]
        assert back.q == 3

    def test_coloring_round_trip(self, tmp_path):
        c = coloring_of([3, 1, 4, 1], 9)
        path = tmp_path / "c.txt"
        cwio.write_coloring(str(path), c)
        back = cwio.read_coloring(str(path), palette_hint=9)
        assert back.colors.tolist() == [3, 1, 4, 1]

    def test_blank_line_rejected(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("1\n\n2\n")
        with pytest.raises(FormatError) as exc:
            cwio.read_coloring(str(path))
        assert exc.value.line == 2


class TestTraceFiles:
    def test_round_trip(self, tmp_path):
        start = coloring_of([0, 1, 0], 5)
        t = Trace(start=start, moves=[Move(0, 2), Move(2, 3)])
        path = tmp_path / "t.txt"
        cwio.write_trace(str(path), t)
        assert path.read_text() == "3 2\n0 2\n2 3\n"
        back = cwio.read_trace(str(path), start)
        assert back.moves == t.moves

    def test_streaming_iterator(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("4 2\n1 5\n0 6\n")
        moves = list(cwio.iter_trace_moves(str(path)))
        assert moves == [Move(1, 5), Move(0, 6)]

    def test_vertex_out_of_range(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("2 1\n5 0\n")
        with pytest.raises(FormatError, match="out of range"):
            list(cwio.iter_trace_moves(str(path)))

    def test_start_length_mismatch(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("3 0\n")
        with pytest.raises(FormatError):
            cwio.read_trace(str(path), coloring_of([0, 0]))


class TestAtomicity:
    def test_no_partial_file_on_failure(self, tmp_path):
        target = tmp_path / "out.txt"

        def boom():
            yield "line1"
            raise RuntimeError("mid-write failure")

        with pytest.raises(RuntimeError):
            cwio._atomic_write(str(target), boom())
        assert not target.exists()
        assert os.listdir(tmp_path) == []

    def test_overwrite_is_atomic(self, tmp_path):
        target = tmp_path / "out.txt"
        cwio._atomic_write(str(target), ["a"])
        cwio._atomic_write(str(target), ["b"])
        assert target.read_text() == "b\n"
