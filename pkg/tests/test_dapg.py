import itertools

import pytest

from mubgeom.arith import PrimeModulus
from mubgeom.dapg import (
    Incidence,
    Line,
    Point,
    SameColumnError,
    all_lines,
    all_points,
    incidence,
    line_from_c,
    line_points,
    line_through,
    lines_through_point,
    point_on_line,
    verify_axioms,
)
from mubgeom.mub import CB

MOD3 = PrimeModulus(3)
MOD5 = PrimeModulus(5)


class TestCounts:
    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_sizes(self, d):
        mod = PrimeModulus(d)
        assert len(all_lines(mod)) == d * d
        assert len(all_points(mod)) == d * (d + 1)

    def test_points_unique_and_sorted_cb_first(self):
        pts = all_points(MOD3)
        assert len(set(pts)) == len(pts)
        assert pts[0] == Point(0, CB)
        assert sorted(pts) == pts


class TestLinePoints:
    def test_d3_example_line(self):
        # the reference tableau for d=3: line (1,2)
        got = [p.label() for p in line_points(MOD3, Line(1, 2))]
        assert got == ["(1,CB)", "(2,0)", "(1,1)", "(0,2)"]

    def test_one_point_per_column(self):
        for j in all_lines(MOD5):
            cols = [p.b for p in line_points(MOD5, j)]
            assert cols == [CB, 0, 1, 2, 3, 4]

    def test_consistent_with_membership(self):
        for j in all_lines(MOD3):
            on = {p for p in all_points(MOD3) if point_on_line(MOD3, p, j)}
            assert on == set(line_points(MOD3, j))


class TestLineFromC:
    def test_halves_c(self):
        # c = 2*mddot, so c=1 means mddot = inv(2) = 2 mod 3
        assert line_from_c(MOD3, 1, 0) == Line(2, 0)
        assert line_from_c(MOD3, 4, 7) == Line(2, 1)

    def test_roundtrip(self):
        for mddot in range(5):
            assert line_from_c(MOD5, (2 * mddot) % 5, 3) == Line(mddot, 3)


class TestLineThrough:
    def test_rejects_same_column(self):
        with pytest.raises(SameColumnError):
            line_through(MOD3, Point(0, 1), Point(1, 1))
        with pytest.raises(SameColumnError):
            line_through(MOD3, Point(0, CB), Point(1, CB))

    @pytest.mark.parametrize("d", [3, 5])
    def test_exhaustive_containment(self, d):
        mod = PrimeModulus(d)
        pts = all_points(mod)
        for p1, p2 in itertools.combinations(pts, 2):
            if p1.b == p2.b:
                continue
            j = line_through(mod, p1, p2)
            assert point_on_line(mod, p1, j)
            assert point_on_line(mod, p2, j)

    def test_order_independent(self):
        p1, p2 = Point(2, 1), Point(0, 4)
        assert line_through(MOD5, p1, p2) == line_through(MOD5, p2, p1)


class TestLinesThroughPoint:
    @pytest.mark.parametrize("d", [3, 5])
    def test_matches_brute_force(self, d):
        mod = PrimeModulus(d)
        for p in all_points(mod):
            fast = set(lines_through_point(mod, p))
            slow = {j for j in all_lines(mod) if point_on_line(mod, p, j)}
            assert fast == slow
            assert len(fast) == d


class TestIncidence:
    def test_matrix_shape_and_row_sums(self):
        inc = Incidence(MOD3)
        mat = inc.matrix()
        assert len(mat) == 9 and all(len(row) == 12 for row in mat)
        assert all(sum(row) == 4 for row in mat)
        assert all(sum(col) == 3 for col in zip(*mat))

    def test_cached(self):
        assert incidence(3) is incidence(3)


class TestAxioms:
    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_all_pass(self, d):
        report = verify_axioms(PrimeModulus(d))
        assert report.all_passed
        assert report.failures == []
        assert report.num_lines == d * d
        assert report.num_points == d * (d + 1)

    def test_to_dict_keys(self):
        got = verify_axioms(MOD3).to_dict()
        assert got["all_passed"] is True
        assert set(got) >= {
            "counts_ok",
            "pairwise_meet_ok",
            "regularity_ok",
            "partition_ok",
            "connectivity_ok",
        }
