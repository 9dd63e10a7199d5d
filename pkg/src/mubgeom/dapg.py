"""Dual affine plane geometry on the d x (d+1) point array.

Points are (m, b) cells with b in {CB, 0, .., d-1}; a line is keyed by its
CB-column row mddot and its b=0-column row m0, and meets column b at
m(b) = m0 + (b/2)(2*mddot - 1) mod d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .arith import PrimeModulus, half_mod, inv_mod
from .mub import CB, BasisLabel, _check_label


class SameColumnError(ValueError):
    """Two points of one column never share a line."""


@dataclass(frozen=True)
class Point:
    m: int
    b: BasisLabel

    def sort_key(self) -> tuple:
        # CB column first, then numeric columns
        return (0, 0, self.m) if self.b == CB else (1, self.b, self.m)

    def __lt__(self, other: "Point") -> bool:
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        return f"({self.m},{'CB' if self.b == CB else self.b})"


@dataclass(frozen=True, order=True)
class Line:
    mddot: int
    m0: int

    def label(self) -> str:
        return f"({self.mddot},{self.m0})"


def all_points(modulus: PrimeModulus) -> list:
    d = modulus.d
    return [Point(m, CB) for m in range(d)] + [
        Point(m, b) for b in range(d) for m in range(d)
    ]


def all_lines(modulus: PrimeModulus) -> list:
    d = modulus.d
    return [Line(mddot, m0) for mddot in range(d) for m0 in range(d)]


def line_from_c(modulus: PrimeModulus, c: int, m0: int) -> Line:
    """Accept the (c, m0) parameterization with c = 2*mddot and normalize."""
    return Line(half_mod(c, modulus.d), m0 % modulus.d)


def line_points(modulus: PrimeModulus, j: Line) -> list:
    """The d+1 points of j, one per column, CB first."""
    d = modulus.d
    slope = (2 * j.mddot - 1) % d
    pts = [Point(j.mddot % d, CB)]
    pts.extend(Point((j.m0 + half_mod(b, d) * slope) % d, b) for b in range(d))
    return pts


def point_on_line(modulus: PrimeModulus, p: Point, j: Line) -> bool:
    d = modulus.d
    if p.b == CB:
        return p.m % d == j.mddot % d
    _check_label(modulus, p.b)
    return p.m % d == (j.m0 + half_mod(p.b, d) * (2 * j.mddot - 1)) % d


def line_through(modulus: PrimeModulus, p1: Point, p2: Point) -> Line:
    """The unique line through two points of different columns."""
    d = modulus.d
    if p1.b == p2.b:
        raise SameColumnError(f"points {p1.label()} and {p2.label()} share column {p1.b}")
    if p2.b == CB:
        p1, p2 = p2, p1
    if p1.b == CB:
        # mddot fixed by the CB point; solve the column equation for m0
        mddot = p1.m % d
        m0 = (p2.m - half_mod(p2.b, d) * (2 * mddot - 1)) % d
        return Line(mddot, m0)
    h1, h2 = half_mod(p1.b, d), half_mod(p2.b, d)
    # m1 - m2 = (h1 - h2)(2*mddot - 1): eliminate m0, then back-substitute
    slope = ((p1.m - p2.m) * inv_mod(h1 - h2, d)) % d
    mddot = half_mod(slope + 1, d)
    m0 = (p1.m - h1 * slope) % d
    return Line(mddot, m0)


def lines_through_point(modulus: PrimeModulus, p: Point) -> list:
    """The d lines containing p."""
    d = modulus.d
    if p.b == CB:
        return [Line(p.m % d, m0) for m0 in range(d)]
    _check_label(modulus, p.b)
    h = half_mod(p.b, d)
    return [Line(mddot, (p.m - h * (2 * mddot - 1)) % d) for mddot in range(d)]


class Incidence:
    """Materialized point-line incidence for one modulus, queryable both ways."""

    def __init__(self, modulus: PrimeModulus):
        self.modulus = modulus
        self.points = all_points(modulus)
        self.lines = all_lines(modulus)
        self.points_of = {j: tuple(line_points(modulus, j)) for j in self.lines}
        self.lines_of = {p: [] for p in self.points}
        for j, pts in self.points_of.items():
            for p in pts:
                self.lines_of[p].append(j)

    def matrix(self) -> list:
        """0/1 rows indexed by line, columns indexed by point."""
        idx = {p: i for i, p in enumerate(self.points)}
        rows = []
        for j in self.lines:
            row = [0] * len(self.points)
            for p in self.points_of[j]:
                row[idx[p]] = 1
            rows.append(row)
        return rows


@lru_cache(maxsize=None)
def incidence(d: int) -> Incidence:
    return Incidence(PrimeModulus(d))


@dataclass
class AxiomReport:
    d: int
    num_lines: int
    num_points: int
    counts_ok: bool  # (a): d^2 lines, d(d+1) points
    pairwise_meet_ok: bool  # (b): every line pair meets in exactly one point
    regularity_ok: bool  # (c): d lines per point, d+1 points per line
    partition_ok: bool  # (d): columns partition the points, no intra-column line
    connectivity_ok: bool  # (e): every inter-column pair lies on a line
    failures: list

    @property
    def all_passed(self) -> bool:
        return (
            self.counts_ok
            and self.pairwise_meet_ok
            and self.regularity_ok
            and self.partition_ok
            and self.connectivity_ok
        )

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "num_lines": self.num_lines,
            "num_points": self.num_points,
            "counts_ok": self.counts_ok,
            "pairwise_meet_ok": self.pairwise_meet_ok,
            "regularity_ok": self.regularity_ok,
            "partition_ok": self.partition_ok,
            "connectivity_ok": self.connectivity_ok,
            "all_passed": self.all_passed,
            "failures": self.failures,
        }


def verify_axioms(modulus: PrimeModulus) -> AxiomReport:
    """Exhaustively check the five incidence axioms for this modulus."""
    d = modulus.d
    inc = incidence(d)
    failures = []

    counts_ok = len(inc.lines) == d * d and len(inc.points) == d * (d + 1)
    if not counts_ok:
        failures.append(f"counts: {len(inc.lines)} lines, {len(inc.points)} points")

    pairwise_meet_ok = True
    line_sets = {j: set(pts) for j, pts in inc.points_of.items()}
    for i, j1 in enumerate(inc.lines):
        for j2 in inc.lines[i + 1 :]:
            common = line_sets[j1] & line_sets[j2]
            if len(common) != 1:
                pairwise_meet_ok = False
                failures.append(f"lines {j1.label()} and {j2.label()} meet in {len(common)} points")

    regularity_ok = all(len(pts) == d + 1 for pts in inc.points_of.values()) and all(
        len(js) == d for js in inc.lines_of.values()
    )
    if not regularity_ok:
        failures.append("regularity: points-per-line or lines-per-point off")

    partition_ok = True
    for j, pts in inc.points_of.items():
        cols = [p.b for p in pts]
        if len(set(cols)) != d + 1:
            partition_ok = False
            failures.append(f"line {j.label()} repeats a column")

    connectivity_ok = True
    for i, p1 in enumerate(inc.points):
        for p2 in inc.points[i + 1 :]:
            shared = set(inc.lines_of[p1]) & set(inc.lines_of[p2])
            if p1.b == p2.b:
                if shared:
                    connectivity_ok = False
                    failures.append(f"intra-column pair {p1.label()},{p2.label()} shares a line")
            elif len(shared) != 1:
                connectivity_ok = False
                failures.append(f"pair {p1.label()},{p2.label()} lies on {len(shared)} lines")

    return AxiomReport(
        d=d,
        num_lines=len(inc.lines),
        num_points=len(inc.points),
        counts_ok=counts_ok,
        pairwise_meet_ok=pairwise_meet_ok,
        regularity_ok=regularity_ok,
        partition_ok=partition_ok,
        connectivity_ok=connectivity_ok,
        failures=failures,
    )
