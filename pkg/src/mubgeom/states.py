"""Two-particle states underpinned by the geometry.

A point (m, b) carries the product state |m;b> (x) |m~;b~|; a line carries
the maximally entangled state built from its points minus the balancing
state R = sum_n |n>|n>.  The geometric construction is the definition; the
shift-clock-inversion closed form is a verified equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import CycloAmplitude, PrimeModulus
from .dapg import Line, Point, all_lines, all_points, line_points, point_on_line
from .hilbert import Ket, MonomialOperator, apply_monomial, inner, tensor, zero_ket
from .mub import CB, cb_projector_element, mub_state, projector_element, tilde


@lru_cache(maxsize=None)
def _product_state_cached(d: int, m: int, b) -> Ket:
    modulus = PrimeModulus(d)
    mt, bt = tilde(modulus, m, b)
    return tensor(mub_state(modulus, m, b), mub_state(modulus, mt, bt))


def product_state(modulus: PrimeModulus, p: Point) -> Ket:
    """|m;b> (x) |m~;b~|, normalized; the CB column gives |m>|m>."""
    m = p.m % modulus.d
    return _product_state_cached(modulus.d, m, p.b)


@lru_cache(maxsize=None)
def balanced_state(modulus: PrimeModulus) -> Ket:
    """R = sum_n |n>|n>, unnormalized by convention (<R|R> = d)."""
    d = modulus.d
    zero = CycloAmplitude.zero(modulus)
    one = CycloAmplitude.one(modulus)
    amps = [zero] * (d * d)
    for n in range(d):
        amps[n * d + n] = one
    return Ket(d * d, modulus, tuple(amps))


def line_monomial(modulus: PrimeModulus, j: Line) -> MonomialOperator:
    """X**(2*mddot) Z**(2*m0) followed by inversion; acts on particle 2."""
    return MonomialOperator(modulus, x_power=2 * j.mddot, z_power=2 * j.m0, inverted=True)


@lru_cache(maxsize=None)
def _line_state_cached(d: int, mddot: int, m0: int) -> Ket:
    modulus = PrimeModulus(d)
    j = Line(mddot, m0)
    total = zero_ket(modulus, d * d)
    for p in line_points(modulus, j):
        total = total + product_state(modulus, p)
    total = total - balanced_state(modulus)
    return total.scaled(CycloAmplitude.one(modulus, scale=1))


def line_state_geometric(modulus: PrimeModulus, j: Line) -> Ket:
    """(1/sqrt(d)) (sum of the line's product states - R); the definition."""
    return _line_state_cached(modulus.d, j.mddot % modulus.d, j.m0 % modulus.d)


def line_state_closed(modulus: PrimeModulus, j: Line) -> Ket:
    """w**(2*mddot*m0)/sqrt(d) * sum_n |n> (x) X**(2*mddot) Z**(2*m0) I |n>."""
    d = modulus.d
    op = line_monomial(modulus, j)
    total = zero_ket(modulus, d * d)
    prefactor = CycloAmplitude.root(modulus, 2 * j.mddot * j.m0, scale=1)
    for n in range(d):
        col = apply_monomial(op, mub_state(modulus, n, CB))
        amps = [CycloAmplitude.zero(modulus)] * (d * d)
        for n2, a in enumerate(col.amps):
            amps[n * d + n2] = a * prefactor
        total = total + Ket(d * d, modulus, tuple(amps))
    return total


line_state = line_state_geometric


def overlap_point_line(modulus: PrimeModulus, p: Point, j: Line) -> CycloAmplitude:
    """<product_state(p)|line_state(j)>; 1/sqrt(d) in magnitude iff p is on j."""
    return inner(product_state(modulus, p), line_state(modulus, j))


def line_sum_matrix(modulus: PrimeModulus, j: Line, n: int, n2: int) -> CycloAmplitude:
    """<n| (sum of the line's projectors - identity) |n2>, from projector elements."""
    total = CycloAmplitude.zero(modulus)
    for p in line_points(modulus, j):
        if p.b == CB:
            total = total + cb_projector_element(modulus, p.m, n, n2)
        else:
            total = total + projector_element(modulus, p.m, p.b, n, n2)
    if n % modulus.d == n2 % modulus.d:
        total = total - CycloAmplitude.one(modulus)
    return total


def reduced_density_element(modulus: PrimeModulus, ket: Ket, particle: int, n: int, n2: int) -> CycloAmplitude:
    """<n| rho_particle |n2> by exact partial trace over the other particle."""
    d = modulus.d
    total = CycloAmplitude.zero(modulus)
    for k in range(d):
        if particle == 1:
            a, b = ket.amps[n * d + k], ket.amps[n2 * d + k]
        else:
            a, b = ket.amps[k * d + n], ket.amps[k * d + n2]
        if not (a.is_zero() or b.is_zero()):
            total = total + a * b.conj()
    return total


def verify_orthonormality(modulus: PrimeModulus):
    """Full Gram matrix of the d**2 line states against the identity."""
    lines = all_lines(modulus)
    states = [line_state(modulus, j) for j in lines]
    defects = []
    one = CycloAmplitude.one(modulus)
    for i, j1 in enumerate(lines):
        for k in range(i, len(lines)):
            g = inner(states[i], states[k])
            expected = one if i == k else CycloAmplitude.zero(modulus)
            if g != expected:
                defects.append((j1.label(), lines[k].label()))
    return not defects, defects


def _phase_exponent_of_root(amp: CycloAmplitude):
    """If amp is exactly w**t * d**(-k/2), return (t, k); else None."""
    nonzero = [(i, c) for i, c in enumerate(amp.coeffs) if c != 0]
    if len(nonzero) == 1 and nonzero[0][1] == 1:
        return nonzero[0][0], amp.scale
    # w**(d-1) canonicalizes to -(w**0 + .. + w**(d-2))
    if len(nonzero) == len(amp.coeffs) and all(c == -1 for _, c in nonzero):
        return amp.modulus.d - 1, amp.scale
    return None


@dataclass
class ConformanceResult:
    d: int
    balance_ok: bool
    balanced_norm_squared: str
    orthonormality_ok: bool
    closed_form_ok: bool
    closed_form_phase_offset: str
    overlap_theorem_ok: bool
    cb_coefficient_measured: str
    cb_coefficient_candidate_rejected: str
    line_sum_sign: str
    phase_measured_uniform: bool
    phase_measured: str
    phase_candidate_formula: str
    phase_candidate_matches: bool
    phase_mismatches: list

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def conformance(modulus: PrimeModulus) -> ConformanceResult:
    """Measure every convention the construction leaves open and pin it.

    Covers: column balance, line-state orthonormality, geometric vs closed
    form, the overlap theorem, the CB overlap coefficient (1/sqrt(d) vs the
    1/sqrt(2) candidate), the line-sum exponent sign, and the incident
    overlap phase against the w**(2b*mddot**2 - b*mddot) candidate formula.
    """
    d = modulus.d
    r = balanced_state(modulus)

    balance_ok = True
    for b in [CB] + list(range(d)):
        col = zero_ket(modulus, d * d)
        for m in range(d):
            col = col + product_state(modulus, Point(m, b))
        if col.amps != r.amps:
            balance_ok = False

    ortho_ok, _ = verify_orthonormality(modulus)

    closed_ok = True
    for j in all_lines(modulus):
        if line_state_geometric(modulus, j).amps != line_state_closed(modulus, j).amps:
            closed_ok = False

    # line-sum exponent sign: compare the projector-element sum against both
    # w**(-(n-n2)m0) and w**(+(n-n2)m0) on the supported off-diagonal slots
    minus_ok, plus_ok = True, True
    for j in all_lines(modulus):
        for n in range(d):
            n2 = (2 * j.mddot - n) % d
            if n == n2:
                continue
            got = line_sum_matrix(modulus, j, n, n2)
            if got != CycloAmplitude.root(modulus, -(n - n2) * j.m0):
                minus_ok = False
            if got != CycloAmplitude.root(modulus, (n - n2) * j.m0):
                plus_ok = False
    if minus_ok:
        line_sum_sign = "-(n-n2)*m0"
    elif plus_ok:
        line_sum_sign = "+(n-n2)*m0"
    else:
        line_sum_sign = "neither candidate"

    # overlap theorem sweep, CB coefficient, and incident phases
    overlap_ok = True
    cb_is_inv_sqrt_d = True
    cb_is_inv_sqrt_2 = True
    phases = set()
    mismatches = []
    formula_matches = True
    for j in all_lines(modulus):
        for p in all_points(modulus):
            amp = overlap_point_line(modulus, p, j)
            on = point_on_line(modulus, p, j)
            mag2 = amp.magnitude_squared()
            if on and mag2 != Fraction(1, d):
                overlap_ok = False
            if not on and mag2 != 0:
                overlap_ok = False
            if not on:
                continue
            if p.b == CB:
                cb_is_inv_sqrt_d &= mag2 == Fraction(1, d)
                cb_is_inv_sqrt_2 &= mag2 == Fraction(1, 2)
            else:
                pk = _phase_exponent_of_root(amp)
                if pk is None:
                    phases.add("non-root")
                else:
                    phases.add(pk[0])
                predicted = (2 * p.b * j.mddot**2 - p.b * j.mddot) % d
                if pk is None or pk[0] != predicted:
                    formula_matches = False
                    if len(mismatches) < 10:
                        mismatches.append(
                            {
                                "point": p.label(),
                                "line": j.label(),
                                "measured_exponent": None if pk is None else pk[0],
                                "formula_exponent": predicted,
                            }
                        )

    uniform = phases == {0}
    return ConformanceResult(
        d=d,
        balance_ok=balance_ok,
        balanced_norm_squared=str(r.norm_squared()),
        orthonormality_ok=ortho_ok,
        closed_form_ok=closed_ok,
        closed_form_phase_offset="1" if closed_ok else "unknown",
        overlap_theorem_ok=overlap_ok,
        cb_coefficient_measured="1/sqrt(d)" if cb_is_inv_sqrt_d else "other",
        cb_coefficient_candidate_rejected=(
            "1/sqrt(2) (suspected typo)" if not cb_is_inv_sqrt_2 or d != 2 else "none"
        ),
        line_sum_sign=line_sum_sign,
        phase_measured_uniform=uniform,
        phase_measured="w^0 (uniform)" if uniform else f"exponents {sorted(map(str, phases))}",
        phase_candidate_formula="w^(2*b*mddot^2 - b*mddot)",
        phase_candidate_matches=formula_matches,
        phase_mismatches=mismatches,
    )


def conformance_report(ds) -> dict:
    results = {d: conformance(PrimeModulus(d)).to_dict() for d in ds}
    return {
        "suites": results,
        "resolved_conventions": {
            "line_sum_sign": results[min(results)]["line_sum_sign"],
            "cb_overlap_coefficient": results[min(results)]["cb_coefficient_measured"],
            "incident_overlap_phase": results[min(results)]["phase_measured"],
        },
    }
