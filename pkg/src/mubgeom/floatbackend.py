"""Floating-point backend: independent numpy recomputation of every suite.

Used for cross-validation of the exact backend and as the fast path at
larger d.  Nothing here touches the cyclotomic representation; states are
rebuilt from scratch with complex exponentials.
"""

from __future__ import annotations

import numpy as np

from .arith import PrimeModulus, half_mod
from .dapg import Line, all_lines, all_points, line_points, point_on_line
from .mub import CB, state_exponents, tilde


def mub_state_np(d: int, m: int, b) -> np.ndarray:
    if b == CB:
        v = np.zeros(d, dtype=complex)
        v[m % d] = 1.0
        return v
    w = np.exp(2j * np.pi / d)
    exps = state_exponents(PrimeModulus(d), m % d, b)
    return w ** np.array(exps) / np.sqrt(d)


def product_state_np(d: int, m: int, b) -> np.ndarray:
    mt, bt = tilde(PrimeModulus(d), m, b)
    return np.kron(mub_state_np(d, m, b), mub_state_np(d, mt, bt))


def balanced_state_np(d: int) -> np.ndarray:
    r = np.zeros(d * d, dtype=complex)
    for n in range(d):
        r[n * d + n] = 1.0
    return r


def line_state_np(d: int, j: Line) -> np.ndarray:
    total = -balanced_state_np(d)
    for p in line_points(PrimeModulus(d), j):
        total = total + product_state_np(d, p.m, p.b)
    return total / np.sqrt(d)


def monomial_matrix_np(d: int, x_power: int, z_power: int, inverted: bool, phase: int = 0) -> np.ndarray:
    w = np.exp(2j * np.pi / d)
    mat = np.zeros((d, d), dtype=complex)
    for n in range(d):
        s = (-n) % d if inverted else n
        mat[(s + x_power) % d, n] = w ** ((phase + z_power * s) % d)
    return mat


def line_state_closed_np(d: int, j: Line) -> np.ndarray:
    w = np.exp(2j * np.pi / d)
    op = monomial_matrix_np(d, 2 * j.mddot, 2 * j.m0, inverted=True)
    total = np.zeros(d * d, dtype=complex)
    for n in range(d):
        e = np.zeros(d, dtype=complex)
        e[n] = 1.0
        total += np.kron(e, op @ e)
    return w ** ((2 * j.mddot * j.m0) % d) * total / np.sqrt(d)


# -- residuals for the verification suites ---------------------------------


def mub_residuals(d: int):
    """(cross-basis unbiasedness, within-basis Gram, eigenrelation) residuals."""
    mod = PrimeModulus(d)
    labels = [CB] + list(range(d))
    bases = {b: np.column_stack([mub_state_np(d, m, b) for m in range(d)]) for b in labels}
    cross = 0.0
    gram = 0.0
    for i, b1 in enumerate(labels):
        for b2 in labels[i:]:
            overlaps = np.abs(bases[b1].conj().T @ bases[b2]) ** 2
            if b1 == b2:
                gram = max(gram, np.abs(overlaps - np.eye(d)).max())
            else:
                cross = max(cross, np.abs(overlaps - 1.0 / d).max())
    w = np.exp(2j * np.pi / d)
    eig = 0.0
    for b in range(d):
        op = monomial_matrix_np(d, 1, b, inverted=False)
        for m in range(d):
            v = bases[b][:, m]
            eig = max(eig, np.abs(op @ v - w**m * v).max())
    return cross, gram, eig


def balance_residual(d: int) -> float:
    r = balanced_state_np(d)
    worst = 0.0
    for b in [CB] + list(range(d)):
        col = sum(product_state_np(d, m, b) for m in range(d))
        worst = max(worst, np.abs(col - r).max())
    return worst


def line_suite_residuals(d: int):
    """(closed vs geometric, Gram vs identity, reduced density) residuals."""
    lines = all_lines(PrimeModulus(d))
    states = np.column_stack([line_state_np(d, j) for j in lines])
    closed = max(
        np.abs(states[:, i] - line_state_closed_np(d, j)).max() for i, j in enumerate(lines)
    )
    gram = np.abs(states.conj().T @ states - np.eye(d * d)).max()
    rho_res = 0.0
    for i in range(len(lines)):
        psi = states[:, i].reshape(d, d)
        rho1 = psi @ psi.conj().T
        rho2 = psi.T @ psi.conj()
        rho_res = max(rho_res, np.abs(rho1 - np.eye(d) / d).max(), np.abs(rho2 - np.eye(d) / d).max())
    return closed, gram, rho_res


def overlap_residual(d: int) -> float:
    mod = PrimeModulus(d)
    worst = 0.0
    for j in all_lines(mod):
        ls = line_state_np(d, j)
        for p in all_points(mod):
            mag2 = np.abs(np.vdot(product_state_np(d, p.m, p.b), ls)) ** 2
            target = 1.0 / d if point_on_line(mod, p, j) else 0.0
            worst = max(worst, abs(mag2 - target))
    return worst


def backend_coherence_residual(d: int) -> float:
    """Max |exact-to-complex - float backend| over states and overlaps."""
    from .dapg import Point
    from .hilbert import inner
    from .mub import mub_state
    from .states import line_state, product_state

    mod = PrimeModulus(d)
    worst = 0.0
    for b in [CB] + list(range(d)):
        for m in range(d):
            exact = np.array(mub_state(mod, m, b).to_complex_list())
            worst = max(worst, np.abs(exact - mub_state_np(d, m, b)).max())
    for j in all_lines(mod):
        exact = np.array(line_state(mod, j).to_complex_list())
        worst = max(worst, np.abs(exact - line_state_np(d, j)).max())
        fls = line_state_np(d, j)
        for p in all_points(mod):
            exact_ov = inner(product_state(mod, p), line_state(mod, j)).to_complex()
            float_ov = np.vdot(product_state_np(d, p.m, p.b), fls)
            worst = max(worst, abs(exact_ov - float_ov))
    return worst
