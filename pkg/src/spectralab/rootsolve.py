"""Polynomial root finding for critical-point computations.

Two routes are kept deliberately independent so they can cross-check each
other: a simultaneous Aberth-Ehrlich iteration (the primary path) and
companion-matrix eigenvalues through LAPACK (the fallback). For polynomials
given by their roots, critical points can also be found without ever forming
coefficients, by Newton/Aberth steps on P'/P; that route stays accurate at
degrees where expanded coefficients would be useless in double precision.

Real-rooted polynomials get a bisection fast path: Rolle's theorem puts
exactly one critical point strictly between consecutive distinct roots, and
the sign of sum(1/(x - x_k)) brackets it, so interlacing holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, NoConvergence
from .polycore import RootPoly, derivative_coefficients

__all__ = [
    "RootFindReport",
    "companion_roots",
    "critical_points",
    "interlaced_extremes",
    "real_interlaced_critical_points",
    "solve_all",
]

TOL_ROOT = 1e-12
MAX_ITER = 200
_STALL_SWEEPS = 10
_COEFF_PATH_MAX_DEGREE = 80


@dataclass(frozen=True)
class RootFindReport:
    """All roots of one polynomial plus the evidence they are roots."""

    roots: np.ndarray
    residuals: np.ndarray
    iterations: int
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "roots": [[float(z.real), float(z.imag)] for z in self.roots],
            "residuals": [float(r) for r in self.residuals],
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }


def _horner_pair(coeffs: np.ndarray, z: np.ndarray):
    """Evaluate P, P', and the magnitude sum H = sum|c_k||z|^k; coeffs ascending."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    az = np.abs(z)
    hmag = np.zeros(z.shape, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        for c in coeffs[::-1]:
            dp = dp * z + p
            p = p * z + c
            hmag = hmag * az + abs(c)
    return p, dp, hmag


def _relative_residuals(pvals: np.ndarray, lead: complex, roots: np.ndarray,
                        hmag: np.ndarray, tol_root: float) -> np.ndarray:
    """|P(r_i)| relative to the local scale |lead| * prod_{j!=i} max(1, |r_i-r_j|).

    Computed in logs (the raw scale product overflows at modest degrees). The
    certification scale is floored at the Horner evaluation-noise level
    4 n eps H / tol_root: residuals at roundoff cannot be distinguished from
    zero, so they must not block convergence.
    """
    n = roots.size
    with np.errstate(divide="ignore"):
        log_p = np.log(np.abs(pvals))
        log_floor = np.log(4.0 * n * np.finfo(float).eps * hmag / tol_root)
    diff = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(diff, 1.0)
    log_scale = math.log(abs(lead)) + np.sum(np.log(np.maximum(diff, 1.0)), axis=1)
    with np.errstate(invalid="ignore", over="ignore"):
        res = np.exp(log_p - np.maximum(log_scale, log_floor))
    return np.where(np.isnan(res), np.inf, res)


def _aberth_sweeps(coeffs: np.ndarray, z0: np.ndarray, tol_root: float, max_iter: int):
    z = np.array(z0, dtype=complex)
    best_active = z.size + 1
    best = math.inf
    stalled = 0
    res = np.full(z.shape, math.inf)
    it = 0
    for it in range(1, max_iter + 1):
        p, dp, hmag = _horner_pair(coeffs, z)
        res = _relative_residuals(p, coeffs[-1], z, hmag, tol_root)
        worst = float(res.max())
        if worst <= tol_root:
            return z, res, it, True
        # progress = fewer unconverged points, or a better worst residual
        active = int(np.sum(res > tol_root))
        if active < best_active or (active == best_active and worst < best * (1.0 - 1e-3)):
            best_active = active
            best = min(best, worst)
            stalled = 0
        else:
            stalled += 1
            if stalled >= _STALL_SWEEPS:
                break
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = p / dp
        newton = np.where(np.isfinite(newton), newton, 1e-2 * (1.0 + np.abs(z)))
        d = z[:, None] - z[None, :]
        np.fill_diagonal(d, np.inf)
        repulsion = np.sum(1.0 / d, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = newton / (1.0 - newton * repulsion)
        corr = np.where(np.isfinite(corr), corr, newton)
        z = z - corr
    return z, res, it, False


def companion_roots(coeffs) -> np.ndarray:
    """Eigenvalues of the companion matrix of the (monic-normalized) polynomial."""
    from .rmt import eigenvalues  # deferred: rmt builds on this module's siblings

    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size < 2:
        raise DegenerateInput("degree >= 1 required")
    if c[-1] == 0:
        raise DegenerateInput("zero leading coefficient")
    n = c.size - 1
    if n == 1:
        return np.array([-c[0] / c[1]])
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return eigenvalues(comp, ensemble="companion").eigenvalues


def solve_all(coeffs, *, tol_root: float = TOL_ROOT, max_iter: int = MAX_ITER) -> RootFindReport:
    """All roots of a coefficient polynomial (ascending coefficients).

    Aberth-Ehrlich iteration from a circle of starting points; if it stalls,
    companion-matrix eigenvalues take over. Raises NoConvergence when both
    routes miss the residual target, DegenerateInput for a zero leading
    coefficient or degree < 1.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size < 2:
        raise DegenerateInput("degree >= 1 required")
    if c[-1] == 0:
        raise DegenerateInput("zero leading coefficient")
    n = c.size - 1
    if n == 1:
        root = np.array([-c[0] / c[1]])
        pv, _, hm = _horner_pair(c, root)
        res = _relative_residuals(pv, c[-1], root, hm, tol_root)
        return RootFindReport(root, res, 0, bool(res.max() <= tol_root))

    radius = 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z0 = radius * np.exp(1j * angles)
    z, res, it, ok = _aberth_sweeps(c, z0, tol_root, max_iter)
    if ok:
        return RootFindReport(z, res, it, True)

    zc = companion_roots(c)
    pv, _, hm = _horner_pair(c, zc)
    resc = _relative_residuals(pv, c[-1], zc, hm, tol_root)
    if resc.max() <= tol_root:
        return RootFindReport(zc, resc, it, True)
    if res.max() <= resc.max():
        raise NoConvergence(
            f"Aberth stalled at residual {res.max():.3e}, companion at {resc.max():.3e}")
    raise NoConvergence(
        f"companion residual {resc.max():.3e} exceeds tol_root {tol_root:.1e}")


def _log_abs_poly_from_roots(values: np.ndarray, counts: np.ndarray, z: np.ndarray) -> np.ndarray:
    """log prod_j |z - values_j|^counts_j, stable at any degree."""
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(z[:, None] - values[None, :]))
    return logs @ counts


def _critical_points_rootbased(p: RootPoly, tol_root: float, max_iter: int) -> RootFindReport:
    """Aberth iteration on P'/P, using only the roots of P.

    Avoids coefficient expansion entirely, so it stays usable when expanded
    coefficients overflow or cancel catastrophically (large degree, roots on
    a circle). A root of multiplicity m contributes m-1 critical points at
    itself; those are emitted directly and enter the repulsion sum as fixed
    points.
    """
    roots = p.root_array()
    n = roots.size
    values, counts = np.unique(roots, return_counts=True)
    fixed = np.repeat(values, counts - 1)
    d = values.size
    if d == 1:
        res = np.zeros(n - 1)
        return RootFindReport(fixed, res, 0, True)

    centroid = roots.mean()
    drop = int(np.argmin(np.abs(values - centroid)))
    w = np.delete(values, drop)
    w = w + (centroid - w) * (0.5 / n)
    # nudge any start point that landed exactly on a pole
    for _ in range(3):
        dist = np.abs(w[:, None] - values[None, :]).min(axis=1)
        bad = dist == 0.0
        if not bad.any():
            break
        w = np.where(bad, w + (1e-6 + 1e-6j) * (1.0 + np.abs(w)), w)

    cnt = counts.astype(float)
    scale_lead = math.log(n * abs(p.leading))
    best_step = math.inf
    best_active = w.size + 1
    stalled = 0
    # the clipped residual scale is far too generous for spread-out root sets
    # at large degree; demand a vanishing undamped Newton step as well, which
    # also rejects spurious equilibria of the mutual-repulsion term
    newton_tol = 1e-11
    it = 0
    done = False
    for it in range(1, max_iter + 1):
        dz = w[:, None] - values[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / dz
        s1 = inv @ cnt
        s2 = (inv * inv) @ cnt
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = s1 / (s1 * s1 - s2)
        newton = np.where(np.isfinite(newton), newton, 1e-3 * (1.0 + np.abs(w)))
        if float(np.max(np.abs(newton) / (1.0 + np.abs(w)))) <= newton_tol:
            done = True
            break
        dw = w[:, None] - w[None, :]
        np.fill_diagonal(dw, np.inf)
        repulsion = np.sum(1.0 / dw, axis=1)
        if fixed.size:
            repulsion = repulsion + np.sum(1.0 / (w[:, None] - fixed[None, :]), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = newton / (1.0 - newton * repulsion)
        corr = np.where(np.isfinite(corr), corr, newton)
        w = w - corr
        steps = np.abs(corr) / (1.0 + np.abs(w))
        last_step = float(steps.max())
        active = int(np.sum(steps > newton_tol))
        if active < best_active or (active == best_active
                                    and last_step < best_step * (1.0 - 1e-3)):
            best_active = active
            best_step = min(best_step, last_step)
            stalled = 0
        else:
            stalled += 1
            if stalled >= _STALL_SWEEPS:
                break

    # residual of P' at w relative to its local scale, all in logs
    dz = w[:, None] - values[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = (1.0 / dz) @ cnt
    log_pprime = _log_abs_poly_from_roots(values, cnt, w) + math.log(abs(p.leading))
    with np.errstate(divide="ignore"):
        log_pprime = log_pprime + np.log(np.abs(s1))
    others = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(others, 1.0)
    log_scale = scale_lead + np.sum(np.log(np.maximum(others, 1.0)), axis=1)
    if fixed.size:
        log_scale = log_scale + np.sum(
            np.log(np.maximum(np.abs(w[:, None] - fixed[None, :]), 1.0)), axis=1)
    res = np.exp(log_pprime - log_scale)

    all_w = np.concatenate([fixed, w])
    all_res = np.concatenate([np.zeros(fixed.size), res])
    if done and res.max() <= tol_root:
        return RootFindReport(all_w, all_res, it, True)
    # fall back through coefficients when they are representable
    dcoeffs = derivative_coefficients(p)
    if np.all(np.isfinite(dcoeffs)) and dcoeffs[-1] != 0:
        zc = companion_roots(dcoeffs)
        pv, _, hm = _horner_pair(dcoeffs, zc)
        resc = _relative_residuals(pv, dcoeffs[-1], zc, hm, tol_root)
        if resc.max() <= tol_root:
            return RootFindReport(zc, resc, it, True)
    raise NoConvergence(f"critical-point iteration stalled at residual {res.max():.3e}")


def critical_points(p: RootPoly, *, tol_root: float = TOL_ROOT,
                    max_iter: int = MAX_ITER) -> RootFindReport:
    """All degree-1 fewer roots of P', i.e. the critical points of P.

    Small degrees go through expanded coefficients and solve_all; larger ones
    use the root-based iteration, whose accuracy does not depend on the size
    of expanded coefficients.
    """
    if p.degree < 2:
        raise DegenerateInput("degree >= 2 required")
    if p.degree <= _COEFF_PATH_MAX_DEGREE:
        c = derivative_coefficients(p)
        if np.all(np.isfinite(c)) and c[-1] != 0:
            try:
                return solve_all(c, tol_root=tol_root, max_iter=max_iter)
            except NoConvergence:
                # clustered or badly scaled roots can defeat the coefficient
                # representation; the root-based route does not expand at all
                pass
    return _critical_points_rootbased(p, tol_root, max_iter)


def _bisect_gaps(values: np.ndarray, counts: np.ndarray, gaps: np.ndarray) -> np.ndarray:
    """Zero of sum(counts_j/(x - values_j)) inside each requested gap.

    ``gaps`` holds indices g, meaning the open interval (values[g], values[g+1]).
    The sum is strictly decreasing there, from +inf down to -inf, so plain
    bisection on the sign cannot leave the bracket: the result interlaces the
    roots exactly.
    """
    lo = values[gaps].astype(float).copy()
    hi = values[gaps + 1].astype(float).copy()
    cnt = counts.astype(float)
    eps = np.finfo(float).eps
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        with np.errstate(divide="ignore"):
            g = (cnt / (mid[:, None] - values[None, :])).sum(axis=1)
        positive = g > 0
        lo = np.where(positive, mid, lo)
        hi = np.where(positive, hi, mid)
        width_ok = hi - lo <= 4.0 * eps * np.maximum(
            1.0, np.maximum(np.abs(lo), np.abs(hi)))
        if bool(np.all(width_ok)):
            break
    return 0.5 * (lo + hi)


def real_interlaced_critical_points(sorted_real_roots) -> np.ndarray:
    """Critical points of prod(z - x_k) for sorted real roots, via bisection.

    Repeated roots (exact equality) are emitted directly with multiplicity
    one less; one bisection runs per gap between consecutive distinct roots.
    Output is sorted and has length n-1.
    """
    x = np.asarray(sorted_real_roots, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise DegenerateInput("degree >= 2 required")
    if np.any(np.diff(x) < 0):
        raise DegenerateInput("roots must be sorted ascending")
    values, counts = np.unique(x, return_counts=True)
    fixed = np.repeat(values, counts - 1)
    if values.size == 1:
        return fixed
    interior = _bisect_gaps(values, counts, np.arange(values.size - 1))
    return np.sort(np.concatenate([fixed, interior]))


def interlaced_extremes(sorted_real_roots) -> tuple:
    """(smallest, largest) critical point of a sorted-real-rooted polynomial.

    Only the two outermost gaps are bisected, which keeps extremal-gap
    statistics cheap at large n.
    """
    x = np.asarray(sorted_real_roots, dtype=float).ravel()
    if x.size < 2:
        raise DegenerateInput("degree >= 2 required")
    if np.any(np.diff(x) < 0):
        raise DegenerateInput("roots must be sorted ascending")
    values, counts = np.unique(x, return_counts=True)
    if values.size == 1:
        return float(values[0]), float(values[0])
    low = float(values[0]) if counts[0] > 1 else float(
        _bisect_gaps(values, counts, np.array([0]))[0])
    last = values.size - 2
    high = float(values[-1]) if counts[-1] > 1 else float(
        _bisect_gaps(values, counts, np.array([last]))[0])
    return low, high
