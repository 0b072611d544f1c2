"""Root-based polynomials and numerically stable evaluation.

A polynomial is carried as its multiset of roots plus a leading coefficient,
so P(z) = leading * prod_k (z - r_k). Degrees are the number of stored roots;
a root repeated m times simply appears m times. Coefficient expansion is only
a derived view (needed to feed root solvers), never the primary form.

The weighted logarithmic derivative sum(a_k / (z - z_k)) is the workhorse for
everything about critical points: with unit weights it equals P'(z)/P(z).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NearPole, SizeMismatch, ZeroDegree

__all__ = [
    "RootPoly",
    "WeightedLogDeriv",
    "canonical_order",
    "cloud_to_csv",
    "cloud_to_json",
    "derivative_coefficients",
    "eval_log_deriv",
    "evaluate",
    "exclusion_radius",
    "expand_coefficients",
    "log_abs_log_deriv",
]


def exclusion_radius(z: complex) -> float:
    """Pole-exclusion radius around an evaluation point: 1e-12 * (1 + |z|)."""
    return 1e-12 * (1.0 + abs(z))


def canonical_order(points: Iterable[complex]) -> np.ndarray:
    """Sort complex points lexicographically by (real, imag).

    This is the canonical ordering used for every serialized point cloud, so
    that repeated runs produce identical files.
    """
    arr = np.asarray(list(points) if not isinstance(points, np.ndarray) else points,
                     dtype=complex).ravel()
    if arr.size == 0:
        return arr
    idx = np.lexsort((arr.imag, arr.real))
    return arr[idx]


def cloud_to_csv(points: Iterable[complex]) -> str:
    """Serialize a point cloud to CSV rows "re,im" in canonical order."""
    arr = canonical_order(points)
    return "".join(f"{repr(float(z.real))},{repr(float(z.imag))}\n" for z in arr)


def cloud_to_json(points: Iterable[complex]) -> str:
    """Serialize a point cloud to a JSON array [[re, im], ...] in canonical order."""
    arr = canonical_order(points)
    return json.dumps([[float(z.real), float(z.imag)] for z in arr])


@dataclass(frozen=True)
class RootPoly:
    """Polynomial stored as roots (multiplicity by repetition) and a leading scalar."""

    roots: tuple = ()
    leading: complex = 1.0 + 0.0j

    def __init__(self, roots: Sequence[complex] = (), leading: complex = 1.0):
        object.__setattr__(self, "roots", tuple(complex(r) for r in roots))
        object.__setattr__(self, "leading", complex(leading))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def root_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=complex)


@dataclass(frozen=True)
class WeightedLogDeriv:
    """Weighted sum of simple poles, sum(a_k / (z - z_k)).

    With all weights equal to one this is P'(z)/P(z) for the RootPoly with the
    same roots. No constraint is imposed on the weights; callers that need
    positivity or a fixed total must validate themselves.
    """

    roots: tuple = ()
    weights: tuple = ()

    def __init__(self, roots: Sequence[complex], weights: Sequence[complex] | None = None):
        roots = tuple(complex(r) for r in roots)
        if weights is None:
            weights = (1.0 + 0.0j,) * len(roots)
        else:
            weights = tuple(complex(w) for w in weights)
        if len(weights) != len(roots):
            raise SizeMismatch(
                f"{len(roots)} roots but {len(weights)} weights")
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_rootpoly(cls, p: RootPoly) -> "WeightedLogDeriv":
        return cls(p.roots)

    def root_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=complex)

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=complex)


def expand_coefficients(p: RootPoly) -> np.ndarray:
    """Coefficients of P in ascending powers, length degree+1.

    Expansion is by iterated convolution with the factors (z - r), taking the
    roots in descending-magnitude order; this keeps intermediate coefficient
    growth bounded and makes the output deterministic.
    """
    roots = p.root_array()
    coeffs = np.array([p.leading], dtype=complex)
    if roots.size == 0:
        return coeffs
    order = np.argsort(-np.abs(roots), kind="stable")
    for r in roots[order]:
        nxt = np.zeros(coeffs.size + 1, dtype=complex)
        nxt[1:] = coeffs          # z * old
        nxt[:-1] -= r * coeffs    # -r * old
        coeffs = nxt
    return coeffs


def evaluate(p: RootPoly, z: complex) -> complex:
    """P(z) as a product of factors (never through coefficients)."""
    out = complex(p.leading)
    for r in p.roots:
        out *= z - r
    return out


def derivative_coefficients(p: RootPoly) -> np.ndarray:
    """Ascending coefficients of P', length degree.

    Raises ZeroDegree for constant polynomials.
    """
    if p.degree == 0:
        raise ZeroDegree("derivative of a degree-0 polynomial")
    c = expand_coefficients(p)
    k = np.arange(1, c.size)
    return c[1:] * k


def _pole_checked_terms(w: WeightedLogDeriv, z: complex) -> np.ndarray:
    roots = w.root_array()
    if roots.size == 0:
        return np.zeros(0, dtype=complex)
    d = z - roots
    rho = exclusion_radius(z)
    dmin = np.min(np.abs(d))
    if dmin < rho:
        raise NearPole(f"evaluation point within {rho:.3e} of a pole")
    return w.weight_array() / d


def eval_log_deriv(w: WeightedLogDeriv, z: complex) -> complex:
    """sum(a_k / (z - z_k)); refuses points inside the pole-exclusion radius."""
    return complex(np.sum(_pole_checked_terms(w, z)))


def log_abs_log_deriv(w: WeightedLogDeriv, z: complex) -> float:
    """log|sum(a_k / (z - z_k))|, rescaled term-wise so it cannot overflow.

    Returns -inf when the sum underflows to zero (exact cancellation); callers
    treat that as the NegInfinity flag rather than an error.
    """
    terms = _pole_checked_terms(w, z)
    if terms.size == 0:
        return float("-inf")
    m = float(np.max(np.abs(terms)))
    if m == 0.0 or not math.isfinite(m):
        return float("-inf") if m == 0.0 else float("inf")
    s = abs(np.sum(terms / m))
    if s == 0.0:
        return float("-inf")
    return math.log(m) + math.log(s)
