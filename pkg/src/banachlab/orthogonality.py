"""Birkhoff-James orthogonality in l_p^n.

Two independent routes decide whether v is orthogonal to w:

* Kato's criterion, through the sign of <w, J(v)>;
* direct minimisation of the convex function phi(t) = ||v + t w|| over R.

``bj_orthogonal`` runs both and reports whether they agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .lp import DenseVector, duality_map, lp_norm_array, norm, pair

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

# relative slack under which phi(0) is preferred over a golden-section point
_TIE_RTOL = 4 * np.finfo(float).eps


def golden_section(f: Callable[[float], float], a: float, b: float, rtol: float = 1e-12):
    """Minimise a unimodal ``f`` on [a, b].

    Returns ``(x, f(x))`` for the best point evaluated once the bracket is
    narrower than ``rtol * (b - a)``.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h == 0.0:
        return a, f(a)
    steps = max(1, int(math.ceil(math.log(rtol) / math.log(INV_PHI))))
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    best = (c, yc) if yc <= yd else (d, yd)
    for _ in range(steps):
        if yc <= yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            yc = f(c)
            if yc < best[1]:
                best = (c, yc)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)
            if yd < best[1]:
                best = (d, yd)
    return best


def _check_pair(v: DenseVector, w: DenseVector) -> None:
    if v.dim != w.dim:
        raise ValueError(f"dimension mismatch: {v.dim} vs {w.dim}")


def kato_pairing(v: DenseVector, w: DenseVector) -> float:
    """<w, J(v)>: nonnegative iff ||v|| <= ||v + t w|| for every t > 0."""
    _check_pair(v, w)
    if not np.any(v.entries):
        raise ValueError("Birkhoff-James orthogonality is undefined for v = 0")
    return pair(w, duality_map(v))


def _phi(v: DenseVector, w: DenseVector) -> Callable[[float], float]:
    x, y, p = v.entries, w.entries, v.p
    return lambda t: lp_norm_array(x + t * y, p)


class LineMin(NamedTuple):
    min_lambda: float
    min_value: float


def bj_minimize(v: DenseVector, w: DenseVector, one_sided: bool = False) -> LineMin:
    """Global minimiser of t -> ||v + t w|| over R (or over t >= 0).

    The minimiser lies in |t| <= 2||v||/||w||: outside that bracket
    ||v + t w|| >= |t| ||w|| - ||v|| > ||v||. Ties with t = 0 within
    rounding are resolved in favour of t = 0.
    """
    _check_pair(v, w)
    nw = norm(w)
    if nw == 0.0:
        raise ValueError("bj_minimize needs w != 0")
    phi = _phi(v, w)
    radius = 2.0 * norm(v) / nw
    f0 = phi(0.0)
    if radius == 0.0:
        return LineMin(0.0, f0)
    t, ft = golden_section(phi, 0.0 if one_sided else -radius, radius)
    if f0 <= ft * (1.0 + _TIE_RTOL):
        return LineMin(0.0, f0)
    return LineMin(t, ft)


@dataclass(frozen=True)
class BjReport:
    kato_pairing: float
    min_lambda: float
    min_value: float
    norm_v: float
    norm_w: float
    tolerance: float
    kato_verdict: bool
    minimization_verdict: bool

    @property
    def orthogonal(self) -> bool:
        return self.kato_verdict and self.minimization_verdict

    @property
    def routes_agree(self) -> bool:
        return self.kato_verdict == self.minimization_verdict

    def as_dict(self) -> dict:
        return {
            "kato_pairing": self.kato_pairing,
            "min_lambda": self.min_lambda,
            "min_value": self.min_value,
            "norm_v": self.norm_v,
            "orthogonal": self.orthogonal,
            "kato_verdict": self.kato_verdict,
            "minimization_verdict": self.minimization_verdict,
            "routes_agree": self.routes_agree,
            "tolerance": self.tolerance,
        }


def bj_orthogonal(v: DenseVector, w: DenseVector, tol: float = 1e-8) -> BjReport:
    """Decide whether v is Birkhoff-James orthogonal to w by both routes."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = kato_pairing(v, w)
    lm = bj_minimize(v, w)
    nv, nw = norm(v), norm(w)
    # ||J(v)||_q = ||v||_p, so the Hoelder scale of the pairing is ||v|| ||w||
    return BjReport(
        kato_pairing=k,
        min_lambda=lm.min_lambda,
        min_value=lm.min_value,
        norm_v=nv,
        norm_w=nw,
        tolerance=tol,
        kato_verdict=abs(k) <= tol * nv * nw,
        minimization_verdict=lm.min_value >= nv * (1.0 - tol),
    )
