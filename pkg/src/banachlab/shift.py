"""The shift representation of Z on l_p(Z), with a trivial factor appended.

The model space is E = l_p(Z) (+)_p R^k, with n in Z acting by translation
on the sequence factor and trivially on R^k. Here the invariant vectors are
the R^k factor, their complement is the sequence factor, and the projection
onto invariant vectors sends (x, c) to (0, c).

Every vector is finitely supported, so weak limits of translated bumps are
exact: once supports are disjoint, pairings are identically zero. All
"eventually" statements below come with an explicit threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .lp import (
    DenseVector,
    Exponent,
    ExponentLike,
    SparseSeq,
    duality_map,
    duality_map_array,
    lp_norm_array,
    norm,
    pair,
)
from .opnorm import OperatorMatrix, opnorm_brute, opnorm_power
from .orthogonality import BjReport, bj_orthogonal

INDEX_BOUND = 2**62


def shift(x: SparseSeq, k: int) -> SparseSeq:
    """Translate by k: (shift(x, k))(i) = x(i - k)."""
    k = int(k)
    if x.items and (abs(x.min_index() + k) >= INDEX_BOUND or abs(x.max_index() + k) >= INDEX_BOUND):
        raise OverflowError(f"shift by {k} leaves the supported index range")
    return SparseSeq(tuple((i + k, v) for i, v in x.items), x.p)


# ---------------------------------------------------------------------------
# model vectors


@dataclass(frozen=True)
class ShiftModel:
    """E = l_p(Z) (+)_p R^trivial_dim with Z acting by shifts on the first factor."""

    trivial_dim: int
    p: Exponent

    def __post_init__(self):
        if self.trivial_dim < 0:
            raise ValueError("trivial_dim must be >= 0")
        object.__setattr__(self, "p", Exponent.of(self.p))

    @property
    def dual(self) -> "ShiftModel":
        return ShiftModel(self.trivial_dim, self.p.dual)

    def vector(self, seq=None, fixed=None) -> "ModelVector":
        if seq is None:
            seq = {}
        if not isinstance(seq, SparseSeq):
            seq = SparseSeq.from_dict(dict(seq), self.p)
        fixed = np.zeros(self.trivial_dim) if fixed is None else np.asarray(fixed, dtype=float)
        return ModelVector(seq, fixed, self)


@dataclass(frozen=True, eq=False)
class ModelVector:
    seq: SparseSeq
    fixed: np.ndarray
    model: ShiftModel

    def __post_init__(self):
        f = np.array(self.fixed, dtype=float).reshape(-1)
        if f.size != self.model.trivial_dim:
            raise ValueError(f"fixed part has dimension {f.size}, model expects {self.model.trivial_dim}")
        if not np.all(np.isfinite(f)):
            raise ValueError("fixed part must be finite")
        f.setflags(write=False)
        object.__setattr__(self, "fixed", f)
        if self.seq.p != self.model.p:
            object.__setattr__(self, "seq", SparseSeq(self.seq.items, self.model.p))

    @property
    def p(self) -> Exponent:
        return self.model.p

    def flat(self) -> np.ndarray:
        """Nonzero sequence values followed by the fixed coordinates."""
        return np.concatenate([self.seq.values, self.fixed])

    def is_invariant(self) -> bool:
        return self.seq.is_zero()

    def in_complement(self) -> bool:
        return not np.any(self.fixed)

    def __add__(self, other: "ModelVector") -> "ModelVector":
        return ModelVector(self.seq + other.seq, self.fixed + other.fixed, self.model)

    def __sub__(self, other: "ModelVector") -> "ModelVector":
        return ModelVector(self.seq - other.seq, self.fixed - other.fixed, self.model)

    def __mul__(self, t: float) -> "ModelVector":
        return ModelVector(self.seq * t, float(t) * self.fixed, self.model)

    __rmul__ = __mul__

    def act(self, g: int) -> "ModelVector":
        """pi_g: shift the sequence part, leave the fixed part alone."""
        return ModelVector(shift(self.seq, g), self.fixed, self.model)

    def project_invariant(self) -> "ModelVector":
        return ModelVector(SparseSeq.zero(self.p), self.fixed, self.model)

    def project_complement(self) -> "ModelVector":
        return ModelVector(self.seq, np.zeros(self.model.trivial_dim), self.model)

    def window(self, indices: Sequence[int]) -> DenseVector:
        """Restriction to the given sequence coordinates plus the fixed ones."""
        d = self.seq.as_dict()
        vals = [d.get(i, 0.0) for i in indices]
        return DenseVector(np.concatenate([vals, self.fixed]), self.p)


def model_norm(v: ModelVector) -> float:
    """(||seq||^p + ||fixed||^p)^(1/p); a p-sum of l_p spaces is again l_p."""
    return lp_norm_array(v.flat(), v.p)


def model_pair(v: ModelVector, w: ModelVector) -> float:
    return pair(v.seq, w.seq) + float(np.dot(v.fixed, w.fixed))


def duality_map_model(v: ModelVector) -> ModelVector:
    """J on the p-sum, componentwise with the common norm."""
    p = v.p
    p.require_interior()
    vals = duality_map_array(v.flat(), p)
    k = len(v.seq)
    seq = v.seq.with_values(vals[:k], p.dual)
    return ModelVector(seq, vals[k:], v.model.dual)


# ---------------------------------------------------------------------------
# matrix coefficients and the WOT hypothesis


def vanishing_threshold(v: SparseSeq, w: SparseSeq) -> int:
    """Smallest T >= 0 with <shift(v, g), w> = 0 identically for |g| > T."""
    if v.is_zero() or w.is_zero():
        return 0
    return max(w.max_index() - v.min_index(), v.max_index() - w.min_index(), 0)


def matrix_coefficient(v: ModelVector, w: ModelVector, g: int) -> float:
    """psi_{v,w}(g) = <pi_g v, w>."""
    return pair(shift(v.seq, g), w.seq) + float(np.dot(v.fixed, w.fixed))


class WotCheck(NamedTuple):
    g: tuple[int, ...]
    plus: tuple[float, ...]
    minus: tuple[float, ...]
    threshold: int

    def vanished_past_threshold(self) -> bool:
        return all(
            a == 0.0 and b == 0.0
            for g, a, b in zip(self.g, self.plus, self.minus)
            if abs(g) > self.threshold
        )


def wot_limit_check(v: ModelVector, w: ModelVector, g_list: Sequence[int]) -> WotCheck:
    """|psi_{v,w}(+-g_n) - <P v, w>| along g_list.

    These residuals reach exactly zero beyond ``threshold`` and stay there,
    which is the weak-operator convergence pi_{g_n} -> P in this model.
    """
    g_list = [int(g) for g in g_list]
    if not g_list:
        raise ValueError("g_list is empty")
    mags = [abs(g) for g in g_list]
    if any(b <= a for a, b in zip(mags, mags[1:])):
        raise ValueError("g_list must be strictly increasing in |g|")
    limit = model_pair(v.project_invariant(), w)
    plus = tuple(abs(matrix_coefficient(v, w, g) - limit) for g in g_list)
    minus = tuple(abs(matrix_coefficient(v, w, -g) - limit) for g in g_list)
    return WotCheck(tuple(g_list), plus, minus, vanishing_threshold(v.seq, w.seq))


# ---------------------------------------------------------------------------
# the orthogonality certificate


class CertificateError(AssertionError):
    """A step of the certificate failed; the message names the quantity."""


@dataclass
class Certificate:
    c_plus: list[float]
    c_minus: list[float]
    c_limit: float
    bj: BjReport
    complement_norm: float
    complement_norm_power: float
    window: tuple[int, ...]
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _window_indices(v: SparseSeq, width: int) -> tuple[int, ...]:
    sup = list(v.support)
    return tuple(sup[:width]) if sup else (0,)


def theorem1_certificate(v: ModelVector, w: ModelVector, g_list: Sequence[int],
                         tol: float = 1e-9, raise_on_failure: bool = False) -> Certificate:
    """Check each finite step of the orthogonality argument on the shift model.

    For v in the sequence factor and w invariant:

    1. c_n = <w, J(pi_{-g_n} v)> vanishes for every n, in both directions;
    2. <w, J(v)> = 0, so v is Birkhoff-James orthogonal to w, confirmed by
       the line minimisation as well;
    3. the complementary projection has norm 1 on a finite window, by the
       brute-force oracle (and by power iteration on a larger window).
    """
    if not v.in_complement():
        raise ValueError("v must lie in the complement (zero fixed part)")
    if not w.is_invariant():
        raise ValueError("w must be invariant (zero sequence part)")
    if v.seq.is_zero():
        raise ValueError("v must be nonzero")
    v.p.require_interior("theorem1_certificate")
    failures = []

    c_plus = [model_pair(w, duality_map_model(v.act(-g))) for g in g_list]
    c_minus = [model_pair(w, duality_map_model(v.act(g))) for g in g_list]
    c_limit = model_pair(w, duality_map_model(v))
    if c_limit != 0.0:
        failures.append(f"c_limit={c_limit!r}")
    for name, seq in (("c_plus", c_plus), ("c_minus", c_minus)):
        for g, c in zip(g_list, seq):
            if c != 0.0:
                failures.append(f"{name}[g={g}]={c!r}")
                break

    idx = tuple(v.seq.support)
    bj = bj_orthogonal(v.window(idx), w.window(idx), tol=1e-8)
    if not bj.orthogonal:
        failures.append(f"bj_orthogonal=False (kato={bj.kato_pairing!r}, min={bj.min_value!r})")

    k = v.model.trivial_dim
    small = _window_indices(v.seq, max(1, 4 - k))
    comp = _complement_matrix(len(small), k, v.p)
    brute = opnorm_brute(comp, resolution=200).lower
    big = _complement_matrix(len(idx), k, v.p)
    power = opnorm_power(big).lower
    for name, val in (("complement_norm", brute), ("complement_norm_power", power)):
        if abs(val - 1.0) > tol:
            failures.append(f"{name}={val!r}")

    cert = Certificate(c_plus, c_minus, c_limit, bj, brute, power, small, failures)
    if raise_on_failure and failures:
        raise CertificateError(failures[0])
    return cert


def _complement_matrix(seq_dim: int, trivial_dim: int, p: Exponent) -> OperatorMatrix:
    """I - P restricted to seq_dim sequence coordinates and the fixed block."""
    d = np.concatenate([np.ones(seq_dim), np.zeros(trivial_dim)])
    return OperatorMatrix(np.diag(d), p)


def random_certificate_instance(rng: np.random.Generator, p: ExponentLike, trivial_dim: int,
                                max_support: int = 6, spread: int = 20):
    """A random v in the complement and w in the invariant factor."""
    model = ShiftModel(trivial_dim, p)
    k = int(rng.integers(1, max_support + 1))
    idx = rng.choice(np.arange(-spread, spread + 1), size=k, replace=False)
    vals = rng.standard_normal(k)
    v = model.vector(dict(zip(idx.tolist(), vals.tolist())))
    w = model.vector(fixed=rng.standard_normal(trivial_dim))
    if not np.any(w.fixed):
        w = model.vector(fixed=np.ones(trivial_dim))
    return v, w


# ---------------------------------------------------------------------------
# Opial property and Delta-convergence


class OpialGap(NamedTuple):
    lim_to_weak_limit: float
    lim_to_y: float
    threshold: int
    closed_form_to_y: float

    @property
    def gap(self) -> float:
        return self.lim_to_y - self.lim_to_weak_limit


def _disjoint_threshold(u: SparseSeq, *others: SparseSeq) -> int:
    """Smallest n >= 0 with shift(u, m) disjoint from every other support for all m >= n."""
    hi = [o.max_index() for o in others if not o.is_zero()]
    if not hi:
        return 0
    return max(max(hi) - u.min_index() + 1, 0)


def opial_gap(v: SparseSeq, u: SparseSeq, y: SparseSeq) -> OpialGap:
    """Limits of ||x_n - v|| and ||x_n - y|| for x_n = v + shift(u, n).

    x_n converges weakly to v. Past the disjointness threshold both
    distances are constant in n, so each liminf is the value there; it is
    evaluated twice (at the threshold and one step later) to confirm that.
    """
    p = v.p
    if p.is_inf:
        raise ValueError("opial_gap needs a finite exponent")
    if u.is_zero():
        raise ValueError("u must be nonzero")
    n0 = _disjoint_threshold(u, v, y)
    vals = []
    for n in (n0, n0 + 1):
        x = v + shift(u, n)
        vals.append((norm(x - v), norm(x - y)))
    if vals[0] != vals[1]:
        raise ArithmeticError(f"distances not yet constant past threshold: {vals}")
    to_v, to_y = vals[0]
    closed = lp_norm_array(np.array([norm(v - y), norm(u)]), p)
    return OpialGap(to_v, to_y, n0, closed)


def delta_convergence_check(v: SparseSeq, u: SparseSeq, w: SparseSeq, n_list: Sequence[int]) -> list[float]:
    """|<w, J(x_n - v)>| for x_n = v + shift(u, n)."""
    v.p.require_interior("delta_convergence_check")
    out = []
    for n in n_list:
        d = (v + shift(u, n)) - v
        if d.is_zero():
            out.append(0.0)
            continue
        out.append(abs(pair(w, duality_map(d))))
    return out


def delta_threshold(u: SparseSeq, w: SparseSeq) -> int:
    """Residuals of delta_convergence_check vanish for n >= this value."""
    if u.is_zero():
        return 0
    return _disjoint_threshold(u, w)
