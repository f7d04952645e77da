"""Finite and finitely supported models of l_p spaces.

Exponents, dense vectors in l_p^n, finitely supported sequences in l_p(Z),
norms, the dual pairing, and the duality mapping J together with its inverse.

The duality mapping of l_p (1 < p < inf) is single valued and given by

    J(v)_i = ||v||_p^(2-p) * |v_i|^(p-1) * sign(v_i),

the unique element w of l_q with <v, w> = ||v||_p^2 and ||w||_q = ||v||_p.
The inverse of J_p is J_q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

P_MIN = 1.0 + 1e-6
P_MAX = 1e6


class ExponentError(ValueError):
    """Raised for exponents outside the supported range or of the wrong kind."""


@dataclass(frozen=True)
class Exponent:
    """An exponent p in [1 + 1e-6, 1e6], or one of the exact tags 1 and inf.

    The conjugate exponent is stored alongside so that ``p.dual.dual == p``
    holds exactly, not just up to rounding.
    """

    value: float
    conj: float = field(default=math.nan, compare=False, repr=False)

    def __post_init__(self):
        p = float(self.value)
        if math.isnan(p):
            raise ExponentError("exponent is NaN")
        if p != 1.0 and not math.isinf(p) and not (P_MIN <= p <= P_MAX):
            raise ExponentError(
                f"exponent {p!r} outside [{P_MIN}, {P_MAX:g}] and not an exact tag (1 or inf)"
            )
        if math.isinf(p) and p < 0:
            raise ExponentError("exponent -inf")
        object.__setattr__(self, "value", p)
        if math.isnan(self.conj):
            if p == 1.0:
                q = math.inf
            elif math.isinf(p):
                q = 1.0
            else:
                q = p / (p - 1.0)
            object.__setattr__(self, "conj", q)

    @classmethod
    def of(cls, p: "ExponentLike") -> "Exponent":
        """Coerce a float, an int, the string ``"inf"`` or an Exponent."""
        if isinstance(p, Exponent):
            return p
        if isinstance(p, str):
            s = p.strip().lower()
            if s in ("inf", "infinity", "oo"):
                return cls(math.inf)
            try:
                value = float(s)
            except ValueError:
                raise ExponentError(f"cannot parse exponent {p!r}") from None
            return cls(value)
        return cls(float(p))

    @property
    def dual(self) -> "Exponent":
        # conj may fall marginally outside [P_MIN, P_MAX] at the extremes
        q = Exponent.__new__(Exponent)
        object.__setattr__(q, "value", self.conj)
        object.__setattr__(q, "conj", self.value)
        return q

    @property
    def is_one(self) -> bool:
        return self.value == 1.0

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @property
    def is_two(self) -> bool:
        return self.value == 2.0

    @property
    def is_interior(self) -> bool:
        """True for 1 < p < inf, where l_p is uniformly convex and smooth."""
        return not (self.is_one or self.is_inf)

    def require_interior(self, what: str = "duality mapping") -> None:
        if not self.is_interior:
            raise ExponentError(f"{what} requires 1 < p < inf, got p={self}")

    def __str__(self) -> str:
        return "inf" if self.is_inf else repr(self.value)

    def __float__(self) -> float:
        return self.value


ONE = Exponent(1.0)
TWO = Exponent(2.0)
INF = Exponent(math.inf)

ExponentLike = Union[Exponent, float, int, str]


# ---------------------------------------------------------------------------
# array kernels (shared by the vector types and the operator-norm code)


def lp_norm_array(x: np.ndarray, p: Exponent) -> float:
    """l_p norm of a real array, with max-rescaling to avoid overflow."""
    a = np.abs(np.asarray(x, dtype=float))
    if a.size == 0:
        return 0.0
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if p.is_inf:
        return m
    if p.is_one:
        return float(a.sum())
    if p.is_two:
        return m * math.sqrt(float(np.dot(a / m, a / m)))
    s = float(np.sum(_pow(a / m, p.value)))
    return m * s ** (1.0 / p.value)


def _pow(a: np.ndarray, e: float) -> np.ndarray:
    # a in [0, 1]; exp/log route keeps huge exponents from overflowing
    out = np.zeros_like(a)
    nz = a > 0
    out[nz] = np.exp(e * np.log(a[nz]))
    return out


def duality_map_array(x: np.ndarray, p: Exponent) -> np.ndarray:
    """Closed-form l_p duality mapping applied to a real array."""
    p.require_interior()
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    m = float(a.max()) if a.size else 0.0
    if m == 0.0:
        return np.zeros_like(x)
    if p.is_two:
        return x.copy()
    u = a / m
    nu = lp_norm_array(u, p)
    # J is positively 1-homogeneous: J(m u) = m J(u)
    return m * nu ** (2.0 - p.value) * _pow(u, p.value - 1.0) * np.sign(x)


# ---------------------------------------------------------------------------
# dense vectors


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DenseVector:
    """A vector of l_p^n. ``blocks`` records p-sum block boundaries, if any."""

    entries: np.ndarray
    p: Exponent
    blocks: tuple[int, ...] = ()

    def __post_init__(self):
        arr = _frozen(self.entries)
        if arr.size < 1:
            raise ValueError("DenseVector needs dimension >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("DenseVector entries must be finite")
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "p", Exponent.of(self.p))
        if self.blocks and (sum(self.blocks) != arr.size or min(self.blocks) < 1):
            raise ValueError(f"block sizes {self.blocks} do not partition dimension {arr.size}")

    @property
    def dim(self) -> int:
        return self.entries.size

    def with_entries(self, entries, p: ExponentLike | None = None) -> "DenseVector":
        return DenseVector(entries, self.p if p is None else Exponent.of(p))

    def block(self, i: int) -> np.ndarray:
        offs = np.cumsum((0,) + self.blocks)
        return self.entries[offs[i]:offs[i + 1]]

    def __add__(self, other: "DenseVector") -> "DenseVector":
        _check_dims(self, other)
        return DenseVector(self.entries + other.entries, self.p)

    def __sub__(self, other: "DenseVector") -> "DenseVector":
        _check_dims(self, other)
        return DenseVector(self.entries - other.entries, self.p)

    def __neg__(self) -> "DenseVector":
        return DenseVector(-self.entries, self.p, self.blocks)

    def __mul__(self, t: float) -> "DenseVector":
        return DenseVector(float(t) * self.entries, self.p, self.blocks)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"DenseVector({self.entries.tolist()}, p={self.p})"


def _check_dims(a: DenseVector, b: DenseVector) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


# ---------------------------------------------------------------------------
# finitely supported sequences on Z


@dataclass(frozen=True)
class SparseSeq:
    """A finitely supported real function on Z, viewed in l_p(Z).

    ``items`` is a sorted tuple of ``(index, value)`` with nonzero values.
    """

    items: tuple[tuple[int, float], ...]
    p: Exponent

    def __post_init__(self):
        clean = {}
        for i, x in self.items:
            if int(i) != i:
                raise ValueError(f"non-integer index {i!r}")
            x = float(x)
            if not math.isfinite(x):
                raise ValueError(f"non-finite value at index {i}")
            if x != 0.0:
                clean[int(i)] = x
        object.__setattr__(self, "items", tuple(sorted(clean.items())))
        object.__setattr__(self, "p", Exponent.of(self.p))

    @classmethod
    def from_dict(cls, d: Mapping[int, float], p: ExponentLike) -> "SparseSeq":
        return cls(tuple(d.items()), Exponent.of(p))

    @classmethod
    def delta(cls, i: int, p: ExponentLike, value: float = 1.0) -> "SparseSeq":
        return cls(((i, value),), Exponent.of(p))

    @classmethod
    def zero(cls, p: ExponentLike) -> "SparseSeq":
        return cls((), Exponent.of(p))

    def __getitem__(self, i: int) -> float:
        return self.as_dict().get(i, 0.0)

    def as_dict(self) -> dict[int, float]:
        return dict(self.items)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    @property
    def values(self) -> np.ndarray:
        return np.array([x for _, x in self.items], dtype=float)

    def __len__(self) -> int:
        return len(self.items)

    def is_zero(self) -> bool:
        return not self.items

    def min_index(self) -> int:
        if not self.items:
            raise ValueError("empty support")
        return self.items[0][0]

    def max_index(self) -> int:
        if not self.items:
            raise ValueError("empty support")
        return self.items[-1][0]

    def _combine(self, other: "SparseSeq", sign: float) -> "SparseSeq":
        d = self.as_dict()
        for i, x in other.items:
            d[i] = d.get(i, 0.0) + sign * x
        return SparseSeq(tuple(d.items()), self.p)

    def __add__(self, other: "SparseSeq") -> "SparseSeq":
        return self._combine(other, 1.0)

    def __sub__(self, other: "SparseSeq") -> "SparseSeq":
        return self._combine(other, -1.0)

    def __neg__(self) -> "SparseSeq":
        return SparseSeq(tuple((i, -x) for i, x in self.items), self.p)

    def __mul__(self, t: float) -> "SparseSeq":
        return SparseSeq(tuple((i, float(t) * x) for i, x in self.items), self.p)

    __rmul__ = __mul__

    def with_values(self, values: Iterable[float], p: ExponentLike | None = None) -> "SparseSeq":
        return SparseSeq(tuple(zip(self.support, values)), self.p if p is None else Exponent.of(p))

    def to_dense(self, lo: int, hi: int) -> np.ndarray:
        """Entries on the window ``lo..hi`` inclusive."""
        out = np.zeros(hi - lo + 1)
        for i, x in self.items:
            if lo <= i <= hi:
                out[i - lo] = x
        return out


Vector = Union[DenseVector, SparseSeq]


# ---------------------------------------------------------------------------
# operations


def norm(v: Vector, p: ExponentLike | None = None) -> float:
    """l_p norm of ``v`` (in its ambient exponent unless ``p`` is given)."""
    e = v.p if p is None else Exponent.of(p)
    if isinstance(v, SparseSeq):
        return lp_norm_array(v.values, e)
    return lp_norm_array(v.entries, e)


def pair(v: Vector, w: Vector) -> float:
    """The real dual pairing sum_i v_i w_i."""
    if isinstance(v, SparseSeq) and isinstance(w, SparseSeq):
        wd = w.as_dict()
        return float(math.fsum(x * wd[i] for i, x in v.items if i in wd))
    if isinstance(v, DenseVector) and isinstance(w, DenseVector):
        _check_dims(v, w)
        return float(np.dot(v.entries, w.entries))
    raise TypeError(f"cannot pair {type(v).__name__} with {type(w).__name__}")


def duality_map(v: Vector) -> Vector:
    """J_p(v), returned in the dual ambient exponent q."""
    p = v.p
    p.require_interior()
    if isinstance(v, SparseSeq):
        if v.is_zero():
            return SparseSeq.zero(p.dual)
        return v.with_values(duality_map_array(v.values, p), p.dual)
    return DenseVector(duality_map_array(v.entries, p), p.dual, v.blocks)


def inverse_duality_map(w: Vector) -> Vector:
    """The unique v with J(v) = w; this is the duality map of the dual space."""
    return duality_map(w)


def duality_residuals(v: Vector) -> tuple[float, float]:
    """Defect of J(v) in its two defining identities, scaled by (1 + magnitude)."""
    j = duality_map(v)
    nv = norm(v)
    r1 = abs(pair(v, j) - nv * nv) / (1.0 + nv * nv)
    r2 = abs(norm(j) - nv) / (1.0 + nv)
    return r1, r2


def psum_embed(blocks: Sequence[DenseVector], p: ExponentLike | None = None) -> DenseVector:
    """Concatenate blocks into their l_p direct sum, keeping block boundaries."""
    if not blocks:
        raise ValueError("psum_embed needs at least one block")
    e = blocks[0].p if p is None else Exponent.of(p)
    for b in blocks:
        if b.p != e:
            raise ExponentError(f"mixed exponents in p-sum: {b.p} vs {e}")
    return DenseVector(
        np.concatenate([b.entries for b in blocks]), e, tuple(b.dim for b in blocks)
    )


def psum_norm(v: DenseVector) -> float:
    """Norm computed block by block: (sum ||block_i||^p)^(1/p), max for inf."""
    if not v.blocks:
        return norm(v)
    norms = np.array([lp_norm_array(v.block(i), v.p) for i in range(len(v.blocks))])
    return lp_norm_array(norms, v.p)
