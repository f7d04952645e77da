"""Finite groups acting isometrically on l_p^n by signed permutations.

For p != 2 the linear isometries of l_p^n are exactly the signed
permutation matrices (Lamperti), so a representation by signed
permutations is the general isometric representation at this scale.
The projection onto invariant vectors is the group average
(1/|G|) sum_g pi_g; for the left regular representation it is the mean
operator M with every entry 1/|G|.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .lp import DenseVector, Exponent, ExponentLike, duality_map, norm


class GroupTableError(ValueError):
    """A Cayley table that does not define a group."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table on indices 0..order-1.

    ``cayley[g, h]`` is the index of the product gh. The table is validated
    exhaustively on construction (Latin square, identity, inverses,
    associativity); the first failing element or triple is reported.
    """

    cayley: np.ndarray
    name: str = ""

    def __post_init__(self):
        t = np.array(self.cayley)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
            raise GroupTableError(f"Cayley table must be a nonempty square, got shape {t.shape}")
        if not np.issubdtype(t.dtype, np.integer):
            if not np.all(t == np.round(t)):
                raise GroupTableError("Cayley table entries must be integers")
            t = t.astype(np.int64)
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            bad = np.argwhere((t < 0) | (t >= n))[0]
            raise GroupTableError(f"entry at ({bad[0]}, {bad[1]}) is {t[tuple(bad)]}, outside 0..{n - 1}")
        full = np.arange(n)
        for g in range(n):
            if not np.array_equal(np.sort(t[g]), full):
                raise GroupTableError(f"row {g} is not a permutation (not a Latin square)")
            if not np.array_equal(np.sort(t[:, g]), full):
                raise GroupTableError(f"column {g} is not a permutation (not a Latin square)")
        ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
        if not ids:
            raise GroupTableError("no two-sided identity element")
        e = ids[0]
        lhs = t[t[:, :, None], full[None, None, :]]  # (ab)c
        rhs = t[full[:, None, None], t[None, :, :]]  # a(bc)
        if not np.array_equal(lhs, rhs):
            a, b, c = np.argwhere(lhs != rhs)[0]
            raise GroupTableError(f"associativity fails for triple ({a}, {b}, {c})")
        inv = np.argmax(t == e, axis=1)
        t.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "cayley", t)
        object.__setattr__(self, "_identity", int(e))
        object.__setattr__(self, "_inverse", inv)

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    @property
    def identity(self) -> int:
        return self._identity

    def inverse(self, g: int) -> int:
        return int(self._inverse[g])

    def mul(self, g: int, h: int) -> int:
        return int(self.cayley[g, h])

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with addition mod n."""
    if n < 1:
        raise ValueError(f"cyclic group order must be >= 1, got {n}")
    i = np.arange(n)
    return FiniteGroup((i[:, None] + i[None, :]) % n, name=f"Z_{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G x H with element (a, b) stored at index a * |H| + b."""
    m = h.order
    t = (g.cayley[:, None, :, None] * m + h.cayley[None, :, None, :]).reshape(g.order * m, g.order * m)
    return FiniteGroup(t, name=f"{g.name or g.order} x {h.name or h.order}")


def parse_cayley_table(text: str) -> FiniteGroup:
    """Parse the plain-text format: order n, then n rows of n indices."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise GroupTableError("first line must hold the group order")
    try:
        n = int(lines[0][0])
    except ValueError:
        raise GroupTableError(f"bad group order {lines[0][0]!r}") from None
    rows = lines[1:]
    if len(rows) != n:
        raise GroupTableError(f"expected {n} table rows, found {len(rows)}")
    table = []
    for r, row in enumerate(rows):
        if len(row) != n:
            raise GroupTableError(f"row {r} has {len(row)} entries, expected {n}")
        try:
            table.append([int(x) for x in row])
        except ValueError as exc:
            raise GroupTableError(f"row {r}: {exc}") from None
    return FiniteGroup(np.array(table, dtype=np.int64))


def read_cayley_file(path: str | os.PathLike) -> FiniteGroup:
    with open(path) as fh:
        return parse_cayley_table(fh.read())


def format_cayley_table(g: FiniteGroup) -> str:
    rows = [" ".join(str(int(x)) for x in row) for row in g.cayley]
    return "\n".join([str(g.order), *rows]) + "\n"


# ---------------------------------------------------------------------------
# signed permutations


@dataclass(frozen=True)
class SignedPermutation:
    """The isometry e_i -> signs[i] * e_{perm[i]} of l_p^n."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
        if len(signs) != len(perm) or any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be a +-1 vector of the same length as perm")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def from_matrix(cls, m: np.ndarray, atol: float = 1e-12) -> "SignedPermutation":
        m = np.asarray(m, dtype=float)
        n = m.shape[0]
        perm, signs = [], []
        for i in range(n):
            col = m[:, i]
            j = int(np.argmax(np.abs(col)))
            rest = np.delete(col, j)
            if abs(abs(col[j]) - 1.0) > atol or np.any(np.abs(rest) > atol):
                raise ValueError(f"column {i} is not a signed unit vector")
            perm.append(j)
            signs.append(1 if col[j] > 0 else -1)
        return cls(tuple(perm), tuple(signs))

    @property
    def n(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        m[list(self.perm), list(range(self.n))] = self.signs
        return m

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        out[list(self.perm)] = np.asarray(self.signs) * x
        return out

    def __call__(self, v: DenseVector) -> DenseVector:
        return DenseVector(self.apply(v.entries), v.p)

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self o other."""
        perm = tuple(self.perm[j] for j in other.perm)
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.n))
        return SignedPermutation(perm, signs)

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return self.compose(other)

    def inverse(self) -> "SignedPermutation":
        perm = [0] * self.n
        signs = [1] * self.n
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            perm[j] = i
            signs[j] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.signs)


def dual_isometry(s: SignedPermutation) -> SignedPermutation:
    """The contragredient (S^*)^{-1}, computed from the transposed matrix."""
    return SignedPermutation.from_matrix(np.linalg.inv(s.matrix().T))


def lemma_equivariance_check(s: SignedPermutation, v: DenseVector) -> float:
    """||J(S v) - S_bar J(v)||_q; zero when J commutes with the isometry."""
    lhs = duality_map(s(v))
    rhs = dual_isometry(s)(duality_map(v))
    return norm(DenseVector(lhs.entries - rhs.entries, lhs.p))


# ---------------------------------------------------------------------------
# representations


class RepresentationError(ValueError):
    """Images that do not define a homomorphism."""


@dataclass(frozen=True, eq=False)
class SignedPermRep:
    """A homomorphism from a finite group into signed permutations of degree n."""

    group: FiniteGroup
    images: tuple[SignedPermutation, ...]
    p: Exponent = Exponent(2.0)

    def __post_init__(self):
        imgs = tuple(self.images)
        g = self.group
        if len(imgs) != g.order:
            raise RepresentationError(f"need {g.order} images, got {len(imgs)}")
        degree = imgs[0].n
        if any(s.n != degree for s in imgs):
            raise RepresentationError("images have different degrees")
        if not imgs[g.identity].is_identity():
            raise RepresentationError("identity element is not mapped to the identity")
        for a, b in itertools.product(g.elements(), repeat=2):
            if imgs[g.mul(a, b)] != imgs[a] @ imgs[b]:
                raise RepresentationError(f"homomorphism fails at ({a}, {b})")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "p", Exponent.of(self.p))

    @property
    def degree(self) -> int:
        return self.images[0].n

    def matrices(self) -> np.ndarray:
        return np.stack([s.matrix() for s in self.images])

    def orbits(self) -> list[list[int]]:
        """Orbits of the underlying (unsigned) permutation action, sorted."""
        seen: set[int] = set()
        out = []
        for i in range(self.degree):
            if i in seen:
                continue
            orb = sorted({s.perm[i] for s in self.images})
            seen.update(orb)
            out.append(orb)
        return out


def regular_representation(g: FiniteGroup, p: ExponentLike = 2.0) -> SignedPermRep:
    """Left regular representation on l_p(G): e_h -> e_{gh}."""
    n = g.order
    images = tuple(
        SignedPermutation(tuple(int(x) for x in g.cayley[a]), (1,) * n) for a in g.elements()
    )
    return SignedPermRep(g, images, Exponent.of(p))


def rep_from_images(g: FiniteGroup, images: Sequence[SignedPermutation] | Mapping[int, SignedPermutation],
                    p: ExponentLike = 2.0) -> SignedPermRep:
    if isinstance(images, Mapping):
        images = [images[a] for a in g.elements()]
    return SignedPermRep(g, tuple(images), Exponent.of(p))


@dataclass(frozen=True, eq=False)
class ProjectionPair:
    """P onto the invariant vectors and its complement I - P."""

    p_invariant: np.ndarray
    complement: np.ndarray
    p: Exponent

    def idempotency_defect(self) -> float:
        P = self.p_invariant
        return float(np.max(np.abs(P @ P - P)))

    def equivariance_defect(self, rep: SignedPermRep) -> float:
        P = self.p_invariant
        worst = 0.0
        for m in rep.matrices():
            worst = max(worst, float(np.max(np.abs(m @ P - P))), float(np.max(np.abs(P @ m - P))))
        return worst

    @property
    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.p_invariant))


def invariant_projection(rep: SignedPermRep) -> ProjectionPair:
    """Group average (1/|G|) sum_g pi_g and its complement."""
    P = rep.matrices().sum(axis=0) / rep.group.order
    P.setflags(write=False)
    C = np.eye(rep.degree) - P
    C.setflags(write=False)
    return ProjectionPair(P, C, rep.p)


def fixed_space_basis(rep: SignedPermRep) -> list[np.ndarray]:
    """One fixed vector per orbit that carries one, in orbit order.

    For unsigned actions these are the orbit indicator vectors; an orbit on
    which the signs cancel contributes nothing.
    """
    P = invariant_projection(rep).p_invariant
    basis = []
    for orb in rep.orbits():
        col = P[:, orb[0]]
        if np.max(np.abs(col)) > 1e-12:
            basis.append(col / col[orb[0]])
    return basis


def mean_operator(n: int) -> np.ndarray:
    """The averaging operator M on l_p(Z_n)."""
    return np.full((n, n), 1.0 / n)


def spike_witness(n: int) -> np.ndarray:
    """f = (1, ..., 1, -1): ||f||_inf = 1 and ||f - Mf||_inf = 2 - 2/n."""
    f = np.ones(n)
    f[-1] = -1.0
    return f
