"""The finite-dimensional complex Banach lattice C^n.

Vectors are plain 1-D numpy arrays (complex or real). The order is
coordinatewise on the real part, the modulus is the entrywise absolute value
and the norm is one of the p-norms with p in {1, 2, inf}; all three are
lattice norms. Closed ideals of C^n are exactly the coordinate subspaces, so
ideals are carried around as index sets (0-based).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

SUPPORTED_NORMS = (1, 2, np.inf)

#: s = 2**-k, k = 1..30, for the principal-ideal closure curve
CLOSURE_EXPONENTS = tuple(range(1, 31))
CLOSURE_RATIO_TOL = 1e-9

#: complete ideal enumeration is attempted up to this many strong components
MAX_ENUMERATED_COMPONENTS = 20


class NegativeEntryError(ValueError):
    """A matrix offered as a positive operator has an entry outside [0, inf)."""

    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"entry ({row}, {col}) = {value!r} is not a nonnegative real")


class NotInvariantError(ValueError):
    """A coordinate ideal is not invariant under the operator."""

    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(
            f"ideal not invariant: entry ({row}, {col}) = {value!r} maps the ideal outside itself"
        )


def check_norm(p):
    if p in (1, 2):
        return int(p)
    if p == np.inf or p == "inf":
        return np.inf
    raise ValueError(f"unsupported norm {p!r}; choose 1, 2 or inf")


def vector_norm(v, p=np.inf):
    return float(np.linalg.norm(np.asarray(v).ravel(), ord=check_norm(p)))


def _first_bad_entry(a):
    bad = (a.imag != 0) | ~(a.real >= 0)
    if not bad.any():
        return None
    i, j = np.argwhere(bad)[0]
    v = complex(a[i, j])
    return int(i), int(j), v.real if v.imag == 0 else v


@dataclass(frozen=True, eq=False)
class PositiveOperator:
    """A dense square matrix acting on C^n, with its declared lattice norm.

    ``nonneg_certified`` is computed, never passed in: it is true exactly when
    every stored entry has zero imaginary part and nonnegative real part.
    No tolerance is applied; ``-1e-300`` is rejected like ``-1``.
    """

    matrix: np.ndarray
    norm_choice: float = np.inf
    nonneg_certified: bool = field(init=False)

    def __post_init__(self):
        a = np.array(self.matrix, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "norm_choice", check_norm(self.norm_choice))
        object.__setattr__(self, "nonneg_certified", _first_bad_entry(a) is None)

    @classmethod
    def from_array(cls, a, norm=np.inf, require_nonneg=True):
        """Build an operator, raising :class:`NegativeEntryError` on a bad entry."""
        op = cls(a, norm)
        if require_nonneg and not op.nonneg_certified:
            raise NegativeEntryError(*_first_bad_entry(op.matrix))
        return op

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def real(self):
        """Real part as float64; exact for certified operators."""
        return np.ascontiguousarray(self.matrix.real)

    def apply(self, v):
        return self.matrix @ np.asarray(v)

    def norm(self):
        from .spectral import operator_norm
        return operator_norm(self.matrix, self.norm_choice)

    def with_matrix(self, a):
        return PositiveOperator(a, self.norm_choice)

    def __eq__(self, other):
        if not isinstance(other, PositiveOperator):
            return NotImplemented
        return self.norm_choice == other.norm_choice and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.matrix.tobytes(), self.norm_choice))

    def __repr__(self):
        return f"PositiveOperator(n={self.n}, norm={self.norm_choice}, certified={self.nonneg_certified})"


@dataclass(frozen=True)
class CoordinateIdeal:
    """The closed ideal ``{v : v_i = 0 for i not in indices}`` of C^n."""

    indices: frozenset
    ambient_dim: int

    def __post_init__(self):
        idx = frozenset(int(i) for i in self.indices)
        if any(i < 0 or i >= self.ambient_dim for i in idx):
            raise ValueError(f"indices {sorted(idx)} outside range({self.ambient_dim})")
        object.__setattr__(self, "indices", idx)

    @property
    def sorted(self):
        return sorted(self.indices)

    @property
    def complement(self):
        return sorted(set(range(self.ambient_dim)) - self.indices)

    def contains(self, v, tol=0.0):
        """Whether ``v`` vanishes (up to ``tol``) off the ideal's coordinates."""
        v = np.asarray(v)
        comp = self.complement
        return bool(np.all(np.abs(v[comp]) <= tol)) if comp else True

    def __len__(self):
        return len(self.indices)

    def __repr__(self):
        return f"CoordinateIdeal({self.sorted}, n={self.ambient_dim})"


@dataclass(frozen=True)
class InducedPair:
    """Restriction to an invariant ideal and the operator induced on the quotient."""

    ideal: CoordinateIdeal
    restriction: PositiveOperator
    quotient: PositiveOperator


@dataclass(frozen=True)
class IdealEnumeration:
    """Result of :func:`invariant_ideals`; ``complete`` is false when truncated."""

    ideals: list
    complete: bool

    def __iter__(self):
        return iter(self.ideals)

    def __len__(self):
        return len(self.ideals)

    def __getitem__(self, i):
        return self.ideals[i]


def modulus(v):
    """Entrywise absolute value."""
    return np.abs(np.asarray(v))


def lattice_parts(v):
    """Split a real vector into ``(v^+, v^-)`` with ``v = v^+ - v^-``."""
    v = np.asarray(v)
    if np.iscomplexobj(v):
        if np.any(v.imag != 0):
            raise ValueError("lattice_parts needs a real vector")
        v = v.real
    v = v.astype(np.float64)
    return np.maximum(v, 0.0), np.maximum(-v, 0.0)


def adjacency(a):
    """Adjacency pattern ``i -> j iff a[i, j] != 0`` (exact comparison)."""
    return (np.asarray(a) != 0).astype(np.uint8)


def is_invariant(T, indices):
    """Return ``None`` if the coordinate set is T-invariant, else a violating entry."""
    a = T.matrix if isinstance(T, PositiveOperator) else np.asarray(T)
    n = a.shape[0]
    inside = sorted(indices)
    outside = sorted(set(range(n)) - set(inside))
    if not inside or not outside:
        return None
    block = a[np.ix_(outside, inside)]
    nz = np.argwhere(block != 0)
    if len(nz) == 0:
        return None
    i, j = nz[0]
    return outside[i], inside[j], a[outside[i], inside[j]]


def invariant_ideals(T):
    """All T-invariant coordinate ideals.

    A coordinate set ``S`` is invariant iff ``T[i, j] == 0`` whenever
    ``j in S`` and ``i not in S``, i.e. ``S`` is closed under predecessors in
    the digraph ``i -> j iff T[i, j] > 0``. Invariant sets are therefore
    unions of strong components that are closed in the condensation. When the
    condensation has more than ``MAX_ENUMERATED_COMPONENTS`` nodes only the
    zero ideal, the whole space and the closure of each single component are
    returned and ``complete`` is False.
    """
    if not T.nonneg_certified:
        raise ValueError("invariant_ideals needs a certified nonnegative operator")
    n = T.n
    adj = adjacency(T.matrix)
    labels, ncomp = kernels.strong_components(adj)
    members = [np.flatnonzero(labels == c) for c in range(ncomp)]
    # need[c]: components with an edge into c (must be present when c is)
    need = np.zeros(ncomp, dtype=np.uint64)
    src, dst = np.nonzero(adj)
    for i, j in zip(labels[src], labels[dst]):
        if i != j:
            need[j] |= np.uint64(1) << np.uint64(i)
    # predecessors finish later in Tarjan order, i.e. carry larger labels
    order = np.arange(ncomp - 1, -1, -1, dtype=np.int64)

    def to_ideal(mask):
        idx = [int(i) for c in range(ncomp) if (mask >> c) & 1 for i in members[c]]
        return CoordinateIdeal(frozenset(idx), n)

    if ncomp <= MAX_ENUMERATED_COMPONENTS:
        masks = kernels.closed_subsets(need, order)
        ideals = [to_ideal(int(m)) for m in masks]
        ideals.sort(key=lambda I: (len(I), I.sorted))
        return IdealEnumeration(ideals, True)

    closures = {0, (1 << ncomp) - 1}
    for c in range(ncomp):
        mask, frontier = 1 << c, [c]
        while frontier:
            d = frontier.pop()
            req = int(need[d])
            for e in range(ncomp):
                if (req >> e) & 1 and not (mask >> e) & 1:
                    mask |= 1 << e
                    frontier.append(e)
        closures.add(mask)
    ideals = sorted((to_ideal(m) for m in closures), key=lambda I: (len(I), I.sorted))
    return IdealEnumeration(ideals, False)


def induce(T, F):
    """Restriction of ``T`` to the invariant ideal ``F`` and the quotient operator.

    The quotient ``E/F`` is identified with the complementary coordinates, so
    both operators are principal submatrices. An empty side gives a 0x0
    operator.
    """
    if F.ambient_dim != T.n:
        raise ValueError("ideal and operator dimensions differ")
    bad = is_invariant(T, F.indices)
    if bad is not None:
        raise NotInvariantError(*bad)
    inside, outside = F.sorted, F.complement
    a = T.matrix
    return InducedPair(
        F,
        PositiveOperator(a[np.ix_(inside, inside)], T.norm_choice),
        PositiveOperator(a[np.ix_(outside, outside)], T.norm_choice),
    )


@dataclass(frozen=True)
class ClosureResult:
    """Answer of :func:`in_closure_principal_ideal`.

    Truthiness is the support oracle; ``numeric`` is the verdict read off the
    curve ``ratios[k] = ||(y - s_k x)^-|| / s_k``.
    """

    oracle: bool
    numeric: bool
    s_values: np.ndarray
    ratios: np.ndarray
    threshold: float

    @property
    def agrees(self):
        return self.oracle == self.numeric

    def __bool__(self):
        return self.oracle


def in_closure_principal_ideal(x, y, norm=np.inf):
    """Is ``x`` in the closure of the principal ideal generated by ``y``?

    Reports both the support oracle ``supp(x) <= supp(y)`` and the numeric
    criterion ``||(y - s x)^-|| = o(s)`` evaluated on ``s = 2**-k``,
    ``k = 1..30``. The numeric verdict is true when the ratio at the smallest
    ``s`` is below ``1e-9 * ||x||``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("in_closure_principal_ideal needs nonnegative vectors")
    oracle = bool(np.all((x == 0) | (y > 0)))
    s = np.ldexp(1.0, -np.array(CLOSURE_EXPONENTS))
    ratios = np.array([vector_norm(lattice_parts(y - sk * x)[1], norm) / sk for sk in s])
    threshold = CLOSURE_RATIO_TOL * vector_norm(x, norm)
    numeric = bool(ratios[-1] <= threshold)
    return ClosureResult(oracle, numeric, s, ratios, threshold)


@dataclass(frozen=True)
class QuasiInteriorResult:
    value: bool
    closure_checks: tuple

    @property
    def agrees(self):
        return all(c.numeric for c in self.closure_checks) == self.value

    def __bool__(self):
        return self.value


def is_quasi_interior(y, norm=np.inf):
    """Strict positivity of every coordinate, cross-checked by unit-vector closure tests."""
    y = np.asarray(y, dtype=np.float64)
    if np.any(y < 0):
        raise ValueError("is_quasi_interior needs a nonnegative vector")
    value = bool(np.all(y > 0))
    eye = np.eye(len(y))
    checks = tuple(in_closure_principal_ideal(eye[i], y, norm) for i in range(len(y)))
    return QuasiInteriorResult(value, checks)
