"""Combinatorial structure of nonnegative matrices: strong components,
period, Frobenius normal form and the diagonal-power condition."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .lattice import adjacency
from .spectral import spectrum

ZHANG_TOL = 1e-6


@dataclass(frozen=True)
class IrreducibilityReport:
    """Strong components of ``i -> j iff T[i, j] > 0``.

    ``sccs`` is listed in ``condensation_order`` (a topological order of
    the condensation: every edge between different components goes from an
    earlier component to a later one). ``periods[c]`` is the period of
    component ``c`` (0 for a single vertex without loop); ``period`` is the
    period of the matrix when it is irreducible and ``None`` otherwise.
    """

    sccs: tuple
    is_irreducible: bool
    period: int | None
    periods: tuple
    condensation_order: tuple


def _components(T):
    if not T.nonneg_certified:
        raise ValueError("combinatorial structure needs a certified nonnegative operator")
    adj = adjacency(T.matrix)
    labels, ncomp = kernels.strong_components(adj)
    return adj, labels, ncomp


def irreducibility(T):
    adj, labels, ncomp = _components(T)
    n = T.n
    # Tarjan numbers sinks first, so descending labels is a topological order
    order = tuple(range(ncomp))
    sccs = tuple(tuple(int(i) for i in np.flatnonzero(labels == c)) for c in range(ncomp - 1, -1, -1))
    periods = tuple(
        int(kernels.component_period(adj, labels, c)) for c in range(ncomp - 1, -1, -1)
    )
    if n == 1:
        irreducible = bool(adj[0, 0])
    else:
        irreducible = ncomp == 1 and n > 0
    period = periods[0] if irreducible else None
    return IrreducibilityReport(sccs, irreducible, period, periods, order)


@dataclass(frozen=True)
class FrobeniusForm:
    """``P^T T P`` is block upper triangular with irreducible (or 1x1 zero) diagonal blocks.

    ``permutation[k]`` is the original index placed at position ``k``;
    ``blocks`` are position ranges ``(start, stop)`` in the permuted matrix.
    """

    permutation: tuple
    blocks: tuple

    def permuted(self, T):
        p = list(self.permutation)
        return T.matrix[np.ix_(p, p)]

    def matrix(self):
        n = len(self.permutation)
        P = np.zeros((n, n))
        P[list(self.permutation), np.arange(n)] = 1.0
        return P


def frobenius_normal_form(T):
    rep = irreducibility(T)
    perm, blocks, start = [], [], 0
    for comp in rep.sccs:
        perm.extend(comp)
        blocks.append((start, start + len(comp)))
        start += len(comp)
    return FrobeniusForm(tuple(perm), tuple(blocks))


@dataclass(frozen=True)
class ZhangVerdict:
    """One-sided finite-horizon check of ``T^n >= a_n I`` with ``limsup a_n^{1/n} = 1``.

    ``plausible`` can only ever confirm; a finite horizon cannot refute.
    """

    a: tuple
    estimate: float
    horizon: int
    plausible: bool
    one_sided: bool = True


def zhang_condition(T, N, radius_tol=None):
    """``a_n = min_i (T^n)_{ii}`` for ``n = 1..N`` and ``max_n a_n^{1/n}``.

    Requires ``r(T) = 1`` within the cluster tolerance; raises ``ValueError``
    otherwise (a nilpotent matrix cannot be rescaled).
    """
    rep = spectrum(T)
    tol = rep.cluster_tol if radius_tol is None else radius_tol
    if abs(rep.spectral_radius - 1.0) > tol:
        raise ValueError(f"zhang_condition needs r(T) = 1, got {rep.spectral_radius!r}")
    a = T.real
    P = np.eye(T.n)
    seq = []
    for _ in range(int(N)):
        P = P @ a
        seq.append(float(np.min(np.diag(P))))
    estimate = max((x ** (1.0 / k) for k, x in enumerate(seq, start=1) if x > 0), default=0.0)
    return ZhangVerdict(tuple(seq), float(estimate), int(N), bool(estimate >= 1.0 - ZHANG_TOL))


def period_of(T):
    """Convenience: the period of an irreducible operator (``None`` if reducible)."""
    return irreducibility(T).period


def gcd_of_cycle_lengths(T, max_len=None):
    """Brute-force oracle: gcd of lengths ``k <= max_len`` with ``trace(A^k) > 0``.

    Uses the 0/1 pattern. Intended for tests on small matrices only.
    """
    adj = adjacency(T.matrix).astype(np.int64)
    n = adj.shape[0]
    max_len = 2 * n if max_len is None else max_len
    g, P = 0, np.eye(n, dtype=np.int64)
    for k in range(1, max_len + 1):
        P = np.minimum(P @ adj, 1)
        if np.trace(P) > 0:
            g = math.gcd(g, k)
    return g
