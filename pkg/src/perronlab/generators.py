"""Seeded families of nonnegative matrices with known structure.

All randomness goes through ``numpy.random.default_rng(seed)`` (PCG64), so a
given ``(family, params, seed)`` always yields the same matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import PositiveOperator
from .structure import irreducibility

MAX_RANDOM_DIM = 64
MAX_RESAMPLES = 1000
#: stochastic rows are integer multiples of 2**-STOCHASTIC_BITS
STOCHASTIC_BITS = 30


@dataclass(frozen=True)
class GeneratorSpec:
    """How a matrix was produced and what it is expected to satisfy.

    ``expected`` is a claim to be re-verified, never trusted.
    """

    family: str
    n: int
    params: dict
    expected: dict = field(default_factory=dict)

    def to_dict(self):
        return {"family": self.family, "n": self.n, "params": dict(self.params),
                "expected": _jsonable(self.expected)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _out(A, norm, spec, with_spec):
    op = PositiveOperator.from_array(A, norm)
    return (op, spec) if with_spec else op


def roots_of_unity(p):
    return [complex(np.exp(2j * np.pi * k / p)) for k in range(p)]


def _block_cyclic(blocks):
    p = len(blocks)
    sizes = [b.shape[0] for b in blocks]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    A = np.zeros((offsets[-1], offsets[-1]))
    for i, B in enumerate(blocks):
        j = (i + 1) % p
        if B.shape != (sizes[i], sizes[j]):
            raise ValueError(f"block {i} has shape {B.shape}, expected {(sizes[i], sizes[j])}")
        A[offsets[i]:offsets[i + 1], offsets[j]:offsets[j + 1]] = B
    return A


def cyclic_family(p, block=None, seed=None, norm=np.inf, with_spec=False):
    """Block-cyclic matrix of period ``p`` with spectral radius 1.

    Returns the operator, or ``(operator, GeneratorSpec)`` with
    ``with_spec=True``.

    Parameters
    ----------
    p : int
        Period, ``p >= 1``.
    block : array_like or sequence of array_like, optional
        A single square nonnegative block (used in every position) or ``p``
        blocks ``B_i`` mapping block ``i+1`` into block ``i``. Defaults to
        ``[[1]]`` (the ``p``-cycle permutation), or to random strictly
        positive ``2 x 2`` blocks when ``seed`` is given.
    """
    p = int(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    if block is None:
        if seed is None:
            blocks = [np.ones((1, 1))] * p
        else:
            rng = np.random.default_rng(seed)
            blocks = [rng.uniform(0.1, 1.0, size=(2, 2)) for _ in range(p)]
    else:
        arr = np.asarray(block, dtype=float)
        blocks = [arr] * p if arr.ndim == 2 else [np.asarray(b, dtype=float) for b in block]
    if len(blocks) != p:
        raise ValueError(f"expected {p} blocks, got {len(blocks)}")
    if any(np.any(b < 0) for b in blocks):
        raise ValueError("blocks must be nonnegative")
    A = _block_cyclic(blocks)
    # r(A)^p = r(B_0 B_1 ... B_{p-1})
    prod = np.eye(blocks[0].shape[0])
    for B in blocks:
        prod = prod @ B
    rho = max(abs(np.linalg.eigvals(prod))) ** (1.0 / p)
    if rho <= 0:
        raise ValueError("block product is nilpotent; cannot normalise")
    if not np.isclose(rho, 1.0, rtol=0, atol=1e-15):
        A = A / rho
    spec = GeneratorSpec("cycle", A.shape[0], {"p": p, "seed": seed},
                         {"period": p, "peripheral": roots_of_unity(p), "spectral_radius": 1.0})
    return _out(A, norm, spec, with_spec)


def jordan_block(m):
    return np.eye(m) + np.eye(m, k=1)


def direct_sum(*blocks):
    blocks = [np.atleast_2d(np.asarray(b, dtype=float)) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    A = np.zeros((n, n))
    i = 0
    for b in blocks:
        k = b.shape[0]
        A[i:i + k, i:i + k] = b
        i += k
    return A


def jordan_growth_family(m, decorations=(), norm=np.inf, with_spec=False):
    """``J_m(1)`` (index ``m`` at 1), optionally direct-summed with ``p``-cycles.

    ``decorations`` lists cycle lengths; each contributes simple peripheral
    values at the ``p``-th roots of unity.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    parts = [jordan_block(m)] + [np.roll(np.eye(p), 1, axis=1) for p in decorations]
    A = direct_sum(*parts)
    peripheral = sorted({complex(np.round(w, 15)) for p in decorations for w in roots_of_unity(p)} | {1 + 0j},
                        key=lambda w: np.angle(w))
    spec = GeneratorSpec("jordan", A.shape[0], {"m": m, "decorations": list(decorations)},
                         {"index_at_1": m, "resolvent_exponent": m, "peripheral": peripheral,
                          "spectral_radius": 1.0})
    return _out(A, norm, spec, with_spec)


RANDOM_KINDS = ("nonneg_dense", "irreducible_stochastic", "reducible_block")


def random_families(kind, n, seed, density=1.0, ideal_size=None, norm=np.inf, with_spec=False):
    """Random nonnegative matrices of a given kind.

    ``nonneg_dense``: entries uniform in ``[0, 1)``, each kept with
    probability ``density``. ``irreducible_stochastic``: rows normalised to
    sum exactly 1 in floating point (see :func:`exact_row_stochastic`),
    resampled until strongly connected. ``reducible_block``: the
    first ``ideal_size`` coordinates (default ``n // 2``) span a planted
    invariant ideal.
    """
    n = int(n)
    if not 1 <= n <= MAX_RANDOM_DIM:
        raise ValueError(f"n must be in 1..{MAX_RANDOM_DIM}")
    if kind not in RANDOM_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {RANDOM_KINDS}")
    rng = np.random.default_rng(seed)
    params = {"kind": kind, "seed": seed, "density": density}
    if kind == "nonneg_dense":
        A = _sparse_uniform(rng, n, density)
        spec = GeneratorSpec(kind, n, params, {})
    elif kind == "irreducible_stochastic":
        for attempt in range(MAX_RESAMPLES):
            A = _sparse_uniform(rng, n, density)
            sums = A.sum(axis=1)
            if np.any(sums == 0):
                continue
            A = exact_row_stochastic(A / sums[:, None])
            if irreducibility(PositiveOperator(A)).is_irreducible:
                break
        else:
            raise RuntimeError(f"no strongly connected sample in {MAX_RESAMPLES} attempts")
        params["attempts"] = attempt + 1
        spec = GeneratorSpec(kind, n, params, {"row_sums": 1.0, "irreducible": True, "spectral_radius": 1.0})
    else:
        k = n // 2 if ideal_size is None else int(ideal_size)
        if not 0 < k < n:
            raise ValueError("ideal_size must be strictly between 0 and n")
        A = _sparse_uniform(rng, n, density)
        # zero block below the ideal's columns: rows outside, columns inside
        A[k:, :k] = 0.0
        params["ideal_size"] = k
        spec = GeneratorSpec(kind, n, params, {"planted_ideal": list(range(k))})
    return _out(A, norm, spec, with_spec)


def exact_row_stochastic(A, bits=STOCHASTIC_BITS):
    """Round a row-stochastic matrix to multiples of ``2**-bits`` with exact unit row sums.

    Each row is floored to the grid and the deficit is added to its largest
    entry. Every partial sum is then a representable dyadic number, so
    ``A @ 1 == 1`` holds exactly and ``r(A) = 1`` for the stored matrix, not
    just up to rounding.
    """
    scale = float(2 ** bits)
    counts = np.floor(np.asarray(A, dtype=float) * scale)
    rows = np.arange(counts.shape[0])
    counts[rows, np.argmax(counts, axis=1)] += scale - counts.sum(axis=1)
    return counts / scale


def _sparse_uniform(rng, n, density):
    A = rng.uniform(0.0, 1.0, size=(n, n))
    if density < 1.0:
        A = A * (rng.uniform(0.0, 1.0, size=(n, n)) < density)
    return A


def rescale_to_unit_radius(T):
    """``T / r(T)``; raises ``ValueError`` when ``r(T) = 0``."""
    from .spectral import spectrum

    r = spectrum(T).spectral_radius
    if r <= 0:
        raise ValueError("spectral radius is zero; cannot rescale")
    return T.with_matrix(T.matrix / r), r
