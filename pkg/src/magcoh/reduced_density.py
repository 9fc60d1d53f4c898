"""Reduced density operators of chain subsystems, in magnon-number blocks.

Tracing out the complement of an n-site subsystem never mixes site
lists with different spin-up counts q, so the reduced operator is kept
block by block: one Hermitian matrix per admissible q, with basis
labels in the canonical combination order.  A dense bitmask partial
trace over the full 2^N embedding gives an independent check of the
combinatorial route, and a closed form covers single-mode states,
whose block weights follow the hypergeometric law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .combinat import (
    SiteList,
    admissible_q,
    enumerate_combinations,
    hypergeometric_pmf,
    rank_combination,
    validate_sitelist,
)
from .errors import DomainError, InfeasibilityError, InternalConsistencyError
from .magnon_state import (
    AMPLITUDE_BUDGET,
    FULL_VECTOR_BUDGET,
    AmplitudeTable,
    FullStateVector,
)

__all__ = [
    "SubsystemSpec",
    "BlockDensityMatrix",
    "reduce",
    "reduce_single_mode",
    "pure_density",
    "oracle_partial_trace",
    "eigenvalues_hermitian",
]


@dataclass(frozen=True)
class SubsystemSpec:
    """A subset of chain sites, not necessarily contiguous."""

    parent_N: int
    sites: tuple[int, ...]

    def __post_init__(self):
        if self.parent_N < 1:
            raise DomainError(f"parent chain length must be positive, got {self.parent_N}")
        clean = validate_sitelist(self.sites, self.parent_N)
        if not clean:
            raise DomainError("subsystem needs at least one site")
        object.__setattr__(self, "sites", clean)

    @classmethod
    def prefix(cls, parent_N: int, n: int) -> "SubsystemSpec":
        """The contiguous block {1, ..., n}."""
        return cls(parent_N, tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def complement(self) -> tuple[int, ...]:
        inside = set(self.sites)
        return tuple(s for s in range(1, self.parent_N + 1) if s not in inside)


@dataclass
class BlockDensityMatrix:
    """Hermitian subsystem density operator keyed by spin-up count q.

    ``blocks[q]`` is the C(n, q) x C(n, q) matrix over the canonical
    q-flip site lists of the subsystem, stored in ``labels[q]``.  For
    operators obtained from the dense oracle, ``off_block_residual``
    records the largest matrix element found between different flip
    sectors (structurally zero for magnon states).
    """

    n: int
    blocks: dict[int, np.ndarray]
    labels: dict[int, list[SiteList]] = field(repr=False)
    off_block_residual: float | None = None

    @property
    def q_values(self) -> tuple[int, ...]:
        return tuple(sorted(self.blocks))

    @property
    def dimension(self) -> int:
        return sum(b.shape[0] for b in self.blocks.values())

    @property
    def block_weights(self) -> dict[int, float]:
        return {q: float(np.trace(self.blocks[q]).real) for q in self.q_values}

    def total_trace(self) -> float:
        return sum(self.block_weights.values())

    def diagonal(self) -> np.ndarray:
        """Populations in the canonical basis, blocks in ascending q."""
        return np.concatenate([np.diag(self.blocks[q]).real for q in self.q_values])

    def spectrum(self) -> np.ndarray:
        """All eigenvalues across blocks, sorted descending."""
        parts = [np.linalg.eigvalsh(self.blocks[q]) for q in self.q_values]
        return np.sort(np.concatenate(parts))[::-1]

    def purity(self) -> float:
        return sum(float(np.vdot(b, b).real) for b in self.blocks.values())

    def validate(
        self,
        trace_tol: float = 1e-10,
        hermiticity_tol: float = 1e-12,
        eigenvalue_floor: float = -1e-10,
    ) -> "BlockDensityMatrix":
        """Check Hermiticity, positivity and unit trace; returns self."""
        for q in self.q_values:
            b = self.blocks[q]
            if b.ndim != 2 or b.shape[0] != b.shape[1]:
                raise InternalConsistencyError(f"block q={q} is not square: shape {b.shape}")
            if len(self.labels.get(q, ())) != b.shape[0]:
                raise InternalConsistencyError(f"block q={q} has {b.shape[0]} rows but {len(self.labels.get(q, ()))} labels")
            herm = float(np.abs(b - b.conj().T).max()) if b.size else 0.0
            if herm > hermiticity_tol:
                raise InternalConsistencyError(f"block q={q} departs from Hermiticity by {herm:.3e}")
            if b.size:
                lowest = float(np.linalg.eigvalsh(b).min())
                if lowest < eigenvalue_floor:
                    raise InternalConsistencyError(f"block q={q} has eigenvalue {lowest:.3e} below the floor")
        off = abs(self.total_trace() - 1.0)
        if off > trace_tol:
            raise InternalConsistencyError(f"total trace departs from 1 by {off:.3e}")
        return self


def reduce(state: AmplitudeTable, sub: SubsystemSpec, budget: int | None = None) -> BlockDensityMatrix:
    """Reduced density operator of a subsystem, by direct coefficient sums.

    Groups the state amplitudes as a (complement rank) x (subsystem
    rank) matrix per flip sector q; each block is then the Gram matrix
    of the columns, which keeps the cost at one pass over the table
    plus one small matrix product per sector.
    """
    budget = AMPLITUDE_BUDGET if budget is None else budget
    N, m = state.N, state.m
    if sub.parent_N != N:
        raise DomainError(f"subsystem belongs to an N={sub.parent_N} chain, state has N={N}")
    n = sub.n
    nb = N - n
    sector = admissible_q(N, n, m)
    if math.comb(N, m) > budget:
        raise InfeasibilityError(f"reduction scans {math.comb(N, m)} amplitudes, budget is {budget}")
    for q in sector:
        da, db = math.comb(n, q), math.comb(nb, m - q)
        if max(da * da, da * db) > budget:
            raise InfeasibilityError(f"sector q={q} needs a {db} x {da} buffer, budget is {budget}")

    pos_a = {s: i + 1 for i, s in enumerate(sub.sites)}
    pos_b = {s: i + 1 for i, s in enumerate(sub.complement)}
    buffers = {q: np.zeros((math.comb(nb, m - q), math.comb(n, q)), dtype=np.complex128) for q in sector}
    for rank_full, l in enumerate(enumerate_combinations(N, m)):
        inside = tuple(pos_a[s] for s in l if s in pos_a)
        outside = tuple(pos_b[s] for s in l if s not in pos_a)
        buffers[len(inside)][rank_combination(outside, nb), rank_combination(inside, n)] = state.amplitudes[rank_full]

    blocks = {q: v.T @ v.conj() for q, v in buffers.items()}
    labels = {q: enumerate_combinations(n, q) for q in sector}
    return BlockDensityMatrix(n, blocks, labels).validate()


def reduce_single_mode(N: int, n: int, m: int, k: float, budget: int | None = None) -> BlockDensityMatrix:
    """Closed-form reduction when all m flips share one wavenumber k.

    Each admissible sector is the pure equal-weight phase state on q
    flips, carrying the hypergeometric weight; no amplitude table is
    ever built, so this route scales to chains far beyond the general
    one.
    """
    budget = AMPLITUDE_BUDGET if budget is None else budget
    sector = admissible_q(N, n, m)
    blocks: dict[int, np.ndarray] = {}
    labels: dict[int, list[SiteList]] = {}
    for q in sector:
        dim = math.comb(n, q)
        if dim * dim > budget:
            raise InfeasibilityError(f"sector q={q} needs a {dim} x {dim} block, budget is {budget}")
        members = enumerate_combinations(n, q)
        sums = np.array([sum(l) for l in members], dtype=np.int64)
        phases = np.exp(1j * k * sums)
        blocks[q] = (hypergeometric_pmf(N, n, m, q) / dim) * np.outer(phases, phases.conj())
        labels[q] = members
    return BlockDensityMatrix(n, blocks, labels).validate()


def pure_density(state: AmplitudeTable, budget: int | None = None) -> BlockDensityMatrix:
    """Rank-one density operator of the whole chain viewed as its own block."""
    budget = AMPLITUDE_BUDGET if budget is None else budget
    dim = len(state.amplitudes)
    if dim * dim > budget:
        raise InfeasibilityError(f"projector needs a {dim} x {dim} block, budget is {budget}")
    block = np.outer(state.amplitudes, state.amplitudes.conj())
    labels = {state.m: enumerate_combinations(state.N, state.m)}
    return BlockDensityMatrix(state.N, {state.m: block}, labels).validate()


def oracle_partial_trace(v: FullStateVector, sub: SubsystemSpec, budget: int | None = None) -> BlockDensityMatrix:
    """Brute-force partial trace over the dense 2^N embedding.

    Independent of the combinatorial route: reshapes the vector by
    subsystem and complement bitmasks, forms the dense subsystem
    operator, then projects it onto flip sectors.  The largest element
    between different sectors is reported as ``off_block_residual``.
    """
    N = v.N
    if sub.parent_N != N:
        raise DomainError(f"subsystem belongs to an N={sub.parent_N} chain, vector has N={N}")
    vec_budget = FULL_VECTOR_BUDGET if budget is None else budget
    dense_budget = AMPLITUDE_BUDGET if budget is None else budget
    if (1 << N) > vec_budget:
        raise InfeasibilityError(f"oracle trace scans 2^{N} entries, budget is {vec_budget}")
    n = sub.n
    if (1 << (2 * n)) > dense_budget:
        raise InfeasibilityError(f"oracle trace builds a 2^{n} x 2^{n} operator, budget is {dense_budget}")

    idx = np.arange(1 << N)
    a = np.zeros(1 << N, dtype=np.int64)
    for i, s in enumerate(sub.sites):
        a |= ((idx >> (s - 1)) & 1) << i
    b = np.zeros(1 << N, dtype=np.int64)
    for i, s in enumerate(sub.complement):
        b |= ((idx >> (s - 1)) & 1) << i
    grouped = np.zeros((1 << (N - n), 1 << n), dtype=np.complex128)
    grouped[b, a] = v.entries
    dense = grouped.T @ grouped.conj()

    pops = np.array([i.bit_count() for i in range(1 << n)], dtype=np.int64)
    residual = 0.0
    mixed = pops[:, None] != pops[None, :]
    if mixed.any():
        residual = float(np.abs(dense[mixed]).max())

    blocks: dict[int, np.ndarray] = {}
    labels: dict[int, list[SiteList]] = {}
    for q in range(n + 1):
        members = enumerate_combinations(n, q)
        masks = np.array([sum(1 << (p - 1) for p in l) for l in members], dtype=np.int64)
        block = dense[np.ix_(masks, masks)]
        if np.abs(block).max() > 0.0:
            blocks[q] = block
            labels[q] = members
    return BlockDensityMatrix(n, blocks, labels, off_block_residual=residual).validate()


def eigenvalues_hermitian(matrix, hermiticity_tol: float = 1e-10) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if a.size and float(np.abs(a - a.conj().T).max()) > hermiticity_tol:
        raise DomainError("matrix departs from Hermiticity beyond tolerance")
    return np.linalg.eigvalsh(a)[::-1]
