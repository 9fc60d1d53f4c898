import math

import numpy as np
import pytest

from magcoh import (
    BlockDensityMatrix,
    DomainError,
    InfeasibilityError,
    InternalConsistencyError,
    MagnonStateSpec,
    MomentumVector,
    NullStateError,
    SubsystemSpec,
    build_state,
    eigenvalues_hermitian,
    embed_full,
    enumerate_combinations,
    hypergeometric_pmf,
    admissible_q,
    oracle_partial_trace,
    pure_density,
    reduce,
    reduce_single_mode,
)


def random_state(rng, N, m):
    while True:
        idx = tuple(int(x) for x in rng.integers(0, N, size=m))
        try:
            return build_state(MagnonStateSpec(N, m, MomentumVector(N, idx)))
        except NullStateError:
            continue


def random_sites(rng, N, n):
    return tuple(sorted(int(s) + 1 for s in rng.choice(N, size=n, replace=False)))


def block_distance(left, right):
    """Largest entry difference across the union of flip sectors."""
    worst = 0.0
    for q in set(left.blocks) | set(right.blocks):
        a = left.blocks.get(q)
        b = right.blocks.get(q)
        if a is None:
            worst = max(worst, float(np.abs(b).max()))
        elif b is None:
            worst = max(worst, float(np.abs(a).max()))
        else:
            worst = max(worst, float(np.abs(a - b).max()))
    return worst


class TestSubsystemSpec:
    def test_prefix(self):
        sub = SubsystemSpec.prefix(6, 3)
        assert sub.sites == (1, 2, 3)
        assert sub.n == 3
        assert sub.complement == (4, 5, 6)

    def test_scattered_complement(self):
        sub = SubsystemSpec(7, (2, 5, 7))
        assert sub.complement == (1, 3, 4, 6)

    def test_validation(self):
        with pytest.raises(DomainError):
            SubsystemSpec(5, ())
        with pytest.raises(DomainError):
            SubsystemSpec(5, (0, 1))
        with pytest.raises(DomainError):
            SubsystemSpec(5, (2, 2))
        with pytest.raises(DomainError):
            SubsystemSpec(5, (4, 6))


class TestReduce:
    def test_single_site_is_diagonal(self):
        st = random_state(np.random.default_rng(0), 8, 2)
        reduced = reduce(st, SubsystemSpec.prefix(8, 1))
        assert reduced.q_values == (0, 1)
        assert all(reduced.blocks[q].shape == (1, 1) for q in (0, 1))
        assert abs(reduced.total_trace() - 1.0) < 1e-12

    def test_whole_chain_is_the_pure_projector(self):
        st = random_state(np.random.default_rng(1), 8, 2)
        reduced = reduce(st, SubsystemSpec.prefix(8, 8))
        assert reduced.q_values == (2,)
        assert abs(reduced.purity() - 1.0) < 1e-12
        spectrum = reduced.spectrum()
        assert abs(spectrum[0] - 1.0) < 1e-12
        assert np.abs(spectrum[1:]).max() < 1e-12
        ref = pure_density(st)
        assert block_distance(reduced, ref) < 1e-14

    def test_matches_oracle_mixed_momenta(self):
        st = build_state(MagnonStateSpec(8, 2, MomentumVector(8, (1, 3))))
        sub = SubsystemSpec.prefix(8, 3)
        assert block_distance(reduce(st, sub), oracle_partial_trace(embed_full(st), sub)) < 1e-10

    def test_matches_oracle_scattered_sites(self):
        st = build_state(MagnonStateSpec(8, 3, MomentumVector(8, (1, 2, 5))))
        sub = SubsystemSpec(8, (2, 5, 7))
        assert block_distance(reduce(st, sub), oracle_partial_trace(embed_full(st), sub)) < 1e-10

    def test_matches_oracle_randomized(self):
        rng = np.random.default_rng(42)
        for _ in range(12):
            N = int(rng.integers(4, 11))
            m = int(rng.integers(1, 4))
            st = random_state(rng, N, m)
            n = int(rng.integers(1, N))
            sub = SubsystemSpec(N, random_sites(rng, N, n))
            got = reduce(st, sub)
            want = oracle_partial_trace(embed_full(st), sub)
            assert block_distance(got, want) < 1e-10
            assert want.off_block_residual < 1e-12

    def test_parent_mismatch(self):
        st = random_state(np.random.default_rng(2), 6, 1)
        with pytest.raises(DomainError):
            reduce(st, SubsystemSpec.prefix(7, 2))

    def test_budget(self):
        st = build_state(MagnonStateSpec(12, 3, MomentumVector.constant(12, 1, 3)))
        with pytest.raises(InfeasibilityError):
            reduce(st, SubsystemSpec.prefix(12, 6), budget=10)


class TestSingleModeClosedForm:
    def test_block_weights_follow_the_sector_law(self):
        w = reduce_single_mode(4, 2, 2, 0.0).block_weights
        assert abs(w[0] - 1.0 / 6.0) < 1e-12
        assert abs(w[1] - 2.0 / 3.0) < 1e-12
        assert abs(w[2] - 1.0 / 6.0) < 1e-12

    @pytest.mark.parametrize("N,n,m,idx", [(8, 3, 2, 1), (10, 4, 3, 2), (9, 5, 2, 0), (7, 7, 3, 1)])
    def test_agrees_with_general_route(self, N, n, m, idx):
        k = 2.0 * math.pi * idx / N
        closed = reduce_single_mode(N, n, m, k)
        st = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, idx, m)))
        general = reduce(st, SubsystemSpec.prefix(N, n))
        assert block_distance(closed, general) < 1e-10

    def test_each_sector_is_pure(self):
        reduced = reduce_single_mode(10, 4, 3, 1.1)
        for q in reduced.q_values:
            block = reduced.blocks[q]
            w = reduced.block_weights[q]
            assert np.abs(block @ block - w * block).max() < 1e-12

    def test_general_route_weights_match_the_law_too(self):
        N, n, m = 9, 4, 3
        st = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, 2, m)))
        weights = reduce(st, SubsystemSpec.prefix(N, n)).block_weights
        for q, w in weights.items():
            assert abs(w - hypergeometric_pmf(N, n, m, q)) < 1e-10

    def test_empty_band(self):
        reduced = reduce_single_mode(6, 3, 0, 0.7)
        assert reduced.q_values == (0,)
        assert np.allclose(reduced.blocks[0], [[1.0]])

    def test_admissible_range_respected(self):
        reduced = reduce_single_mode(10, 2, 9, 0.0)
        assert reduced.q_values == (1, 2)
        assert set(reduced.q_values) == set(admissible_q(10, 2, 9))


class TestOracle:
    def test_polarised_product_state(self):
        vec = np.zeros(2 ** 5, dtype=complex)
        vec[0] = 1.0
        from magcoh import FullStateVector

        reduced = oracle_partial_trace(FullStateVector(5, vec), SubsystemSpec.prefix(5, 2))
        assert reduced.q_values == (0,)
        assert np.allclose(reduced.blocks[0], [[1.0]])
        assert reduced.off_block_residual == 0.0

    def test_half_of_a_shared_flip(self):
        st = build_state(MagnonStateSpec(2, 1, MomentumVector(2, (0,))))
        reduced = oracle_partial_trace(embed_full(st), SubsystemSpec.prefix(2, 1))
        assert reduced.q_values == (0, 1)
        assert abs(reduced.blocks[0][0, 0] - 0.5) < 1e-14
        assert abs(reduced.blocks[1][0, 0] - 0.5) < 1e-14

    def test_complementary_blocks_share_their_spectrum(self):
        rng = np.random.default_rng(9)
        st = random_state(rng, 10, 2)
        vec = embed_full(st)
        sub = SubsystemSpec(10, random_sites(rng, 10, 4))
        left = oracle_partial_trace(vec, sub).spectrum()
        right = oracle_partial_trace(vec, SubsystemSpec(10, sub.complement)).spectrum()
        keep = max(int((left > 1e-12).sum()), int((right > 1e-12).sum()))
        assert np.abs(left[:keep] - right[:keep]).max() < 1e-8


class TestBlockDensityMatrix:
    def test_diagonal_concatenates_sectors(self):
        reduced = reduce_single_mode(8, 3, 2, 0.4)
        diag = reduced.diagonal()
        assert len(diag) == reduced.dimension
        assert abs(diag.sum() - 1.0) < 1e-12

    def test_purity_below_one_when_mixed(self):
        reduced = reduce_single_mode(8, 3, 2, 0.0)
        expected = sum(w * w for w in reduced.block_weights.values())
        assert abs(reduced.purity() - expected) < 1e-12
        assert reduced.purity() < 1.0

    def test_validation_catches_bad_trace(self):
        labels = {0: enumerate_combinations(1, 0), 1: enumerate_combinations(1, 1)}
        blocks = {0: np.array([[0.7]], dtype=complex), 1: np.array([[0.7]], dtype=complex)}
        with pytest.raises(InternalConsistencyError):
            BlockDensityMatrix(1, blocks, labels).validate()

    def test_validation_catches_non_hermitian_block(self):
        labels = {1: enumerate_combinations(2, 1)}
        blocks = {1: np.array([[0.5, 0.5], [0.1, 0.5]], dtype=complex)}
        with pytest.raises(InternalConsistencyError):
            BlockDensityMatrix(2, blocks, labels).validate()

    def test_validation_catches_negative_block(self):
        labels = {1: enumerate_combinations(2, 1)}
        blocks = {1: np.array([[0.9, 0.8], [0.8, 0.1]], dtype=complex)}
        with pytest.raises(InternalConsistencyError):
            BlockDensityMatrix(2, blocks, labels).validate()


class TestEigenvaluesHermitian:
    def test_identity(self):
        assert np.allclose(eigenvalues_hermitian(np.eye(6)), np.ones(6))

    def test_projector(self):
        v = np.array([1.0, 1.0j, -1.0]) / math.sqrt(3)
        w = eigenvalues_hermitian(np.outer(v, v.conj()))
        assert abs(w[0] - 1.0) < 1e-12
        assert np.abs(w[1:]).max() < 1e-12

    def test_descending_order_and_trace(self):
        rng = np.random.default_rng(12)
        a = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
        h = (a + a.conj().T) / 2.0
        w = eigenvalues_hermitian(h)
        assert np.all(np.diff(w) <= 1e-12)
        assert abs(w.sum() - np.trace(h).real) < 1e-10

    def test_matches_the_general_solver(self):
        # independent route: the non-symmetric LAPACK driver on the same matrix
        rng = np.random.default_rng(13)
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = (a + a.conj().T) / 2.0
        ours = eigenvalues_hermitian(h)
        general = np.sort(np.linalg.eig(h)[0].real)[::-1]
        assert np.abs(ours - general).max() < 1e-10

    def test_eigenvalue_residuals(self):
        rng = np.random.default_rng(14)
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = (a + a.conj().T) / 2.0
        ours = eigenvalues_hermitian(h)
        _, vecs = np.linalg.eigh(h)
        for lam, x in zip(ours, vecs.T[::-1]):
            assert np.linalg.norm(h @ x - lam * x) < 1e-8

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            eigenvalues_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(DomainError):
            eigenvalues_hermitian(np.zeros((2, 3)))


def test_contiguity_does_not_matter_for_single_mode_moduli():
    N, m, n = 10, 3, 4
    st = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, 1, m)))
    a = reduce(st, SubsystemSpec.prefix(N, n))
    b = reduce(st, SubsystemSpec(N, (2, 5, 6, 9)))
    for q in a.q_values:
        assert np.abs(np.abs(a.blocks[q]) - np.abs(b.blocks[q])).max() < 1e-12
