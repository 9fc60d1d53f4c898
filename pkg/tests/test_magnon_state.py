import math
from itertools import permutations

import numpy as np
import pytest

from magcoh import (
    DomainError,
    InfeasibilityError,
    MagnonStateSpec,
    MomentumVector,
    NullStateError,
    amplitude_f,
    apply_hamiltonian,
    build_state,
    dispersion,
    embed_full,
    momentum_grid,
    normalization,
    rank_combination,
    single_mode_state,
)
from magcoh.magnon_state import FULL_VECTOR_BUDGET, FullStateVector


def brute_phase_sum(k_values, sites):
    """Independent oracle: sum exp(i k_pi . l) over all permutations."""
    total = 0.0 + 0.0j
    for perm in permutations(k_values):
        total += np.exp(1j * np.dot(perm, sites))
    return total


def random_momentum(rng, N, m):
    return MomentumVector(N, tuple(int(x) for x in rng.integers(0, N, size=m)))


def test_dispersion_values():
    assert dispersion(1.0, 0.0) == 0.0
    assert abs(dispersion(1.0, math.pi) - 8.0) < 1e-12
    assert abs(dispersion(1.0, 2.0 * math.pi / 3.0) - 6.0) < 1e-12
    assert abs(dispersion(2.5, math.pi) - 20.0) < 1e-12


def test_dispersion_needs_positive_coupling():
    with pytest.raises(DomainError):
        dispersion(0.0, 1.0)
    with pytest.raises(DomainError):
        dispersion(-1.0, 1.0)


def test_momentum_grid():
    assert np.allclose(momentum_grid(2), [0.0, math.pi])
    grid = momentum_grid(5)
    assert len(grid) == 5
    assert grid[0] == 0.0
    assert np.all(grid >= 0.0) and np.all(grid < 2.0 * math.pi)
    with pytest.raises(DomainError):
        momentum_grid(0)


class TestMomentumVector:
    def test_values_match_indices(self):
        k = MomentumVector(8, (0, 3, 7))
        assert np.allclose(k.values, 2.0 * math.pi * np.array([0, 3, 7]) / 8.0, atol=1e-15)
        assert k.m == 3

    def test_index_range_enforced(self):
        with pytest.raises(DomainError):
            MomentumVector(4, (4,))
        with pytest.raises(DomainError):
            MomentumVector(4, (-1,))

    def test_constant_helper(self):
        k = MomentumVector.constant(6, 2, 3)
        assert k.indices == (2, 2, 2)
        assert k.is_constant()
        assert not MomentumVector(6, (1, 2)).is_constant()


class TestSpec:
    def test_rejects_inconsistent_sizes(self):
        with pytest.raises(DomainError):
            MagnonStateSpec(4, 2, MomentumVector(4, (1,)))
        with pytest.raises(DomainError):
            MagnonStateSpec(4, 0, MomentumVector(4, ()))
        with pytest.raises(DomainError):
            MagnonStateSpec(4, 1, MomentumVector(5, (1,)))

    def test_rejects_non_positive_coupling(self):
        with pytest.raises(DomainError):
            MagnonStateSpec(4, 1, MomentumVector(4, (1,)), J=0.0)


class TestAmplitude:
    def test_one_flip_is_a_plane_wave(self):
        k = MomentumVector(8, (3,))
        for l in (1, 4, 8):
            want = np.exp(1j * 2.0 * math.pi * 3 * l / 8.0)
            assert abs(amplitude_f(k, (l,)) - want) < 1e-13

    def test_constant_mode_closed_form(self):
        # all wavenumbers equal: f = m! exp(i k sum(l))
        k = MomentumVector(10, (3, 3, 3))
        kval = 2.0 * math.pi * 3 / 10.0
        got = amplitude_f(k, (2, 5, 9))
        want = math.factorial(3) * np.exp(1j * kval * (2 + 5 + 9))
        assert abs(got - want) < 1e-12

    def test_destructive_pair(self):
        # k = {0, pi} on sites {1, 2}: e^{0+2pi i} + e^{pi i} cancels
        k = MomentumVector(4, (0, 2))
        assert abs(amplitude_f(k, (1, 2))) < 1e-12

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7])
    def test_matches_brute_permutation_sum(self, m):
        rng = np.random.default_rng(100 + m)
        N = 12
        for _ in range(6):
            k = random_momentum(rng, N, m)
            sites = tuple(sorted(int(s) + 1 for s in rng.choice(N, size=m, replace=False)))
            got = amplitude_f(k, sites)
            want = brute_phase_sum(k.values, np.array(sites))
            assert abs(got - want) <= 1e-10 * math.factorial(m)

    @pytest.mark.parametrize("m", [3, 7, 8])
    def test_direct_and_ryser_agree(self, m):
        rng = np.random.default_rng(7 * m)
        N = 11
        for _ in range(6):
            k = random_momentum(rng, N, m)
            sites = tuple(sorted(int(s) + 1 for s in rng.choice(N, size=m, replace=False)))
            d = amplitude_f(k, sites, force="direct")
            r = amplitude_f(k, sites, force="ryser")
            assert abs(d - r) <= 1e-10 * math.factorial(m)

    def test_sitelist_must_match_mode_count(self):
        with pytest.raises(DomainError):
            amplitude_f(MomentumVector(6, (1, 2)), (1,))

    def test_permanent_size_limit(self):
        k = MomentumVector(64, tuple(range(21)))
        with pytest.raises(InfeasibilityError):
            amplitude_f(k, tuple(range(1, 22)))


class TestBuildState:
    def test_one_flip_uniform_modulus(self):
        spec = MagnonStateSpec(2, 1, MomentumVector(2, (0,)))
        st = build_state(spec)
        assert np.allclose(st.amplitudes, [1 / math.sqrt(2)] * 2)
        assert abs(st.normalization - 1 / math.sqrt(2)) < 1e-15

    def test_single_mode_moduli(self):
        spec = MagnonStateSpec(4, 2, MomentumVector.constant(4, 1, 2))
        st = build_state(spec)
        assert np.allclose(np.abs(st.amplitudes), 1 / math.sqrt(6), atol=1e-14)

    def test_unit_norm_for_random_momenta(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            N = int(rng.integers(4, 11))
            m = int(rng.integers(1, 4))
            try:
                st = build_state(MagnonStateSpec(N, m, random_momentum(rng, N, m)))
            except NullStateError:
                continue
            assert abs(st.norm() - 1.0) < 1e-12

    def test_normalization_helper_matches_brute_force(self):
        N, m = 6, 2
        k = MomentumVector(N, (1, 4))
        total = 0.0
        for a in range(1, N + 1):
            for b in range(a + 1, N + 1):
                total += abs(brute_phase_sum(k.values, np.array([a, b]))) ** 2
        assert abs(normalization(N, k) - 1.0 / math.sqrt(total)) < 1e-12

    def test_constant_mode_normalization_closed_form(self):
        # G = 1 / (m! sqrt(C(N, m))) when every flip shares one mode
        N, m = 9, 3
        g = normalization(N, MomentumVector.constant(N, 2, m))
        assert abs(g - 1.0 / (math.factorial(m) * math.sqrt(math.comb(N, m)))) < 1e-14

    def test_null_state_detected(self):
        # two flips sharing indices {0, 1} on N = 2 cancel identically
        with pytest.raises(NullStateError):
            build_state(MagnonStateSpec(2, 2, MomentumVector(2, (0, 1))))

    def test_budget_enforced(self):
        spec = MagnonStateSpec(30, 3, MomentumVector.constant(30, 1, 3))
        with pytest.raises(InfeasibilityError):
            build_state(spec, budget=100)

    def test_translation_moves_phases_not_moduli(self):
        N, m = 8, 2
        st = build_state(MagnonStateSpec(N, m, MomentumVector(N, (1, 3))))
        phase = np.exp(1j * st.spec.k.values.sum())
        for r, l in enumerate(st.basis()):
            shifted = tuple(sorted(s % N + 1 for s in l))
            got = st.amplitudes[rank_combination(shifted, N)]
            assert abs(got - phase * st.amplitudes[r]) < 1e-12


class TestSingleModeState:
    def test_trivial_sector(self):
        st = single_mode_state(4, 0, 1.3)
        assert st.amplitudes.shape == (1,)
        assert st.amplitudes[0] == 1.0 + 0.0j

    def test_zero_mode_is_uniform(self):
        st = single_mode_state(4, 2, 0.0)
        assert np.allclose(st.amplitudes, 1 / math.sqrt(6))

    def test_agrees_with_permanent_route(self):
        N, m, idx = 7, 3, 2
        built = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, idx, m)))
        direct = single_mode_state(N, m, 2.0 * math.pi * idx / N)
        assert np.abs(built.amplitudes - direct.amplitudes).max() < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            single_mode_state(4, 5, 0.0)
        with pytest.raises(DomainError):
            single_mode_state(0, 0, 0.0)


class TestFullEmbedding:
    def test_two_site_one_flip(self):
        st = build_state(MagnonStateSpec(2, 1, MomentumVector(2, (0,))))
        vec = embed_full(st)
        r = 1 / math.sqrt(2)
        assert np.allclose(vec.entries, [0.0, r, r, 0.0])

    def test_support_has_m_bits_set(self):
        st = build_state(MagnonStateSpec(6, 2, MomentumVector(6, (1, 2))))
        vec = embed_full(st)
        for idx in np.nonzero(np.abs(vec.entries) > 1e-14)[0]:
            assert int(idx).bit_count() == 2
        assert abs(vec.norm() - 1.0) < 1e-12

    def test_budget(self):
        st = build_state(MagnonStateSpec(6, 1, MomentumVector(6, (1,))))
        with pytest.raises(InfeasibilityError):
            embed_full(st, budget=32)
        assert FULL_VECTOR_BUDGET == 2 ** 14


class TestHamiltonian:
    def test_polarised_ground_state(self):
        # all spins down: every bond term gives -J
        N = 5
        vec = np.zeros(2 ** N, dtype=complex)
        vec[0] = 1.0
        out = apply_hamiltonian(FullStateVector(N, vec), J=1.0)
        assert np.allclose(out.entries, -N * vec)

    @pytest.mark.parametrize("N", [2, 4, 6, 9])
    def test_one_flip_eigenstates(self, N):
        for j in range(N):
            spec = MagnonStateSpec(N, 1, MomentumVector(N, (j,)))
            vec = embed_full(build_state(spec))
            energy = -N + dispersion(1.0, 2.0 * math.pi * j / N)
            out = apply_hamiltonian(vec, J=1.0)
            assert np.linalg.norm(out.entries - energy * vec.entries) < 1e-12

    def test_hermitian_on_random_vectors(self):
        rng = np.random.default_rng(5)
        N = 6
        for _ in range(5):
            u = rng.normal(size=2 ** N) + 1j * rng.normal(size=2 ** N)
            v = rng.normal(size=2 ** N) + 1j * rng.normal(size=2 ** N)
            hu = apply_hamiltonian(FullStateVector(N, u), J=1.3).entries
            hv = apply_hamiltonian(FullStateVector(N, v), J=1.3).entries
            assert abs(np.vdot(u, hv) - np.vdot(hu, v)) < 1e-9 * np.linalg.norm(u) * np.linalg.norm(v)

    def test_two_flip_residual_shrinks_with_dilution(self):
        """Finite-size two-flip tables are approximate eigenstates whose
        defect falls as the chain grows at fixed flip count."""
        residuals = []
        for N in (8, 10, 12, 14):
            spec = MagnonStateSpec(N, 2, MomentumVector(N, (1, 3)))
            vec = embed_full(build_state(spec))
            energy = -N + sum(dispersion(1.0, 2.0 * math.pi * j / N) for j in (1, 3))
            out = apply_hamiltonian(vec)
            residuals.append(float(np.linalg.norm(out.entries - energy * vec.entries)))
        assert all(b < a for a, b in zip(residuals, residuals[1:]))
