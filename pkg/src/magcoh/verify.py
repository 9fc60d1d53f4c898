"""Self-checking invariant suite behind the ``verify`` subcommand.

Each family probes one identity or bound the package relies on, from
combinatorial normalisation up to the two-level thermodynamic limit,
and reports its worst residual.  Equality families report the largest
deviation; inequality and trend families report the largest violation,
so a satisfied bound shows residual zero no matter how much margin it
has.  Everything is driven by one seeded generator, so a given
(N, m, seed) triple always produces the same numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import coherence as coh
from . import thermo
from .combinat import (
    admissible_q,
    enumerate_combinations,
    hypergeometric_pmf,
    log_binomial,
    rank_combination,
    unrank_combination,
)
from .errors import DomainError, NullStateError
from .magnon_state import (
    MagnonStateSpec,
    MomentumVector,
    amplitude_f,
    apply_hamiltonian,
    build_state,
    dispersion,
    embed_full,
    single_mode_state,
)
from .reduced_density import (
    SubsystemSpec,
    oracle_partial_trace,
    pure_density,
    reduce,
    reduce_single_mode,
)

__all__ = ["FamilyResult", "run_suite", "FAMILY_NAMES"]


@dataclass(frozen=True)
class FamilyResult:
    name: str
    passed: bool
    max_residual: float
    detail: str


def _done(name: str, residual: float, tol: float, detail: str = "") -> FamilyResult:
    note = detail or f"tolerance {tol:g}"
    return FamilyResult(name, residual <= tol, float(residual), note)


def _random_state(rng, N: int, m: int):
    for _ in range(32):
        idx = tuple(int(x) for x in rng.integers(0, N, size=m))
        try:
            return build_state(MagnonStateSpec(N, m, MomentumVector(N, idx)))
        except NullStateError:
            continue
    raise NullStateError(f"could not draw a non-null momentum choice for N={N}, m={m}")


def _random_sites(rng, N: int, n: int) -> tuple[int, ...]:
    return tuple(sorted(int(s) + 1 for s in rng.choice(N, size=n, replace=False)))


def _random_density(rng, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _eigenstate_residual(N: int, indices: tuple[int, ...]) -> float:
    spec = MagnonStateSpec(N, len(indices), MomentumVector(N, indices))
    vec = embed_full(build_state(spec))
    energy = -spec.J * N + sum(dispersion(spec.J, 2.0 * math.pi * j / N) for j in indices)
    out = apply_hamiltonian(vec, spec.J)
    return float(np.linalg.norm(out.entries - energy * vec.entries))


def _compare_blocks(left, right) -> float:
    worst = 0.0
    for q in sorted(set(left.blocks) | set(right.blocks)):
        a = left.blocks.get(q)
        b = right.blocks.get(q)
        if a is None:
            worst = max(worst, float(np.abs(b).max()))
        elif b is None:
            worst = max(worst, float(np.abs(a).max()))
        else:
            worst = max(worst, float(np.abs(a - b).max()))
    return worst


# ---------------------------------------------------------------- combinat

def _fam_hypergeometric_normalization(N, m, rng):
    worst = 0.0
    for nn, bn, bm in ((12, 5, 3), (40, 13, 7), (200, 81, 45), (1000, 137, 41)):
        total = sum(hypergeometric_pmf(nn, bn, bm, q) for q in admissible_q(nn, bn, bm))
        worst = max(worst, abs(total - 1.0))
    return _done("hypergeometric-normalization", worst, 1e-12)


def _fam_hypergeometric_symmetry(N, m, rng):
    worst = 0.0
    for nn, bn, bm in ((12, 5, 3), (30, 11, 7), (200, 45, 81)):
        for q in admissible_q(nn, bn, bm):
            worst = max(worst, abs(hypergeometric_pmf(nn, bn, bm, q) - hypergeometric_pmf(nn, bm, bn, q)))
    return _done("hypergeometric-symmetry", worst, 1e-12)


def _fam_binomial_log_agreement(N, m, rng):
    worst = 0.0
    for nn in range(1, 65):
        for kk in range(nn + 1):
            exact = math.log(math.comb(nn, kk))
            gamma = math.lgamma(nn + 1) - math.lgamma(kk + 1) - math.lgamma(nn - kk + 1)
            worst = max(worst, abs(gamma - exact) / max(1.0, abs(exact)))
    return _done("binomial-log-agreement", worst, 1e-10)


def _fam_combination_enumeration(N, m, rng):
    seq = enumerate_combinations(6, 3)
    bad = 0.0
    if len(seq) != 20 or len(set(seq)) != 20 or seq != sorted(seq):
        bad = 1.0
    for r, l in enumerate(seq):
        if rank_combination(l, 6) != r or unrank_combination(r, 6, 3) != l:
            bad = 1.0
    return _done("combination-enumeration", bad, 0.0, "lexicographic order and rank round trip")


# ------------------------------------------------------------- state layer

def _fam_state_normalization(N, m, rng):
    worst = max(abs(_random_state(rng, N, m).norm() - 1.0) for _ in range(5))
    return _done("state-normalization", worst, 1e-10)


def _fam_permanent_consistency(N, m, rng):
    worst = 0.0
    for mm in range(2, 8):
        k = MomentumVector(12, tuple(int(x) for x in rng.integers(0, 12, size=mm)))
        scale = float(math.factorial(mm))
        for _ in range(8):
            l = _random_sites(rng, 12, mm)
            direct = amplitude_f(k, l, force="direct")
            ryser = amplitude_f(k, l, force="ryser")
            worst = max(worst, abs(direct - ryser) / scale)
    return _done("permanent-consistency", worst, 1e-10)


def _fam_single_mode_consistency(N, m, rng):
    worst = 0.0
    for idx in {0, 1, N // 2}:
        built = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, idx, m)))
        direct = single_mode_state(N, m, 2.0 * math.pi * idx / N)
        anchor = int(np.argmax(np.abs(built.amplitudes)))
        phase = built.amplitudes[anchor] / direct.amplitudes[anchor]
        worst = max(worst, float(np.abs(built.amplitudes - phase * direct.amplitudes).max()))
    return _done("single-mode-consistency", worst, 1e-10)


def _fam_one_magnon_eigenstate(N, m, rng):
    worst = max(_eigenstate_residual(N, (j,)) for j in range(N))
    return _done("one-magnon-eigenstate", worst, 1e-12)


def _fam_dilute_eigenstate_trend(N, m, rng):
    residuals = [_eigenstate_residual(nn, (1, 3)) for nn in (8, 10, 12, 14)]
    worst = max(0.0, max(b - a for a, b in zip(residuals, residuals[1:])))
    note = "two-flip residuals " + ", ".join(f"{r:.3e}" for r in residuals)
    return _done("dilute-eigenstate-trend", worst, 0.0, note)


def _fam_translation_covariance(N, m, rng):
    state = _random_state(rng, N, m)
    phase = np.exp(1j * state.spec.k.values.sum())
    worst = 0.0
    for r, l in enumerate(state.basis()):
        shifted = tuple(sorted(s % N + 1 for s in l))
        got = state.amplitudes[rank_combination(shifted, N)]
        worst = max(worst, abs(got - phase * state.amplitudes[r]))
    return _done("translation-covariance", worst, 1e-10)


# --------------------------------------------------------------- reduction

def _fam_oracle_equivalence(N, m, rng):
    worst = 0.0
    for _ in range(8):
        state = _random_state(rng, N, m)
        n = int(rng.integers(1, min(N - 1, 10) + 1))
        sub = SubsystemSpec(N, _random_sites(rng, N, n))
        worst = max(worst, _compare_blocks(reduce(state, sub), oracle_partial_trace(embed_full(state), sub)))
    return _done("oracle-equivalence", worst, 1e-10, "8 random subsystems")


def _fam_block_weight_law(N, m, rng):
    state = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, 1, m)))
    n = max(1, N // 2)
    weights = reduce(state, SubsystemSpec.prefix(N, n)).block_weights
    worst = max(abs(w - hypergeometric_pmf(N, n, m, q)) for q, w in weights.items())
    return _done("block-weight-law", worst, 1e-10)


def _fam_purity_monotone(N, m, rng):
    worst = 0.0
    for _ in range(4):
        state = _random_state(rng, N, m)
        n = int(rng.integers(1, N))
        reduced = reduce(state, SubsystemSpec(N, _random_sites(rng, N, n)))
        worst = max(worst, reduced.purity() - 1.0)
    full = reduce(_random_state(rng, N, m), SubsystemSpec.prefix(N, N))
    worst = max(worst, abs(full.purity() - 1.0))
    return _done("purity-monotone", worst, 1e-10, "reductions stay mixed, full chain stays pure")


def _fam_complementarity(N, m, rng):
    state = _random_state(rng, N, m)
    sub = SubsystemSpec(N, _random_sites(rng, N, N // 2))
    co = SubsystemSpec(N, sub.complement)
    vec = embed_full(state)
    left = oracle_partial_trace(vec, sub).spectrum()
    right = oracle_partial_trace(vec, co).spectrum()
    keep = max(len(left[left > 1e-12]), len(right[right > 1e-12]))
    worst = float(np.abs(left[:keep] - right[:keep]).max())
    return _done("complementarity", worst, 1e-8, "matching nonzero spectra of complementary blocks")


def _fam_single_mode_contiguity(N, m, rng):
    state = build_state(MagnonStateSpec(N, m, MomentumVector.constant(N, 1, m)))
    n = max(2, N // 2)
    block = reduce(state, SubsystemSpec.prefix(N, n))
    scattered = reduce(state, SubsystemSpec(N, _random_sites(rng, N, n)))
    worst = max(
        float(np.abs(np.abs(block.blocks[q]) - np.abs(scattered.blocks[q])).max())
        for q in block.q_values
    )
    return _done("single-mode-contiguity", worst, 1e-10, "entry moduli ignore where the block sits")


# --------------------------------------------------------------- coherence

def _fam_zero_iff_diagonal(N, m, rng):
    diag = np.diag(rng.random(6) + 0.1)
    diag = diag / np.trace(diag)
    flat = max(coh.c_l1(diag), coh.c_r(diag), coh.c_ln(diag))
    rho = _random_density(rng, 6)
    alive = min(coh.c_l1(rho), coh.c_r(rho), coh.c_ln(rho))
    ok = flat <= 1e-14 and alive > 1e-10
    return FamilyResult("zero-iff-diagonal", ok, flat, f"smallest off-diagonal response {alive:.3e}")


def _fam_coherence_upper_bounds(N, m, rng):
    worst = 0.0
    for d in (4, 5, 6):
        rho = _random_density(rng, d)
        worst = max(worst, coh.c_r(rho) - math.log(d), coh.c_l1(rho) - (d - 1.0))
        top = np.full((d, d), 1.0 / d, dtype=np.complex128)
        worst = max(worst, abs(coh.c_r(top) - math.log(d)), abs(coh.c_l1(top) - (d - 1.0)))
    return _done("coherence-upper-bounds", worst, 1e-10)


def _fam_partial_trace_contractivity(N, m, rng):
    worst = 0.0
    for _ in range(3):
        state = _random_state(rng, N, m)
        parent = coh.coherence_report(pure_density(state))
        for n in (1, N // 2, N - 1):
            child = coh.coherence_report(reduce(state, SubsystemSpec(N, _random_sites(rng, N, n))))
            worst = max(
                worst,
                child.c_l1 - parent.c_l1,
                child.c_r - parent.c_r,
                child.c_ln - parent.c_ln,
            )
    return _done("partial-trace-contractivity", max(0.0, worst), 1e-10)


def _fam_convexity(N, m, rng):
    worst = 0.0
    for _ in range(4):
        a, b = _random_density(rng, 6), _random_density(rng, 6)
        for lam in (0.25, 0.5, 0.75):
            mix = lam * a + (1.0 - lam) * b
            worst = max(worst, coh.c_l1(mix) - (lam * coh.c_l1(a) + (1 - lam) * coh.c_l1(b)))
            worst = max(worst, coh.c_r(mix) - (lam * coh.c_r(a) + (1 - lam) * coh.c_r(b)))
    return _done("convexity", max(0.0, worst), 1e-10)


def _fam_averaged_identity(N, m, rng):
    worst = 0.0
    k = 2.0 * math.pi / N
    for n in {1, N // 2, N - 1, N}:
        for mm in {1, 2, max(1, N // 3)}:
            reduced = reduce_single_mode(N, n, mm, k)
            worst = max(worst, abs(coh.c_r(reduced) - coh.averaged_coherence_single_mode(N, n, mm, k, "r")))
            worst = max(worst, abs(coh.c_l1(reduced) - coh.averaged_coherence_single_mode(N, n, mm, k, "l1")))
    return _done("averaged-identity", worst, 1e-10)


def _fam_effective_dimension_multiplicativity(N, m, rng):
    worst = 0.0
    for d1, d2 in ((2, 3), (3, 4)):
        top = np.kron(np.full((d1, d1), 1.0 / d1), np.full((d2, d2), 1.0 / d2)).astype(np.complex128)
        worst = max(worst, abs(coh.effective_dimension(top) - d1 * d2))
        worst = max(worst, abs(coh.c_ln(top) - math.log(d1) - math.log(d2)))
    return _done("effective-dimension-multiplicativity", worst, 1e-10)


# ------------------------------------------------------------------ thermo

def _fam_thermo_inverse_pair(N, m, rng):
    worst = 0.0
    for eps in (1.0, 3.5):
        for u in np.linspace(0.01, 0.99, 99) * eps:
            worst = max(worst, abs(thermo.energy_from_beta(thermo.beta_c(u, eps), eps) - u))
    return _done("thermo-inverse-pair", worst, 1e-12)


def _fam_heat_capacity_limits(N, m, rng):
    eps = 2.0
    grid = np.linspace(-40.0, 40.0, 161) / eps
    values = [thermo.heat_capacity(b, eps) for b in grid]
    worst = max(0.0, -min(values))
    worst = max(worst, thermo.heat_capacity(0.0, eps))
    worst = max(worst, thermo.heat_capacity(50.0 / eps, eps), thermo.heat_capacity(-50.0 / eps, eps))
    for b in grid:
        worst = max(worst, abs(thermo.heat_capacity(b, eps) - thermo.heat_capacity(-b, eps)))
    return _done("heat-capacity-limits", worst, 1e-12, "non-negative, even, vanishing at both extremes")


def _fam_negative_temperature_branch(N, m, rng):
    eps = 1.3
    bad = 0.0
    for u in np.linspace(0.02, 0.98, 49) * eps:
        beta = thermo.beta_c(float(u), eps)
        want = math.copysign(1.0, eps / 2.0 - u)
        if u != eps / 2.0 and math.copysign(1.0, beta) != want:
            bad = 1.0
    bad = max(bad, abs(thermo.beta_c(eps / 2.0, eps)))
    return _done("negative-temperature-branch", bad, 1e-12, "sign of beta flips exactly at half filling")


def _fam_energy_monotone_in_beta(N, m, rng):
    eps = 0.9
    grid = np.linspace(-30.0, 30.0, 301) / eps
    u = [thermo.energy_from_beta(float(b), eps) for b in grid]
    worst = max(0.0, max(b - a for a, b in zip(u, u[1:])))
    return _done("energy-monotone-in-beta", worst, 0.0, "energy density strictly falls with beta")


def _fam_two_level_correspondence(N, m, rng):
    eps = 1.7
    worst = 0.0
    h = 1e-5 * eps
    for u in np.linspace(0.2, 0.8, 13) * eps:
        slope = (thermo.coherence_density(u + h, eps) - thermo.coherence_density(u - h, eps)) / (2 * h)
        worst = max(worst, abs(thermo.beta_c(float(u), eps) - slope))
    for beta in (-1.5, -0.4, 0.3, 0.9, 2.2):
        t = 1.0 / beta
        dt = 1e-5 * abs(t)
        du = thermo.energy_from_beta(1.0 / (t + dt), eps) - thermo.energy_from_beta(1.0 / (t - dt), eps)
        worst = max(worst, abs(thermo.heat_capacity(beta, eps) - du / (2 * dt)))
    return _done("two-level-correspondence", worst, 1e-6, "beta and heat capacity match the numeric derivatives")


def _fam_coherence_density_intensivity(N, m, rng):
    limit = thermo.coherence_density(0.15, 1.0)
    devs = [abs(thermo.finite_size_coherence_density(40 * s, 16 * s, 6 * s) - limit) for s in (1, 2, 4)]
    worst = max(0.0, max(b - a for a, b in zip(devs, devs[1:])))
    note = "deviations from the limit " + ", ".join(f"{d:.3e}" for d in devs)
    return _done("coherence-density-intensivity", worst, 0.0, note)


_FAMILIES = (
    _fam_hypergeometric_normalization,
    _fam_hypergeometric_symmetry,
    _fam_binomial_log_agreement,
    _fam_combination_enumeration,
    _fam_state_normalization,
    _fam_permanent_consistency,
    _fam_single_mode_consistency,
    _fam_one_magnon_eigenstate,
    _fam_dilute_eigenstate_trend,
    _fam_translation_covariance,
    _fam_oracle_equivalence,
    _fam_block_weight_law,
    _fam_purity_monotone,
    _fam_complementarity,
    _fam_single_mode_contiguity,
    _fam_zero_iff_diagonal,
    _fam_coherence_upper_bounds,
    _fam_partial_trace_contractivity,
    _fam_convexity,
    _fam_averaged_identity,
    _fam_effective_dimension_multiplicativity,
    _fam_thermo_inverse_pair,
    _fam_heat_capacity_limits,
    _fam_negative_temperature_branch,
    _fam_energy_monotone_in_beta,
    _fam_two_level_correspondence,
    _fam_coherence_density_intensivity,
)

FAMILY_NAMES = tuple(f.__name__[len("_fam_"):].replace("_", "-") for f in _FAMILIES)


def run_suite(N: int = 8, m: int = 2, seed: int = 7) -> list[FamilyResult]:
    """Run every invariant family on an (N, m) working point.

    N is capped at 14 because several families go through the dense
    2^N oracle; m must leave room for a proper subsystem.
    """
    if not 4 <= N <= 14:
        raise DomainError(f"suite needs 4 <= N <= 14 for the dense oracle families, got N={N}")
    if not 1 <= m <= N - 1:
        raise DomainError(f"suite needs 1 <= m <= N - 1, got m={m}")
    rng = np.random.default_rng(seed)
    return [family(N, m, rng) for family in _FAMILIES]
