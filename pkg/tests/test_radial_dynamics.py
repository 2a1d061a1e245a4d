import cmath

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import spherical_jn

from src.error_trace.exceptions import ConsistencyError, DomainError
from src.services.monopole_triplet_module import radial_dynamics
from src.services.monopole_triplet_module.monopole_gauges import MonopoleProfile, builtin_profiles
from src.services.monopole_triplet_module.printed_systems import printed_generator, printed_residual
from src.services.monopole_triplet_module.quantum_numbers import HalfInt
from src.services.monopole_triplet_module.radial_dynamics import (
    MatchPoint,
    RadialSolution,
    RadialSystem,
    conserved_current,
    constraint_reduction_check,
    default_rmax,
    find_modes,
    frobenius_start,
    integrate,
    k_sector_system,
    rk4_march,
    scan_matching,
    self_convergence_order,
    w_vanishes,
)

J32 = HalfInt(3)


def test_case_guards(trivial, bps):
    with pytest.raises(DomainError):
        RadialSystem.build("full_x", trivial, J32, 0.5, 1.0)
    with pytest.raises(DomainError):
        RadialSystem.build("full_j", trivial, HalfInt(1), 0.5, 1.0)
    with pytest.raises(DomainError):
        RadialSystem.build("full_min", trivial, J32, 0.5, 1.0)
    with pytest.raises(DomainError):
        RadialSystem.build("reduced_W0", trivial, J32, 0.5, 1.0, delta=0)
    with pytest.raises(ConsistencyError):
        RadialSystem.build("reduced_W", builtin_profiles("bps", kappa=0.3), J32, 0.5, 1.0)
    with pytest.raises(ConsistencyError):
        RadialSystem.build("reduced_W0", bps, J32, 0.5, 1.0)
    with pytest.raises(ConsistencyError):
        RadialSystem.build("k_h", bps, J32, 0.5, 1.0)
    with pytest.raises(DomainError):
        RadialSystem.build("k_f", trivial, J32, 0.5, 1.0)
    with pytest.raises(DomainError):
        RadialSystem.build("full_j", trivial, J32, 0.5, 1.0).full_generator(0.0)


def test_w_vanishes(trivial, bps):
    assert w_vanishes(trivial)
    assert not w_vanishes(bps)


def test_dimensions(trivial):
    expected = {"full_j": 12, "reduced_W0": 6, "k_h": 2}
    for case, dim in expected.items():
        assert RadialSystem.build(case, trivial, J32, 0.5, 1.0).dim == dim
    assert RadialSystem.build("full_min", trivial, HalfInt(1), 0.5, 1.0).dim == 8
    assert RadialSystem.build("reduced_min_W0", trivial, HalfInt(1), 0.5, 1.0).dim == 4
    assert k_sector_system(J32, "f", trivial, 0.5, 1.0, mu=-1).variables == ("f1", "f2")


@pytest.mark.parametrize(
    "profile",
    [builtin_profiles("trivial"), builtin_profiles("bps"), builtin_profiles("bps", mu=2.0, kappa=0.4)],
    ids=["trivial", "bps", "bps-dyon"],
)
@pytest.mark.parametrize("twoj", [1, 3, 5])
def test_assembled_matches_printed_full(profile, twoj, rng):
    case = "full_min" if twoj == 1 else "full_j"
    system = RadialSystem.build(case, profile, HalfInt(twoj), 0.3, 1.2)
    for r in (0.2, 1.0, 4.5):
        assert printed_residual(case, system.generator(r), system.printed_params(r), rng) < 1e-10


@pytest.mark.parametrize("twoj", [1, 3])
@pytest.mark.parametrize("delta", [1, -1])
def test_assembled_matches_printed_reduced(twoj, delta, rng, trivial, bps):
    prefix = "reduced_min_" if twoj == 1 else "reduced_"
    for profile, suffix in ((trivial, "W0"), (bps, "W")):
        case = prefix + suffix
        system = RadialSystem.build(case, profile, HalfInt(twoj), -0.4, 0.8, delta=delta)
        for r in (0.3, 2.0):
            params = system.printed_params(r)
            assert printed_residual(case, system.generator(r), params, rng) < 1e-10
            assert_allclose(system.generator(r), printed_generator(case, params), atol=1e-10)


def test_reduction_dichotomy(trivial, bps):
    twisted = cmath.exp(0.7j)
    closed = constraint_reduction_check(J32, 1, twisted, trivial)
    assert closed.consistent
    assert closed.match < 1e-10
    aligned = constraint_reduction_check(J32, -1, 1.0, bps)
    assert aligned.consistent
    assert aligned.match < 1e-10
    broken = constraint_reduction_check(J32, 1, twisted, bps)
    assert not broken.consistent
    assert broken.match is None
    assert constraint_reduction_check(HalfInt(1), 1, -1.0, bps).consistent


def test_blocks_decouple_without_mixing(trivial):
    system = RadialSystem.build("reduced_W0", trivial, J32, 0.5, 1.0)
    f_idx, h_idx = system.blocks()
    M = system.generator(0.77)
    assert np.max(np.abs(M[np.ix_(f_idx, h_idx)])) == 0.0
    assert np.max(np.abs(M[np.ix_(h_idx, f_idx)])) == 0.0


def test_conserved_current(trivial):
    system = k_sector_system(J32, "h", trivial, 0.4, 1.0)
    J = conserved_current(system).matrix
    assert_allclose(J, J.conj().T, atol=1e-14)
    for r in (0.5, 2.2, 6.1):
        M = system.generator(r)
        assert np.max(np.abs(M.conj().T @ J + J @ M)) < 1e-10


def test_frobenius_exponent_of_h_sector(trivial):
    start = frobenius_start(k_sector_system(J32, "h", trivial, 0.5, 0.0))
    assert start.dimension == 1
    # the regular branch behaves as r^(j+1/2)
    assert start.exponents[0].real == pytest.approx(2.0)


@pytest.mark.parametrize("twoj", [1, 3, 5])
@pytest.mark.parametrize("epsilon", [0.5, 1.3])
def test_massless_h_sector_against_bessel(trivial, twoj, epsilon):
    j = HalfInt(twoj)
    system = k_sector_system(j, "h", trivial, epsilon, 0.0)
    start = frobenius_start(system)
    radius = 4.0
    solution = integrate(system, start.r0, radius, start.initial_vectors()[:, 0])
    h1, h2 = solution.Y[:, -1]
    a = twoj // 2 + 1
    x = epsilon * radius
    scale = (h1 + h2) / (x * spherical_jn(a, x))
    assert abs((h1 - h2) + 1j * scale * x * spherical_jn(a - 1, x)) / abs(scale) < 1e-7


def test_integration_guards(trivial):
    system = k_sector_system(J32, "h", trivial, 0.5, 1.0)
    with pytest.raises(DomainError):
        integrate(system, 0.0, 1.0, [1.0, 0.0])
    with pytest.raises(DomainError):
        integrate(system, 0.1, 1.0, [np.nan, 0.0])
    zero = integrate(system, 0.1, 1.0, [0.0, 0.0], t_eval=np.linspace(0.1, 1.0, 5))
    assert zero.Y.shape == (2, 5)
    assert not np.any(zero.Y)


def test_solution_frame_and_residual(trivial):
    system = k_sector_system(J32, "h", trivial, 0.5, 1.0)
    grid = np.linspace(0.5, 3.0, 251)
    solution = integrate(system, 0.5, 3.0, [1.0, 0.5j], t_eval=grid)
    frame = solution.to_frame()
    assert list(frame.columns) == ["r", "Re_h1", "Im_h1", "Re_h2", "Im_h2"]
    assert len(frame) == 251
    assert solution.ode_residual(system) < 1e-6
    assert solution.norm > 0


def test_fixed_step_convergence_order(trivial):
    system = k_sector_system(J32, "h", trivial, 0.5, 1.0)
    assert abs(self_convergence_order(system, 0.5, 3.0, [1.0, 0.5j]) - 4.0) < 0.3
    reference = integrate(system, 0.5, 3.0, [1.0, 0.5j]).Y[:, -1]
    assert np.max(np.abs(rk4_march(system, 0.5, 3.0, [1.0, 0.5j], 256) - reference)) < 1e-6
    with pytest.raises(DomainError):
        rk4_march(system, 0.5, 3.0, [1.0, 0.5j], 0)


def test_free_field_has_no_bound_modes(trivial):
    system = k_sector_system(J32, "h", trivial, 0.0, 1.0)
    assert find_modes(system, (-0.8, 0.8), scan_points=9) == []


def test_matching_scan(trivial):
    system = k_sector_system(J32, "h", trivial, 0.0, 1.0)
    frame = scan_matching(system, [0.5, -0.5, 0.0])
    assert list(frame.columns) == ["epsilon", "matching", "regular_dim", "decaying_dim"]
    assert list(frame["epsilon"]) == [-0.5, 0.0, 0.5]
    assert frame["matching"].between(0.0, np.pi / 2 + 1e-12).all()
    assert (frame["regular_dim"] == 1).all()


def _bag(radius=6.0, wall=0.4):
    """W = F = 0 and κΦ̃ = −S(r): the f-slots are massless inside ``radius`` and keep mass m outside."""

    def shape(r):
        return 1.0 / (1.0 + np.exp((np.asarray(r, dtype=float) - radius) / wall))

    def zero(r):
        return np.zeros_like(np.asarray(r, dtype=float))

    return MonopoleProfile("bag", W=zero, F=zero, Phi=lambda r: -shape(r) / np.asarray(r, dtype=float), kappa=1.0)


def test_block_of_a_mixing_free_system(trivial, bps):
    system = RadialSystem.build("full_min", _bag(), HalfInt(1), 0.3, 1.0)
    f_block = system.block("f")
    assert f_block.variables == ("f2", "f4")
    M, full = f_block.generator(0.9), system.generator(0.9)
    idx = [system.variables.index(v) for v in f_block.variables]
    assert_allclose(M, full[np.ix_(idx, idx)], atol=1e-14)
    with pytest.raises(DomainError):
        k_sector_system(J32, "h", trivial, 0.3, 1.0).block("g")
    with pytest.raises(ConsistencyError):
        RadialSystem.build("reduced_min_W", bps, HalfInt(1), 0.3, 1.0).block("f")


def test_default_rmax_follows_the_core_size(trivial):
    system = k_sector_system(J32, "h", trivial, 0.0, 1.0)
    assert default_rmax(system) == pytest.approx(20.0)
    assert default_rmax(system.with_energy(0.2)) == default_rmax(system)
    core = RadialSystem.build("reduced_W", builtin_profiles("bps", mu=3.0), J32, 0.0, 1.0)
    assert default_rmax(core) == pytest.approx(20.0 / 3.0)
    heavy = RadialSystem.build("reduced_W", builtin_profiles("bps", mu=0.5), J32, 0.0, 4.0)
    assert default_rmax(heavy) == pytest.approx(5.0)


def test_bound_mode_in_a_mass_bag():
    system = RadialSystem.build("full_min", _bag(), HalfInt(1), 0.0, 1.0).block("f")
    modes = find_modes(system, (0.1, 0.7), rmax=12.0, tol=1e-7, scan_points=9)
    assert modes
    for mode in modes:
        assert 0.1 <= mode.epsilon <= 0.7
        assert mode.matching < 1e-5
        assert mode.residual < 1e-6
        assert mode.shift < 1e-6
        assert mode.solution.norm == pytest.approx(1.0, rel=1e-6)
        assert mode.solution.ode_residual(system.with_energy(mode.epsilon)) == mode.residual
        # regular at the origin and decayed by rmax
        tail = np.linalg.norm(mode.solution.Y[:, np.argmax(mode.solution.r)])
        assert tail < 0.1 * np.max(np.linalg.norm(mode.solution.Y, axis=0))


def _v_shaped(center, shifted=None):
    """Stand-in matching function with its zero at ``center``; ``shifted`` moves it for the finer integrator."""

    def matching(system, epsilon, rmax=None, r_mid=None, ode_tol=None):
        zero = shifted if shifted is not None and ode_tol < 5e-9 else center
        return MatchPoint(float(epsilon), abs(float(epsilon) - zero), 1, 1)

    return matching


def test_find_modes_keeps_end_point_minima(trivial, monkeypatch):
    system = k_sector_system(J32, "h", trivial, 0.0, 1.0)
    monkeypatch.setattr(radial_dynamics, "matching_value", _v_shaped(0.21))
    # the scan minimum sits on the first grid point
    modes = find_modes(system, (0.2, 0.6), tol=1e-6, scan_points=5)
    assert len(modes) == 1
    assert modes[0].epsilon == pytest.approx(0.21, abs=1e-5)
    assert modes[0].residual < 1e-5
    assert np.isfinite(modes[0].solution.norm)


def test_find_modes_rejects_unstable_or_inaccurate_candidates(trivial, monkeypatch):
    system = k_sector_system(J32, "h", trivial, 0.0, 1.0)
    monkeypatch.setattr(radial_dynamics, "matching_value", _v_shaped(0.41, shifted=0.45))
    assert find_modes(system, (0.2, 0.6), tol=1e-6, scan_points=5) == []

    monkeypatch.setattr(radial_dynamics, "matching_value", _v_shaped(0.41))
    assert len(find_modes(system, (0.2, 0.6), tol=1e-6, scan_points=5)) == 1
    monkeypatch.setattr(RadialSolution, "ode_residual", lambda self, system: 1.0)
    assert find_modes(system, (0.2, 0.6), tol=1e-6, scan_points=5) == []
    monkeypatch.setattr(RadialSolution, "ode_residual", lambda self, system: float("nan"))
    assert find_modes(system, (0.2, 0.6), tol=1e-6, scan_points=5) == []


def test_find_modes_guards(trivial):
    system = k_sector_system(J32, "h", trivial, 0.0, 1.0)
    with pytest.raises(DomainError):
        find_modes(system, (0.5, 0.5))
    with pytest.raises(DomainError):
        find_modes(system, (0.1, 0.5), scan_points=1)


@pytest.mark.parametrize("delta", [1, -1])
def test_bps_minimal_shooting(bps, delta):
    system = RadialSystem.build("reduced_min_W", bps, HalfInt(1), 0.0, 1.0, delta=delta)
    frame = scan_matching(system, [0.0])
    assert frame.loc[0, "regular_dim"] == 2
    assert frame.loc[0, "decaying_dim"] == 2
    assert 0.0 <= frame.loc[0, "matching"] <= np.pi / 2 + 1e-12
    for mode in find_modes(system, (-0.2, 0.2), tol=1e-6, scan_points=3):
        assert -0.2 <= mode.epsilon <= 0.2
        assert mode.matching < 1e-5
        assert mode.residual < 1e-5
        assert np.isfinite(mode.solution.norm)
