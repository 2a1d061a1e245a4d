import cmath
import logging
import math
from functools import partial, wraps
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd
import yaml
from pydantic import ValidationError
from scipy.special import spherical_jn

from src.api.data_model import SUITES, ObservableSpec, RunConfig
from src.config.settings import settings
from src.database.schemas import CheckRow, GaugeRow, MatElemRow, ModeRecord
from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import (
    ClassificationError,
    MonopoleTripletError,
    ObservableSpecError,
    UnclassifiedObservableError,
)
from src.services.monopole_triplet_module.angular_separation import MINIMAL_FORBIDDEN, TripletState, field_of
from src.services.monopole_triplet_module.discrete_symmetry import (
    alpha_of,
    commutation_dichotomy,
    conjugation_residuals,
    eigen_residual,
    frame_conjugation_residual,
    k_decompose,
    k_operator_matrix,
    n_amplitude_matrix,
    project_to_sector,
)
from src.services.monopole_triplet_module.iso_algebra import (
    GAMMA,
    METRIC,
    anticommutator,
    cartesian_generators,
    commutator,
    compose_gibbs,
    cyclic_generators,
    delta_matrix,
    exp_iso_rotation,
    gibbs_rotation,
    sl2c_from_gibbs,
    t0_from_squares,
    t0_projector,
    t_tilde0,
    to_cyclic,
    unit_radial,
    vector_map_of,
)
from src.services.monopole_triplet_module.matrix_elements import (
    Observable,
    expectation_expansion,
    matrix_element,
    norm_observable,
    random_points,
    selection_rule_check,
)
from src.services.monopole_triplet_module.monopole_gauges import (
    MonopoleProfile,
    abelian_embedding_check,
    builtin_profiles,
    dirac_potential,
    dirac_to_schwinger_field,
    gauge_transform,
    hedgehog_potential,
    hedgehog_to_dirac_field,
    potential_deviation,
    radial_magnetic_field,
    schwinger_potential,
    u_cartesian,
)
from src.services.monopole_triplet_module.printed_systems import printed_residual
from src.services.monopole_triplet_module.quantum_numbers import HalfInt
from src.services.monopole_triplet_module.radial_dynamics import (
    RadialSystem,
    conserved_current,
    constraint_reduction_check,
    default_rmax,
    find_modes,
    frobenius_start,
    geometric_grid,
    integrate,
    k_sector_system,
    scan_matching,
    self_convergence_order,
    w_vanishes,
)
from src.services.monopole_triplet_module.su2_wigner import (
    parity_flip,
    pauli_criterion,
    pauli_J_operators,
    pauli_phi,
    pauli_phi_from_wigner,
    verify_recurrences,
    wigner_D_matrix,
)
from src.utilities.helpers import load_yaml_file, named_matrix, parse_complex, parse_profile_spec

logger = logging.getLogger(__name__)

DEFAULT_CATALOG = Path(__file__).parent / "monopole_triplet_module" / "data" / "observables.yaml"
RADIAL_TAGS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "one": lambda r: np.ones_like(np.asarray(r, dtype=float)),
    "r": lambda r: np.asarray(r, dtype=float),
    "inverse_r": lambda r: 1.0 / np.asarray(r, dtype=float),
}


class WorkflowError(MonopoleTripletError):
    pass


# === check plumbing ===
def guarded_check(suite: str, name: str, tolerance: Optional[float] = None) -> Callable:
    """
    Turns a method returning a residual into one returning a CheckRow. Any
    exception becomes a failed row carrying the exception type.
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(self: "SuiteRunner", *args: Any, **kwargs: Any) -> CheckRow:
            tol = self.tol if tolerance is None else tolerance
            try:
                outcome = func(self, *args, **kwargs)
            except Exception as e:
                system_logger.error(e, additional_info={"suite": suite, "check": name}, exc_info=True)
                return CheckRow(suite=suite, name=name, residual=math.inf, tolerance=tol, passed=False, note=type(e).__name__)
            residual, note = outcome if isinstance(outcome, tuple) else (outcome, "")
            residual = float(residual)
            return CheckRow(
                suite=suite,
                name=name,
                residual=residual,
                tolerance=tol,
                passed=bool(np.isfinite(residual) and residual <= tol),
                note=note,
            )

        wrapper.suite = suite
        return wrapper

    return decorator


def sector_state(j: HalfInt, m: HalfInt, delta: int, A: complex, rng: np.random.Generator, label: str = "") -> TripletState:
    """Random unit-shell amplitudes projected onto the δ-sector of N̂_A."""
    amps = rng.normal(size=12) + 1j * rng.normal(size=12)
    if j.twice == 1:
        amps[list(MINIMAL_FORBIDDEN)] = 0.0
    state = TripletState(epsilon=0.0, j=j, m=m, amplitudes=amps, A=A, label=label)
    return project_to_sector(state, delta)


def h_sector_state(j: HalfInt, m: HalfInt, delta: int, A: complex, rng: np.random.Generator) -> TripletState:
    """Sector state with only the T₀ block filled: h₃ = δh₂, h₄ = δh₁."""
    h1, h2 = rng.normal(size=2) + 1j * rng.normal(size=2)
    amps = np.zeros(12, dtype=complex)
    amps[4:8] = (h1, h2, delta * h2, delta * h1)
    return TripletState(epsilon=0.0, j=j, m=m, amplitudes=amps, A=A, delta=delta)


def f_sector_state(j: HalfInt, m: HalfInt, mu: Optional[int], rng: np.random.Generator) -> TripletState:
    """K̂ f-sector state: f₄ = μf₁, f₃ = μf₂, or (0, f₂, 0, f₄) at j = 1/2."""
    first, second = rng.normal(size=2) + 1j * rng.normal(size=2)
    amps = np.zeros(12, dtype=complex)
    if j.twice == 1:
        amps[0:4] = (0.0, first, 0.0, second)
        mu = None
    else:
        amps[0:4] = (first, second, mu * second, mu * first)
    return TripletState(epsilon=0.0, j=j, m=m, amplitudes=amps, mu=mu)


# === suites ===
class SuiteRunner:
    """Runs the identity suites against one RunConfig."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.tol = config.tol
        self.profile: MonopoleProfile = parse_profile_spec(config.profile, kappa=config.kappa)
        self.j, self.m = HalfInt(config.twoj), HalfInt(config.twom)
        self.A = config.A_value
        self.alpha = config.alpha_value if config.alpha_value is not None else alpha_of(self.A)
        self.rng = np.random.default_rng(settings.SEED)

    def checks(self, suite: str) -> List[Callable[[], CheckRow]]:
        if suite not in SUITES:
            raise WorkflowError(f"unknown suite {suite!r}")
        names = sorted(n for n, attr in vars(type(self)).items() if getattr(attr, "suite", None) == suite)
        return [getattr(self, n) for n in names]

    def run(self, suites: Optional[List[str]] = None) -> List[CheckRow]:
        rows: List[CheckRow] = []
        for suite in suites or list(SUITES):
            # every suite starts from the same seed
            self.rng = np.random.default_rng(settings.SEED)
            for check in self.checks(suite):
                row = check()
                logger.info("%s/%s residual=%.3e passed=%s", row.suite, row.name, row.residual, row.passed)
                rows.append(row)
        failed = [f"{r.suite}/{r.name}" for r in rows if not r.passed]
        if failed:
            system_logger.warning("Verification failures", additional_info={"checks": ", ".join(failed)})
        return rows

    def _angles(self, n: int, margin: float = 0.3) -> List[tuple]:
        theta = self.rng.uniform(margin, math.pi - margin, size=n)
        phi = self.rng.uniform(0.0, 2 * math.pi, size=n)
        return list(zip(theta, phi))

    # --- wigner ---
    @guarded_check("wigner", "recurrences", tolerance=1e-8)
    def wigner_recurrences(self):
        worst = 0.0
        for theta, phi in self._angles(settings.SAMPLES):
            twoj = int(self.rng.choice([1, 3, 5, 7, 9]))
            twom = int(self.rng.choice(np.arange(-twoj, twoj + 1, 2)))
            worst = max(worst, verify_recurrences(HalfInt(twoj), HalfInt(twom), theta, phi).max_residual)
        return worst

    @guarded_check("wigner", "unitarity", tolerance=1e-11)
    def wigner_unitarity(self):
        worst = 0.0
        for twoj in range(1, 10):
            angles = self.rng.uniform(0.0, 2 * math.pi, size=3)
            D = wigner_D_matrix(HalfInt(twoj), angles[0], angles[1] / 2, angles[2])
            worst = max(worst, float(np.max(np.abs(D @ D.conj().T - np.eye(twoj + 1)))))
        return worst

    @guarded_check("wigner", "parity", tolerance=1e-11)
    def wigner_parity(self):
        worst = 0.0
        for theta, phi in self._angles(20):
            twoj = int(self.rng.choice([1, 3, 5, 7, 9]))
            twom, twos = (int(self.rng.choice(np.arange(-twoj, twoj + 1, 2))) for _ in range(2))
            reflected, mirrored = parity_flip(HalfInt(twoj), HalfInt(twom), HalfInt(twos), theta, phi)
            worst = max(worst, abs(reflected - mirrored))
        return worst

    @guarded_check("wigner", "pauli_grid", tolerance=0.0)
    def wigner_pauli_grid(self):
        disagreements = 0
        for twolam in range(-8, 9):
            for twoj in range(-8, 9):
                verdict = pauli_criterion(HalfInt(twolam), HalfInt(twoj))
                disagreements += not verdict.rules_agree
        return disagreements, "count of (λ, j) where the two rules disagree"

    @guarded_check("wigner", "pauli_vs_wigner", tolerance=1e-10)
    def wigner_pauli_functions(self):
        worst = 0.0
        for theta, phi in self._angles(25):
            twoj = int(self.rng.integers(0, 8))
            twolam = int(self.rng.choice(np.arange(-twoj, twoj + 1, 2)))
            twom = int(self.rng.choice(np.arange(-twoj, twoj + 1, 2)))
            lam, j, m = HalfInt(twolam), HalfInt(twoj), HalfInt(twom)
            worst = max(worst, abs(complex(pauli_phi(lam, j, m, theta, phi)) - complex(pauli_phi_from_wigner(lam, j, m, theta, phi))))
        return worst

    @guarded_check("wigner", "pauli_ladder", tolerance=1e-7)
    def wigner_pauli_ladder(self):
        """J₃Φ = mΦ on every column, J₊ kills m = j and J₋ kills m = −j."""
        worst = 0.0
        for theta, phi in self._angles(5):
            for twoj, twolam in ((1, 1), (3, -1), (5, 3)):
                ops = pauli_J_operators(HalfInt(twolam))
                for twom in range(-twoj, twoj + 1, 2):
                    column = partial(pauli_phi_from_wigner, HalfInt(twolam), HalfInt(twoj), HalfInt(twom))
                    value = complex(column(theta, phi))
                    worst = max(worst, abs(complex(ops["three"](column)(theta, phi)) - twom / 2 * value))
                    if twom == twoj:
                        worst = max(worst, abs(complex(ops["plus"](column)(theta, phi))))
                    if twom == -twoj:
                        worst = max(worst, abs(complex(ops["minus"](column)(theta, phi))))
        return worst

    # --- algebra ---
    @guarded_check("algebra", "t0_formula", tolerance=1e-14)
    def algebra_t0(self):
        return float(np.max(np.abs(t0_from_squares() - t0_projector())))

    @guarded_check("algebra", "commutators", tolerance=1e-14)
    def algebra_commutators(self):
        t = cyclic_generators()
        worst = 0.0
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            worst = max(worst, float(np.max(np.abs(commutator(t[a], t[b]) - 1j * t[c]))))
        for k, jk in enumerate(cartesian_generators()):
            worst = max(worst, float(np.max(np.abs(to_cyclic(jk) - t[k]))))
        return worst

    @guarded_check("algebra", "t_tilde0_projector", tolerance=1e-11)
    def algebra_projector(self):
        worst = 0.0
        for theta, phi in self._angles(settings.SAMPLES, margin=0.0):
            p = t_tilde0(theta, phi)
            worst = max(worst, float(np.max(np.abs(p @ p - p))))
        return worst

    @guarded_check("algebra", "exponential_identity", tolerance=1e-11)
    def algebra_exponential(self):
        worst = 0.0
        for theta, phi in self._angles(settings.SAMPLES, margin=0.0):
            A = complex(self.rng.normal(), 0.3 * self.rng.normal())
            U = u_cartesian(theta, phi)
            lhs = U @ delta_matrix(A) @ np.linalg.inv(U)
            worst = max(worst, float(np.max(np.abs(lhs - exp_iso_rotation(-A, unit_radial(theta, phi))))))
        return worst

    @guarded_check("algebra", "gibbs_composition", tolerance=1e-12)
    def algebra_gibbs(self):
        worst = 0.0
        for _ in range(settings.SAMPLES):
            outer, inner = self.rng.normal(scale=0.7, size=3), self.rng.normal(scale=0.7, size=3)
            if abs(1 - outer @ inner) < 1e-3:
                continue
            composed = gibbs_rotation(compose_gibbs(outer, inner))
            worst = max(worst, float(np.max(np.abs(gibbs_rotation(outer) @ gibbs_rotation(inner) - composed))))
        return worst

    @guarded_check("algebra", "spinor_vector_map", tolerance=1e-11)
    def algebra_vector_map(self):
        worst = 0.0
        for _ in range(20):
            outer, inner = self.rng.normal(scale=0.7, size=3), self.rng.normal(scale=0.7, size=3)
            b = sl2c_from_gibbs(outer) @ sl2c_from_gibbs(inner)
            image = vector_map_of(b)[1:, 1:]
            worst = max(worst, float(np.max(np.abs(image - gibbs_rotation(compose_gibbs(outer, inner))))))
        return worst

    @guarded_check("algebra", "clifford", tolerance=1e-14)
    def algebra_clifford(self):
        worst = 0.0
        for mu in range(4):
            for nu in range(4):
                target = 2 * METRIC[mu, nu] * np.eye(4)
                worst = max(worst, float(np.max(np.abs(anticommutator(GAMMA[mu], GAMMA[nu]) - target))))
        return worst

    # --- gauges ---
    def _gauge_points(self, n: int = 12) -> List[tuple]:
        return [(float(self.rng.uniform(0.2, 4.0)), theta, phi) for theta, phi in self._angles(n, margin=0.2)]

    @guarded_check("gauges", "hedgehog_to_dirac", tolerance=1e-9)
    def gauges_to_dirac(self):
        moved = gauge_transform(hedgehog_potential(self.profile), hedgehog_to_dirac_field(), "dirac")
        target = dirac_potential(self.profile)
        worst = 0.0
        for r, theta, phi in self._gauge_points():
            worst = max(worst, potential_deviation(moved, target, r, theta, phi))
            worst = max(worst, float(np.max(np.abs(moved.higgs_at(r, theta, phi) - target.higgs_at(r, theta, phi)))))
        return worst

    @guarded_check("gauges", "dirac_to_schwinger", tolerance=1e-9)
    def gauges_to_schwinger(self):
        moved = gauge_transform(dirac_potential(self.profile), dirac_to_schwinger_field(), "schwinger")
        target = schwinger_potential(self.profile)
        worst = 0.0
        for r, theta, phi in self._gauge_points():
            worst = max(worst, potential_deviation(moved, target, r, theta, phi))
        return worst

    @guarded_check("gauges", "radial_field", tolerance=1e-6)
    def gauges_radial_field(self):
        worst = 0.0
        e = self.profile.e
        for r, theta, phi in self._gauge_points(6):
            w = float(self.profile.W(np.array(r)))
            expected = abs(1 - w * w) / (e * r * r)
            for build in (hedgehog_potential, dirac_potential, schwinger_potential):
                worst = max(worst, abs(radial_magnetic_field(build(self.profile), r, theta, phi) - expected) / expected)
        return worst

    @guarded_check("gauges", "abelian_embedding", tolerance=1e-12)
    def gauges_abelian(self):
        trivial = builtin_profiles("trivial")
        worst = 0.0
        for r, theta, phi in self._gauge_points(6):
            for frame in ("dirac", "schwinger"):
                worst = max(worst, abelian_embedding_check(trivial, r, theta, phi, frame).deviation)
        return worst

    # --- discrete ---
    @guarded_check("discrete", "dichotomy_config", tolerance=0.0)
    def discrete_dichotomy(self):
        verdict = commutation_dichotomy(self.profile, self.j, self.alpha)
        expectation = "commutes" if verdict.expected else "does not commute"
        return float(not verdict.consistent), f"expected: {expectation}; ‖[N, M]‖={verdict.norm:.3e}"

    @guarded_check("discrete", "dichotomy_reference", tolerance=0.0)
    def discrete_dichotomy_reference(self):
        bps = builtin_profiles("bps")
        cases = (
            (builtin_profiles("trivial"), cmath.exp(0.7j)),
            (builtin_profiles("trivial"), 1.0 + 0.5j),
            (bps, cmath.exp(0.7j)),
            (bps, 1.0),
            (bps, -1.0),
        )
        wrong = sum(not commutation_dichotomy(profile, self.j, alpha).consistent for profile, alpha in cases)
        return float(wrong), "W = 0 or α = ±1 commute; BPS with α = e^{0.7i} does not"

    @guarded_check("discrete", "eigen_constraints", tolerance=1e-12)
    def discrete_eigen(self):
        worst = 0.0
        for delta in (1, -1):
            state = sector_state(self.j, self.m, delta, self.A, self.rng)
            scale = float(np.max(np.abs(state.amplitudes))) or 1.0
            worst = max(worst, eigen_residual(state) / scale)
        return worst

    @guarded_check("discrete", "frame_conjugation", tolerance=1e-10)
    def discrete_frames(self):
        state = sector_state(self.j, self.m, 1, self.A, self.rng)
        psi = field_of(state)
        points = random_points(5, seed=settings.SEED)
        return max(frame_conjugation_residual(self.alpha, frame, psi, points) for frame in ("dirac", "cartesian"))

    @guarded_check("discrete", "basis_change_identity", tolerance=1e-11)
    def discrete_basis_change(self):
        gamma_ = complex(self.rng.normal(), 0.2 * self.rng.normal())
        return max(conjugation_residuals(self.A, gamma_, self.j).values())

    @guarded_check("discrete", "k_h_sector", tolerance=1e-6)
    def discrete_k_sector(self):
        worst = 0.0
        for delta in (1, -1):
            state = h_sector_state(self.j, self.m, delta, self.A, self.rng)
            decomposition = k_decompose(state)
            scale = float(np.max(np.abs(state.amplitudes)))
            worst = max(worst, decomposition.residual / scale, decomposition.fd_residual / scale)
            # N̂ keeps the K̂ eigenspace
            image = n_amplitude_matrix(self.j, state.alpha) @ state.amplitudes
            stability = k_operator_matrix(self.j) @ image - decomposition.expected * image
            worst = max(worst, float(np.max(np.abs(stability))) / scale)
        return worst

    @guarded_check("discrete", "k_f_sector", tolerance=1e-6)
    def discrete_k_f_sector(self):
        j = self.j.value
        worst = 0.0
        for mu in (1, -1) if self.j.twice > 1 else (None,):
            state = f_sector_state(self.j, self.m, mu, self.rng)
            decomposition = k_decompose(state)
            if decomposition.sector != "f" or decomposition.mu != mu:
                raise ClassificationError(f"expected the f-sector with μ={mu}, got {decomposition.sector} μ={decomposition.mu}")
            # λ = μ·√((j − 1/2)(j + 3/2)), zero at j = 1/2
            closed = (mu or 0) * math.sqrt((j - 0.5) * (j + 1.5))
            scale = float(np.max(np.abs(state.amplitudes)))
            worst = max(
                worst,
                abs(decomposition.expected - closed),
                decomposition.residual / scale,
                decomposition.fd_residual / scale,
            )
        return worst

    # --- radial ---
    def _clean_profile(self) -> MonopoleProfile:
        return self.profile.without_dyon_terms()

    @guarded_check("radial", "printed_full", tolerance=1e-10)
    def radial_printed_full(self):
        case = "full_min" if self.j.twice == 1 else "full_j"
        system = RadialSystem.build(case, self.profile, self.j, self.config.epsilon, self.config.mass)
        return max(
            printed_residual(case, system.generator(r), system.printed_params(r), self.rng)
            for r in (0.3, 1.0, 3.7)
        )

    @guarded_check("radial", "printed_reduced", tolerance=1e-10)
    def radial_printed_reduced(self):
        prefix = "reduced_min_" if self.j.twice == 1 else "reduced_"
        case = prefix + ("W0" if w_vanishes(self.profile) else "W")
        worst = 0.0
        for delta in (1, -1):
            system = RadialSystem.build(case, self._clean_profile(), self.j, self.config.epsilon, self.config.mass, delta=delta)
            for r in (0.3, 1.0, 3.7):
                worst = max(worst, printed_residual(case, system.generator(r), system.printed_params(r), self.rng))
        return worst

    @guarded_check("radial", "sector_reduction", tolerance=1e-10)
    def radial_reduction(self):
        report = constraint_reduction_check(self.j, self.config.delta, self.alpha, self.profile)
        alpha_eff_one = abs(self.alpha - 1) < 1e-12 or abs(self.alpha + 1) < 1e-12
        if w_vanishes(self.profile) or alpha_eff_one:
            residual = max(report.inconsistency, report.match or 0.0)
            return residual, "constraints close on the full system"
        # W ≠ 0 with α ≠ ±1: the constraints must be reported inconsistent
        return float(report.consistent), f"inconsistency={report.inconsistency:.3e} (expected above threshold)"

    @guarded_check("radial", "block_independence", tolerance=0.0)
    def radial_blocks(self):
        prefix = "reduced_min_" if self.j.twice == 1 else "reduced_"
        system = RadialSystem.build(prefix + "W0", builtin_profiles("trivial"), self.j, self.config.epsilon, self.config.mass)
        f_idx, h_idx = system.blocks()
        M = system.generator(0.77)
        return float(np.max(np.abs(M[np.ix_(f_idx, h_idx)])) + np.max(np.abs(M[np.ix_(h_idx, f_idx)])))

    @guarded_check("radial", "conserved_current", tolerance=1e-10)
    def radial_current(self):
        system = k_sector_system(self.j, "h", builtin_profiles("trivial"), self.config.epsilon, self.config.mass)
        J = conserved_current(system).matrix
        worst = 0.0
        for r in (0.5, 2.2, 6.1):
            M = system.generator(r)
            worst = max(worst, float(np.max(np.abs(M.conj().T @ J + J @ M))))
        return worst

    @guarded_check("radial", "self_convergence", tolerance=0.3)
    def radial_convergence(self):
        system = k_sector_system(self.j, "h", builtin_profiles("trivial"), self.config.epsilon, self.config.mass)
        order = self_convergence_order(system, 0.5, 3.0, [1.0, 0.5j])
        return max(0.0, 4.0 - order), f"observed order {order:.2f}"

    @guarded_check("radial", "bessel_oracle", tolerance=1e-7)
    def radial_bessel(self):
        epsilon = abs(self.config.epsilon) or 0.5
        return bessel_oracle_residual(self.j, epsilon, radius=5.0), f"ε={epsilon:g}, r=5"

    # --- matelem ---
    @guarded_check("matelem", "selection_rules", tolerance=0.0)
    def matelem_selection(self):
        A = complex(self.A.real)
        G = norm_observable()
        states = [sector_state(self.j, self.m, delta, A, self.rng) for delta in (1, -1)]
        pairs = [(bra, ket) for bra in states for ket in states]
        rows = selection_rule_check(G, A, pairs, self.config.quad_theta, self.config.quad_phi)
        verdicts = ", ".join(f"{r.delta:+d}{r.delta_p:+d}:{r.verdict}" for r in rows)
        return float(sum(not r.passed for r in rows)), verdicts

    @guarded_check("matelem", "expectation_expansion", tolerance=1e-9)
    def matelem_expansion(self):
        state = sector_state(self.j, self.m, self.config.delta, self.A, self.rng)
        breakdown = expectation_expansion(state, norm_observable(), self.config.quad_theta, self.config.quad_phi)
        return breakdown.residual / max(1.0, abs(breakdown.direct))

    @guarded_check("matelem", "quadrature_doubling", tolerance=1e-10)
    def matelem_doubling(self):
        state = sector_state(self.j, self.m, 1, complex(self.A.real), self.rng)
        G = norm_observable()
        n_theta, n_phi = self.config.quad_theta, self.config.quad_phi
        coarse = matrix_element(state, G, state, n_theta, n_phi)
        fine = matrix_element(state, G, state, 2 * n_theta, 2 * n_phi)
        return abs(coarse - fine) / max(1.0, abs(fine))

    @guarded_check("matelem", "catalog_hermiticity", tolerance=1e-12)
    def matelem_catalog(self):
        points = random_points(10)
        return max(
            (G.hermiticity_residual(points) for G in load_observable_catalog() if G.hermitian),
            default=0.0,
        )


def bessel_oracle_residual(j: HalfInt, epsilon: float, radius: float = 5.0) -> float:
    """
    Massless h-sector at W = 0 against the spherical Bessel solution:
    h₁ + h₂ ∝ S_a(εr), h₁ − h₂ ∝ −i·S_{a−1}(εr), S_n(x) = x·j_n(x), a = j + 1/2.
    """
    system = k_sector_system(j, "h", builtin_profiles("trivial"), epsilon, 0.0)
    start = frobenius_start(system)
    if start.dimension != 1:
        raise WorkflowError(f"expected one regular solution, found {start.dimension}")
    solution = integrate(system, start.r0, radius, start.initial_vectors()[:, 0])
    h1, h2 = solution.Y[:, -1]
    a = int(j.value + 0.5)
    x = epsilon * radius
    s_a, s_lower = x * spherical_jn(a, x), x * spherical_jn(a - 1, x)
    scale = (h1 + h2) / s_a
    return abs((h1 - h2) - scale * (-1j) * s_lower) / abs(scale)


# === observable catalog ===
def _matrix_from_spec(value) -> np.ndarray:
    if isinstance(value, str):
        return named_matrix(value)
    return np.array([[parse_complex(entry) for entry in row] for row in value], dtype=complex)


def observable_from_spec(spec: ObservableSpec) -> Observable:
    iso, bispinor = _matrix_from_spec(spec.iso), _matrix_from_spec(spec.bispinor)
    if iso.shape != (3, 3) or bispinor.shape != (4, 4):
        raise ObservableSpecError(f"{spec.name}: iso must be 3×3 and bispinor 4×4, got {iso.shape} and {bispinor.shape}")
    return Observable.constant(spec.name, iso, bispinor, radial=RADIAL_TAGS[spec.radial], hermitian=spec.hermitian)


def load_observable_catalog(path: str | Path | None = None) -> List[Observable]:
    path = Path(path or DEFAULT_CATALOG)
    try:
        document = load_yaml_file(path)
    except yaml.YAMLError as e:
        system_logger.error(e, additional_info={"path": str(path)})
        raise ObservableSpecError(f"unreadable YAML: {e}", position=str(path)) from e
    entries = (document or {}).get("observables") if isinstance(document, dict) else None
    if not isinstance(entries, list) or not entries:
        raise ObservableSpecError("expected a non-empty 'observables' list", position=str(path))

    catalog = []
    for index, entry in enumerate(entries):
        position = f"{path}:observables[{index}]"
        try:
            spec = ObservableSpec.model_validate(entry)
            catalog.append(observable_from_spec(spec))
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(part) for part in first["loc"])
            raise ObservableSpecError(first["msg"], position=f"{position}.{loc}" if loc else position) from e
        except MonopoleTripletError as e:
            raise ObservableSpecError(str(e), position=position) from e
    return catalog


# === command workflows ===
def run_verify(config: RunConfig) -> List[CheckRow]:
    return SuiteRunner(config).run(config.suite)


def default_case(config: RunConfig, profile: MonopoleProfile) -> str:
    if config.case:
        return config.case
    minimal = config.twoj == 1
    if profile.has_dyon_terms:
        return "full_min" if minimal else "full_j"
    w_zero = w_vanishes(profile)
    prefix = "reduced_min_" if minimal else "reduced_"
    return prefix + ("W0" if w_zero else "W")


def build_system(config: RunConfig) -> RadialSystem:
    profile = parse_profile_spec(config.profile, kappa=config.kappa)
    case = default_case(config, profile)
    return RadialSystem.build(
        case,
        profile,
        HalfInt(config.twoj),
        config.epsilon,
        config.mass,
        delta=config.delta,
        alpha=config.alpha_value if config.alpha_value is not None else alpha_of(config.A_value),
    )


def regular_solutions(system: RadialSystem, points: int) -> pd.DataFrame:
    """Every Frobenius-regular solution on the geometric grid, long format."""
    start = frobenius_start(system)
    grid = geometric_grid(start.r0, default_rmax(system), points)
    frames = []
    for index, vector in enumerate(start.initial_vectors().T):
        solution = integrate(system, start.r0, float(grid[-1]), vector, t_eval=grid)
        frame = solution.to_frame()
        frame.insert(0, "solution", index)
        frames.append(frame)
    if not frames:
        return pd.DataFrame(columns=["solution", "r"])
    return pd.concat(frames, ignore_index=True)


def run_spectrum(config: RunConfig) -> tuple[pd.DataFrame, Dict[str, Any]]:
    try:
        system = build_system(config)
        solutions = regular_solutions(system, config.radial_points)
        lo = config.eps_min if config.eps_min is not None else -0.9 * config.mass
        hi = config.eps_max if config.eps_max is not None else 0.9 * config.mass
        if hi <= lo:
            logger.info("empty energy window (%g, %g); skipping the shooting scan", lo, hi)
            scan, modes = pd.DataFrame(columns=["epsilon", "matching", "regular_dim", "decaying_dim"]), []
        else:
            grid = np.linspace(lo, hi, settings.SCAN_POINTS)
            scan = scan_matching(system, grid)
            modes = find_modes(system, (lo, hi), tol=config.tol)
    except MonopoleTripletError:
        raise
    except Exception as e:
        system_logger.error(e, additional_info={"command": "spectrum"}, exc_info=True)
        raise WorkflowError(f"spectrum failed: {e}") from e

    records = [
        ModeRecord(
            epsilon=mode.epsilon,
            matching=mode.matching,
            ode_residual=mode.residual,
            norm=mode.solution.norm,
        )
        for mode in modes
    ]
    document = {
        "case": system.case,
        "j": str(system.j),
        "delta": system.delta,
        "variables": list(system.variables),
        "scan": scan.replace({np.nan: None}).to_dict(orient="records"),
        "modes": [record.model_dump() for record in records],
    }
    return solutions, document


def run_matelem(config: RunConfig) -> List[MatElemRow]:
    """All ordered pairs of δ = ±1 states at J ∈ {j, j + 1} for every catalog observable."""
    catalog = load_observable_catalog(config.observables)
    rng = np.random.default_rng(settings.SEED)
    A = config.A_value
    m = HalfInt(config.twom)
    states = [
        sector_state(HalfInt(config.twoj + 2 * step), m, delta, A, rng, label=f"J{step}{delta:+d}")
        for step in (0, 1)
        for delta in (1, -1)
    ]
    pairs = [(bra, ket) for bra in states for ket in states]
    growth = math.exp(-2 * A.imag) if A.imag else None

    rows: List[MatElemRow] = []
    for G in catalog:
        try:
            checked = selection_rule_check(G, A, pairs, config.quad_theta, config.quad_phi)
            for row in checked:
                rows.append(
                    MatElemRow(
                        observable=G.name,
                        J=row.J,
                        J_p=row.J_p,
                        delta=row.delta,
                        delta_p=row.delta_p,
                        omega=row.omega,
                        factor_re=row.factor.real,
                        factor_im=row.factor.imag,
                        value_re=row.value.real,
                        value_im=row.value.imag,
                        verdict=row.verdict if row.passed else f"{row.verdict}:violated",
                        growth=growth,
                    )
                )
        except UnclassifiedObservableError:
            logger.info("%s has no N-parity at A=%s; reporting plain matrix elements", G.name, A)
            for bra, ket in pairs:
                value = matrix_element(bra, G, ket, config.quad_theta, config.quad_phi)
                rows.append(
                    MatElemRow(
                        observable=G.name,
                        J=str(bra.j),
                        J_p=str(ket.j),
                        delta=bra.delta,
                        delta_p=ket.delta,
                        omega=None,
                        factor_re=math.nan,
                        factor_im=math.nan,
                        value_re=value.real,
                        value_im=value.imag,
                        verdict="unclassified",
                        growth=growth,
                    )
                )
    return rows


def run_gauge_table(config: RunConfig) -> List[GaugeRow]:
    """Deviation of the gauge-transformed hedgehog from each unitary frame on a fixed grid."""
    profile = parse_profile_spec(config.profile, kappa=config.kappa)
    hedgehog = hedgehog_potential(profile)
    to_dirac = gauge_transform(hedgehog, hedgehog_to_dirac_field(), "dirac")
    to_schwinger = gauge_transform(to_dirac, dirac_to_schwinger_field(), "schwinger")
    pairs = (("dirac", to_dirac, dirac_potential(profile)), ("schwinger", to_schwinger, schwinger_potential(profile)))
    rows = []
    for r in (0.25, 0.5, 1.0, 2.0, 4.0):
        for theta in (0.4, 1.1, 1.9, 2.6):
            for phi in (0.3, 1.7, 4.0):
                for frame, moved, target in pairs:
                    rows.append(
                        GaugeRow(
                            r=r,
                            theta=theta,
                            phi=phi,
                            frame=frame,
                            deviation=potential_deviation(moved, target, r, theta, phi),
                            radial_field=radial_magnetic_field(target, r, theta, phi),
                        )
                    )
    return rows

