import math

import numpy as np
import pytest

from src.api.data_model import RunConfig
from src.error_trace.exceptions import DomainError, ObservableSpecError
from src.services.manager import (
    SuiteRunner,
    WorkflowError,
    bessel_oracle_residual,
    default_case,
    guarded_check,
    load_observable_catalog,
    run_gauge_table,
    run_matelem,
)
from src.services.monopole_triplet_module.monopole_gauges import builtin_profiles
from src.services.monopole_triplet_module.quantum_numbers import HalfInt


class _Checks:
    tol = 1e-3

    @guarded_check("algebra", "small")
    def small(self):
        return 1e-4

    @guarded_check("algebra", "noted", tolerance=0.0)
    def noted(self):
        return 0.0, "exact"

    @guarded_check("algebra", "boom")
    def boom(self):
        raise DomainError("out of range")

    @guarded_check("algebra", "nan")
    def nan(self):
        return math.nan


def test_guarded_check():
    checks = _Checks()
    small = checks.small()
    assert small.passed and small.tolerance == 1e-3
    noted = checks.noted()
    assert noted.passed and noted.note == "exact"
    boom = checks.boom()
    assert not boom.passed
    assert boom.note == "DomainError"
    assert math.isinf(boom.residual)
    assert not checks.nan().passed


def test_unknown_suite():
    with pytest.raises(WorkflowError):
        SuiteRunner(RunConfig(command="verify")).checks("nothing")


def _failures(rows):
    return [(row.suite, row.name, row.residual, row.note) for row in rows if not row.passed]


def test_algebra_suite():
    rows = SuiteRunner(RunConfig(command="verify")).run(["algebra"])
    assert rows
    assert {row.suite for row in rows} == {"algebra"}
    assert _failures(rows) == []


def test_discrete_suite_with_non_unit_alpha():
    config = RunConfig(command="verify", profile="bps:1", alpha="1+0.5i", suite=["discrete"])
    rows = SuiteRunner(config).run(config.suite)
    assert _failures(rows) == []


@pytest.mark.parametrize("twoj, twom", [(1, -1), (3, 1), (5, 3)])
def test_k_sector_checks(twoj, twom):
    runner = SuiteRunner(RunConfig(command="verify", twoj=twoj, twom=twom, suite=["discrete"]))
    rows = {row.name: row for row in (runner.discrete_k_sector(), runner.discrete_k_f_sector())}
    assert rows["k_f_sector"].passed, rows["k_f_sector"]
    assert rows["k_h_sector"].passed


def test_radial_suite():
    rows = SuiteRunner(RunConfig(command="verify")).run(["radial"])
    assert _failures(rows) == []


def test_suites_are_reproducible():
    config = RunConfig(command="verify", suite=["wigner"])
    first = [row.residual for row in SuiteRunner(config).run(config.suite)]
    second = [row.residual for row in SuiteRunner(config).run(config.suite)]
    assert first == second


def test_bessel_oracle():
    assert bessel_oracle_residual(HalfInt(3), 0.9) < 1e-7


def test_default_catalog():
    catalog = load_observable_catalog()
    assert [G.name for G in catalog] == ["identity", "norm", "isospin_charge", "pseudoscalar", "spin_density"]


@pytest.mark.parametrize(
    "body, position",
    [
        ("observables:\n  - name: a\n  - name: b\n    iso: I5\n", "observables[1]"),
        ("observables:\n  - name: a\n  - name: b\n    iso: I4\n", "observables[1]"),
        ("observables:\n  - name: a\n  - iso: I3\n", "observables[1].name"),
        ("observables: []\n", "catalog.yaml"),
        ("something: else\n", "catalog.yaml"),
        ("observables: [\n", "catalog.yaml"),
    ],
)
def test_catalog_errors_carry_a_position(tmp_path, body, position):
    path = tmp_path / "catalog.yaml"
    path.write_text(body)
    with pytest.raises(ObservableSpecError) as err:
        load_observable_catalog(path)
    assert err.value.position.endswith(position)


def test_matelem_with_complex_sector_parameter():
    config = RunConfig(command="matelem", A="0.3+0.4i", quad_theta=24, quad_phi=8)
    rows = run_matelem(config)
    assert len(rows) == 5 * 16
    assert {row.verdict for row in rows} == {"unclassified"}
    assert all(row.growth == pytest.approx(math.exp(-0.8)) for row in rows)


def test_matelem_with_real_sector_parameter():
    config = RunConfig(command="matelem", A="0.3", quad_theta=24, quad_phi=8)
    rows = run_matelem(config)
    assert not [row for row in rows if row.verdict.endswith(":violated")]
    norm_rows = [row for row in rows if row.observable == "norm"]
    assert {row.omega for row in norm_rows} == {1}
    assert all(row.growth is None for row in rows)


def test_gauge_table():
    rows = run_gauge_table(RunConfig(command="gauge-table", profile="bps"))
    assert len(rows) == 120
    assert max(row.deviation for row in rows) < 1e-9
    assert {row.frame for row in rows} == {"dirac", "schwinger"}
    assert all(np.isfinite(row.radial_field) for row in rows)


def test_default_case():
    trivial, bps = builtin_profiles("trivial"), builtin_profiles("bps")
    assert default_case(RunConfig(command="spectrum", twoj=1), trivial) == "reduced_min_W0"
    assert default_case(RunConfig(command="spectrum"), bps) == "reduced_W"
    assert default_case(RunConfig(command="spectrum"), builtin_profiles("bps", kappa=0.3)) == "full_j"
    assert default_case(RunConfig(command="spectrum", case="k_h"), bps) == "k_h"
