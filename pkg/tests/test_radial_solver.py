import numpy as np
import pytest
from scipy import linalg

import powerlog.radial_solver
from powerlog import airy, potentials
from powerlog.exceptions import (
    ConsistencyError,
    ConvergenceError,
    DatasetLookupError,
    DomainError,
)
from powerlog.potentials import PotentialSpec, QuantumNumbers
from powerlog.prep import exact_energy
from powerlog.radial_solver import (
    Eigenresult,
    RadialProblem,
    SolverConfig,
    first_pass_energy,
    solve_eigenvalue,
    solve_spectrum,
)


def reference_level(spec: PotentialSpec, qn: QuantumNumbers, r_max: float, m: int):
    """Richardson-extrapolated level of the banded finite-difference matrix."""

    def level(intervals: int) -> float:
        h = r_max / intervals
        r = h * np.arange(1, intervals)
        veff = potentials.effective_potential_on_grid(spec, qn.ell, r)
        band = np.vstack(
            [np.full(intervals - 1, -1.0 / h ** 2), 2.0 / h ** 2 + veff]
        )
        values = linalg.eig_banded(
            band,
            eigvals_only=True,
            select="i",
            select_range=(qn.n - 1, qn.n - 1),
        )
        return float(values[0])

    return (4.0 * level(2 * m) - level(m)) / 3.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grid_points": 10},
        {"tolerance": 0.0},
        {"r_min": -1.0},
        {"r_max": 0.0},
        {"r_min": 2.0, "r_max": 1.0},
        {"grid_points": 5000, "max_grid_points": 4000},
        {"tail_tolerance": 0.0},
    ],
)
def test_invalid_solver_config(kwargs):
    with pytest.raises(DomainError):
        SolverConfig(**kwargs)


def test_cache_key_follows_the_settings():
    assert SolverConfig().cache_key() == SolverConfig().cache_key()
    assert SolverConfig().cache_key() != SolverConfig(tolerance=1e-7).cache_key()


@pytest.mark.parametrize(
    "n, ell, expected",
    [(1, 0, -0.25), (2, 0, -1.0 / 16.0), (1, 1, -1.0 / 16.0), (2, 2, -1.0 / 64.0)],
)
def test_coulomb_levels(n, ell, expected):
    result = solve_eigenvalue(PotentialSpec.power(-1), QuantumNumbers(n, ell))
    assert result.energy == pytest.approx(expected, abs=1e-5)


@pytest.mark.parametrize(
    "n, ell, expected", [(1, 0, 3.0), (2, 0, 7.0), (1, 2, 7.0), (3, 1, 13.0)]
)
def test_oscillator_levels(n, ell, expected):
    result = solve_eigenvalue(PotentialSpec.power(2), QuantumNumbers(n, ell))

    assert result.energy == pytest.approx(expected, abs=1e-5)
    assert result.node_count == n - 1
    assert result.estimated_error <= 1e-6


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_linear_s_states_match_airy_zeros(n, table_config):
    qn = QuantumNumbers(n, 0)
    result = solve_eigenvalue(PotentialSpec.power(1), qn, table_config)
    assert result.energy == pytest.approx(airy.linear_s_state_energy(n), abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("q", [-1, 2])
def test_closed_form_levels_of_every_printed_row(q, table_config):
    spectrum = solve_spectrum(PotentialSpec.power(q), 5, 4, table_config)

    assert len(spectrum) == 25
    for qn, result in spectrum:
        assert result.energy == pytest.approx(exact_energy(q, qn), abs=1e-6)
        assert result.node_count == qn.n - 1


@pytest.mark.slow
def test_coulomb_levels_depend_on_n_plus_ell(table_config):
    spectrum = solve_spectrum(PotentialSpec.power(-1), 4, 3, table_config)

    for n in range(1, 4):
        for ell in range(3):
            assert spectrum.energy(n + 1, ell) == pytest.approx(
                spectrum.energy(n, ell + 1), abs=2e-6
            )


def test_oscillator_levels_depend_on_2n_plus_ell(table_config):
    spectrum = solve_spectrum(PotentialSpec.power(2), 3, 4, table_config)

    for n in range(1, 3):
        for ell in range(3):
            assert spectrum.energy(n + 1, ell) == pytest.approx(
                spectrum.energy(n, ell + 2), abs=2e-6
            )


@pytest.mark.parametrize(
    "spec, n, ell, expected",
    [
        (PotentialSpec.log(), 1, 0, 1.04433226),
        (PotentialSpec.log(), 2, 0, 1.84744258),
        (PotentialSpec.log(), 1, 1, 1.64114134),
        (PotentialSpec.power(0.5), 1, 0, 1.83339361),
        (PotentialSpec.power(0.5), 4, 4, 4.17268191),
    ],
)
def test_reference_levels(spec, n, ell, expected):
    result = solve_eigenvalue(spec, QuantumNumbers(n, ell))
    assert result.energy == pytest.approx(expected, abs=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize(
    "spec, r_max, m",
    [
        (PotentialSpec.power(-1), 200.0, 16000),
        (PotentialSpec.power(0.5), 40.0, 3000),
        (PotentialSpec.log(), 60.0, 4000),
        (PotentialSpec.power(1), 20.0, 2000),
        (PotentialSpec.power(2), 10.0, 2000),
    ],
)
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("ell", [0, 1])
def test_agrees_with_banded_matrix(spec, r_max, m, n, ell):
    qn = QuantumNumbers(n, ell)
    expected = reference_level(spec, qn, r_max=r_max, m=m)

    assert solve_eigenvalue(spec, qn).energy == pytest.approx(expected, abs=1e-5)


def test_error_shrinks_as_the_grid_is_refined():
    spec = PotentialSpec.power(2)
    errors = []
    for grid_points in (500, 1000, 2000):
        # a loose tolerance keeps the solver on the requested mesh
        cfg = SolverConfig(
            grid_points=grid_points, r_max=10.0, richardson=False, tolerance=1.0
        )
        energy = solve_eigenvalue(spec, QuantumNumbers(1, 0), cfg).energy
        errors.append(abs(energy - 3.0))

    assert errors[0] > errors[1] > errors[2]
    assert 3.5 < errors[0] / errors[1] < 4.5
    assert 3.5 < errors[1] / errors[2] < 4.5


@pytest.mark.parametrize(
    "spec, bare_energy",
    [
        (PotentialSpec.log(mu=0.5, v=2.0), 1.04433226),
        (PotentialSpec.power(-1, mu=0.5, v=2.0), -0.25),
    ],
)
def test_scaling_law(spec, bare_energy):
    result = solve_eigenvalue(spec, QuantumNumbers(1, 0))
    expected = potentials.scale_eigenvalue(spec, bare_energy)

    assert result.energy == pytest.approx(expected, abs=1e-5)


def test_linear_scaling_example():
    spec = PotentialSpec.power(1, mu=2.0, v=3.0)
    expected = 2.0 * 1.5 ** (2.0 / 3.0) * 2.338107410459767
    assert solve_eigenvalue(spec, QuantumNumbers(1, 0)).energy == pytest.approx(
        expected, abs=1e-5
    )


def test_without_richardson():
    cfg = SolverConfig(richardson=False, tolerance=1e-4)
    result = solve_eigenvalue(PotentialSpec.power(2), QuantumNumbers(1, 0), cfg)

    assert result.energy == pytest.approx(3.0, abs=1e-3)
    assert result.estimated_error <= 1e-4


def test_config_used_reports_the_final_mesh():
    cfg = SolverConfig(r_min=0.001)
    result = solve_eigenvalue(PotentialSpec.power(2), QuantumNumbers(1, 0), cfg)
    used = result.config_used

    assert result.energy == pytest.approx(3.0, abs=1e-5)
    assert used.r_min <= 0.001
    assert used.r_max == pytest.approx(used.r_min * (used.grid_points + 1))
    assert used.tolerance == cfg.tolerance


def test_box_too_small_for_the_level():
    cfg = SolverConfig(r_max=1.5)
    with pytest.raises(ConvergenceError) as e:
        solve_eigenvalue(PotentialSpec.power(2), QuantumNumbers(1, 0), cfg)

    assert e.value.check == "tail"
    assert e.value.level == (1, 0)
    assert "level (n=1, ell=0)" in str(e.value)


def test_coulomb_level_not_bound_in_small_box():
    cfg = SolverConfig(r_max=5.0)
    with pytest.raises(ConvergenceError) as e:
        solve_eigenvalue(PotentialSpec.power(-1), QuantumNumbers(3, 0), cfg)

    assert e.value.check == "bound"


def test_tolerance_out_of_reach():
    cfg = SolverConfig(tolerance=1e-13, grid_points=1000, max_grid_points=5000)
    with pytest.raises(ConvergenceError) as e:
        solve_eigenvalue(PotentialSpec.power(2), QuantumNumbers(1, 0), cfg)

    assert e.value.check == "refinement"


def test_r_min_needs_too_many_points():
    cfg = SolverConfig(r_min=1e-6, max_grid_points=1_000_000)
    with pytest.raises(ConvergenceError) as e:
        solve_eigenvalue(PotentialSpec.power(2), QuantumNumbers(1, 0), cfg)

    assert e.value.check == "refinement"


@pytest.mark.parametrize("q, expected", [(-1, -0.25), (2, 3.0)])
def test_first_pass_energy_is_exact_at_the_closed_form_nodes(q, expected):
    spec = PotentialSpec.power(q)
    assert first_pass_energy(spec, QuantumNumbers(1, 0)) == pytest.approx(expected)


def test_count_nodes_and_tail_amplitude():
    x = np.linspace(0.0, 3.0 * np.pi, 1001)[1:-1]
    u = np.sin(x)

    assert RadialProblem.count_nodes(u) == 2
    assert RadialProblem.tail_amplitude(u) == pytest.approx(
        np.abs(u[int(len(u) * 0.95):]).max() / np.abs(u).max()
    )
    assert RadialProblem.tail_amplitude(np.exp(-2.0 * x)) < 1e-5


@pytest.mark.parametrize("workers", [1, 2])
def test_solve_spectrum(workers):
    table = solve_spectrum(PotentialSpec.power(2), 2, 1, workers=workers)

    assert len(table) == 4
    assert [(qn.n, qn.ell) for qn in table.levels()] == [(1, 0), (2, 0), (1, 1), (2, 1)]
    for qn, result in table:
        assert result.energy == pytest.approx(4 * qn.n + 2 * qn.ell - 1, abs=1e-5)

    with pytest.raises(DatasetLookupError):
        table.energy(3, 0)


@pytest.mark.parametrize("n_max, ell_max", [(0, 1), (1, -1)])
def test_solve_spectrum_invalid_ranges(n_max, ell_max):
    with pytest.raises(DomainError):
        solve_spectrum(PotentialSpec.power(2), n_max, ell_max)


def test_solve_spectrum_checks_the_order_in_ell(monkeypatch: pytest.MonkeyPatch):
    def swapped(spec, qn, cfg=None):
        # the p-wave level falls below the s-wave level
        energy = 3.0 if qn.ell == 1 else 5.0
        return Eigenresult(energy, qn.n - 1, SolverConfig(), 1e-9)

    monkeypatch.setattr(powerlog.radial_solver, "solve_eigenvalue", swapped)
    with pytest.raises(ConsistencyError) as e:
        solve_spectrum(PotentialSpec.power(2), 1, 1, workers=1)

    assert e.value.check == "ordering"
    assert e.value.level == (1, 1)
