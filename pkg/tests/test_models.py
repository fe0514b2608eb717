import math

import numpy as np
import pytest

from quantaflux.evolution import time_grid
from quantaflux.hamiltonian import compile_hamiltonian, conserves_total_number
from quantaflux.models import (
    PRESET_NAMES,
    SCENARIOS,
    asymptote,
    closed_form,
    closed_form_pairs,
    closed_norm_squared,
    preset,
    reference_run,
)
from quantaflux.modes import basis_vector

from conftest import B1_THREE_FERMION, B2_THREE_FERMION, B3_THREE_FERMION


class TestPresets:
    def test_names(self):
        assert set(PRESET_NAMES) == {
            "model1",
            "model2",
            "model3-h1",
            "model3-h2",
            "info-ha",
            "info-hb",
        }

    def test_model1_matrix(self):
        h = compile_hamiltonian(preset("model1", {"lambda": 1.0}).hamiltonian)
        expected = np.zeros((4, 4), dtype=complex)
        expected[2, 1] = 1.0
        np.testing.assert_array_equal(h, expected)

    def test_model2_matrix(self):
        h = compile_hamiltonian(preset("model2", {"lambda": 1.0}).hamiltonian)
        r2 = math.sqrt(2.0)
        expected = np.zeros((9, 9), dtype=complex)
        expected[3, 1] = 1.0  # 1-based (4,2)
        expected[4, 2] = r2  # 1-based (5,3)
        expected[6, 4] = r2  # 1-based (7,5)
        expected[7, 5] = 2.0  # 1-based (8,6)
        np.testing.assert_allclose(h, expected, atol=1e-15)

    def test_ring_matrix(self):
        h = compile_hamiltonian(preset("info-ha").hamiltonian)
        expected = (
            B2_THREE_FERMION.conj().T @ B1_THREE_FERMION
            + B3_THREE_FERMION.conj().T @ B2_THREE_FERMION
            + B1_THREE_FERMION.conj().T @ B3_THREE_FERMION
        )
        np.testing.assert_array_equal(h, expected)

    def test_zero_parameters_give_zero_hamiltonian(self):
        with pytest.warns(UserWarning, match="not positive"):
            model = preset("model3-h1", {"lambda": 0.0, "mu": 0.0})
        np.testing.assert_array_equal(
            compile_hamiltonian(model.hamiltonian), np.zeros((8, 8))
        )

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown preset"):
            preset("model9")

    def test_unknown_parameter(self):
        with pytest.raises(ValueError, match="takes parameters"):
            preset("model1", {"mu": 1.0})

    def test_all_presets_conserve_total_number(self):
        for name in PRESET_NAMES:
            assert conserves_total_number(preset(name).hamiltonian)

    def test_default_initials_are_valid(self):
        for name in PRESET_NAMES:
            model = preset(name)
            basis_vector(model.system, model.default_initial)


class TestClosedForms:
    def test_model1_even_split_at_unit_time(self):
        np.testing.assert_allclose(
            closed_form("model1", "10", {"lambda": 1.0}, t=1.0),
            [0.5, 0.5],
            atol=1e-15,
        )

    def test_chain_endpoint_values(self):
        np.testing.assert_allclose(
            closed_form("model3-h2", "001", {"lambda": 1.0, "mu": 1.0}, t=2.0),
            [4.0 / 9.0, 4.0 / 9.0, 1.0 / 9.0],
            atol=1e-15,
        )

    def test_ring_initial_point(self):
        np.testing.assert_allclose(
            closed_form("info-ha", "100", t=0.0), [1.0, 0.0, 0.0], atol=1e-15
        )

    def test_uncovered_pair(self):
        with pytest.raises(ValueError, match="no closed form"):
            closed_form("model1", "99")
        with pytest.raises(ValueError, match="no closed form"):
            closed_form("model3-h1", "111")

    def test_vectorised_over_time(self):
        t = np.linspace(0.0, 5.0, 7)
        values = closed_form("model2", "11", t=t)
        assert values.shape == (2, 7)
        norms = closed_norm_squared("model2", "11", t=t)
        assert norms.shape == (7,)

    def test_engine_matches_every_pair(self):
        times = time_grid()
        for name, init in closed_form_pairs():
            series = reference_run(name, init, times=times)
            oracle = closed_form(name, init, t=times)
            for j in range(oracle.shape[0]):
                np.testing.assert_allclose(
                    series.values[f"n_{j + 1}"],
                    oracle[j],
                    atol=1e-10,
                    err_msg=f"{name}:{init} mode {j + 1}",
                )
            oracle_norm = closed_norm_squared(name, init, t=times)
            relative = np.abs(series.norms**2 - oracle_norm) / np.maximum(
                1.0, oracle_norm
            )
            assert relative.max() <= 1e-10, f"{name}:{init} norm"

    def test_engine_matches_under_parameter_sweeps(self):
        times = time_grid(10.0, 101)
        sweeps = {
            "model2": [{"lambda": 0.5}, {"lambda": 2.0}],
            "model3-h1": [{"lambda": 0.7, "mu": 1.9}],
            "model3-h2": [{"lambda": 10.0, "mu": 1.0}, {"lambda": 1.0, "mu": 10.0}],
        }
        for name, param_list in sweeps.items():
            for params in param_list:
                for pair_name, init in closed_form_pairs():
                    if pair_name != name:
                        continue
                    series = reference_run(name, init, params, times=times)
                    oracle = closed_form(name, init, params, t=times)
                    for j in range(oracle.shape[0]):
                        np.testing.assert_allclose(
                            series.values[f"n_{j + 1}"],
                            oracle[j],
                            atol=1e-10,
                            err_msg=f"{name}:{init} {params}",
                        )

    def test_ring_forms_satisfy_their_own_sum_rule(self):
        # single quantum on the uniform ring: occupations sum to 1
        t = np.linspace(0.0, 10.0, 101)
        for init in ("100", "010", "001"):
            total = closed_form("info-ha", init, t=t).sum(axis=0)
            np.testing.assert_allclose(total, 1.0, atol=1e-12)


class TestRingClosedFormDerivation:
    """Pin the frozen ring formulas against their construction."""

    def test_first_mode_formula_literal(self):
        # the published shape of the first occupation fraction
        t = np.linspace(0.0, 8.0, 81)
        r3 = math.sqrt(3.0)
        expected = (
            3.0
            + 4.0 * np.cosh(r3 * t / 2.0) * np.cos(1.5 * t)
            + 2.0 * np.cosh(r3 * t)
        ) / (3.0 * (1.0 + 2.0 * np.cosh(r3 * t)))
        np.testing.assert_allclose(
            closed_form("info-ha", "100", t=t)[0], expected, atol=1e-14
        )

    def test_norm_squared_formula_literal(self):
        t = np.linspace(0.0, 8.0, 81)
        expected = (1.0 + 2.0 * np.cosh(math.sqrt(3.0) * t)) / 3.0
        np.testing.assert_allclose(
            closed_norm_squared("info-ha", "100", t=t), expected, rtol=1e-14
        )

    def test_companion_modes_from_eigenbasis_oracle(self):
        # independent reconstruction: propagate the single-occupancy block
        # amplitudes through the cyclic eigenbasis and form the fractions
        omega = np.exp(2j * np.pi / 3.0)
        eigenvalues = np.array([1.0, omega.conjugate(), omega])
        t = np.linspace(0.0, 8.0, 41)
        for shift, init in [(0, "100"), (1, "010"), (2, "001")]:
            frozen = closed_form("info-ha", init, t=t)
            for i, ti in enumerate(t):
                phases = np.exp(-1j * eigenvalues * ti)
                amplitudes = np.array(
                    [
                        sum(
                            phases[m] * omega ** (m * (k - shift))
                            for m in range(3)
                        )
                        / 3.0
                        for k in range(3)
                    ]
                )
                weights = np.abs(amplitudes) ** 2
                np.testing.assert_allclose(
                    frozen[:, i], weights / weights.sum(), atol=1e-12
                )


class TestAsymptotes:
    def test_ring_single_quantum_analytic(self):
        result = asymptote("info-ha", "100")
        assert result.method == "analytic"
        np.testing.assert_allclose(result.values, 1.0 / 3.0)

    def test_ring_two_quanta_plateau(self):
        for init in ("110", "011", "101"):
            result = asymptote("info-ha", init)
            assert result.method == "plateau"
            assert result.converged
            np.testing.assert_allclose(result.values, 2.0 / 3.0, atol=1e-3)

    def test_fanin_limits(self):
        params = {"lambda": 2.0, "mu": 1.0}
        result = asymptote("model3-h1", "011", params)
        np.testing.assert_allclose(result.values, [1.0, 1.0 / 5.0, 4.0 / 5.0])

    def test_slow_ring_does_not_plateau(self):
        result = asymptote(
            "info-hb",
            "101",
            {"lambda1": 0.02, "lambda2": 0.03, "lambda3": 0.05},
        )
        assert result.method == "plateau"
        assert not result.converged
        assert result.residual > 1e-6


class TestRingFixedPoints:
    def test_empty_and_full_registers_are_exactly_constant(self):
        times = time_grid(10.0, 41)
        for init in ("000", "111"):
            series = reference_run("info-ha", init, times=times)
            for label in series.labels:
                np.testing.assert_array_equal(
                    series.values[label],
                    np.full(times.size, series.values[label][0]),
                )
            np.testing.assert_array_equal(series.norms, np.ones(times.size))


class TestAnisotropicRing:
    def test_ordering_reversal_persists(self):
        times = time_grid(10.0, 401)
        series = reference_run(
            "info-hb",
            "101",
            {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 30.0},
            times=times,
        )
        n2, n3 = series.values["n_2"], series.values["n_3"]
        assert n2[0] < n3[0]
        reversed_mask = n2 > n3
        first = int(np.argmax(reversed_mask))
        assert 0 < first < times.size
        assert reversed_mask[first:].all()

    def test_all_scenario_triples_plateau_by_ten(self):
        for params in (
            {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 3.0},
            {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 30.0},
            {"lambda1": 1.0, "lambda2": 28.0, "lambda3": 30.0},
        ):
            result = asymptote("info-hb", "101", params, t_max=10.0)
            assert result.converged, params


class TestHomogenization:
    def test_reached_by_moderate_times(self):
        series = reference_run("info-ha", "100", times=np.array([0.0, 7.0]))
        final = np.array([series.values[f"n_{j}"][1] for j in (1, 2, 3)])
        assert np.max(np.abs(final - 1.0 / 3.0)) <= 0.02


class TestDrainTriviality:
    def test_propagator_fixes_all_but_the_transfer_state(self):
        model = preset("model1")
        h = compile_hamiltonian(model.hamiltonian)
        from quantaflux.evolution import propagator

        for t in (0.5, 2.0, 9.0):
            u = propagator(h, t)
            for occ in ((0, 0), (0, 1), (1, 1)):
                state = basis_vector(model.system, occ)
                np.testing.assert_array_equal(u @ state, state)


class TestScenarios:
    def test_catalogue(self):
        assert set(SCENARIOS) == {
            "homogenization",
            "anisotropic-mild",
            "anisotropic-skewed",
            "anisotropic-strong",
        }
        skewed = SCENARIOS["anisotropic-skewed"]
        assert skewed.preset == "info-hb"
        assert skewed.parameters == {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 30.0}
        assert skewed.initial == "101"

    def test_scenarios_resolve_to_presets(self):
        for scenario in SCENARIOS.values():
            model = preset(scenario.preset, scenario.parameters)
            basis_vector(
                model.system, tuple(int(c) for c in scenario.initial)
            )


class TestMiddleOccupationPeak:
    @pytest.mark.parametrize("lam,mu", [(1.0, 1.0), (1.0, 10.0), (10.0, 1.0)])
    def test_scan_of_closed_form_peaks_at_coupling_ratio(self, lam, mu):
        params = {"lambda": lam, "mu": mu}
        t = np.linspace(0.0, 20.0, 200001)
        n2 = closed_form("model3-h2", "001", params, t=t)[1]
        assert n2.max() == pytest.approx(mu / (mu + lam), abs=1e-6)
