import math

import numpy as np
import pytest

import gaussify as g


class TestTmsv:
    def test_q_zero_is_vacuum(self):
        state = g.tmsv(0.0, 3)
        assert state.amps[0, 0] == 1.0
        assert g.norm_sq(state) == 1.0

    def test_half_coefficients_and_norm(self):
        state = g.tmsv(0.5, 40)
        scale = math.sqrt(0.75)
        for n in (0, 1, 5):
            assert state.amps[n, n] == pytest.approx(scale * 0.5**n, abs=1e-15)
        assert g.norm_sq(state) == pytest.approx(1.0, abs=1e-12)

    def test_reduction_entropy(self):
        ent = g.von_neumann_entropy(g.reduce_to_mode(g.tmsv(0.5, 40), "A"))
        assert ent == pytest.approx(1.081704, abs=1e-6)

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            g.tmsv(1.0, 3)
        with pytest.raises(ValueError):
            g.tmsv(-0.1, 3)

    def test_tail_mass(self):
        assert g.tmsv_tail_mass(0.5, 3) == pytest.approx(0.5**8)
        # the truncated table misses exactly the tail
        assert 1.0 - g.norm_sq(g.tmsv(0.5, 3)) == pytest.approx(0.5**8, abs=1e-15)


class TestOptimalT:
    def test_value_at_hundredth(self):
        t_mag, r_mag = g.optimal_t(0.01)
        direct = abs((1.0 - math.sqrt(1.0 + 8.0 * 0.01**2)) / (4.0 * 0.01))
        assert t_mag == pytest.approx(direct, abs=0)
        assert t_mag == pytest.approx(0.009998000799599227, abs=1e-15)
        assert r_mag == pytest.approx(math.sqrt(1.0 - t_mag**2), abs=1e-15)

    @pytest.mark.parametrize("q", [1e-3, 1e-4])
    def test_small_q_asymptotic(self, q):
        t_mag, _ = g.optimal_t(q)
        assert t_mag == pytest.approx(q, rel=1e-5)

    def test_unit_target_reduces_to_special_form(self):
        q = 0.07
        general, _ = g.optimal_t(q, target_alpha11=1.0)
        special = abs((1.0 - math.sqrt(1.0 + 8.0 * q * q)) / (4.0 * q))
        assert general == special

    def test_q_zero_degenerate(self):
        with pytest.raises(g.DegenerateStateError, match="no photons"):
            g.optimal_t(0.0)


class TestPrepare:
    def test_matched_output_near_bell(self):
        result = g.prepare(g.PrepConfig.matched(0.01, 8))
        _, dist = g.best_phase_bell_distance(result.state)
        assert dist < 0.05
        # frozen from this simulation at cutoff 8
        assert dist == pytest.approx(7.120767e-4, rel=1e-4)
        assert result.success_probability == pytest.approx(1.999e-8, rel=1e-3)

    def test_distance_decreases_with_q(self):
        dists = []
        for q in (0.05, 0.02, 0.01, 0.005):
            result = g.prepare(g.PrepConfig.matched(q, 6))
            dists.append(g.best_phase_bell_distance(result.state)[1])
        assert all(a > b for a, b in zip(dists, dists[1:]))

    def test_purity_bounded_and_improving(self):
        purities = []
        for q in (0.05, 0.01):
            result = g.prepare(g.PrepConfig.matched(q, 6))
            value = g.purity(result.state)
            assert 0.0 < value <= 1.0 + 1e-12
            purities.append(value)
        assert purities[1] > purities[0]

    def test_q_zero_rejected(self):
        with pytest.raises(g.DegenerateStateError):
            g.prepare(g.PrepConfig(0.0, g.BeamSplitter.balanced(), g.BeamSplitter(0.0, 1.0), 4))


class TestTargetBell:
    def test_phase_zero_properties(self):
        rho = g.target_bell(0.0, cutoff=1)
        assert rho.trace == pytest.approx(1.0, abs=1e-15)
        assert g.purity(rho) == pytest.approx(1.0, abs=1e-12)
        ent = g.von_neumann_entropy(g.reduce_to_mode(rho, "A"))
        assert ent == pytest.approx(1.0, abs=1e-12)

    def test_any_phase_unit_trace_and_purity(self, rng):
        phi = rng.uniform(0, 2 * math.pi)
        rho = g.target_bell(phi, cutoff=2)
        assert rho.trace == pytest.approx(1.0, abs=1e-14)
        assert g.purity(rho) == pytest.approx(1.0, abs=1e-12)

    def test_phase_scan_recovers_planted_phase(self):
        planted = 1.234
        rho = g.target_bell(planted, cutoff=3)
        phi, dist = g.best_phase_bell_distance(rho)
        assert dist < 1e-8
        assert phi == pytest.approx(planted, abs=1e-4)


class TestDistillPipeline:
    def test_zero_iterations_reduces_to_prepare(self):
        result = g.distill_pipeline(0.01, 0.1, 0, 6)
        prep = g.prepare(g.PrepConfig.matched(0.01, 6, 0.1))
        e_prep = g.von_neumann_entropy(g.reduce_to_mode(prep.state, "A"))
        e_init = g.von_neumann_entropy(
            g.reduce_to_mode(g.MixedState2.from_pure(g.tmsv(0.01, 6)), "A")
        )
        assert result.entanglement_ratio == pytest.approx(e_prep / e_init, rel=1e-10)
        assert result.overall_probability == pytest.approx(
            prep.success_probability, rel=1e-12
        )

    def test_demonstrates_gain(self):
        result = g.distill_pipeline(0.01, 0.1, 3, 8)
        assert result.entanglement_ratio > 1.0
        assert result.overall_probability < 1e-3
        assert 0.0 < result.purity <= 1.0 + 1e-12

    def test_pure_rank_one_agrees_with_pure_protocol(self):
        # feed an exactly rank-1 intermediate through the mixed pipeline
        cutoff = 6
        seed = g.from_entries(cutoff, {(0, 0): 1.0, (1, 1): 0.3})
        rho = g.MixedState2.from_pure(seed)
        for _ in range(2):
            stepped = g.mixed_step(rho)
            rho = g.MixedState2(stepped.cutoff, stepped.matrix / stepped.trace)
        e_mixed = g.von_neumann_entropy(g.reduce_to_mode(rho, "A"))
        e_pure = g.procrustean.pure_pipeline_reference(seed, 2, cutoff)
        assert e_mixed == pytest.approx(e_pure, abs=1e-8)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            g.distill_pipeline(0.0, 0.1, 3, 6)
        with pytest.raises(ValueError):
            g.distill_pipeline(0.01, 0.1, -1, 6)
