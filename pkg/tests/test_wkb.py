"""Tests for the semiclassical splitting estimate."""

import math

import numpy as np
import pytest

from dwsplit import exact, experiments, models, wkb


def deep_well(delta_v_height=30.0, width=0.5):
    model = models.solve_parameters(delta_v_height, width)
    dv = lambda x: models.quantum_potential_closed(model, x)
    return model, dv


class TestResultObject:
    def test_field_validation(self):
        with pytest.raises(ValueError, match="straddle"):
            wkb.WkbResult(splitting=1.0, action=1.0, energy=1.0,
                          turning_points=(0.2, 0.5), well_frequency=1.0)
        with pytest.raises(ValueError, match="action"):
            wkb.WkbResult(splitting=1.0, action=-1.0, energy=1.0,
                          turning_points=(-0.5, 0.5), well_frequency=1.0)


class TestTurningPoints:
    def test_potential_equals_energy_at_turning_point(self):
        model, dv = deep_well()
        res = wkb.wkb_splitting(dv, models.curvature_at_minima(model),
                                model.x0)
        x_l, x_r = res.turning_points
        assert x_l == -x_r
        scale = abs(dv(0.0))
        assert abs(dv(x_r) - res.energy) < 1e-10 * scale

    def test_energy_is_half_frequency_above_floor(self):
        model, dv = deep_well()
        res = wkb.wkb_splitting(dv, models.curvature_at_minima(model),
                                model.x0)
        omega = math.sqrt(2.0 * models.curvature_at_minima(model))
        assert res.well_frequency == pytest.approx(omega, rel=1e-12)
        assert res.energy == pytest.approx(dv(model.x0) + 0.5 * omega,
                                           rel=1e-12)


class TestAction:
    def test_window_independence(self):
        # regularization must not move the result beyond quadrature error
        model, dv = deep_well()
        res_half = wkb.wkb_splitting(dv, models.curvature_at_minima(model),
                                     model.x0, window_fraction=0.5)
        res_quarter = wkb.wkb_splitting(dv, models.curvature_at_minima(model),
                                        model.x0, window_fraction=0.25)
        assert res_half.action == pytest.approx(res_quarter.action,
                                                rel=1e-8)

    def test_action_grows_with_barrier(self):
        actions = []
        for dv_height in (20.0, 30.0, 40.0):
            model, dv = deep_well(dv_height, width=0.5)
            res = wkb.wkb_splitting(dv, models.curvature_at_minima(model),
                                    model.x0)
            actions.append(res.action)
        assert actions[0] < actions[1] < actions[2]
        assert all(a > 0 for a in actions)

    def test_window_fraction_validated(self):
        model, dv = deep_well()
        with pytest.raises(ValueError, match="window_fraction"):
            wkb.barrier_action(dv, 1.0, 0.5, window_fraction=1.5)

    def test_rejects_rising_turning_point(self):
        # slope has the wrong sign on the outer face of the barrier
        with pytest.raises(ValueError, match="fall"):
            wkb.barrier_action(lambda x: x * x, energy=0.25,
                               turning_point=0.5)


class TestScaling:
    def test_splitting_scales_with_coordinate_stretch(self):
        # deltaV2(x) = s^2 deltaV(s x) maps spectra by a factor s^2
        model, dv = deep_well()
        curv = models.curvature_at_minima(model)
        s = 1.7
        dv2 = lambda x: s**2 * dv(s * x)
        base = wkb.wkb_splitting(dv, curv, model.x0)
        stretched = wkb.wkb_splitting(dv2, s**4 * curv, model.x0 / s)
        assert stretched.splitting / s**2 == pytest.approx(base.splitting,
                                                           rel=1e-9)
        assert stretched.action == pytest.approx(base.action, rel=1e-9)


class TestApplicabilityLimits:
    def test_shallow_well_raises(self):
        # sigma close to x0: ground level exceeds the tiny barrier
        model = models.TwoGaussianModel(sigma=1.02, allow_out_of_range=True)
        dv = lambda x: models.quantum_potential_closed(model, x)
        with pytest.raises(wkb.WkbInapplicableError, match="barrier top"):
            wkb.wkb_splitting(dv, models.curvature_at_minima(model),
                              model.x0)

    def test_handcrafted_low_barrier_raises(self):
        dv = lambda x: 0.05 * (x * x - 1.0) ** 2
        with pytest.raises(wkb.WkbInapplicableError):
            wkb.wkb_splitting(dv, 0.4, 1.0)

    def test_parameter_validation(self):
        dv = lambda x: (x * x - 1.0) ** 2
        with pytest.raises(ValueError, match="curvature_min"):
            wkb.wkb_splitting(dv, -8.0, 1.0)
        with pytest.raises(ValueError, match="x_min"):
            wkb.wkb_splitting(dv, 8.0, -1.0)


class TestAccuracyRegime:
    def test_approaches_exact_for_high_barriers(self):
        sigma = experiments.sigma_for_du(12.0)
        model = models.TwoGaussianModel(sigma=sigma)
        dv = lambda x: models.quantum_potential_closed(model, x)
        curv = models.curvature_at_minima(model)
        semic = wkb.wkb_splitting(dv, curv, model.x0).splitting
        truth = exact.exact_splitting(dv, model.x0, curv).splitting
        assert semic == pytest.approx(truth, rel=0.03)
