"""Semiclassical (WKB) baseline for the tunneling splitting.

The splitting of a symmetric double well deltaV with minima at +-x_min is
estimated from the barrier action at the well ground level,

    E      = deltaV(x_min) + omega / 2,        omega = sqrt(2 deltaV''(x_min)),
    Theta  = integral_{-x_t}^{x_t} sqrt(deltaV(x) - E) dx,
    deltaE = omega / sqrt(pi e) * exp(-Theta),

in reduced units (hbar = 1, 2m = 1, energies in E_u).  The prefactor
follows from matching the WKB barrier tail onto the harmonic ground state
of one well and feeding the matched state through the surface (Wronskian)
formula for the splitting of a symmetric pair; it replaces the cruder
textbook prefactor omega / pi.

Near the turning points +-x_t the integrand has a square-root zero with
unbounded slope.  Inside a window of width ``window_fraction * x_t`` the
locally linearized potential is subtracted analytically,

    integral_{x_t - d}^{x_t} sqrt(s (x_t - x)) dx = (2/3) sqrt(s) d^(3/2),
    s = -deltaV'(x_t),

leaving a bounded, well-behaved remainder for adaptive quadrature.  The
result is window independent up to quadrature error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numerics


class WkbInapplicableError(ValueError):
    """The ground level sits at or above the barrier top: no tunneling regime."""


@dataclass(frozen=True)
class WkbResult:
    """Semiclassical splitting estimate and its ingredients.

    splitting : deltaE estimate in E_u units.
    action : full barrier integral Theta (dimensionless, positive).
    energy : ground-level energy used for the turning points, E_u units.
    turning_points : (x_left, x_right) = (-x_t, x_t), bracketing the
        forbidden region symmetric about the origin.
    well_frequency : harmonic frequency sqrt(2 deltaV''(x_min)).
    """

    splitting: float
    action: float
    energy: float
    turning_points: tuple[float, float]
    well_frequency: float

    def __post_init__(self) -> None:
        x_l, x_r = self.turning_points
        if not (x_l < 0.0 < x_r):
            raise ValueError(f"turning points must straddle 0, got {self.turning_points}")
        if self.action <= 0.0:
            raise ValueError(f"action must be positive, got {self.action}")


def barrier_action(
    delta_v: Callable,
    energy: float,
    turning_point: float,
    window_fraction: float = 0.5,
    rel_tol: float = 1e-10,
) -> float:
    """Theta = 2 * integral_0^{x_t} sqrt(deltaV - E) dx with regularization.

    The caller guarantees deltaV > E on (0, x_t) and deltaV(x_t) = E.
    window_fraction in (0, 1) sets the subtraction window next to the
    turning point.
    """
    if not (0.0 < window_fraction < 1.0):
        raise ValueError("window_fraction must lie in (0, 1)")
    x_t = turning_point
    d = window_fraction * x_t
    slope = -numerics.derivative_central(delta_v, x_t, order=1,
                                         h=1e-6 * max(1.0, x_t))
    if slope <= 0.0:
        raise ValueError(
            f"potential must fall through the turning point, got slope "
            f"{-slope:.3e}"
        )

    def integrand_smooth(x: float) -> float:
        return math.sqrt(max(delta_v(x) - energy, 0.0))

    def integrand_regularized(x: float) -> float:
        lin = slope * (x_t - x)
        return math.sqrt(max(delta_v(x) - energy, 0.0)) - math.sqrt(max(lin, 0.0))

    outer = numerics.integrate_adaptive(integrand_smooth, 0.0, x_t - d,
                                        abs_tol=1e-13, rel_tol=rel_tol)
    inner = numerics.integrate_adaptive(integrand_regularized, x_t - d, x_t,
                                        abs_tol=1e-13, rel_tol=rel_tol)
    closed = (2.0 / 3.0) * math.sqrt(slope) * d**1.5
    return 2.0 * (outer.value + inner.value + closed)


def wkb_splitting(
    delta_v: Callable,
    curvature_min: float,
    x_min: float,
    window_fraction: float = 0.5,
) -> WkbResult:
    """Ground-level semiclassical splitting of a symmetric double well.

    Parameters
    ----------
    delta_v : callable
        Shifted potential in E_u units; must be even with minima at +-x_min
        and its barrier top at the origin.
    curvature_min : float
        deltaV''(x_min) in E_u / x0^2 units, positive.
    x_min : float
        Positive location of the right minimum.

    Raises
    ------
    WkbInapplicableError
        If the ground level deltaV(x_min) + omega/2 reaches the barrier
        top, leaving no classically forbidden region.
    """
    if curvature_min <= 0:
        raise ValueError(f"curvature_min must be positive, got {curvature_min}")
    if x_min <= 0:
        raise ValueError(f"x_min must be positive, got {x_min}")

    omega = math.sqrt(2.0 * curvature_min)
    energy = float(delta_v(x_min)) + 0.5 * omega
    top = float(delta_v(0.0))
    if energy >= top:
        raise WkbInapplicableError(
            f"ground level {energy:.6g} reaches the barrier top {top:.6g}; "
            f"no forbidden region"
        )

    x_t = numerics.find_root_bracketed(
        lambda x: float(delta_v(x)) - energy, 0.0, x_min, tol=1e-14 * x_min)
    action = barrier_action(delta_v, energy, x_t, window_fraction)
    splitting = omega / math.sqrt(math.pi * math.e) * math.exp(-action)
    return WkbResult(splitting=splitting, action=action, energy=energy,
                     turning_points=(-x_t, x_t), well_frequency=omega)
