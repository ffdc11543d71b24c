"""Tunneling splittings of one-dimensional symmetric double wells.

Three routes to the ground-state splitting deltaE1 = E1 - E0 of the shifted
operator -d2/dx2 + deltaV(x) (reduced units, energies in E_u):

* localization: the variational estimate 2 x0^2 / (I * <g|rho|g>) built from
  a piecewise localization function and the equilibrium density;
* exact: diagonalization in a harmonic-oscillator basis;
* wkb: a semiclassical baseline with turning points at the well ground level.

See the ``models`` module for the double-well families and ``experiments``
for parameter sweeps and table generation.  The ``dwsplit`` console script
exposes all of it from the command line.
"""

from .models import (
    BarrierHeights,
    MeanFieldView,
    PotentialProfile,
    QuarticMeanFieldModel,
    TwoGaussianModel,
    barrier_heights,
    barrier_width,
    curvature_at_minima,
    curvature_at_origin,
    meanfield_potential,
    meanfield_view,
    quantum_potential_closed,
    quantum_potential_from_meanfield,
    quartic_curvature_at_origin,
    quartic_meanfield,
    quartic_quantum_potential,
    rho_eq,
    solve_parameters,
    superposition_coefficient,
    two_gaussian_meanfield,
    two_minimum_alpha_limit,
)

__version__ = "0.1.0"

__all__ = [
    "BarrierHeights",
    "MeanFieldView",
    "PotentialProfile",
    "QuarticMeanFieldModel",
    "TwoGaussianModel",
    "barrier_heights",
    "barrier_width",
    "curvature_at_minima",
    "curvature_at_origin",
    "meanfield_potential",
    "meanfield_view",
    "quantum_potential_closed",
    "quantum_potential_from_meanfield",
    "quartic_curvature_at_origin",
    "quartic_meanfield",
    "quartic_quantum_potential",
    "rho_eq",
    "solve_parameters",
    "superposition_coefficient",
    "two_gaussian_meanfield",
    "two_minimum_alpha_limit",
    "__version__",
]
