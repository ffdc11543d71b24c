"""Numerical studies bundled as parameter sweeps and profile families.

Three sweep families cover the standard studies:

``simple_gaussian_dU``
    Symmetric two-Gaussian density at alpha = 1, swept over the mean-field
    barrier height dU.  sigma follows from dU = x0^2/(2 sigma^2) - ln 2.
``extended_fixed_dV``
    Extended model swept over alpha at fixed quantum barrier height dV,
    sigma^4 = x0^4 / (2 alpha dV).  Used for the width studies and the
    five-row parameter table.
``quartic_dU``
    Quartic mean-field potential swept over dU.

Each sweep computes the requested splitting estimates (exact
diagonalization, localization bound, WKB) per point, isolating failures
so one pathological row cannot abort a long sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import exact, localization, models, numerics, wkb

SWEEP_FAMILIES = ("simple_gaussian_dU", "extended_fixed_dV", "quartic_dU")
METHODS = ("exact", "localization", "wkb")

TABLE1_DELTA_V = 30.0
TABLE1_ALPHAS = (1.0, 1.5, 2.0, 2.5, 3.0)


def sigma_for_du(du: float, x0: float = 1.0) -> float:
    """sigma reproducing mean-field barrier dU in the alpha = 1 model."""
    if du <= -math.log(2.0):
        raise ValueError(f"dU must exceed -ln 2, got {du}")
    return x0 * math.sqrt(0.5 / (du + math.log(2.0)))


def sigma_for_delta_v(delta_v: float, alpha: float, x0: float = 1.0) -> float:
    """sigma holding the quantum barrier at dV for the given alpha."""
    if delta_v <= 0:
        raise ValueError(f"dV must be positive, got {delta_v}")
    return x0 * (1.0 / (2.0 * alpha * delta_v)) ** 0.25


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one sweep.

    family : one of SWEEP_FAMILIES.
    start, stop, n_points : swept-parameter grid (linear spacing).
        The swept parameter is dU for the *_dU families and alpha for
        extended_fixed_dV.
    fixed : held-constant parameters; extended_fixed_dV requires
        fixed["delta_v"], all families accept fixed["x0"].
    methods : subset of METHODS, stored in canonical order.
    allow_out_of_range : forward to the model constructors (sigma/x0
        beyond the validated band).
    """

    family: str
    start: float
    stop: float
    n_points: int
    fixed: Mapping[str, float] = field(default_factory=dict)
    methods: tuple[str, ...] = METHODS
    allow_out_of_range: bool = False

    def __post_init__(self) -> None:
        if self.family not in SWEEP_FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}, expected one of {SWEEP_FAMILIES}")
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")
        if not self.start < self.stop:
            raise ValueError(
                f"need start < stop, got [{self.start}, {self.stop}]")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}, expected subset of {METHODS}")
        object.__setattr__(
            self, "methods", tuple(m for m in METHODS if m in self.methods))
        object.__setattr__(self, "fixed", dict(self.fixed))
        if self.family == "extended_fixed_dV" and "delta_v" not in self.fixed:
            raise ValueError("extended_fixed_dV requires fixed['delta_v']")
        self._check_validity_band()

    def _check_validity_band(self) -> None:
        # sigma is monotone in the swept parameter for both Gaussian
        # families, so checking the endpoints covers the whole range.
        if self.allow_out_of_range or self.family == "quartic_dU":
            return
        x0 = float(self.fixed.get("x0", 1.0))
        for value in (self.start, self.stop):
            if self.family == "simple_gaussian_dU":
                sigma = sigma_for_du(value, x0)
            else:
                sigma = sigma_for_delta_v(float(self.fixed["delta_v"]),
                                          value, x0)
            if sigma / x0 > models.SIGMA_RATIO_MAX:
                raise ValueError(
                    f"swept range leaves the validated band: sigma/x0 = "
                    f"{sigma / x0:.4f} > {models.SIGMA_RATIO_MAX} at "
                    f"swept value {value:g}; pass allow_out_of_range=True "
                    f"to proceed")

    def swept_values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n_points)


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: model parameters, derived scales, splittings.

    splittings maps method name to the estimate in E_u units.
    rel_errors maps method name to (estimate - exact)/exact, present
    only when the exact value was computed.
    failures maps method name to a short tag when that method raised.
    """

    swept_value: float
    x0: float
    sigma: float | None
    alpha: float | None
    delta_u: float
    delta_v: float
    width: float | None
    overlap: float | None
    splittings: dict[str, float]
    rel_errors: dict[str, float]
    failures: dict[str, str]


def _two_gaussian_row_inputs(model: models.TwoGaussianModel):
    heights = models.barrier_heights(model)
    try:
        width = models.barrier_width(model)
    except ValueError:
        width = None
    view = models.two_gaussian_meanfield(model)
    dv = lambda x: models.quantum_potential_closed(model, x)
    return heights, width, models.superposition_coefficient(model), view, dv


def _quartic_row_inputs(model: models.QuarticMeanFieldModel):
    view = models.quartic_meanfield(model)
    dv = lambda x: models.quartic_quantum_potential(model, x)
    # barrier height of deltaV from a fine scan refined by local curvature
    grid = np.linspace(0.0, view.domain_halfwidth, 4001)
    vals = models.quartic_quantum_potential(model, grid)
    vmin = float(np.min(vals))
    delta_v = float(dv(0.0)) - vmin
    heights = models.BarrierHeights(delta_u=model.du, delta_v=delta_v)
    return heights, None, None, view, dv


def _compute_methods(spec: SweepSpec, view: models.MeanFieldView,
                     dv: Callable, curvature_min: float | None,
                     splittings: dict, failures: dict) -> None:
    if "exact" in spec.methods:
        try:
            res = exact.exact_splitting(dv, view.x_m, curvature_min)
            if not res.converged:
                failures["exact"] = "basis not converged"
            else:
                splittings["exact"] = res.splitting
        except (ValueError, ArithmeticError, numerics.NumericsError) as err:
            failures["exact"] = f"{type(err).__name__}: {err}"
    if "localization" in spec.methods:
        try:
            res = localization.splitting_localization(view)
            splittings["localization"] = res.splitting
        except (ValueError, ArithmeticError, numerics.NumericsError) as err:
            failures["localization"] = f"{type(err).__name__}: {err}"
    if "wkb" in spec.methods:
        try:
            curv = curvature_min
            if curv is None:
                curv = numerics.derivative_central(dv, view.x_m, order=2,
                                                   h=1e-4)
            res = wkb.wkb_splitting(dv, curv, view.x_m)
            splittings["wkb"] = res.splitting
        except (ValueError, ArithmeticError, numerics.NumericsError) as err:
            failures["wkb"] = f"{type(err).__name__}: {err}"


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the sweep row by row, ordered by the swept parameter.

    Failures of individual methods are recorded in the row's failures
    map instead of aborting the sweep; the row keeps whatever other
    methods produced.
    """
    x0 = float(spec.fixed.get("x0", 1.0))
    rows: list[SweepRow] = []
    for value in spec.swept_values():
        value = float(value)
        splittings: dict[str, float] = {}
        failures: dict[str, str] = {}
        sigma: float | None
        alpha: float | None
        if spec.family == "quartic_dU":
            model_q = models.QuarticMeanFieldModel(du=value, x0=x0)
            heights, width, overlap, view, dv = _quartic_row_inputs(model_q)
            sigma = None
            alpha = None
            curvature_min = None
        else:
            if spec.family == "simple_gaussian_dU":
                alpha = float(spec.fixed.get("alpha", 1.0))
                sigma = sigma_for_du(value, x0)
            else:
                alpha = value
                sigma = sigma_for_delta_v(float(spec.fixed["delta_v"]),
                                          value, x0)
            model = models.TwoGaussianModel(
                sigma=sigma, x0=x0, alpha=alpha,
                allow_out_of_range=spec.allow_out_of_range)
            heights, width, overlap, view, dv = _two_gaussian_row_inputs(model)
            curvature_min = models.curvature_at_minima(model)
        _compute_methods(spec, view, dv, curvature_min, splittings, failures)
        rel_errors: dict[str, float] = {}
        if "exact" in splittings:
            for method in ("localization", "wkb"):
                if method in splittings:
                    rel_errors[method] = (
                        splittings[method] - splittings["exact"]
                    ) / splittings["exact"]
        rows.append(SweepRow(
            swept_value=value, x0=x0, sigma=sigma, alpha=alpha,
            delta_u=heights.delta_u, delta_v=heights.delta_v,
            width=width, overlap=overlap, splittings=splittings,
            rel_errors=rel_errors, failures=failures))
    return rows


def default_du_sweep() -> SweepSpec:
    """Default alpha = 1 sweep: dU in [1, 12], 40 points, all methods.

    The lower end of the range needs sigma/x0 slightly above the
    validated band (dU < 1.307), which the default deliberately allows;
    the models carry the corresponding validity warning.
    """
    return SweepSpec(family="simple_gaussian_dU", start=1.0, stop=12.0,
                     n_points=40, allow_out_of_range=True)


def default_width_sweep(delta_v: float, n_points: int = 25) -> SweepSpec:
    """Fixed-dV sweep over alpha for the splitting-vs-width study.

    The alpha range stops short of the two-minimum limit at dV = 30 and
    of the strong-overlap region (S ~ 1e-3) at dV = 15.
    """
    if math.isclose(delta_v, 30.0):
        stop = 3.2
    elif math.isclose(delta_v, 15.0):
        stop = 2.4
    else:
        stop = min(0.9 * models.two_minimum_alpha_limit(delta_v), 64.0)
    return SweepSpec(family="extended_fixed_dV", start=1.0, stop=stop,
                     n_points=n_points, fixed={"delta_v": delta_v},
                     methods=("exact", "localization"))


@dataclass(frozen=True)
class Table1Row:
    alpha: float
    sigma_over_x0: float
    delta_u: float
    curvature_origin: float
    curvature_minima: float
    width_over_x0: float


def table1_rows(delta_v: float = TABLE1_DELTA_V,
                alphas: Sequence[float] = TABLE1_ALPHAS) -> list[Table1Row]:
    """Parameter table of the fixed-dV family, one row per alpha."""
    rows = []
    for alpha in alphas:
        model = models.TwoGaussianModel(sigma=sigma_for_delta_v(delta_v, alpha),
                                        alpha=alpha)
        rows.append(Table1Row(
            alpha=alpha,
            sigma_over_x0=model.sigma / model.x0,
            delta_u=models.barrier_heights(model).delta_u,
            curvature_origin=models.curvature_at_origin(model),
            curvature_minima=models.curvature_at_minima(model),
            width_over_x0=models.barrier_width(model) / model.x0,
        ))
    return rows


def table1(delta_v: float = TABLE1_DELTA_V) -> str:
    """The five-row parameter table, formatted at its customary precision."""
    header = "{:>5} {:>9} {:>6} {:>7} {:>7} {:>6}".format(
        "alpha", "sigma/x0", "dU", 'V"(0)', 'V"(x0)', "w/x0")
    lines = [header]
    for row in table1_rows(delta_v):
        lines.append(
            f"{row.alpha:5.1f} {row.sigma_over_x0:9.4f} {row.delta_u:6.2f} "
            f"{row.curvature_origin:7.0f} {row.curvature_minima:7.0f} "
            f"{row.width_over_x0:6.2f}")
    return "\n".join(lines)


def _profile(grid: np.ndarray, values: np.ndarray, kind: str,
             label: str) -> models.PotentialProfile:
    return models.PotentialProfile(grid=np.asarray(grid, dtype=float),
                                   values=np.asarray(values, dtype=float),
                                   kind=kind, label=label)


def emit_profiles(model, grid: Iterable[float]) -> tuple[models.PotentialProfile, ...]:
    """Mean-field and quantum potential profiles for one model.

    For the two-Gaussian model the set also carries the parabolic
    companion curves of both wells: the harmonic approximation of U and
    the matching expansion of deltaV, tangent to the true curves at
    +-x0 up to terms of order S.
    """
    grid = np.asarray(list(grid), dtype=float)
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    if isinstance(model, models.QuarticMeanFieldModel):
        return (
            _profile(grid, models.quartic_potential(model, grid),
                     "meanfield", f"quartic dU={model.du:g}"),
            _profile(grid, models.quartic_quantum_potential(model, grid),
                     "quantum", f"quartic dU={model.du:g}"),
        )
    if not isinstance(model, models.TwoGaussianModel):
        raise TypeError(f"unsupported model type {type(model).__name__}")
    x0, sigma = model.x0, model.sigma
    label = f"alpha={model.alpha:g} sigma/x0={sigma / x0:g}"
    curv_min = models.curvature_at_minima(model)
    floor = -x0**2 / (2.0 * sigma**2)
    out = [
        _profile(grid, models.meanfield_potential(model, grid),
                 "meanfield", label),
        _profile(grid, models.quantum_potential_closed(model, grid),
                 "quantum", label),
    ]
    for side, tag in ((1.0, "right"), (-1.0, "left")):
        out.append(_profile(
            grid, (grid - side * x0)**2 / (2.0 * sigma**2),
            f"meanfield_parabola_{tag}", label))
        out.append(_profile(
            grid, floor + 0.5 * curv_min * (grid - side * x0)**2,
            f"quantum_parabola_{tag}", label))
    return tuple(out)


def quartic_family_profiles(
        du_values: Sequence[float],
        grid: Iterable[float]) -> tuple[models.PotentialProfile, ...]:
    """Quantum potentials of the quartic family, scaled by dU per curve."""
    grid = np.asarray(list(grid), dtype=float)
    out = []
    for du in du_values:
        model = models.QuarticMeanFieldModel(du=du)
        out.append(_profile(
            grid, models.quartic_quantum_potential(model, grid) / du,
            "quantum_over_dU", f"dU={du:g}"))
    return tuple(out)


def shape_family_profiles(
        sigma_values: Sequence[float],
        grid: Iterable[float],
        alpha: float = 1.0,
        allow_out_of_range: bool = False) -> tuple[models.PotentialProfile, ...]:
    """Quantum potentials at varying sigma, each scaled by its own dV."""
    grid = np.asarray(list(grid), dtype=float)
    out = []
    for sigma in sigma_values:
        model = models.TwoGaussianModel(
            sigma=sigma, alpha=alpha, allow_out_of_range=allow_out_of_range)
        delta_v = models.barrier_heights(model).delta_v
        out.append(_profile(
            grid, models.quantum_potential_closed(model, grid) / delta_v,
            "quantum_over_dV", f"sigma/x0={sigma:g}"))
    return tuple(out)


def fixed_dv_family_profiles(
        delta_v: float,
        alphas: Sequence[float],
        grid: Iterable[float]) -> tuple[models.PotentialProfile, ...]:
    """Quantum potentials of the fixed-dV family, one curve per alpha."""
    grid = np.asarray(list(grid), dtype=float)
    out = []
    for alpha in alphas:
        model = models.TwoGaussianModel(
            sigma=sigma_for_delta_v(delta_v, alpha), alpha=alpha)
        out.append(_profile(
            grid, models.quantum_potential_closed(model, grid),
            "quantum", f"alpha={alpha:g}"))
    return tuple(out)
