"""Localized fractional Gagliardo seminorms, masses at infinity and the
constants they converge to as the fractional order goes to zero.

The package computes, for fields u and bounded domains Omega:

* the p-th power Gagliardo seminorm restricted to the cross-shaped
  region (Omega x Omega) union (Omega x Omega^c) union (Omega^c x Omega),
  split into interior, near-exterior and tail contributions;
* the mass at infinity, i.e. the limit of s times the tail integral of
  |u|^p against |y|^(-(d+sp)), by analytic tail models and by seeded
  Monte Carlo with extrapolation in s;
* localized fractional perimeters and their s -> 0 limits;
* the binomial limit functional for even integer p, the bilinear
  interaction-energy form that extends it, the indicator perimeter
  formula and the critical-case limit, all cross-checkable against
  each other;
* a Gaussian-weighted (Mehler kernel) fractional perimeter with its
  closed-form limit;
* a weighted-norm coercivity bound at small s.

Everything randomized is driven by an explicit seed through counter-based
generators, so identical inputs give identical outputs.
"""

from .geometry import (Ball, Box, Complement, Empty, GeometryError, HalfSpace,
                       Intersection, RadialShells, Region, Sector, TailInfo,
                       Union, ball_volume, distance_to_boundary, sphere_area,
                       volume)
from .fields import (AngularFn, AngularIndicator, AngularLimit, Bump,
                     CompactSupport, Constant, FieldError, Indicator, NegPart,
                     PairValues, Periodic1D, PeriodicMean, PeriodicProfile,
                     Polynomial, PosPart, Power, Product, ProfileBump,
                     ProfileConst, ProfileReach, RadialAngular, RadialProfile,
                     ScalarField, Scale, Shift, Sum, TrigPoly, UniformValue,
                     UnknownTail, neg_part, pos_part, power)
from .quad import (EstimateWithError, QuadratureError, QuadratureSpec,
                   angular_integral, combine, exact, field_moment,
                   integrate_1d, mc_double_integral, mc_mean)
from .mass import (MassAtInfinity, MassError, alpha_analytic, alpha_numeric,
                   alpha_translated, tail_integral, translation_bound)
from .seminorm import (SeminormBreakdown, SeminormError, fractional_perimeter,
                       gagliardo_qomega, hardy_pair)
from .asymptotics import (SSweepResult, SweepError, default_s_grid,
                          fit_points, sweep)
from .limits import (F0_even_p, F0_main, LimitReport, LimitsError,
                     critical_alpha, interaction_energy, limit_report,
                     perimeter_limit)
from .gausskernel import (GaussError, GaussianMeasure, MehlerKernel,
                          closed_form_limit, gauss_perimeter, gauss_sweep,
                          pair_mass_limit, rho_s)
from .configio import (ConfigError, ExperimentConfig, load_config,
                       parse_config, parse_field, parse_region)

__version__ = "0.1.0"

__all__ = [
    "Ball", "Box", "Complement", "Empty", "GeometryError", "HalfSpace",
    "Intersection", "RadialShells", "Region", "Sector", "TailInfo", "Union",
    "ball_volume", "distance_to_boundary", "sphere_area", "volume",
    "AngularFn", "AngularIndicator", "AngularLimit", "Bump", "CompactSupport",
    "Constant", "FieldError", "Indicator", "NegPart", "PairValues",
    "Periodic1D", "PeriodicMean", "PeriodicProfile", "Polynomial", "PosPart",
    "Power", "Product", "ProfileBump", "ProfileConst", "ProfileReach",
    "RadialAngular", "RadialProfile", "ScalarField", "Scale", "Shift", "Sum",
    "TrigPoly", "UniformValue", "UnknownTail", "neg_part", "pos_part",
    "power",
    "EstimateWithError", "QuadratureError", "QuadratureSpec",
    "angular_integral", "combine", "exact", "field_moment", "integrate_1d",
    "mc_double_integral", "mc_mean",
    "MassAtInfinity", "MassError", "alpha_analytic", "alpha_numeric",
    "alpha_translated", "tail_integral", "translation_bound",
    "SeminormBreakdown", "SeminormError", "fractional_perimeter",
    "gagliardo_qomega", "hardy_pair",
    "SSweepResult", "SweepError", "default_s_grid", "fit_points", "sweep",
    "F0_even_p", "F0_main", "LimitReport", "LimitsError", "critical_alpha",
    "interaction_energy", "limit_report", "perimeter_limit",
    "GaussError", "GaussianMeasure", "MehlerKernel", "closed_form_limit",
    "gauss_perimeter", "gauss_sweep", "pair_mass_limit", "rho_s",
    "ConfigError", "ExperimentConfig", "load_config", "parse_config",
    "parse_field", "parse_region",
    "__version__",
]
