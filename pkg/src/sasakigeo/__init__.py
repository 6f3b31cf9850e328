"""Unit vector fields on surfaces as hypersurfaces of the Sasaki unit tangent bundle.

The package computes, at a point of a 2-dimensional chart, the singular frame
of a unit field, the second fundamental form of its image in the unit tangent
bundle, and the intrinsic and extrinsic curvatures of that image, each checked
against independent finite-difference oracles.
"""

from .catalog import Grid, Scenario, make_chart, obstruction_omega01, scenario, scenario_names, t1m_coordinate_metric
from .errors import (
    BadParams,
    BasePointMismatch,
    DegenerateOperator,
    GeometryError,
    NonOrthonormalInput,
    PointOutOfDomain,
    StepTooLarge,
    UsageError,
)
from .expr import ExprSyntaxError, parse_expr
from .frame_fields import FrameConvention, SingularFrame, UnitVectorField, frame_data, singular_frame
from .io import ChartFileError, load_chart_file, parse_chart_text
from .metric_core import DEFAULT, DiffConfig, Domain, MetricChart, christoffel, gauss_curvature, riemann
from .runner import RunSpec, run_grid, run_point
from .sasaki import BundleVector, horizontal, induced_metric, sasaki_inner, t1m_sectional, vertical
from .submanifold import (
    CurvatureReport,
    SecondFundamentalForm,
    curvature_report,
    extrinsic_curvature,
    gauss_curvature_xi,
    is_totally_geodesic,
    second_fundamental_form,
    sectional_along_xi,
)

__version__ = "0.1.0"

__all__ = [
    "BadParams",
    "BasePointMismatch",
    "BundleVector",
    "ChartFileError",
    "CurvatureReport",
    "DEFAULT",
    "DegenerateOperator",
    "DiffConfig",
    "Domain",
    "ExprSyntaxError",
    "FrameConvention",
    "GeometryError",
    "Grid",
    "MetricChart",
    "NonOrthonormalInput",
    "PointOutOfDomain",
    "RunSpec",
    "Scenario",
    "SecondFundamentalForm",
    "SingularFrame",
    "StepTooLarge",
    "UnitVectorField",
    "UsageError",
    "christoffel",
    "curvature_report",
    "extrinsic_curvature",
    "frame_data",
    "gauss_curvature",
    "gauss_curvature_xi",
    "horizontal",
    "induced_metric",
    "is_totally_geodesic",
    "load_chart_file",
    "make_chart",
    "obstruction_omega01",
    "parse_chart_text",
    "parse_expr",
    "riemann",
    "run_grid",
    "run_point",
    "sasaki_inner",
    "scenario",
    "scenario_names",
    "second_fundamental_form",
    "sectional_along_xi",
    "singular_frame",
    "t1m_coordinate_metric",
    "t1m_sectional",
    "vertical",
]
