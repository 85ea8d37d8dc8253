"""regmado: dependence between maxima over two regions of a max-stable field.

The central object is the generalized madogram
``nu(x, y; alpha, beta) = E|F(M(x))**alpha - F(M(y))**beta| / 2``,
a [0, 1/2]-valued measure of dependence between the maxima M over two
disjoint sets of lattice locations, with F the unit Frechet CDF. The package
evaluates it in closed form for moving-maxima fields, estimates it from
replicated observations with known or rank-estimated margins, and provides a
replication-study harness plus a station-data pipeline.
"""

from .core import (
    RAW,
    UNIT_FRECHET,
    DependenceQuery,
    EstimateWithError,
    Location,
    MadogramGrid,
    Panel,
    Region,
    region_maxima,
    require_disjoint,
)
from .estimators import (
    EmpiricalMarginPanel,
    LambdaSlice,
    empirical_cdf,
    empirical_margin_estimate,
    known_margin_estimate,
    lambda_madogram,
    lambda_query,
    lambda_slice,
)
from .m4 import (
    AnalyticMadogram,
    M4Spec,
    analytic_V,
    analytic_grid,
    analytic_madogram,
    dump_spec_json,
    epsilon_relation,
    extremal_coefficient,
    load_spec_json,
    madogram_from_extremal,
    reference_independent,
    reference_total_dependence,
    sample_unit_frechet,
    simulate_m4,
    unit_frechet_cdf,
)
from .study import StudyConfig, StudyReport, coverage_check, run_study
from .ingest import (
    AlignedDataset,
    StationSeries,
    align,
    analyze_pair,
    export_grid,
    import_grid,
    load_station_csv,
    slice_pair,
)
from . import fields

__version__ = "0.1.0"

__all__ = [
    "AlignedDataset",
    "AnalyticMadogram",
    "DependenceQuery",
    "EmpiricalMarginPanel",
    "EstimateWithError",
    "LambdaSlice",
    "Location",
    "M4Spec",
    "MadogramGrid",
    "Panel",
    "RAW",
    "Region",
    "StationSeries",
    "StudyConfig",
    "StudyReport",
    "UNIT_FRECHET",
    "align",
    "analytic_V",
    "analytic_grid",
    "analytic_madogram",
    "analyze_pair",
    "coverage_check",
    "dump_spec_json",
    "empirical_cdf",
    "empirical_margin_estimate",
    "epsilon_relation",
    "export_grid",
    "extremal_coefficient",
    "fields",
    "import_grid",
    "known_margin_estimate",
    "lambda_madogram",
    "lambda_query",
    "lambda_slice",
    "load_spec_json",
    "load_station_csv",
    "madogram_from_extremal",
    "reference_independent",
    "reference_total_dependence",
    "region_maxima",
    "require_disjoint",
    "run_study",
    "sample_unit_frechet",
    "simulate_m4",
    "slice_pair",
    "unit_frechet_cdf",
]
