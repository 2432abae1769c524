"""Revealed preference from binary choices and response times."""

from .data import (
    AnalyticCDF,
    ChoiceDataset,
    DataError,
    EmpiricalCDF,
    PairNotObserved,
    PairStats,
    TrialRecord,
    empirical_cdf,
    emit_trials,
    load_trials,
    scf_probability,
)
from .relations import Relation, asymmetric_part, has_inconsistent_cycle, transitive_closure
from .unrestricted import (
    DominanceVerdict,
    Provenance,
    RevelationEdge,
    build_rt_relation,
    density_ratio_check,
    q_fsd,
    q_ratio_curve,
    reveal_unrestricted,
)

__version__ = "0.1.0"
