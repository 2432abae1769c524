"""Simulators and closed-form fixtures for the choice/response-time models."""

from .chronometric import (
    Boundary,
    ConstantBoundary,
    CustomBoundary,
    ExponentialBoundary,
    HyperbolicBoundary,
    InverseBoundary,
    Reciprocal,
    ReciprocalBoundary,
    SpecError,
    TableChronometric,
    boundary_chronometric_bridge,
    boundary_from_json,
    chronometric_boundary_bridge,
    chronometric_from_json,
)
from .ddm import DdmSpec, constant_boundary_choice_probability, ddm_likelihood_ratio, sample_ddm
from .distributions import BimodalFixture, CrraLottery, Logistic, Normal, PairDiff, Tabulated, family_from_json
from .fixtures import bimodal_dataset, bimodal_spec, crra_dataset, crra_spec, load_fixture
from .rum import (
    LognormalNoise,
    RumCfSpec,
    SimulatedTrials,
    UnsupportedModel,
    analytic_cdfs,
    analytic_dataset,
    dataset_from_simulations,
    sample_rum_cf,
    simulate_dataset,
)


def spec_from_json(doc: dict):
    """Model spec from its JSON document (``rum_cf``, ``rum_ncf`` or ``ddm``)."""
    model = doc.get("model")
    if model == "ddm":
        return DdmSpec.from_json(doc)
    if model in ("rum_cf", "rum_ncf"):
        return RumCfSpec.from_json(doc)
    raise SpecError(f"unknown model {model!r}; expected rum_cf, rum_ncf or ddm")
