"""Simultaneous upper confidence bounds on false discoveries over
arbitrary selection sets, for homogeneous and heterogeneous (discrete)
p-value families."""

from .discrete import ContingencyTable, binom_test, fisher_test, uniformize
from .families import fdx_select, interpolate_nested, topk_path_dp
from .model import (
    EnvelopeCurve,
    IDENTITY_CDF,
    PValueFamily,
    ReferenceFamily,
    StepCdf,
)
from .registry import (
    METHOD_NAMES,
    build_envelope,
    envelope_curve,
    list_methods,
    reference_family,
    selection_vhat,
)

__version__ = "0.1.0"

__all__ = [
    "ContingencyTable",
    "EnvelopeCurve",
    "IDENTITY_CDF",
    "METHOD_NAMES",
    "PValueFamily",
    "ReferenceFamily",
    "StepCdf",
    "binom_test",
    "build_envelope",
    "envelope_curve",
    "fdx_select",
    "fisher_test",
    "interpolate_nested",
    "list_methods",
    "reference_family",
    "selection_vhat",
    "topk_path_dp",
    "uniformize",
    "__version__",
]
