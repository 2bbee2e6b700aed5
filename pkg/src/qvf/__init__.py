"""Exact spectra, index theorems, twins and the hidden relation of quadratic vector fields."""
from .errors import (
    DegenerateSpectra,
    InternalCheckFailed,
    IrrationalTwin,
    NonGenericSpectra,
    OutsideV2,
    QVFError,
    RecoveryError,
    TwinCoincidence,
)
from .field import (
    ExtendedSpectra,
    FiniteSpectra,
    NormalFormField,
    extended_spectra,
    finite_spectra,
    infinity_data,
    membership_V2,
)
from .hidden import evaluate_hidden, predict_lambda_pair, weighted_homogeneity_check
from .index_theorems import full_report
from .twin import reconstruct, twin

__version__ = "0.1.0"
