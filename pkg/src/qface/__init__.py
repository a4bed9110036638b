"""Swap-test face classification on a dense state-vector simulator.

The pipeline: PGM images are downscaled and amplitude-encoded as unit
vectors, a face template is the normalized mean of the training vectors,
and classification thresholds the swap-test fidelity between template
and sample. Classical k-NN and RBF-SVM baselines plus a timing harness
round out the package; the ``qface`` CLI drives everything end to end.
"""

from .classifier import (
    FACE,
    NONFACE,
    ClassificationResult,
    LabeledSample,
    SwapTestClassifier,
    SweepReport,
    Template,
    build_template,
    classify,
    sweep_thresholds,
)
from .config import RunConfig, load_config
from .encoding import amplitude_encode, normalize, required_qubits
from .exceptions import ConfigError, DataError, NormDriftError, PgmParseError
from .qsim import QuantumRegister
from .swaptest import (
    ANALYTIC,
    CIRCUIT_EXACT,
    DEFAULT_SHOTS,
    SAMPLED,
    FidelityEstimate,
    estimate_fidelity,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC",
    "CIRCUIT_EXACT",
    "ClassificationResult",
    "ConfigError",
    "DEFAULT_SHOTS",
    "DataError",
    "FACE",
    "FidelityEstimate",
    "LabeledSample",
    "NONFACE",
    "NormDriftError",
    "PgmParseError",
    "QuantumRegister",
    "RunConfig",
    "SAMPLED",
    "SwapTestClassifier",
    "SweepReport",
    "Template",
    "amplitude_encode",
    "build_template",
    "classify",
    "estimate_fidelity",
    "load_config",
    "normalize",
    "required_qubits",
    "sweep_thresholds",
    "__version__",
]
