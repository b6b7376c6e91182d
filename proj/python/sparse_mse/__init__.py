"""Multiple-systems estimation for sparse capture-recapture data.

Every function takes ``data`` as a built-in dataset name, a CSV path, or CSV
text (one 0/1 column per list plus a ``count`` column), and returns plain
dicts mirroring the JSON printed by the ``smse`` command-line tool.
"""

from ._core import (
    DataError,
    EstimabilityError,
    NonConvergence,
    bootstrap,
    check_all,
    check_model,
    dataset,
    datasets,
    deviance_qq,
    estimate,
    fit,
    p_value,
    stepwise,
    threshold_study,
)

__all__ = [
    "DataError",
    "EstimabilityError",
    "NonConvergence",
    "bootstrap",
    "check_all",
    "check_model",
    "dataset",
    "datasets",
    "deviance_qq",
    "estimate",
    "fit",
    "p_value",
    "stepwise",
    "threshold_study",
]
