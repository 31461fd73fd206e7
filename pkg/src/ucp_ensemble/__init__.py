"""Weighted-mean ensemble of productivity regressors for UCP effort estimation."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .dataset import (
    Dataset,
    DatasetProfile,
    DescriptiveStats,
    EnvFactors,
    ProjectRecord,
    bootstrap_split,
    describe,
    ds1_profile,
    ds2_profile,
    generate_synthetic,
    load_dataset,
    load_profile,
)
from .ensemble import (
    EnsembleConfig,
    TrainedEnsemble,
    aggregate_productivity,
    combine_weights,
    estimate_local_errors,
    predict_effort,
    sigmoid_weight,
    train_ensemble,
)
from .evaluation import (
    compare,
    confidence_interval,
    emit_report,
    karner_baseline,
    loocv,
    schneider_winter_baseline,
    wilcoxon_signed_rank,
)
from .metrics import ErrorSummary, mae, mbre, mibre, min_max_normalize
from .models import MODEL_IDS, ModelConfig, check_gradient, model_from_json, train

__version__ = "0.1.0"
