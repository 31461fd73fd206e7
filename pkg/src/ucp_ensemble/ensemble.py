"""Weighted-mean ensemble of the seven productivity regressors.

Construction has three stages: (1) bagging-based error profiling, where every
bootstrap replicate trains all families in-bag and scores them on the
out-of-bag records; (2) sigmoid discounting of the min-max-normalized errors
into per-measure weights, averaged into one weight per model; (3) weighted-
mean aggregation of the seven productivity predictions, converted to effort
by multiplying with the project's UCP size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Optional

import numpy as np

from .dataset import Dataset, DegenerateReplicateError, EnvFactors, bootstrap_split
from .metrics import ErrorSummary, error_summary, min_max_normalize
from .models import MODEL_IDS, ModelConfig, TrainedModel, TrainingError, model_from_json, TRAINERS

ENSEMBLE_FORMAT = "ucp-ensemble"
ENSEMBLE_FORMAT_VERSION = 1

DEFAULT_ALPHA = 15.0
DEFAULT_REPLICATES = 25
MIN_TRAINING_RECORDS = 5


@dataclass(frozen=True)
class EnsembleConfig:
    alpha: float = DEFAULT_ALPHA
    replicates: int = DEFAULT_REPLICATES
    seed: int = 0
    model_configs: dict = field(default_factory=dict)  # per-family overrides

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")

    def config_for(self, model_id: str) -> ModelConfig:
        return self.model_configs.get(model_id, ModelConfig())

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "replicates": self.replicates,
            "seed": self.seed,
            "model_configs": {k: v.to_dict() for k, v in self.model_configs.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleConfig":
        return cls(
            alpha=d["alpha"], replicates=d["replicates"], seed=d["seed"],
            model_configs={k: ModelConfig.from_dict(v) for k, v in d.get("model_configs", {}).items()},
        )


@dataclass(frozen=True)
class LocalErrorProfile:
    """Replicate-averaged error triples per model plus their normalized form."""

    model_ids: tuple
    raw: dict  # model id -> ErrorSummary
    normalized: dict  # measure name -> {model id -> value in [0, 1]}
    means: dict  # measure name -> mean of the normalized vector
    replicates_used: int

    def to_dict(self) -> dict:
        return {
            "model_ids": list(self.model_ids),
            "raw": {m: [s.mae, s.mbre, s.mibre] for m, s in self.raw.items()},
            "normalized": {k: dict(v) for k, v in self.normalized.items()},
            "means": dict(self.means),
            "replicates_used": self.replicates_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LocalErrorProfile":
        return cls(
            model_ids=tuple(d["model_ids"]),
            raw={m: ErrorSummary(*v) for m, v in d["raw"].items()},
            normalized={k: dict(v) for k, v in d["normalized"].items()},
            means=dict(d["means"]),
            replicates_used=d["replicates_used"],
        )


@dataclass(frozen=True)
class ModelWeightProfile:
    """Per-measure sigmoid weights and their per-model average."""

    model_ids: tuple
    w_mae: dict
    w_mbre: dict
    w_mibre: dict
    combined: dict

    def weights(self) -> dict:
        return dict(self.combined)

    def to_dict(self) -> dict:
        return {"model_ids": list(self.model_ids), "w_mae": dict(self.w_mae),
                "w_mbre": dict(self.w_mbre), "w_mibre": dict(self.w_mibre),
                "combined": dict(self.combined)}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelWeightProfile":
        return cls(tuple(d["model_ids"]), dict(d["w_mae"]), dict(d["w_mbre"]),
                   dict(d["w_mibre"]), dict(d["combined"]))


def sigmoid_weight(normalized_error: float, mean_normalized: float, alpha: float) -> float:
    """Discounting factor 1 / (1 + exp(alpha * (x - x_mean))): near 1 at zero
    normalized error, 0.5 at the mean, near 0 at the maximum."""
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    return 1.0 / (1.0 + math.exp(alpha * (normalized_error - mean_normalized)))


def combine_weights(w_mae: float, w_mbre: float, w_mibre: float) -> float:
    return (w_mae + w_mbre + w_mibre) / 3.0


def aggregate_productivity(predictions: Mapping, weights: Mapping) -> float:
    """Weighted mean of the per-model productivity predictions."""
    if set(predictions) != set(weights):
        raise ValueError("predictions and weights must cover the same models")
    total = sum(weights.values())
    if not total > 0:
        raise ValueError("weight sum must be positive")
    return sum(predictions[m] * weights[m] for m in predictions) / total


def _derived_seed(ss: np.random.SeedSequence) -> int:
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def estimate_local_errors(
    training: Dataset,
    config: EnsembleConfig,
    trainers: Optional[Mapping[str, Callable]] = None,
) -> LocalErrorProfile:
    """Bagging error profiling on productivity predictions.

    Each bootstrap replicate trains every family on the in-bag sample and
    scores it on the out-of-bag records; the error triples are macro-averaged
    across valid replicates, then each measure is min-max normalized across
    the models.  Errors are measured on productivity, not effort: at this
    stage only productivity predictions exist and the UCP conversion happens
    later.
    """
    if len(training) < MIN_TRAINING_RECORDS:
        raise ValueError(f"need at least {MIN_TRAINING_RECORDS} training records")
    if trainers is None:
        trainers = TRAINERS
    ids = tuple(trainers.keys())
    replicate_seeds = np.random.SeedSequence(config.seed).spawn(config.replicates)

    sums = {m: np.zeros(3) for m in ids}
    used = 0
    for r_seed in replicate_seeds:
        parts = r_seed.spawn(1 + len(ids))
        try:
            in_bag, oob = bootstrap_split(training, parts[0])
        except DegenerateReplicateError:
            continue
        X_in, y_in = in_bag.env_matrix(), in_bag.productivity_vector()
        X_oob, y_oob = oob.env_matrix(), oob.productivity_vector()
        for m, m_seed in zip(ids, parts[1:]):
            cfg = replace(config.config_for(m), seed=_derived_seed(m_seed))
            try:
                model = trainers[m](X_in, y_in, cfg)
            except Exception as exc:
                raise TrainingError(f"training {m} failed on a bagging replicate: {exc}") from exc
            preds = model.predict_many(X_oob)
            s = error_summary(zip(y_oob, preds))
            sums[m] += (s.mae, s.mbre, s.mibre)
        used += 1
    if used == 0:
        raise RuntimeError("every bootstrap replicate had an empty out-of-bag set")

    raw = {m: ErrorSummary(*(sums[m] / used)) for m in ids}
    normalized, means = {}, {}
    for k, attr in (("mae", "mae"), ("mbre", "mbre"), ("mibre", "mibre")):
        norm = min_max_normalize([getattr(raw[m], attr) for m in ids])
        normalized[k] = dict(zip(ids, norm))
        means[k] = float(np.mean(norm))
    return LocalErrorProfile(ids, raw, normalized, means, used)


def weights_from_profile(profile: LocalErrorProfile, alpha: float) -> ModelWeightProfile:
    per_measure = {}
    for k in ("mae", "mbre", "mibre"):
        per_measure[k] = {
            m: sigmoid_weight(profile.normalized[k][m], profile.means[k], alpha)
            for m in profile.model_ids
        }
    combined = {
        m: combine_weights(per_measure["mae"][m], per_measure["mbre"][m], per_measure["mibre"][m])
        for m in profile.model_ids
    }
    return ModelWeightProfile(profile.model_ids, per_measure["mae"],
                              per_measure["mbre"], per_measure["mibre"], combined)


@dataclass(frozen=True)
class TrainedEnsemble:
    models: dict  # model id -> TrainedModel, trained on the full training set
    weight_profile: ModelWeightProfile
    error_profile: LocalErrorProfile
    config: EnsembleConfig

    def base_predictions(self, env) -> dict:
        return {m: model.predict(env) for m, model in self.models.items()}

    def predict_productivity(self, env) -> float:
        return aggregate_productivity(self.base_predictions(env), self.weight_profile.combined)

    def to_json(self) -> dict:
        return {
            "format": ENSEMBLE_FORMAT,
            "version": ENSEMBLE_FORMAT_VERSION,
            "config": self.config.to_dict(),
            "weights": self.weight_profile.to_dict(),
            "error_profile": self.error_profile.to_dict(),
            "models": {m: model.to_json() for m, model in self.models.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TrainedEnsemble":
        if doc.get("format") != ENSEMBLE_FORMAT:
            raise ValueError("not an ensemble document")
        if doc.get("version") != ENSEMBLE_FORMAT_VERSION:
            raise ValueError(f"unsupported ensemble document version {doc.get('version')!r}")
        return cls(
            models={m: model_from_json(d) for m, d in doc["models"].items()},
            weight_profile=ModelWeightProfile.from_dict(doc["weights"]),
            error_profile=LocalErrorProfile.from_dict(doc["error_profile"]),
            config=EnsembleConfig.from_dict(doc["config"]),
        )


def train_ensemble(
    training: Dataset,
    config: EnsembleConfig,
    trainers: Optional[Mapping[str, Callable]] = None,
) -> TrainedEnsemble:
    """Profile errors by bagging, derive weights, then train every family on
    the full training set."""
    if trainers is None:
        trainers = TRAINERS
    profile = estimate_local_errors(training, config, trainers)
    weight_profile = weights_from_profile(profile, config.alpha)

    final_seeds = np.random.SeedSequence(config.seed).spawn(config.replicates + 1)[-1].spawn(len(profile.model_ids))
    X, y = training.env_matrix(), training.productivity_vector()
    models = {}
    for m, m_seed in zip(profile.model_ids, final_seeds):
        cfg = replace(config.config_for(m), seed=_derived_seed(m_seed))
        try:
            models[m] = trainers[m](X, y, cfg)
        except Exception as exc:
            raise TrainingError(f"training {m} failed on the full training set: {exc}") from exc
    return TrainedEnsemble(models, weight_profile, profile, config)


def predict_effort(ensemble: TrainedEnsemble, env, ucp: float) -> tuple:
    """Aggregated productivity and the resulting effort (productivity x UCP)."""
    if not ucp > 0:
        raise ValueError(f"non-positive UCP {ucp}")
    productivity = ensemble.predict_productivity(env)
    return productivity, productivity * ucp
