"""UCP project datasets: loading, validation, description, resampling, synthesis.

A project is described by its eight environmental-factor ratings (each on the
standard 0..5 influence scale), its Use Case Points size and its actual effort
in person-hours.  Productivity (hours per UCP) is always derived, never stored.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

N_FACTORS = 8

SeedLike = Union[int, np.random.SeedSequence]


class DataError(ValueError):
    """Invalid dataset content (bad CSV row, out-of-range rating, ...)."""


class DegenerateReplicateError(RuntimeError):
    """Bootstrap replicate with an empty out-of-bag set; caller should skip it."""


def _seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


@dataclass(frozen=True)
class EnvFactors:
    """The eight UCP environmental-factor ratings, each in [0, 5]."""

    ratings: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.ratings)
        if len(vals) != N_FACTORS:
            raise DataError(f"expected {N_FACTORS} environmental factors, got {len(vals)}")
        for j, v in enumerate(vals, start=1):
            if not np.isfinite(v):
                raise DataError(f"environmental factor e{j} is not finite")
            if not 0.0 <= v <= 5.0:
                raise DataError(f"environmental factor e{j}={v} outside [0, 5]")
        object.__setattr__(self, "ratings", vals)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.ratings, dtype=float)


@dataclass(frozen=True)
class ProjectRecord:
    env: EnvFactors
    ucp: float
    effort: float

    def __post_init__(self):
        if not (np.isfinite(self.ucp) and self.ucp > 0):
            raise DataError(f"non-positive UCP {self.ucp}")
        if not (np.isfinite(self.effort) and self.effort > 0):
            raise DataError(f"non-positive effort {self.effort}")

    @property
    def productivity(self) -> float:
        """Hours per UCP; derived, never stored independently."""
        return self.effort / self.ucp


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of project records."""

    name: str
    records: tuple

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ProjectRecord]:
        return iter(self.records)

    def __getitem__(self, i: int) -> ProjectRecord:
        return self.records[i]

    def env_matrix(self) -> np.ndarray:
        """n x 8 matrix of environmental ratings, row order preserved."""
        return np.array([r.env.ratings for r in self.records], dtype=float)

    def productivity_vector(self) -> np.ndarray:
        return np.array([r.productivity for r in self.records], dtype=float)

    def ucp_vector(self) -> np.ndarray:
        return np.array([r.ucp for r in self.records], dtype=float)

    def effort_vector(self) -> np.ndarray:
        return np.array([r.effort for r in self.records], dtype=float)

    def subset(self, indices: Iterable[int], name: Optional[str] = None) -> "Dataset":
        return Dataset(name or self.name, tuple(self.records[i] for i in indices))

    def drop(self, index: int, name: Optional[str] = None) -> "Dataset":
        kept = [r for i, r in enumerate(self.records) if i != index]
        return Dataset(name or self.name, tuple(kept))


@dataclass(frozen=True)
class DescriptiveStats:
    """Mean / sample stdev / skewness / plain (non-excess) kurtosis.

    Skewness and kurtosis are None when every value is identical (the
    standardized moments are undefined, which is distinct from zero).
    Kurtosis is the plain standardized fourth moment, so normal data sits
    near 3.
    """

    mean: float
    stdev: float
    skewness: Optional[float]
    kurtosis: Optional[float]


CSV_COLUMNS = ("e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "ucp", "effort")


def load_dataset(source: Union[str, IO], name: str = "dataset") -> Dataset:
    """Read the 10-column CSV format (e1..e8, ucp, effort; one header line).

    `source` is a path or an open text stream.  Every row is validated and
    errors carry the 1-based data row number.
    """
    if isinstance(source, (str, bytes)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return _parse_csv(fh, name)
    if isinstance(source, io.BufferedIOBase) or (hasattr(source, "mode") and "b" in getattr(source, "mode", "")):
        source = io.TextIOWrapper(source, encoding="utf-8")
    return _parse_csv(source, name)


def _parse_csv(fh: IO, name: str) -> Dataset:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty file: missing header") from None
    header = [h.strip().lower() for h in header]
    if header != list(CSV_COLUMNS):
        raise DataError(f"bad header {header!r}; expected {','.join(CSV_COLUMNS)}")
    records = []
    for k, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(CSV_COLUMNS):
            raise DataError(f"row {k}: expected {len(CSV_COLUMNS)} columns, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise DataError(f"row {k}: non-numeric value") from None
        try:
            env = EnvFactors(tuple(vals[:8]))
        except DataError as exc:
            raise DataError(f"row {k}: {exc}") from None
        ucp, effort = vals[8], vals[9]
        if not (np.isfinite(ucp) and ucp > 0):
            raise DataError(f"non-positive UCP at row {k}")
        if not (np.isfinite(effort) and effort > 0):
            raise DataError(f"non-positive effort at row {k}")
        records.append(ProjectRecord(env, ucp, effort))
    return Dataset(name, tuple(records))


def save_dataset(dataset: Dataset, sink: Union[str, IO]) -> None:
    """Write a dataset back out in the canonical CSV format."""
    if isinstance(sink, (str, bytes)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            save_dataset(dataset, fh)
        return
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in dataset:
        writer.writerow([format(v, ".10g") for v in (*r.env.ratings, r.ucp, r.effort)])


def describe(values: Sequence[float]) -> DescriptiveStats:
    """Descriptive statistics of one variable (mean, sample stdev, skew, kurtosis)."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise DataError("describe() needs at least 2 values")
    mean = float(np.mean(x))
    stdev = float(np.std(x, ddof=1))
    d = x - mean
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        return DescriptiveStats(mean, 0.0, None, None)
    skew = float(np.mean(d**3) / m2**1.5)
    kurt = float(np.mean(d**4) / m2**2)
    return DescriptiveStats(mean, stdev, skew, kurt)


def bootstrap_split(dataset: Dataset, seed: SeedLike) -> tuple:
    """One bootstrap replicate: n in-bag draws with replacement + out-of-bag rest.

    Deterministic for a given seed.  Raises DegenerateReplicateError when the
    out-of-bag set is empty (possible but rare); the caller skips the replicate.
    """
    n = len(dataset)
    if n < 3:
        raise DataError("bootstrap_split needs at least 3 records")
    rng = np.random.default_rng(_seed_sequence(seed))
    drawn = rng.integers(0, n, size=n)
    oob = sorted(set(range(n)) - set(drawn.tolist()))
    if not oob:
        raise DegenerateReplicateError("empty out-of-bag set")
    in_bag = dataset.subset(drawn.tolist(), f"{dataset.name}/in_bag")
    out_of_bag = dataset.subset(oob, f"{dataset.name}/oob")
    return in_bag, out_of_bag


@dataclass(frozen=True)
class DatasetProfile:
    """Calibration targets and generative knobs for synthetic datasets.

    The generative mechanism (linear factor effects plus Gaussian noise on
    productivity, log-normal UCP) is a disclosed artifact of this package,
    chosen so that all model families have something to learn; prod_mean /
    prod_stdev / ucp moments are the calibration targets the output is
    checked against.
    """

    n: int
    prod_mean: float
    prod_stdev: float
    ucp_mean: float
    ucp_stdev: float
    coefficients: tuple
    noise_stdev: float

    def __post_init__(self):
        if self.n < 3:
            raise DataError("profile needs n >= 3")
        if self.prod_stdev < 0 or self.ucp_stdev < 0 or self.noise_stdev < 0:
            raise DataError("profile stdevs must be >= 0")
        if self.prod_mean <= 0 or self.ucp_mean <= 0:
            raise DataError("profile means must be positive")
        coefs = tuple(float(c) for c in self.coefficients)
        if len(coefs) != N_FACTORS:
            raise DataError(f"profile needs {N_FACTORS} factor coefficients")
        object.__setattr__(self, "coefficients", coefs)


# Coefficients carry the sign convention of the environmental scale:
# e1..e6 favorable (higher rating -> fewer hours per UCP), e7..e8 unfavorable.
# Noise stdevs are solved so that the total productivity variance
# (uniform-rating variance 25/12 per factor times sum of squared coefficients,
# plus noise) matches the target stdev.
_DS1_COEFS = (-1.5, -1.2, -1.0, -0.8, -0.6, -0.5, 0.5, 0.8)
_DS2_COEFS = (-1.4, -1.1, -0.9, -0.8, -0.6, -0.5, 0.5, 0.7)


def _solve_noise(target_stdev: float, coefficients: Sequence[float]) -> float:
    factor_var = (25.0 / 12.0) * float(np.sum(np.square(coefficients)))
    noise_var = target_stdev**2 - factor_var
    if noise_var < 0:
        raise DataError("factor coefficients alone exceed the target productivity variance")
    return float(np.sqrt(noise_var))


def ds1_profile(n: int = 40) -> DatasetProfile:
    """Industrial-style profile (productivity 24.1 +- 5.1, heavy-tailed UCP)."""
    return DatasetProfile(
        n=n, prod_mean=24.1, prod_stdev=5.1, ucp_mean=739.3, ucp_stdev=1563.9,
        coefficients=_DS1_COEFS, noise_stdev=_solve_noise(5.1, _DS1_COEFS),
    )


def ds2_profile(n: int = 40) -> DatasetProfile:
    """Student-style profile (productivity 20.8 +- 4.8, compact UCP range)."""
    return DatasetProfile(
        n=n, prod_mean=20.8, prod_stdev=4.8, ucp_mean=82.6, ucp_stdev=20.7,
        coefficients=_DS2_COEFS, noise_stdev=_solve_noise(4.8, _DS2_COEFS),
    )


PROFILE_KEYS = ("n", "prod_mean", "prod_stdev", "ucp_mean", "ucp_stdev",
                *(f"coef_{j}" for j in range(1, 9)), "noise_stdev")


def load_profile(source: Union[str, IO]) -> DatasetProfile:
    """Read a profile from the key/value text format (`key = value` lines)."""
    if isinstance(source, (str, bytes)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_profile(fh)
    kv = {}
    for lineno, line in enumerate(source, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise DataError(f"profile line {lineno}: expected 'key = value'")
            key, val = parts
        key = key.strip().lower()
        if key not in PROFILE_KEYS:
            raise DataError(f"profile line {lineno}: unknown key {key!r}")
        try:
            kv[key] = float(val.strip())
        except ValueError:
            raise DataError(f"profile line {lineno}: non-numeric value for {key!r}") from None
    missing = [k for k in PROFILE_KEYS if k not in kv]
    if missing:
        raise DataError(f"profile missing keys: {', '.join(missing)}")
    return DatasetProfile(
        n=int(kv["n"]),
        prod_mean=kv["prod_mean"], prod_stdev=kv["prod_stdev"],
        ucp_mean=kv["ucp_mean"], ucp_stdev=kv["ucp_stdev"],
        coefficients=tuple(kv[f"coef_{j}"] for j in range(1, 9)),
        noise_stdev=kv["noise_stdev"],
    )


def save_profile(profile: DatasetProfile, sink: Union[str, IO]) -> None:
    if isinstance(sink, (str, bytes)):
        with open(sink, "w", encoding="utf-8") as fh:
            save_profile(profile, fh)
        return
    sink.write(f"n = {profile.n}\n")
    for key in ("prod_mean", "prod_stdev", "ucp_mean", "ucp_stdev"):
        sink.write(f"{key} = {getattr(profile, key)!r}\n")
    for j, c in enumerate(profile.coefficients, start=1):
        sink.write(f"coef_{j} = {c!r}\n")
    sink.write(f"noise_stdev = {profile.noise_stdev!r}\n")


_PRODUCTIVITY_CLIP = 0.5  # hours/UCP; keeps generated records physically valid


def generate_synthetic(profile: DatasetProfile, seed: SeedLike) -> Dataset:
    """Generate n projects from a profile, deterministically for a given seed.

    Ratings are uniform per factor over [0, 5]; productivity is the profile
    mean plus linear factor effects (centered at rating 2.5) plus Gaussian
    noise, clipped positive; UCP is log-normal matched to the profile's UCP
    mean/stdev (the heavy right tail of industrial UCP data); effort is the
    product of the two.
    """
    rng = np.random.default_rng(_seed_sequence(seed))
    env = rng.uniform(0.0, 5.0, size=(profile.n, N_FACTORS))
    coefs = np.asarray(profile.coefficients)
    prod = profile.prod_mean + (env - 2.5) @ coefs
    prod = prod + rng.normal(0.0, profile.noise_stdev, size=profile.n)
    prod = np.maximum(prod, _PRODUCTIVITY_CLIP)

    # log-normal parameters from the target mean m and stdev s:
    # sigma^2 = ln(1 + (s/m)^2), mu = ln(m) - sigma^2 / 2
    cv2 = (profile.ucp_stdev / profile.ucp_mean) ** 2
    sigma2 = np.log1p(cv2)
    mu = np.log(profile.ucp_mean) - sigma2 / 2.0
    ucp = rng.lognormal(mean=mu, sigma=float(np.sqrt(sigma2)), size=profile.n)

    records = tuple(
        ProjectRecord(EnvFactors(tuple(env[i])), float(ucp[i]), float(prod[i] * ucp[i]))
        for i in range(profile.n)
    )
    return Dataset("synthetic", records)
