"""Logit models of which builder wins a block, given pre-block CEX volatility.

The predictor ``x`` is the absolute log10 price change over the 12 seconds
before the block. Published coefficients map volatility labels onto ``x`` as
``x = percent / 1000`` (e.g. "1%" is evaluated at ``x = 0.001``); that is
the only reading under which the published probabilities come back out.

Binary logits are fitted by iteratively reweighted least squares (Newton's
method on the log-likelihood). The multinomial model is prediction only.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .detgame import pbs_given_holder_arrays, scenario1_arrays
from .dist import ParameterError, ValueDistribution

__all__ = [
    "LogitModel",
    "MNLModel",
    "Observation",
    "FitResult",
    "ConvergenceError",
    "SeparationError",
    "TABLE1_HFT",
    "TABLE2_BUILDERS",
    "CSV_HEADER",
    "logit_predict",
    "logit_fit",
    "mnl_predict",
    "generate_synthetic",
    "read_observations",
    "write_observations",
]

CSV_HEADER = ("block_number", "builder", "log10_price_change_abs", "is_hft")


class ConvergenceError(ArithmeticError):
    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations


class SeparationError(ArithmeticError):
    """The likelihood has no finite maximiser (constant or perfectly separated outcomes)."""


@dataclass(frozen=True)
class LogitModel:
    beta0: float
    beta1: float

    def __post_init__(self):
        if not (math.isfinite(self.beta0) and math.isfinite(self.beta1)):
            raise ParameterError("logit coefficients must be finite")

    def complement(self):
        """Model of ``1 - P`` at the same ``x``."""
        return LogitModel(-self.beta0, -self.beta1)

    def mirrored(self):
        """Model of ``1 - P`` with the predictor reflected, ``x -> -x``."""
        return LogitModel(-self.beta0, self.beta1)


@dataclass(frozen=True)
class MNLModel:
    classes: tuple
    coeffs: tuple  # (beta0_i, beta1_i) per class
    reference: str = "reference"

    def __post_init__(self):
        labels = list(self.classes) + [self.reference]
        if len(set(labels)) != len(labels):
            raise ParameterError("class labels must be unique and differ from the reference")
        if len(self.coeffs) != len(self.classes):
            raise ParameterError("need one (beta0, beta1) pair per class")

    @property
    def labels(self):
        return tuple(self.classes) + (self.reference,)


@dataclass(frozen=True)
class Observation:
    x: float
    y: int
    block_number: Optional[int] = None
    builder: str = ""

    def __post_init__(self):
        if not math.isfinite(self.x) or self.x < 0:
            raise ParameterError(f"x must be finite and >= 0, got {self.x!r}")


@dataclass(frozen=True)
class FitResult:
    model: LogitModel
    std_errors: tuple
    iterations: int
    log_likelihood: float

    @property
    def z_scores(self):
        return (self.model.beta0 / self.std_errors[0], self.model.beta1 / self.std_errors[1])


# Table 1: HFT builders (Beaver Build, Manta, Rsync) vs the rest.
TABLE1_HFT = LogitModel(beta0=-0.821, beta1=2055.151)

# Table 2: log-odds against an unnamed reference class.
TABLE2_BUILDERS = MNLModel(
    classes=("Beaver Build", "Blocknative", "Builder 69", "Flashbots", "Manta", "Rsync Builder"),
    coeffs=(
        (-0.4144, 1386.2014),
        (-2.4772, 1629.2443),
        (0.0152, -527.4993),
        (-0.4522, -458.7271),
        (-3.2312, 3824.6414),
        (-0.6812, 2093.8362),
    ),
)


def _sigmoid(z):
    # split by sign so neither branch overflows
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logit_predict(m: LogitModel, x):
    """``1 / (1 + exp(-(beta0 + beta1 x)))``; scalar in, scalar out."""
    p = _sigmoid(np.atleast_1d(m.beta0 + m.beta1 * np.asarray(x, dtype=float)))
    return float(p[0]) if np.ndim(x) == 0 else p


def mnl_predict(m: MNLModel, x):
    """Probabilities over ``m.labels`` (classes then reference) at one ``x``."""
    if not math.isfinite(x):
        raise ParameterError("x must be finite")
    logits = np.array([b0 + b1 * x for b0, b1 in m.coeffs] + [0.0])
    logits -= logits.max()
    w = np.exp(logits)
    return w / w.sum()


def _as_arrays(data):
    if isinstance(data, tuple) and len(data) == 2:
        x, y = (np.asarray(a, dtype=float) for a in data)
    else:
        x = np.array([o.x for o in data], dtype=float)
        y = np.array([o.y for o in data], dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("x and y must be 1-d and the same length")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise ParameterError("binary outcomes must be 0 or 1")
    return x, y


def logit_fit(data, tol=1e-10, max_iter=100) -> FitResult:
    """Maximum-likelihood binary logit by IRLS.

    ``data`` is a sequence of :class:`Observation` or an ``(x, y)`` pair of
    arrays. Standard errors come from the inverse information matrix at the
    optimum. Raises :class:`SeparationError` when the outcomes are constant
    or perfectly separated by ``x`` and :class:`ConvergenceError` if
    ``max_iter`` Newton steps do not settle to ``tol``.
    """
    if max_iter < 1:
        raise ParameterError("max_iter must be >= 1")
    x, y = _as_arrays(data)
    if y.size == 0 or y.min() == y.max():
        raise SeparationError("outcome is constant; need both classes to fit a logit")
    ones, zeros = x[y == 1], x[y == 0]
    if ones.min() >= zeros.max() or ones.max() <= zeros.min():
        raise SeparationError("x perfectly separates the outcomes; coefficients diverge")

    # standardise x so the Newton system is well conditioned
    loc, scale = x.mean(), x.std()
    if scale == 0:
        raise SeparationError("x is constant; slope is not identified")
    X = np.column_stack([np.ones_like(x), (x - loc) / scale])

    beta = np.zeros(2)
    for it in range(1, max_iter + 1):
        p = _sigmoid(X @ beta)
        w = p * (1.0 - p)
        info = X.T @ (X * w[:, None])
        try:
            step = np.linalg.solve(info, X.T @ (y - p))
        except np.linalg.LinAlgError:
            raise SeparationError("information matrix is singular") from None
        beta = beta + step
        if np.max(np.abs(beta)) > 1e6:
            raise SeparationError("coefficients exceed 1e6; the data look separated")
        if np.max(np.abs(step)) < tol:
            break
    else:
        raise ConvergenceError(f"IRLS did not converge in {max_iter} iterations", max_iter)

    p = _sigmoid(X @ beta)
    info = X.T @ (X * (p * (1.0 - p))[:, None])
    cov = np.linalg.inv(info)
    # back to the raw x scale: beta1 = b1/scale, beta0 = b0 - b1*loc/scale
    T = np.array([[1.0, -loc / scale], [0.0, 1.0 / scale]])
    beta_raw = T @ beta
    cov_raw = T @ cov @ T.T
    with np.errstate(divide="ignore"):
        ll = float(np.sum(y * np.log(p) + (1.0 - y) * np.log1p(-p)))
    return FitResult(
        model=LogitModel(float(beta_raw[0]), float(beta_raw[1])),
        std_errors=(float(math.sqrt(cov_raw[0, 0])), float(math.sqrt(cov_raw[1, 1]))),
        iterations=it,
        log_likelihood=ll,
    )


def generate_synthetic(kappa_A, kappa_B, v_T, volatility_dist: ValueDistribution, n, seed,
                       labeling="scenario1"):
    """Blocks whose winner is decided by the structural game.

    Each record draws a volatility ``sigma``; builder values are exponential
    with means ``kappa_A * sigma`` and ``kappa_B * sigma``; ``y = 1`` when
    A takes the block and ``x = sigma``. With ``labeling="scenario1"`` both
    builders can include the ``v_T`` transaction. ``labeling="rival_holds_tx"``
    gives the transaction to B alone. Zero-volatility draws tie and go to A
    under scenario 1.
    """
    for name, value in (("kappa_A", kappa_A), ("kappa_B", kappa_B)):
        if not (math.isfinite(value) and value > 0):
            raise ParameterError(f"{name} must be positive, got {value!r}")
    if not (math.isfinite(v_T) and v_T >= 0):
        raise ParameterError(f"v_T must be >= 0, got {v_T!r}")
    if int(n) != n or n < 0:
        raise ParameterError(f"n must be a nonnegative integer, got {n!r}")
    if labeling not in ("scenario1", "rival_holds_tx"):
        raise ParameterError(f"unknown labeling {labeling!r}")
    n = int(n)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    sigma = volatility_dist.sample(rng, n)
    v_A = kappa_A * sigma * rng.standard_exponential(n)
    v_B = kappa_B * sigma * rng.standard_exponential(n)
    if labeling == "scenario1":
        a_wins = scenario1_arrays(v_A, v_B, v_T)[0]
    else:
        a_wins = pbs_given_holder_arrays(v_A, v_B, v_T, holder="B")[0]
    return [
        Observation(float(s), int(w), block_number=i, builder="A" if w else "B")
        for i, (s, w) in enumerate(zip(sigma, a_wins))
    ]


def read_observations(path):
    """Parse an observation CSV (``CSV_HEADER`` columns) in file order."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in CSV_HEADER:
            if col not in header:
                raise ParameterError(f"missing column {col!r} (have {header})")
        for line_no, row in enumerate(reader, start=2):
            raw_x = row["log10_price_change_abs"]
            try:
                x = float(raw_x)
            except (TypeError, ValueError):
                raise ParameterError(f"row {line_no}: log10_price_change_abs {raw_x!r} is not a number") from None
            if not math.isfinite(x) or x < 0:
                raise ParameterError(f"row {line_no}: log10_price_change_abs must be finite and >= 0, got {raw_x!r}")
            flag = (row["is_hft"] or "").strip()
            if flag not in ("0", "1"):
                raise ParameterError(f"row {line_no}: is_hft must be 0 or 1, got {flag!r}")
            block = (row["block_number"] or "").strip()
            out.append(Observation(x, int(flag), int(block) if block else None, row["builder"] or ""))
    return out


def write_observations(observations: Sequence[Observation], path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for o in observations:
            writer.writerow(["" if o.block_number is None else o.block_number, o.builder, repr(o.x), o.y])
