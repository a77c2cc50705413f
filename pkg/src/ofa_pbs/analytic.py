"""Closed forms for exponentially distributed top-of-block values.

With ``v_A ~ Exp(lambda_A)`` and ``v_B ~ Exp(lambda_B)``, ``lambda_A < lambda_B``
(so A is the stronger builder), every quantity of the two-scenario
comparison has an elementary expression. :func:`sweep_comparative_statics`
varies ``lambda_A / (lambda_A + lambda_B)`` with the sum held fixed.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass

from .dist import ParameterError
from .stochgame import OrderingError

__all__ = [
    "ExpGameParams",
    "ClosedFormReport",
    "SweepRow",
    "exp_closed_forms",
    "profit_gap_terms",
    "sweep_comparative_statics",
    "sweep_to_csv",
    "SWEEP_HEADER",
]

SWEEP_HEADER = ("ratio", "win_s1", "win_s2", "profit_s1", "profit_s2", "v_ta", "v_tb")


@dataclass(frozen=True)
class ExpGameParams:
    lambda_A: float
    lambda_B: float
    v_T: float

    def __post_init__(self):
        for name in ("lambda_A", "lambda_B"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.v_T) or self.v_T < 0:
            raise ParameterError(f"v_T must be finite and >= 0, got {self.v_T!r}")


@dataclass(frozen=True)
class ClosedFormReport:
    v_TA: float
    v_TB: float
    win_s1: float
    win_s2: float
    profit_s1: float
    profit_s2: float
    profit_gap: float


def _ofa_value(own, rival, v_T):
    # own = rate of the valuing builder
    return (own * -math.expm1(-v_T * rival) + rival * -math.expm1(-v_T * own)) / (own * own + own * rival)


def profit_gap_terms(p: ExpGameParams):
    """The two nonnegative summands of ``profit_s2 - profit_s1``.

    The first is the OFA margin ``v_TA - v_TB``; the second is the gain in
    PBS surplus from holding the transaction.
    """
    la, lb, v_T = p.lambda_A, p.lambda_B, p.v_T
    ea, eb = -math.expm1(-v_T * la), -math.expm1(-v_T * lb)
    margin = (lb - la) * (la * eb + lb * ea) / (la * lb * (la + lb))
    return margin, eb / (la + lb)


def _closed_forms(la, lb, v_T):
    eb = -math.expm1(-v_T * lb)
    v_TA = _ofa_value(la, lb, v_T)
    v_TB = _ofa_value(lb, la, v_T)
    win_s1 = lb / (la + lb)
    # 1 - e^{-v_T lb} la/(la+lb), arranged to reduce to win_s1 exactly at v_T = 0
    win_s2 = (lb + la * eb) / (la + lb)
    profit_s1 = lb / (la * (la + lb))
    margin, pbs_gain = profit_gap_terms(ExpGameParams(la, lb, v_T))
    profit_s2 = margin + (lb + la * eb) / (la * (la + lb))
    return ClosedFormReport(v_TA, v_TB, win_s1, win_s2, profit_s1, profit_s2, margin + pbs_gain)


def exp_closed_forms(p: ExpGameParams) -> ClosedFormReport:
    if not p.lambda_A < p.lambda_B:
        raise OrderingError(
            f"closed forms need lambda_A < lambda_B for A to be the stronger builder, "
            f"got {p.lambda_A} >= {p.lambda_B}"
        )
    return _closed_forms(p.lambda_A, p.lambda_B, p.v_T)


@dataclass(frozen=True)
class SweepRow:
    ratio: float
    win_s1: float
    win_s2: float
    profit_s1: float
    profit_s2: float
    v_ta: float
    v_tb: float
    boundary: bool = False


def _row(ratio, v_T, rate_sum):
    la, lb = ratio * rate_sum, (1.0 - ratio) * rate_sum
    # ratio 0.5 breaks the strict ordering; the formulas are continuous there
    boundary = not la < lb
    r = _closed_forms(la, lb, v_T) if boundary else exp_closed_forms(ExpGameParams(la, lb, v_T))
    return SweepRow(ratio, r.win_s1, r.win_s2, r.profit_s1, r.profit_s2, r.v_TA, r.v_TB, boundary)


def sweep_comparative_statics(v_T, rate_sum, ratio_grid, workers=None):
    """One row per ratio ``lambda_A / rate_sum`` in grid order.

    Ratios must lie in ``(0, 0.5]``; the symmetric endpoint 0.5 is flagged
    with ``boundary=True``.
    """
    ExpGameParams(1.0, 1.0, v_T)  # validates v_T
    if not (math.isfinite(rate_sum) and rate_sum > 0):
        raise ParameterError(f"rate_sum must be positive, got {rate_sum!r}")
    grid = [float(r) for r in ratio_grid]
    for r in grid:
        if not 0.0 < r <= 0.5:
            raise ParameterError(f"ratio {r!r} is outside (0, 0.5]")
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda r: _row(r, v_T, rate_sum), grid))
    return [_row(r, v_T, rate_sum) for r in grid]


def sweep_to_csv(rows, fh=None, digits=None):
    """Write rows as CSV with ``SWEEP_HEADER`` columns.

    Values are written at full round-trip precision unless ``digits``
    (significant digits) is given. Returns the text when ``fh`` is None.
    """
    fmt = repr if digits is None else (lambda x: format(x, f".{digits}g"))
    out = fh if fh is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([fmt(float(x)) for x in astuple(row)[: len(SWEEP_HEADER)]])
    return out.getvalue() if fh is None else None
