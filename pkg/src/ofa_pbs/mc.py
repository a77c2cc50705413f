"""Monte Carlo simulation of both scenarios, used as an oracle for the quadrature.

Samples are generated in fixed-size chunks. Chunk ``k`` draws from its own
Philox stream keyed by ``SeedSequence(seed, spawn_key=(k,))``, and per-chunk
sums are merged in chunk order, so results depend only on
``(seed, n_samples, chunk_size, game)`` and never on the number of worker
threads.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .detgame import pbs_given_holder_arrays, scenario1_arrays
from .dist import ParameterError
from .stochgame import StochasticGame, ofa_valuation

__all__ = [
    "MCConfig",
    "MCEstimate",
    "RNG_SCHEME",
    "simulate_scenario1",
    "simulate_scenario2",
    "direct_ofa_valuation",
    "ofa_offset",
    "estimate_to_json",
]

RNG_SCHEME = "numpy-philox4x64/seedsequence-spawn-per-chunk"


@dataclass(frozen=True)
class MCConfig:
    n_samples: int
    seed: int
    chunk_size: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        for name in ("n_samples", "chunk_size", "workers"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ParameterError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n: int

    def within(self, target, k=4.0):
        return abs(self.mean - target) <= k * self.std_error


def estimate_to_json(metric, est: MCEstimate, seed):
    return json.dumps({
        "metric": metric,
        "mean": est.mean,
        "std_error": est.std_error,
        "n": est.n,
        "seed": seed,
        "rng": RNG_SCHEME,
    })


def _chunk_rng(seed, index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _run(game, cfg, per_draw):
    """Drive ``per_draw(v_A, v_B) -> {metric: array}`` over all chunks."""
    n_chunks = -(-cfg.n_samples // cfg.chunk_size)

    def chunk(k):
        size = min(cfg.chunk_size, cfg.n_samples - k * cfg.chunk_size)
        rng = _chunk_rng(cfg.seed, k)
        v_A = game.dist_A.sample(rng, size)
        v_B = game.dist_B.sample(rng, size)
        return {m: (x.size, float(x.sum()), float(np.dot(x, x)))
                for m, x in per_draw(v_A, v_B).items()}

    if cfg.workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(chunk, range(n_chunks)))
    else:
        parts = [chunk(k) for k in range(n_chunks)]

    out = {}
    for metric in parts[0]:
        count = total = squares = 0.0
        for part in parts:
            c, s, q = part[metric]
            count += c
            total += s
            squares += q
        mean = total / count
        var = max(squares / count - mean * mean, 0.0) * count / max(count - 1, 1)
        out[metric] = MCEstimate(mean, math.sqrt(var / count), int(count))
    return out


def simulate_scenario1(game: StochasticGame, cfg: MCConfig):
    """Per draw: the efficient PBS auction with the transaction open to both builders."""
    v_T = game.v_T

    def per_draw(v_A, v_B):
        a_wins, price, surplus_A, _ = scenario1_arrays(v_A, v_B, v_T)
        return {
            "win_prob_A": a_wins.astype(float),
            "profit_A": surplus_A,
            "proposer_revenue": price,
        }

    return _run(game, cfg, per_draw)


def simulate_scenario2(game: StochasticGame, cfg: MCConfig, v_TB=None):
    """Per draw: A already holds the transaction, bought at the ex-ante ``v_TB``.

    ``total_profit_A`` is the realised PBS surplus minus that OFA price.
    ``v_TB`` defaults to the quadrature value from :func:`ofa_valuation`.
    """
    game.require_ordering()
    if v_TB is None:
        v_TB = ofa_valuation(game, "B")
    v_T = game.v_T

    def per_draw(v_A, v_B):
        a_wins, _, surplus_A, _ = pbs_given_holder_arrays(v_A, v_B, v_T, holder="A")
        return {
            "win_prob_A": a_wins.astype(float),
            "pbs_surplus_A": surplus_A,
            "total_profit_A": surplus_A - v_TB,
        }

    return _run(game, cfg, per_draw)


def direct_ofa_valuation(game: StochasticGame, builder, cfg: MCConfig) -> MCEstimate:
    """Mean realised PBS surplus from holding the transaction minus not holding it.

    This exceeds :func:`~ofa_pbs.stochgame.ofa_valuation` by
    :func:`ofa_offset`: a builder with zero top-of-block value still wins the
    block when it holds the transaction and ``v_T`` beats the rival's value.
    """
    own, _ = game.own_and_rival(builder)
    v_T = game.v_T
    rival = "B" if builder == "A" else "A"

    def per_draw(v_A, v_B):
        if v_T == 0:
            return {"value": np.zeros_like(v_A)}
        held = pbs_given_holder_arrays(v_A, v_B, v_T, holder=builder)
        lost = pbs_given_holder_arrays(v_A, v_B, v_T, holder=rival)
        idx = 2 if builder == "A" else 3
        return {"value": held[idx] - lost[idx]}

    return _run(game, cfg, per_draw)["value"]


def ofa_offset(game: StochasticGame, builder):
    """``integral_0^{v_T} F_rival(u) du``, the zero-value surplus the OFA formula omits."""
    from .quadrature import integrate

    _, rival = game.own_and_rival(builder)
    if game.v_T == 0:
        return 0.0
    return integrate(rival.cdf, 0.0, game.v_T)[0]
