"""Command-line front end.

Each subcommand parses flags, calls one library function and serialises
the result: JSON for single results, CSV for tables. Numbers are written
with 15 significant digits. Exit status is 0 on success, 2 for invalid
input and 3 when a numerical routine fails to converge.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager

from . import analytic, detgame, dist, econometrics, mc, stochgame

__all__ = ["run", "main", "parse_ratio_grid", "ingest_csv"]

DIGITS = 15
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _round(obj):
    if isinstance(obj, float):
        return float(format(obj, f".{DIGITS}g")) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _dumps(obj):
    return json.dumps(_round(obj), indent=2)


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def parse_ratio_grid(text):
    """``lo:hi:step`` (both ends inclusive) or a comma-separated list."""
    if ":" in text:
        try:
            lo, hi, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise dist.ParameterError(f"bad grid {text!r}; expected lo:hi:step") from None
        if not step > 0 or hi < lo:
            raise dist.ParameterError(f"bad grid {text!r}; need step > 0 and lo <= hi")
        count = math.floor((hi - lo) / step + 1e-9)
        grid = [round(lo + i * step, 12) for i in range(count + 1)]
        return grid
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise dist.ParameterError(f"bad grid {text!r}") from None


def ingest_csv(path):
    """Observations from a CSV file, in file order."""
    return econometrics.read_observations(path)


def _dist_arg(config, rate, label):
    if config is not None:
        try:
            cfg = json.loads(config)
        except json.JSONDecodeError as exc:
            raise dist.ParameterError(f"--dist-{label}: invalid JSON ({exc})") from None
        return dist.from_config(cfg)
    if rate is None:
        raise dist.ParameterError(f"give --rate-{label} or --dist-{label}")
    return dist.make_exponential(rate)


def _game(args):
    return stochgame.StochasticGame(
        _dist_arg(args.dist_a, args.rate_a, "a"),
        _dist_arg(args.dist_b, args.rate_b, "b"),
        args.vt,
    )


def _add_game_flags(p):
    p.add_argument("--rate-a", type=float, help="exponential rate of A's top-of-block value")
    p.add_argument("--rate-b", type=float, help="exponential rate of B's top-of-block value")
    p.add_argument("--dist-a", help='JSON config, e.g. {"family": "exponential", "rate": 1}')
    p.add_argument("--dist-b", help="JSON config for B")
    p.add_argument("--vt", type=float, required=True, help="block-body transaction value")


def _add_mc_flags(p):
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--chunk-size", type=int, default=1 << 16)
    p.add_argument("--workers", type=int, default=1)


def _mc_records(results, seed):
    return [
        {"metric": k, "mean": v.mean, "std_error": v.std_error, "n": v.n, "seed": seed,
         "rng": mc.RNG_SCHEME}
        for k, v in results.items()
    ]


def cmd_solve_det(args, out):
    game = detgame.DeterministicGame(args.va, args.vb, args.vt)
    solve = detgame.solve_scenario1 if args.scenario == 1 else detgame.solve_scenario2
    out.write(_dumps({"scenario": args.scenario, **solve(game).as_dict()}) + "\n")


def cmd_value_ofa(args, out):
    game = _game(args)
    rep = stochgame.ofa_valuation_report(game)
    record = {"v_ta": rep.v_TA, "v_tb": rep.v_TB, "err_ta": rep.err_TA, "err_tb": rep.err_TB}
    if args.taylor:
        record["taylor_v_ta"] = stochgame.taylor_ofa_valuation(game, "A")
        record["taylor_v_tb"] = stochgame.taylor_ofa_valuation(game, "B")
    out.write(_dumps(record) + "\n")


def cmd_compare(args, out):
    out.write(_dumps(stochgame.compare_scenarios(_game(args)).as_dict()) + "\n")


def cmd_sweep(args, out):
    rows = analytic.sweep_comparative_statics(args.vt, args.rate_sum, parse_ratio_grid(args.ratios))
    analytic.sweep_to_csv(rows, out, digits=DIGITS)


def cmd_simulate(args, out):
    game = _game(args)
    cfg = mc.MCConfig(args.n, args.seed, args.chunk_size, args.workers)
    sim = mc.simulate_scenario1 if args.scenario == 1 else mc.simulate_scenario2
    out.write(_dumps(_mc_records(sim(game, cfg), args.seed)) + "\n")


def cmd_direct_ofa(args, out):
    game = _game(args)
    cfg = mc.MCConfig(args.n, args.seed, args.chunk_size, args.workers)
    est = mc.direct_ofa_valuation(game, args.builder, cfg)
    record = _mc_records({f"direct_v_t{args.builder.lower()}": est}, args.seed)[0]
    record["formula_value"] = stochgame.ofa_valuation(game, args.builder)
    record["offset"] = mc.ofa_offset(game, args.builder)
    out.write(_dumps(record) + "\n")


def cmd_fit_logit(args, out):
    data = ingest_csv(args.data)
    fit = econometrics.logit_fit(data, tol=args.tol, max_iter=args.max_iter)
    out.write(_dumps({
        "n_rows": len(data),
        "beta0": fit.model.beta0,
        "beta1": fit.model.beta1,
        "se_beta0": fit.std_errors[0],
        "se_beta1": fit.std_errors[1],
        "z_beta0": fit.z_scores[0],
        "z_beta1": fit.z_scores[1],
        "iterations": fit.iterations,
        "log_likelihood": fit.log_likelihood,
    }) + "\n")


def cmd_predict_logit(args, out):
    p = econometrics.logit_predict(econometrics.LogitModel(args.b0, args.b1), args.x)
    out.write(_dumps({"x": args.x, "probability": p}) + "\n")


def cmd_predict_mnl(args, out):
    model = econometrics.TABLE2_BUILDERS
    if args.coeffs:
        with open(args.coeffs) as fh:
            spec = json.load(fh)
        model = econometrics.MNLModel(
            classes=tuple(spec["classes"]),
            coeffs=tuple(tuple(c) for c in spec["coeffs"]),
            reference=spec.get("reference", "reference"),
        )
    probs = econometrics.mnl_predict(model, args.x)
    out.write(_dumps({"x": args.x, "probabilities": dict(zip(model.labels, map(float, probs)))}) + "\n")


def cmd_gen_synthetic(args, out):
    vol = _dist_arg(args.vol_dist, args.vol_rate, "vol")
    obs = econometrics.generate_synthetic(args.kappa_a, args.kappa_b, args.vt, vol, args.n,
                                          args.seed, labeling=args.labeling)
    meta = {"rows": len(obs), "seed": args.seed, "rng": mc.RNG_SCHEME, "labeling": args.labeling}
    if args.out in (None, "-"):
        econometrics.write_observations(obs, "/dev/stdout")
        sys.stderr.write(_dumps(meta) + "\n")
    else:
        econometrics.write_observations(obs, args.out)
        sys.stdout.write(_dumps({**meta, "out": args.out}) + "\n")


def build_parser():
    parser = _Parser(prog="ofa-pbs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="output path (default stdout)")
        p.set_defaults(func=fn)
        return p

    p = add("solve-det", cmd_solve_det, "equilibrium with known values")
    p.add_argument("--scenario", type=int, choices=(1, 2), required=True)
    p.add_argument("--va", type=float, required=True)
    p.add_argument("--vb", type=float, required=True)
    p.add_argument("--vt", type=float, required=True)

    p = add("value-ofa", cmd_value_ofa, "OFA valuations by quadrature")
    _add_game_flags(p)
    p.add_argument("--taylor", action="store_true", help="also report the small-v_T approximation")

    p = add("compare", cmd_compare, "win probabilities and profits in both scenarios")
    _add_game_flags(p)

    p = add("sweep", cmd_sweep, "closed-form comparative statics as CSV")
    p.add_argument("--vt", type=float, required=True)
    p.add_argument("--rate-sum", type=float, default=2.0)
    p.add_argument("--ratios", required=True, help="lo:hi:step (inclusive) or comma list")

    p = add("simulate", cmd_simulate, "Monte Carlo estimates for one scenario")
    _add_game_flags(p)
    p.add_argument("--scenario", type=int, choices=(1, 2), required=True)
    _add_mc_flags(p)

    p = add("direct-ofa", cmd_direct_ofa, "Monte Carlo direct-expectation OFA valuation")
    _add_game_flags(p)
    p.add_argument("--builder", choices=("A", "B"), required=True)
    _add_mc_flags(p)

    p = add("fit-logit", cmd_fit_logit, "fit a binary logit to an observation CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100)

    p = add("predict-logit", cmd_predict_logit, "binary logit probability")
    p.add_argument("--b0", type=float, required=True)
    p.add_argument("--b1", type=float, required=True)
    p.add_argument("--x", type=float, required=True)

    p = add("predict-mnl", cmd_predict_mnl, "multinomial logit probabilities")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--coeffs", help="JSON file with classes, coeffs[, reference]; default: published table")

    p = add("gen-synthetic", cmd_gen_synthetic, "synthetic observations from the structural model")
    p.add_argument("--kappa-a", type=float, required=True)
    p.add_argument("--kappa-b", type=float, required=True)
    p.add_argument("--vt", type=float, required=True)
    p.add_argument("--vol-rate", type=float, help="exponential rate of volatility draws")
    p.add_argument("--vol-dist", help="JSON config for the volatility distribution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--labeling", choices=("scenario1", "rival_holds_tx"), default="scenario1")
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if args.command == "gen-synthetic":
            args.func(args, None)
        else:
            with _output(args.out) as out:
                args.func(args, out)
    except (ArithmeticError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main():
    sys.exit(run())
