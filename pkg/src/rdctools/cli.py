"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 internal error.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict

from . import io as rdc_io
from .binary import CONSTRAINT_MODES, cascade3
from .bounds import (LossWeights, SampleLogDensities, complexity_upper_bound,
                     distortion_lower_bound, loss_classification, rate_upper_bound)
from .errors import ConfigError, DomainError, InvalidChannelError
from .oracle.montecarlo import RNG_ALGORITHM, simulate_binary_chain, simulate_gaussian_chain
from .sweep import DEFAULTS, build_config, read_config_file, run_curve, run_surface, run_verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_INTERNAL = 3

log = logging.getLogger("rdctools")

CONFIG_HELP = """\
config file: one `key = value` per line, `#` starts a comment. Keys and defaults:
  source = gaussian          gaussian | binary
  gamma = 1.0                source/observation correlation (gaussian)
  q_sx = 0.1                 source/observation crossover (binary)
  theta_d / theta_p / theta_c  fixed budgets for axes that are not swept
  axes =                     comma-separated name:min:max:steps[:linear|log]
  out =                      output path (stdout when empty)
  format = csv               csv | json
  seed = 0                   unsigned 64-bit seed
  verify = false             attach oracle columns (curve/surface)
  oracle_res =               200 for gaussian, 50 for binary
  tolerance = 0.005          verification tolerance in bits
  constraint_mode = proof    proof | theorem | direct
  threads = 1                worker threads; output is identical for any value
Command-line flags override file values.
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sweep_options(p):
    p.add_argument("--config", help="key-value config file")
    p.add_argument("--source", choices=("gaussian", "binary"),
                   help=f"source model (default: {DEFAULTS['source']})")
    p.add_argument("--gamma", type=float, help=f"default: {DEFAULTS['gamma']}")
    p.add_argument("--q-sx", dest="q_sx", type=float, help=f"default: {DEFAULTS['q_sx']}")
    p.add_argument("--theta-d", dest="theta_d", type=float, help="fixed MSE budget")
    p.add_argument("--theta-p", dest="theta_p", type=float, help="fixed semantic-distance budget")
    p.add_argument("--theta-c", dest="theta_c", type=float,
                   help="fixed complexity budget in bits ('inf' allowed)")
    p.add_argument("--axis", action="append", dest="axes",
                   help="swept axis name:min:max:steps[:linear|log]; repeatable")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="default: csv")
    p.add_argument("--seed", type=int, help=f"default: {DEFAULTS['seed']}")
    p.add_argument("--oracle-res", dest="oracle_res", type=int,
                   help="oracle grid points per axis (default: 200 gaussian, 50 binary)")
    p.add_argument("--tolerance", type=float, help=f"bits (default: {DEFAULTS['tolerance']})")
    p.add_argument("--constraint-mode", dest="constraint_mode", choices=CONSTRAINT_MODES,
                   help="binary semantic-distance equation (default: proof)")
    p.add_argument("--threads", type=int, help="worker threads (default: 1)")


def build_parser():
    parser = _Parser(prog="rdctools", description="Rate-distortion-complexity functions, "
                     "oracles and variational bound estimators.",
                     epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("curve", "one swept budget"), ("surface", "two swept budgets"),
                           ("verify", "closed form vs oracle on 1-3 swept budgets")):
        p = sub.add_parser(name, help=helptext, epilog=CONFIG_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        _sweep_options(p)
        if name != "verify":
            p.add_argument("--verify", action="store_true", default=None,
                           help="attach oracle_rate/oracle_gap columns")
        else:
            p.add_argument("--report", help="write the JSON verification report here")

    p = sub.add_parser("simulate", help="Monte-Carlo simulation of the coding chain",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("kind", choices=("gaussian", "binary"))
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--rho", type=float, default=0.8)
    p.add_argument("--kappa", type=float, default=0.5)
    p.add_argument("--sigma", type=float, default=0.8)
    p.add_argument("--q-sx", dest="q_sx", type=float, default=0.1)
    p.add_argument("--q-xu", dest="q_xu", type=float, default=0.2)
    p.add_argument("--q-ushat", dest="q_ushat", type=float, default=0.1)
    p.add_argument("-n", "--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")

    p = sub.add_parser("bounds", help="variational bound estimates from sample log-densities",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("samples", help="JSON file with the per-sample log-density arrays")
    p.add_argument("--lambda-c", dest="lambda_c", type=float, default=1.0)
    p.add_argument("--lambda-d", dest="lambda_d", type=float, default=1.0)
    p.add_argument("--entropy-s", dest="entropy_s", type=float, default=0.0,
                   help="H(S) in bits, added to the distortion lower bound")
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    return parser


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_from_args(args):
    raw = read_config_file(args.config) if args.config else {}
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    return build_config(raw)


def _cmd_sweep(args):
    config = _config_from_args(args)
    if args.command == "verify":
        return _cmd_verify(args, config)
    points = run_curve(config) if args.command == "curve" else run_surface(config)
    if config.verify:
        report = run_verify(config)
        points = report.points
    _emit(rdc_io.render(points, config, with_oracle=config.verify), config.out)
    return EXIT_OK


def _cmd_verify(args, config):
    report = run_verify(config)
    _emit(rdc_io.render(report.points, config, with_oracle=True), config.out)
    summary = report.as_dict()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, default=_jsonable)
            fh.write("\n")
    err = sys.stderr
    print(f"verify: {len(report.points)} points, {len(report.discrepancies)} discrepancies, "
          f"{len(report.ambiguous)} in the documented ambiguity region "
          f"(tolerance {report.tolerance:g} bits)", file=err)
    ambiguous = {id(p) for p in report.ambiguous}
    for p in report.worst():
        tag = " (ambiguity region)" if id(p) in ambiguous else ""
        print(f"  theta_d={p.theta_d} theta_p={p.theta_p} theta_c={p.theta_c} "
              f"rate={p.rate} oracle={p.oracle_rate} gap={p.oracle_gap:+.3e}{tag}", file=err)
    for p, reason in report.discrepancies[:10]:
        print(f"  FAIL theta_d={p.theta_d} theta_p={p.theta_p} theta_c={p.theta_c}: {reason}",
              file=err)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(v)


def _cmd_simulate(args):
    if args.kind == "gaussian":
        res = simulate_gaussian_chain(args.gamma, args.rho, args.kappa, args.sigma,
                                      args.samples, args.seed, args.threads)
        doc = {"kind": "gaussian", "params": {"gamma": args.gamma, "rho": args.rho,
                                              "kappa": args.kappa, "sigma": args.sigma},
               "mse": asdict(res["mse"]), "w2": asdict(res["w2"]),
               "expected_mse": 1 + args.sigma ** 2 - 2 * args.gamma * args.rho * args.kappa,
               "expected_w2": (1 - args.sigma) ** 2}
    else:
        est = simulate_binary_chain(args.q_sx, args.q_xu, args.q_ushat, args.samples,
                                    args.seed, args.threads)
        doc = {"kind": "binary", "params": {"q_sx": args.q_sx, "q_xu": args.q_xu,
                                            "q_ushat": args.q_ushat},
               "crossover": asdict(est),
               "expected_crossover": cascade3(args.q_sx, args.q_xu, args.q_ushat)}
    doc["rng"] = RNG_ALGORITHM
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_bounds(args):
    try:
        with open(args.samples, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read samples: {exc}") from None
    samples = SampleLogDensities.from_mapping(data)
    w = LossWeights(lambda_c=args.lambda_c, lambda_d=args.lambda_d)
    out = {}
    estimators = {
        "complexity_upper": (("log_p_u_given_x", "log_t_u"), complexity_upper_bound),
        "rate_upper": (("log_p_shat_given_u", "log_r_shat"), rate_upper_bound),
        "distortion_lower": (("log_q_s_given_shat",),
                             lambda s: distortion_lower_bound(s, args.entropy_s)),
    }
    for key, (needs, fn) in estimators.items():
        if all(getattr(samples, f) is not None for f in needs):
            out[key] = asdict(fn(samples))
    if len(out) == 3:
        out["loss_classification"] = asdict(loss_classification(samples, w))
    if not out:
        raise ConfigError("samples file carries no complete field pair")
    out["weights"] = asdict(w)
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"curve": _cmd_sweep, "surface": _cmd_sweep, "verify": _cmd_sweep,
                "simulate": _cmd_simulate, "bounds": _cmd_bounds}
    try:
        return handlers[args.command](args)
    except (ConfigError, DomainError, InvalidChannelError) as exc:
        print(f"rdctools: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:  # noqa: BLE001
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
