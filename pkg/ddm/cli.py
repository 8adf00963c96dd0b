# -*- coding: utf-8 -*-

# Copyright 2026 The ddm authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command line tool: `ddm <command> [options]`. Standard output carries only the report, logs go to
standard error. Exit status 0 on success, 1 when a check reports findings, 2 on errors.
"""

import argparse
import logging
import sys

import numpy as np

from ddm import version
from ddm.coding import (CodingException, cauchy_profile, coding_point, energy_u, entropy_equilibrium,
                        martingale_diagnostic, pushforward_checks, sample_admissible_past)
from ddm.config import ConfigException, load_system, measure_for, resolve_initial, run_config
from ddm.markovsystem import MarkovSystem, SystemException, validate_system
from ddm.measurebase import MeasureException
from ddm.measurepath import cylinders_up_to
from ddm.outermeasure import (CoverException, CoverParams, invariance_residual, npr_report, phi_bruteforce,
                              phi_estimate, phi_star_estimate, verify_cover)
from ddm.reportbase import Report, ReportException, validate_report
from ddm.reportlocal import FORMATS, ReportLocal
from ddm.selftest import Selftest
from ddm.shift import CylinderSet, ShiftException, parse_cylinder_set

EQUILIBRIUM_TOLERANCE = 1e-12
PUSHFORWARD_TOLERANCE = 1e-10

KNOWN_EXCEPTIONS = (ShiftException, SystemException, MeasureException, CoverException, CodingException,
                    ConfigException, ReportException)

logger = logging.getLogger("ddm.cli")


class RunContext(object):
    """System, initial distribution and measure of one run, built on first use from the run config"""

    def __init__(self, config):
        self.config = config
        self.arithmetic = config["arithmetic"]
        self._system = None
        self._nu = None

    @property
    def system(self):
        if self._system is None:
            self._system = load_system(self.config["system"], self.arithmetic)
        return self._system

    @property
    def markov(self):
        if not isinstance(self.system, MarkovSystem):
            raise ConfigException("this command needs a Markov system, '{}' is a measure".format(self.config["system"]))
        return self.system

    @property
    def nu(self):
        if self._nu is None:
            self._nu = resolve_initial(self.system, self.config["initial"], self.arithmetic)
        return self._nu

    @property
    def measure(self):
        return measure_for(self.system, self.nu)

    @property
    def alphabet(self):
        return self.system.alphabet

    @property
    def params(self):
        cover = self.config["cover"]
        return CoverParams(cover["past_depth"], cover["future_depth"], cover["node_budget"], self.arithmetic)

    def query(self, text):
        if text is None:
            return CylinderSet.full(self.alphabet, 0)
        return parse_cylinder_set(text, self.alphabet)

    def word(self, text):
        if not text:
            raise ConfigException("a past word is required, e.g. --word a,b,c")
        return tuple(s.strip() for s in text.split(","))


def _validate(ctx, params):
    system = load_system(ctx.config["system"], ctx.arithmetic, validate=False)
    if not isinstance(system, MarkovSystem):
        return {"system": ctx.config["system"], "findings": [], "measure": system.describe()}, 0
    findings = validate_system(system, params.get("grid", 1024))
    return {"system": system.name, "findings": findings, "valid": not findings}, 1 if findings else 0


def _phi(ctx, params):
    query = ctx.query(params.get("set"))
    estimate = phi_estimate(ctx.measure, None, query, ctx.params, params.get("profile", True))
    results = estimate.to_dict()
    results["query"] = str(query)
    results["certificate"] = verify_cover(ctx.measure, None, query, estimate.optimal_cover)
    return results, 0


def _phi_m(ctx, params):
    query = ctx.query(params.get("set"))
    depth = params.get("depth", 0)
    return {"query": str(query), "depth": depth, "value": ctx.measure.phi_set_mass(depth, query)}, 0


def _phi_star(ctx, params):
    query = ctx.query(params.get("set"))
    star = phi_star_estimate(ctx.measure, None, query, ctx.params, params.get("k_max", 2),
                             params.get("matched_depth", False))
    results = star.to_dict()
    results["query"] = str(query)
    return results, 0


def _invariance(ctx, params):
    query = ctx.query(params.get("set"))
    results = invariance_residual(ctx.measure, None, query, ctx.params)
    results["query"] = str(query)
    return results, 0


def _npr_report(ctx, params):
    family = cylinders_up_to(ctx.alphabet, params.get("max_length", 2))
    results = npr_report(ctx.measure, None, ctx.params, family)
    return results, 1 if results["bound_verdict"] == "violated" or results["equivalence"] == "contradicted" else 0


def _parse_window(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except (ValueError, AttributeError):
        raise ConfigException("window must be written lo:hi, got '{}'".format(text))
    return lo, hi


def _oracle(ctx, params):
    query = ctx.query(params.get("set"))
    lo, hi = _parse_window(params.get("window") or "-2:0")
    end = (query.window() or (0, 0))[1]
    if hi < end:
        raise ConfigException("window ends at {} before the query end {}".format(hi, end))
    cover = ctx.config["cover"]
    dp_params = CoverParams(-lo, hi - end, cover["node_budget"], ctx.arithmetic)
    dp = phi_estimate(ctx.measure, None, query, dp_params, False)
    oracle = phi_bruteforce(ctx.measure, None, query, (lo, hi))
    equal = dp.value == oracle.value if ctx.arithmetic == "rational" else abs(dp.value - oracle.value) <= 1e-12
    results = {"query": str(query), "window": [lo, hi], "dp": dp.to_dict(), "oracle": oracle.to_dict(),
               "equal": equal}
    return results, 0 if equal else 1


def _coding(ctx, params):
    word = ctx.word(params.get("word"))
    result = coding_point(ctx.markov, word)
    results = result.to_dict()
    if result.admissible:
        results["cauchy"] = cauchy_profile(ctx.markov, word)
    return results, 0


def _energy(ctx, params):
    word = ctx.word(params.get("word"))
    symbol = params.get("next")
    if symbol is None:
        raise ConfigException("energy needs the next symbol, --next")
    return energy_u(ctx.markov, word, symbol).to_dict(), 0


def _martingale(ctx, params):
    system = ctx.markov
    depth = params.get("depth", 10)
    symbol = params.get("symbol") or system.alphabet.symbols[0]
    rng = np.random.default_rng(ctx.config["seed"])
    words = [sample_admissible_past(system, depth + 1, rng) for _ in range(params.get("samples", 10))]
    nu = ctx.nu if system.is_finite_chain() else None
    results = martingale_diagnostic(system, nu, symbol, words, depth)
    return results, 1 if results["violations"] else 0


def _entropy(ctx, params):
    mode = params.get("mode", "exact-chain")
    nu = ctx.nu if mode == "exact-chain" else None
    return entropy_equilibrium(ctx.markov, nu, mode, params.get("samples", 100000), params.get("burn_in", 1000),
                               ctx.config["seed"], ctx.config["workers"])


def _entropy_cmd(ctx, params):
    return _entropy(ctx, params), 0


def _equilibrium(ctx, params):
    results = _entropy(ctx, params)
    if results["mode"] != "exact-chain":
        return results, 0
    results["holds"] = abs(results["residual"]) <= EQUILIBRIUM_TOLERANCE
    return results, 0 if results["holds"] else 1


def _pushforward(ctx, params):
    results = pushforward_checks(ctx.markov, ctx.nu, ctx.params, params.get("max_length", 3))
    results["holds"] = (results["sibpm_residual"] <= PUSHFORWARD_TOLERANCE
                        and results["eoim_residual"] <= PUSHFORWARD_TOLERANCE)
    return results, 0 if results["holds"] else 1


def _selftest(ctx, params):
    results = Selftest(ctx.config["seed"], params.get("scale", 1.0), ctx.config["workers"]).run()
    return results, 0 if results["passed"] else 1


COMMANDS = {
    "validate": _validate,
    "phi": _phi,
    "phi-m": _phi_m,
    "phi-star": _phi_star,
    "invariance": _invariance,
    "npr-report": _npr_report,
    "oracle": _oracle,
    "coding": _coding,
    "energy": _energy,
    "martingale": _martingale,
    "entropy": _entropy_cmd,
    "equilibrium": _equilibrium,
    "pushforward-check": _pushforward,
    "selftest": _selftest,
}


def run(command, config):
    """
    Executes one command on a resolved run configuration
    :param command: one of COMMANDS
    :param config: dict as produced by ddm.config.run_config
    :return: Report
    """
    if command not in COMMANDS:
        raise ConfigException("unknown command '{}'".format(command))
    ctx = RunContext(config)
    results, exit_code = COMMANDS[command](ctx, config.get("params", {}))
    provenance = {"seed": config["seed"], "workers": config["workers"]}
    return Report(command, config, results, exit_code, provenance)


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--preset", choices=("g1", "g2", "g3"), help="embedded system (default g1)")
    source.add_argument("--system", help="TOML system file")
    common.add_argument("--initial", default="nu0",
                        help="nu0, nuprime:<states>, dirac:<point>, stationary or file:<yaml> (default nu0)")
    common.add_argument("--arith", choices=("float", "rational"), default="float", help="number type")
    common.add_argument("--output", choices=FORMATS, default="json", help="report format")
    common.add_argument("--out", help="write the report to this file instead of standard output")
    common.add_argument("--workers", type=int, default=1, help="worker processes for Monte Carlo estimates")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    common.add_argument("--past-depth", type=int, default=4, help="deepest charge depth M of covers")
    common.add_argument("--future-depth", type=int, default=0, help="future coordinates L past the query")
    common.add_argument("--node-budget", type=int, default=1000000, help="cover search node budget")
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="ddm", description="Dynamically defined measures on shift spaces")
    parser.add_argument("--version", action="version", version="%(prog)s " + version)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("validate", "check the Markov system invariants")
    p.add_argument("--grid", type=int, default=1024, help="grid density on intervals")
    p = add("phi", "window estimate of the outer measure of a cylinder set")
    p.add_argument("--set", help="cylinder set, e.g. 'm=0;w=a|m=1;w=b' (default: whole space)")
    p.add_argument("--no-profile", dest="profile", action="store_false", help="skip the depth profile")
    p = add("phi-m", "mass of a cylinder set under one member of the family")
    p.add_argument("--set")
    p.add_argument("--m", "--depth", dest="depth", type=int, default=0, help="depth m <= 0")
    p = add("phi-star", "estimates of the shifted outer measures for k = 0..k-max")
    p.add_argument("--set")
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--matched-depth", action="store_true", help="evaluate the k-th term at past depth M-k")
    p = add("invariance", "shift chain of window estimates for a cylinder set")
    p.add_argument("--set")
    p = add("npr-report", "outer mass of the whole space against the family deviation")
    p.add_argument("--max-length", type=int, default=2, help="longest cylinder of the test family")
    p = add("oracle", "compare the cover search with brute force on a window")
    p.add_argument("--set")
    p.add_argument("--window", default="-2:0", help="lo:hi coordinates")
    p = add("coding", "coding point of a past word with its error bound")
    p.add_argument("--word", help="past symbols oldest first, e.g. a,b,c")
    p = add("energy", "energy u of a past word and the next symbol")
    p.add_argument("--word")
    p.add_argument("--next", help="next symbol")
    p = add("martingale", "p_e along growing pasts of sampled words")
    p.add_argument("--symbol")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--samples", type=int, default=10, help="number of sampled pasts")
    for name, help_text in (("entropy", "entropy and energy integral"),
                            ("equilibrium", "equilibrium identity h + integral of u = 0")):
        p = add(name, help_text)
        p.add_argument("--mode", choices=("exact-chain", "estimate"), default="exact-chain")
        p.add_argument("--samples", type=int, default=100000)
        p.add_argument("--burn-in", type=int, default=1000)
    p = add("pushforward-check", "pushforward of the outer measure to the state space")
    p.add_argument("--max-length", type=int, default=3)
    p = add("selftest", "acceptance suite")
    p.add_argument("--scale", type=float, default=1.0, help="fraction of random systems to run")
    return parser


GLOBAL_OPTIONS = ("command", "preset", "system", "initial", "arith", "output", "out", "workers", "seed", "log_level",
                  "past_depth", "future_depth", "node_budget")


def config_from_args(args):
    params = {k: v for k, v in vars(args).items() if k not in GLOBAL_OPTIONS}
    return run_config({
        "system": args.system or args.preset or "g1",
        "initial": args.initial,
        "arithmetic": args.arith,
        "cover": {"past_depth": args.past_depth, "future_depth": args.future_depth, "node_budget": args.node_budget},
        "output": {"format": args.output, "path": args.out},
        "workers": args.workers,
        "seed": args.seed,
        "loglevel": args.log_level,
        "params": params,
    })


VALUE_OPTIONS = ("--window",)


def join_values(argv):
    """Glue '--window -3:0' into '--window=-3:0' so a leading minus is not read as an option"""
    out = []
    tokens = iter(argv)
    for token in tokens:
        if token in VALUE_OPTIONS:
            value = next(tokens, None)
            out.append(token if value is None else "{}={}".format(token, value))
        else:
            out.append(token)
    return out


def main(argv=None):
    args = build_parser().parse_args(join_values(sys.argv[1:] if argv is None else argv))
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, args.log_level),
                        format="%(asctime)s %(levelname)s %(name)s %(message)s")
    sink = ReportLocal()
    try:
        config = config_from_args(args)
        sink.report_connect(config["output"])
        report = run(args.command, config)
        validate_report(report.to_dict())
        sink.write(report)
        return report.exit_code
    except CoverException as e:
        logger.error("{} (best bound {})".format(e, e.best_bound))
        return e.exit_code
    except ConfigException as e:
        for finding in e.findings:
            logger.error("{}: {}".format(finding["invariant"], finding["detail"]))
        where = " at line {} column {}".format(e.line, e.column) if e.line else ""
        logger.error("{}{}".format(e, where))
        return e.exit_code
    except KNOWN_EXCEPTIONS as e:
        logger.error(str(e))
        return e.exit_code
    finally:
        sink.report_disconnect()


if __name__ == "__main__":
    sys.exit(main())
