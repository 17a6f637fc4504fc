"""Command-line driver for the experiment registry.

``decaylab run --experiment NAME [--param value ...] --out DIR`` executes one
registered experiment and writes its CSV tables, JSON summary, and log-log
figures into DIR.  ``decaylab list`` prints the registry with what each
experiment checks and its default parameters.

Exit status: 0 when the experiment's acceptance check passes, 1 when it
runs cleanly but fails the check, 2 for configuration errors, 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    ConfigError,
    ExperimentConfig,
    NumericalError,
    parse_config_file,
    registry_text,
    run_experiment,
)

_PARAM_FLAGS = (
    ("beta", "exponent of the polynomially-stable model"),
    ("alpha", "order of the inverse-power factor"),
    ("q", "weight exponent (or semigroup power, per experiment)"),
    ("p", "numerator exponent of the weighted norms"),
    ("c", "real-part shift of the model or function family"),
    ("omega_p", "lower end of the variable-parameter range"),
    ("omega_q", "upper end of the variable-parameter range"),
    ("K", "number of spectrum points"),
    ("n_grid", "geometric n grid as min:max:points"),
    ("t_grid", "geometric t grid as min:max:points"),
    ("seed", "seed for all randomized draws"),
    ("mode", "inner-supremum evaluation: exact or bound"),
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="decaylab",
        description="Measure and check decay rates of Cayley-transform powers "
        "and inverse-generator semigroups on explicit spectral models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser(
        "run", help="run one experiment and write CSV/JSON/PNG reports"
    )
    run_p.add_argument("--experiment", required=True, metavar="NAME",
                       help="registry name (see `decaylab list`)")
    run_p.add_argument("--config", metavar="FILE",
                       help="flat key=value file with parameter overrides")
    run_p.add_argument("--out", required=True, metavar="DIR",
                       help="directory for the report files")
    run_p.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering; write only CSV and JSON")
    run_p.add_argument("--threads", type=int, default=None, metavar="N",
                       help="worker processes (0 = one per CPU; default from "
                       "DECAYLAB_THREADS)")
    for name, help_text in _PARAM_FLAGS:
        flags = [f"--{name}"]
        if "_" in name:
            flags.append(f"--{name.replace('_', '-')}")
        run_p.add_argument(*flags, dest=name, default=None, metavar="VALUE",
                           help=help_text)

    sub.add_parser("list", help="print the experiment registry")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list":
        sys.stdout.write(registry_text())
        return 0

    try:
        params = parse_config_file(args.config) if args.config else {}
        for name, _ in _PARAM_FLAGS:
            value = getattr(args, name)
            if value is not None:
                params[name] = value
        params["experiment"] = args.experiment
        params["out"] = args.out
        config = ExperimentConfig.from_mapping(params)
        result = run_experiment(
            config, figures=not args.no_figures, threads=args.threads
        )
    except ConfigError as exc:
        print(f"decaylab: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"decaylab: numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"decaylab: {exc}", file=sys.stderr)
        return 2

    verdict = "PASS" if result.passed else "FAIL"
    print(f"{result.experiment}: {verdict} ({result.summary_path})")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
