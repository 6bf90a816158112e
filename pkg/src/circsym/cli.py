"""Command-line interface.

Subcommands: ``test``, ``summary``, ``sample``, ``simulate`` and ``info``.
Reports go to stdout as JSON.  Exit status is 0 on success (whatever the
decision), 1 on input errors and 2 when the selected test is the trivial
test.
"""

import argparse
import json
import sys

from . import __version__
from .bootstrap import BootstrapConfig, FitError, bootstrap_test, fit_family
from .dataio import UNITS, DatasetSpec, DataError, format_angles, ingest
from .distributions import FAMILIES, BaseFamily, SineSkewedModel, fisher_block
from .estimators import ZeroResultantError, circular_summary
from .powerstudy import ConfigError, export_table, load_config, run_power_study
from .sampling import sample_base, sample_sine_skewed
from .special import normalize_angle
from .symtests import (
    DEGENERATE,
    NEEDS_FAMILY,
    NEEDS_MU,
    TEST_IDS,
    TRIVIAL,
    TrivialTestError,
    canonical_test_id,
    run_test,
)

EXIT_OK, EXIT_INPUT, EXIT_TRIVIAL = 0, 1, 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1; 2 is reserved for the trivial test."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _dump(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _bootstrap_count(text):
    # accept both "--bootstrap 999" and "--bootstrap B=999"
    if text.upper().startswith("B="):
        text = text[2:]
    try:
        b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bootstrap count {text!r}") from None
    if b < 99:
        raise argparse.ArgumentTypeError("bootstrap count must be at least 99")
    return b


def _add_data_args(p):
    p.add_argument("data", help="delimited text file of angles")
    p.add_argument("--unit", choices=UNITS, default="radians")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--column", type=int, default=0)


def cmd_test(args):
    test = canonical_test_id(args.test)
    data = ingest(DatasetSpec(args.data, args.unit, args.delimiter, args.column))
    x = data.angles
    if test in NEEDS_MU and args.mu is None:
        raise UsageError(f"{test} needs --mu")
    if args.bootstrap:
        if args.family is None:
            raise UsageError("--bootstrap needs --family to simulate from")
        cfg = BootstrapConfig(
            args.family, test, args.k, args.bootstrap, args.seed, args.mu,
            refit=not args.freeze,
        )
        report = bootstrap_test(x, cfg, workers=args.workers)
    else:
        if test in NEEDS_FAMILY and args.family is None:
            raise UsageError(f"{test} needs --family")
        family = None
        if args.family is not None:
            if args.concentration is None:
                # moment fit, as in the bootstrap
                family = fit_family(args.family, x)
            else:
                family = BaseFamily(args.family, args.concentration)
        report = run_test(test, x, family, args.k, args.mu)
    if TRIVIAL in report.flags:
        raise TrivialTestError(f"{test} with von Mises and k=1 is the trivial test")
    out = report.to_dict()
    out["skipped_lines"] = data.skipped
    _dump(out)
    if DEGENERATE in report.flags:
        print("error: degenerate variance; statistic undefined", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_summary(args):
    data = ingest(DatasetSpec(args.data, args.unit, args.delimiter, args.column))
    out = circular_summary(data.angles).to_dict()
    out["skipped_lines"] = data.skipped
    out["tie_fraction"] = 1.0 - out["n_distinct"] / out["n"]
    _dump(out)
    return EXIT_OK


def cmd_sample(args):
    base = BaseFamily(args.family, args.concentration)
    if args.lam == 0.0:
        x = normalize_angle(sample_base(base, args.n, args.seed) + args.mu)
    else:
        model = SineSkewedModel(base, args.mu, args.lam, args.k)
        x = sample_sine_skewed(model, args.n, args.seed)
    text = format_angles(x)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args):
    cfg = load_config(args.config)
    table = run_power_study(cfg, workers=args.workers)
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    blob = export_table(table, fmt)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.write(blob.decode())
    return EXIT_OK


def cmd_info(args):
    base = BaseFamily(args.family, args.concentration)
    out = base.to_dict()
    out["k"] = args.k
    out.update(fisher_block(base, args.k).to_dict())
    out["trivial"] = base.kind == "vm" and args.k == 1
    _dump(out)
    return EXIT_OK


def build_parser():
    parser = _Parser(
        prog="circsym",
        description="Tests of circular reflective symmetry against sine-skewed alternatives.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="run a symmetry test on a dataset")
    _add_data_args(p)
    p.add_argument("--test", required=True, help=f"one of {', '.join(TEST_IDS)}")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument(
        "--concentration", type=float,
        help="kappa or rho of the assumed/posited family (fitted if omitted)",
    )
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mu", type=float, help="specified centre (radians) for known-centre tests")
    p.add_argument("--bootstrap", type=_bootstrap_count, metavar="B",
                   help="parametric bootstrap with B replicates")
    p.add_argument("--freeze", action="store_true",
                   help="keep the original concentration fit inside bootstrap replicates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("summary", help="descriptive summary of a dataset")
    _add_data_args(p)
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("sample", help="draw a seeded sample as CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--concentration", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate", help="run a power study from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("info", help="Fisher information block of a family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--concentration", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except TrivialTestError as exc:
        print(f"trivial test: {exc}", file=sys.stderr)
        return EXIT_TRIVIAL
    except (DataError, ConfigError, UsageError, FitError, ZeroResultantError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
