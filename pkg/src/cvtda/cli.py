"""Command-line entry point: ``cvtda analyze | verify | gates``.

Exit codes: 0 success, 1 verification or analysis failure, 2 usage error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, CvtdaError, DimensionMismatchError, FormatError
from .pipeline import RunConfig, run_gates, run_pipeline, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


AUTO = "auto"


def _float_or_auto(text: str) -> float | str:
    if text == AUTO:
        return AUTO
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}")


def _epsilon_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _on_off(text: str) -> bool:
    if text in ("on", "true", "1", "yes"):
        return True
    if text in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags given on the command line override it")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--seed", type=int, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvtda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    an = sub.add_parser("analyze", help="sweep scales and estimate Betti numbers")
    _add_common(an)
    an.add_argument("--input", help="point cloud file (.csv or .json)")
    an.add_argument("--format", choices=["csv", "json"])
    an.add_argument("--normalize", action="store_const", const=True, help="project points onto the unit sphere")
    scale = an.add_mutually_exclusive_group()
    scale.add_argument("--m", type=int, help="scale register width; eps = x / 2**(m-1)")
    scale.add_argument("--epsilons", type=_epsilon_list, help="comma-separated scales")
    an.add_argument("--kmax", type=int)
    an.add_argument("--mode", choices=["pure", "mixed"])
    an.add_argument("--s", type=_float_or_auto, help="squeezing parameter or 'auto'")
    an.add_argument("--gamma", type=_float_or_auto, help="evolution strength or 'auto'")
    an.add_argument("--alpha", type=float, help="spectral shift")
    an.add_argument("--window", type=_float_or_auto, help="kernel-peak half-width or 'auto'")
    an.add_argument("--samples", type=int, help="homodyne samples per sector (0 = analytic only)")
    an.add_argument("--grover", type=_on_off, help="on/off")

    ve = sub.add_parser("verify", help="run every invariant suite")
    _add_common(ve)
    ve.add_argument("--mutate-sign", dest="mutate_sign", action="store_const", const=True,
                    help="flip one boundary sign to check that the chain-complex suite catches it")

    ga = sub.add_parser("gates", help="dual-rail gate identity sweep only")
    _add_common(ga)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is not None:
            # an explicit "auto" flag also clears a number from the config file
            data[key] = None if val == AUTO else val
    if "epsilons" in data and getattr(args, "m", None) is not None:
        data.pop("epsilons")
    if "m" in data and getattr(args, "epsilons", None) is not None:
        data.pop("m")
    return RunConfig.from_dict(data)


def _emit(report, out: str | None) -> None:
    if out is None:
        sys.stdout.write(report.dumps())
    else:
        sys.stdout.write(f"report written to {Path(out) / 'report.json'}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"cvtda: cannot read config: {exc}\n")
        return EXIT_IO
    except (ConfigError, TypeError) as exc:
        sys.stderr.write(f"cvtda: usage error: {exc}\n")
        return EXIT_USAGE
    try:
        if args.command == "analyze":
            report = run_pipeline(config)
            _emit(report, config.out)
            bad = [r for r in report.records if not r["eigen_check"]]
            return EXIT_FAIL if bad else EXIT_OK
        report = run_verification(config) if args.command == "verify" else run_gates(config)
        _emit(report, config.out)
        for name, suite in report.suites.items():
            status = "PASS" if suite["passed"] else "FAIL"
            sys.stderr.write(f"{status} {name} max_deviation={suite['max_deviation']:.3g}\n")
        return EXIT_OK if report.passed else EXIT_FAIL
    except ConfigError as exc:
        sys.stderr.write(f"cvtda: usage error: {exc}\n")
        return EXIT_USAGE
    except (OSError, FormatError, DimensionMismatchError) as exc:
        sys.stderr.write(f"cvtda: I/O error: {exc}\n")
        return EXIT_IO
    except CvtdaError as exc:
        sys.stderr.write(f"cvtda: error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
