import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .cli import router
from .config import config, parse_window, setup_logging
from .models import OutputFormat, RunConfig
from .reports import render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser; every command shares the run-configuration flags."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", help="base field: F2, F4:w^2+w+1, F2(t), F3(t), algebraically-closed")
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--n", type=int, help="number of Laurent variables")
    common.add_argument("--window", help="precision window lo..hi for every exponent; write --window=-2..2 when lo is negative")
    common.add_argument("--budget", type=int, help="search budget (brute-force evaluations)")
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat])
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = argparse.ArgumentParser(
        prog="brauerlab",
        description="Symbol algebras and Pfister forms over iterated Laurent series fields.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    router.install(subparsers, [common])
    return parser


def resolve_run_config(args: argparse.Namespace) -> RunConfig:
    """Config file and environment defaults, overridden by flags."""
    values = config.get_run_defaults()
    if args.window is not None:
        values["window_lo"], values["window_hi"] = parse_window(args.window)
    for key in ("base", "p", "n", "budget", "output_format"):
        value = getattr(args, key)
        if value is not None:
            values[key] = value
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    try:
        run = resolve_run_config(args)
        result = router.dispatch(args.command, args, run)
    except ValidationError as e:
        errors = "; ".join(err["msg"] for err in e.errors())
        print(f"error: {errors}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        logger.debug("input error in %s", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    print(render(result, run.output_format), end="")
    return EXIT_OK if result.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
