from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, NoReturn, Optional

from tw_chain.errors import ChainError, ConfigError, SolverError

from .config import FAMILIES, FORMATS, RunConfig
from .engine import execute

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2
EXIT_SOLVER = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as a violation
    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tpw", description="Exact and simulated analysis of tripartite random walks.")
    ap.add_argument("--verbose", action="store_true", help="Log progress to stderr.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, needs_input: bool = True) -> argparse.ArgumentParser:
        if needs_input:
            p.add_argument("--input", required=True, help="Chain JSON document.")
        p.add_argument("--output", default="", help="Write to this file instead of stdout.")
        p.add_argument("--format", choices=FORMATS, default="table")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
        return p

    common(sub.add_parser("validate", help="Validate a chain document and its absorption."))
    ap_an = common(sub.add_parser("analyze", help="Exact per-state summary and proof identities."))
    ap_an.add_argument("--report-cap", type=int, default=500)

    ap_b = common(sub.add_parser("bounds", help="Evaluate every bound against the exact value."))
    ap_b.add_argument("--report-cap", type=int, default=500)
    ap_b.add_argument("--sample-pairs", type=int, default=None,
                      help="Keep a seeded sample of at most this many rows per section.")

    for name, text in (("simulate", "Monte Carlo estimates per start state."),
                       ("compare", "Monte Carlo estimates checked against exact values.")):
        p = common(sub.add_parser(name, help=text))
        p.add_argument("--n-paths", type=int, default=10_000)
        p.add_argument("--cap", type=int, default=1_000_000)
        p.add_argument("--confidence", type=float, default=0.99)
        p.add_argument("--start", action="append", help="Start state (repeatable); default all of A and B.")
        if name == "compare":
            p.add_argument("--z", type=float, default=3.0)

    ap_g = common(sub.add_parser("generate", help="Emit a generated chain document."), needs_input=False)
    ap_g.add_argument("family", choices=FAMILIES)
    ap_g.add_argument("--n", type=int, default=None)
    ap_g.add_argument("--p-right", type=float, default=0.5)
    ap_g.add_argument("--A", default="", help="Comma-separated indices (path).")
    ap_g.add_argument("--B", default="")
    ap_g.add_argument("--C", default="")
    ap_g.add_argument("--boundary", choices=("reflect", "absorb"), default="reflect")
    ap_g.add_argument("--width", type=int, default=None)
    ap_g.add_argument("--height", type=int, default=None)
    ap_g.add_argument("--laziness", type=float, default=0.0)
    ap_g.add_argument("--inner-radius", type=int, default=2)
    ap_g.add_argument("--outer-radius", type=int, default=4)
    ap_g.add_argument("--gap", type=int, default=1)
    ap_g.add_argument("--sparsity", type=float, default=0.5)
    ap_g.add_argument("--fractions", default="0.4,0.3,0.3")
    return ap


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        output.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {output}: {exc.strerror or exc}") from exc


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, execute, print. Every path returns one of 0, 1, 2, 3."""
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig.from_args(args)
        logging.basicConfig(
            level=logging.INFO if cfg.verbose else logging.WARNING,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        outcome = execute(cfg)
        _write(outcome.text, cfg.output)
    except ChainError as exc:
        print(f"error:{exc.kind}:{exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"error:{exc.kind}:{exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SystemExit as exc:
        # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    except Exception as exc:
        log.debug("internal failure", exc_info=True)
        print(f"error:internal:{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if outcome.failures:
        print(f"error:violation:{outcome.failures} check(s) failed", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
