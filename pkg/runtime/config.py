from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from tw_bounds.models import DEFAULT_BOUNDS, BoundsConfig
from tw_chain.errors import ConfigError
from tw_montecarlo.models import DEFAULT_SIMULATION, SimulationConfig

COMMANDS = ("validate", "analyze", "bounds", "simulate", "compare", "generate")
FORMATS = ("table", "csv")
FAMILIES = ("triad", "path", "annulus", "punctured", "random")


@dataclass(frozen=True)
class GenerateSpec:
    family: str
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RunConfig:
    """
    One CLI invocation, validated. No environment variables are read;
    everything comes from argv.
    """

    command: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    fmt: str = "table"
    seed: int = 0
    n_paths: int = DEFAULT_SIMULATION.n_paths
    cap: int = DEFAULT_SIMULATION.cap
    confidence_level: float = DEFAULT_SIMULATION.confidence_level
    report_cap: int = DEFAULT_BOUNDS.report_cap
    sample_pairs: Optional[int] = None
    z: float = 3.0
    starts: Tuple[str, ...] = ()
    verbose: bool = False
    generate: Optional[GenerateSpec] = None

    @property
    def bounds(self) -> BoundsConfig:
        return BoundsConfig(report_cap=self.report_cap)

    @property
    def simulation(self) -> SimulationConfig:
        return SimulationConfig(n_paths=self.n_paths, cap=self.cap, confidence_level=self.confidence_level)

    @staticmethod
    def from_args(args: argparse.Namespace) -> "RunConfig":
        command = args.cmd
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}")

        def get(name: str, default: Any = None) -> Any:
            return getattr(args, name, default)

        cfg = RunConfig(
            command=command,
            input=Path(args.input) if get("input") else None,
            output=Path(args.output) if get("output") else None,
            fmt=get("format", "table"),
            seed=int(get("seed", 0)),
            n_paths=int(get("n_paths", DEFAULT_SIMULATION.n_paths)),
            cap=int(get("cap", DEFAULT_SIMULATION.cap)),
            confidence_level=float(get("confidence", DEFAULT_SIMULATION.confidence_level)),
            report_cap=int(get("report_cap", DEFAULT_BOUNDS.report_cap)),
            sample_pairs=get("sample_pairs"),
            z=float(get("z", 3.0)),
            starts=tuple(get("start") or ()),
            verbose=bool(get("verbose", False)),
            generate=_generate_spec(args) if command == "generate" else None,
        )
        cfg.check()
        return cfg

    def check(self) -> None:
        if self.command != "generate" and self.input is None:
            raise ConfigError(f"{self.command} requires --input")
        if self.fmt not in FORMATS:
            raise ConfigError(f"--format must be one of {FORMATS}, got {self.fmt!r}")
        if self.seed < 0:
            raise ConfigError("--seed must be >= 0")
        if self.n_paths < 1:
            raise ConfigError("--n-paths must be >= 1")
        if self.cap < 1:
            raise ConfigError("--cap must be >= 1")
        if not 0.0 < self.confidence_level < 1.0:
            raise ConfigError("--confidence must lie strictly between 0 and 1")
        if self.report_cap < 1:
            raise ConfigError("--report-cap must be >= 1")
        if self.sample_pairs is not None and self.sample_pairs < 1:
            raise ConfigError("--sample-pairs must be >= 1")
        if not self.z > 0.0:
            raise ConfigError("--z must be > 0")


def _indices(raw: Optional[str]) -> Tuple[int, ...]:
    if not raw:
        return ()
    try:
        return tuple(int(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {raw!r}") from None


def _generate_spec(args: argparse.Namespace) -> GenerateSpec:
    family = args.family
    if family == "triad":
        return GenerateSpec(family)
    if family == "path":
        if args.n is None:
            raise ConfigError("generate path requires --n")
        return GenerateSpec(family, {
            "n": args.n,
            "p_right": args.p_right,
            "A": _indices(args.A),
            "B": _indices(args.B),
            "C": _indices(args.C),
            "boundary": args.boundary,
        })
    if family in ("annulus", "punctured"):
        grid = {
            "width": args.width,
            "height": args.height if args.height is not None else args.width,
            "laziness": args.laziness,
            "inner_radius": args.inner_radius,
            "outer_radius": args.outer_radius,
        }
        if grid["width"] is None:
            raise ConfigError(f"generate {family} requires --width")
        params: Dict[str, Any] = {"grid": grid}
        if family == "punctured":
            params["gap"] = args.gap
        return GenerateSpec(family, params)
    if family == "random":
        if args.n is None:
            raise ConfigError("generate random requires --n")
        try:
            fractions = tuple(float(tok) for tok in args.fractions.split(","))
        except ValueError:
            raise ConfigError(f"--fractions must be three numbers, got {args.fractions!r}") from None
        if len(fractions) != 3:
            raise ConfigError(f"--fractions must be three numbers, got {args.fractions!r}")
        return GenerateSpec(family, {
            "n": args.n,
            "seed": args.seed,
            "sparsity": args.sparsity,
            "class_fractions": fractions,
        })
    raise ConfigError(f"unknown generator family {family!r}")
