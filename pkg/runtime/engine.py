from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

from tw_bounds import full_report, proof_identities
from tw_chain import Chain, Klass, Partition, validate_absorption
from tw_chain.errors import ChainError, ConfigError, NotAbsorbingError, PartitionClassError, UnknownStateError
from tw_exact import excursion_stats, expected_hitting_time, greens_function
from tw_generators import GridSpec, grid_annulus, path_chain, punctured_annulus, random_chain, triad
from tw_montecarlo import (
    Verdict,
    compare,
    estimate_excursion_events,
    estimate_green,
    estimate_hitting_time,
)

from .config import RunConfig
from .document import dump_document, load_document, parse_document
from .report import (
    EstimateRow,
    SummaryRow,
    render_estimates,
    render_identities,
    render_report,
    render_summary,
)

log = logging.getLogger(__name__)

GREEN_DIAG = "G_AuB"
HIT_TIME = "E[T_C]"


@dataclass(frozen=True)
class Outcome:
    text: str
    # theorem violations or inconsistent comparisons; nonzero means exit 2
    failures: int = 0


def _require_absorbing(chain: Chain, partition: Partition) -> None:
    report = validate_absorption(chain, partition)
    if not report.ok:
        raise NotAbsorbingError(f"C is unreachable from: {', '.join(report.offending_states)}")


def _load(cfg: RunConfig) -> Tuple[Chain, Partition]:
    chain, partition = load_document(cfg.input)
    _require_absorbing(chain, partition)
    return chain, partition


def validate_document(cfg: RunConfig) -> Outcome:
    chain, partition = _load(cfg)
    return Outcome(
        f"ok: {chain.n} states, |A|={len(partition.A)} |B|={len(partition.B)} |C|={len(partition.C)}\n"
    )


def analyze_document(cfg: RunConfig) -> Outcome:
    chain, partition = _load(cfg)
    stats = excursion_stats(chain, partition)
    to_c = expected_hitting_time(chain, partition.C)
    rows = [
        SummaryRow(
            state=x,
            klass=partition.klass(x).value,
            to_c=to_c[x],
            exit_time=stats.exit_time[x],
            reach_other=stats.reach_other(x),
            return_after_other=stats.return_after_other(x),
            green_diag=greens_function(chain, partition.AB, x, x),
        )
        for x in partition.AB
    ]
    text = render_summary(rows, cfg.fmt)
    checks = proof_identities(chain, partition, cfg.bounds)
    if checks is None:
        return Outcome(text)
    failed = sum(1 for c in checks if not c.holds)
    return Outcome(text + "\n" + render_identities(checks, cfg.fmt), failures=failed)


def bounds_document(cfg: RunConfig) -> Outcome:
    chain, partition = _load(cfg)
    report = full_report(chain, partition, cfg.bounds, sample_pairs=cfg.sample_pairs, seed=cfg.seed)
    rows = report.rows(cfg.bounds)
    return Outcome(render_report(rows, cfg.fmt), failures=sum(1 for r in rows if r.violated))


def _starts(cfg: RunConfig, partition: Partition) -> Tuple[str, ...]:
    if not cfg.starts:
        return partition.AB
    for s in cfg.starts:
        k = partition.labels.get(s)
        if k is None:
            raise UnknownStateError(f"--start {s!r} is not a state of the chain")
        if k is Klass.C:
            raise PartitionClassError(f"--start {s!r} lies in C")
    return cfg.starts


def _estimates(cfg: RunConfig, chain: Chain, partition: Partition) -> List[EstimateRow]:
    sim = cfg.simulation
    rows: List[EstimateRow] = []
    for x in _starts(cfg, partition):
        rows.append(EstimateRow(GREEN_DIAG, x, x, estimate_green(
            chain, partition.AB, x, x, seed=cfg.seed, config=sim)))
        rows.append(EstimateRow(HIT_TIME, x, None, estimate_hitting_time(
            chain, partition.C, x, seed=cfg.seed, config=sim)))
        events = estimate_excursion_events(chain, partition, x, seed=cfg.seed, config=sim)
        rows += [EstimateRow(name, x, None, est) for name, est in events.items()]
    return rows


def simulate_document(cfg: RunConfig) -> Outcome:
    chain, partition = _load(cfg)
    return Outcome(render_estimates(_estimates(cfg, chain, partition), cfg.fmt))


def compare_document(cfg: RunConfig) -> Outcome:
    chain, partition = _load(cfg)
    stats = excursion_stats(chain, partition)
    to_c = expected_hitting_time(chain, partition.C)
    exact_events = {"psi": stats.psi, "rho": stats.rho, "sigma": stats.sigma, "phi": stats.phi}

    rows: List[EstimateRow] = []
    for r in _estimates(cfg, chain, partition):
        if r.quantity == GREEN_DIAG:
            exact = greens_function(chain, partition.AB, r.x, r.y)
        elif r.quantity == HIT_TIME:
            exact = to_c[r.x]
        else:
            exact = exact_events[r.quantity][r.x]
        verdict = compare(exact, r.estimate, cfg.z, cfg.simulation)
        rows.append(EstimateRow(r.quantity, r.x, r.y, r.estimate, exact, verdict))
    bad = sum(1 for r in rows if r.verdict is Verdict.inconsistent)
    if bad:
        log.warning("%d of %d estimates inconsistent with the exact values", bad, len(rows))
    return Outcome(render_estimates(rows, cfg.fmt), failures=bad)


def generate_document(cfg: RunConfig) -> Outcome:
    spec = cfg.generate
    if spec is None:
        raise ConfigError("generate needs a family")
    p = spec.params
    if spec.family == "triad":
        chain, partition = triad()
    elif spec.family == "path":
        chain, partition = path_chain(p["n"], p["p_right"], p["A"], p["B"], p["C"], boundary=p["boundary"])
    elif spec.family == "annulus":
        chain, partition = grid_annulus(GridSpec(**p["grid"]))
    elif spec.family == "punctured":
        chain, partition = punctured_annulus(GridSpec(**p["grid"]), p["gap"])
    elif spec.family == "random":
        chain, partition = random_chain(**p)
    else:
        raise ConfigError(f"unknown generator family {spec.family!r}")
    return Outcome(dump_document(chain, partition))


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "validate": validate_document,
    "analyze": analyze_document,
    "bounds": bounds_document,
    "simulate": simulate_document,
    "compare": compare_document,
    "generate": generate_document,
}


def execute(cfg: RunConfig) -> Outcome:
    return HANDLERS[cfg.command](cfg)


def summarize(chain: Chain, partition: Partition) -> Dict[str, Any]:
    """Exact quantities and bound tallies as a JSON-friendly dict."""
    stats = excursion_stats(chain, partition)
    to_c = expected_hitting_time(chain, partition.C)
    rows = full_report(chain, partition).rows()
    AB = partition.AB
    return {
        "stats": {
            "psi": dict(stats.psi),
            "sigma": dict(stats.sigma),
            "rho": dict(stats.rho),
            "phi": dict(stats.phi),
            "psi_sup": stats.psi_sup,
            "sigma_sup": stats.sigma_sup,
            "f_A": stats.f_A,
            "f_B": stats.f_B,
        },
        "hit_time": {x: to_c[x] for x in AB},
        "green": {f"{x},{y}": greens_function(chain, AB, x, y) for x in AB for y in AB},
        "bounds": {
            "rows": len(rows),
            "violations": sum(1 for r in rows if r.violated),
            "tight": sum(1 for r in rows if r.tight),
            "vacuous": sum(1 for r in rows if r.vacuous),
        },
    }


def process_fixture(vector: Dict[str, Any]) -> Dict[str, Any]:
    """
    Run a fixture vector ({"document": ...}) end to end. Validation
    failures are reported under ``validate.error`` instead of raised.
    """
    try:
        chain, partition = parse_document(vector["document"])
        _require_absorbing(chain, partition)
    except ChainError as exc:
        return {"validate": {"ok": False, "error": exc.kind}}
    return {"validate": {"ok": True, "error": None}, **summarize(chain, partition)}
