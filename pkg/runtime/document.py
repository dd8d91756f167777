"""
Chain + partition JSON document (contracts/chain_document_v1.schema.json).

    {"states": ["a", "b", "c"],
     "transitions": [[0, 0.5, 0.5], [0.5, 0, 0.5], [0, 0, 1]],
     "partition": {"A": ["a"], "B": ["b"], "C": ["c"]}}

A row is either a dense list of n probabilities or a sparse object
{state: probability}. Documents are validated by the same rules as
build_chain / build_partition.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import scipy.sparse as sp

from tw_chain import Chain, Partition, build_chain, partition_from_classes
from tw_chain.errors import DimensionError, DocumentError, DuplicateStateError, UnknownStateError

log = logging.getLogger(__name__)

SCHEMA_ID = "chain_document"
SCHEMA_VERSION = "v1"
REQUIRED_KEYS = ("states", "transitions", "partition")
# rows of larger chains are written sparse
SPARSE_ABOVE = 64

_OPTIONAL_KEYS = ("schema_id", "schema_version")


def _number(v: Any, where: str) -> float:
    # bool is an int subclass; JSON true/false is not a probability
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _transitions(raw: Any, states: List[str]) -> sp.csr_matrix:
    n = len(states)
    if not isinstance(raw, list):
        raise DocumentError("'transitions' must be a list of rows")
    if len(raw) != n:
        raise DimensionError(f"{len(raw)} transition rows for {n} states")
    index = {s: i for i, s in enumerate(states)}
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []
    for i, row in enumerate(raw):
        where = f"row {states[i]!r}"
        if isinstance(row, list):
            if len(row) != n:
                raise DimensionError(f"{where} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                p = _number(v, where)
                if p != 0.0:
                    rows.append(i)
                    cols.append(j)
                    vals.append(p)
        elif isinstance(row, dict):
            for s, v in row.items():
                if s not in index:
                    raise UnknownStateError(f"{where} names unknown state {s!r}")
                rows.append(i)
                cols.append(index[s])
                vals.append(_number(v, where))
        else:
            raise DocumentError(f"{where} must be a list or an object")
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def parse_document(payload: Any) -> Tuple[Chain, Partition]:
    if not isinstance(payload, dict):
        raise DocumentError("document must be a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in payload]
    if missing:
        raise DocumentError(f"missing key(s): {', '.join(missing)}")
    extra = sorted(set(payload) - set(REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if extra:
        raise DocumentError(f"unexpected key(s): {', '.join(extra)}")

    states = payload["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise DocumentError("'states' must be a list of strings")
    part = payload["partition"]
    if not isinstance(part, dict) or not all(isinstance(v, list) for v in part.values()):
        raise DocumentError("'partition' must map class names to lists of states")

    seen: set[str] = set()
    for s in states:
        if s in seen:
            raise DuplicateStateError(f"state {s!r} appears more than once")
        seen.add(s)
    chain = build_chain(states, _transitions(payload["transitions"], states))
    return chain, partition_from_classes(chain, part)


def load_document(path: Union[str, Path]) -> Tuple[Chain, Partition]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    chain, partition = parse_document(payload)
    log.info("loaded %s: %d states (|A|=%d |B|=%d |C|=%d)", path, chain.n,
             len(partition.A), len(partition.B), len(partition.C))
    return chain, partition


def _row(chain: Chain, i: int, sparse: bool) -> Union[List[float], Dict[str, float]]:
    P = chain.transition
    lo, hi = P.indptr[i], P.indptr[i + 1]
    if sparse:
        return {chain.states[j]: float(v) for j, v in zip(P.indices[lo:hi], P.data[lo:hi])}
    dense = [0.0] * chain.n
    for j, v in zip(P.indices[lo:hi], P.data[lo:hi]):
        dense[j] = float(v)
    return dense


def document_payload(chain: Chain, partition: Partition) -> Dict[str, Any]:
    sparse = chain.n > SPARSE_ABOVE
    return {
        "schema_id": SCHEMA_ID,
        "schema_version": SCHEMA_VERSION,
        "states": list(chain.states),
        "transitions": [_row(chain, i, sparse) for i in range(chain.n)],
        "partition": partition.as_classes(),
    }


def dump_document(chain: Chain, partition: Partition) -> str:
    """JSON text; floats are written with repr, which round-trips exactly."""
    return json.dumps(document_payload(chain, partition), indent=2, allow_nan=False) + "\n"
