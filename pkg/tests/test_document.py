from __future__ import annotations

import json

import numpy as np
import pytest

from runtime.document import (
    SCHEMA_ID,
    SCHEMA_VERSION,
    SPARSE_ABOVE,
    document_payload,
    dump_document,
    load_document,
    parse_document,
)
from tw_chain.errors import (
    DimensionError,
    DocumentError,
    DuplicateStateError,
    EmptyClassError,
    MissingStateError,
    NegativeEntryError,
    PartitionClassError,
    RowSumError,
    UnknownStateError,
)
from tw_generators import GridSpec, grid_annulus


def _triad_doc(**overrides):
    doc = {
        "states": ["a", "b", "c"],
        "transitions": [[0, 0.5, 0.5], [0.5, 0, 0.5], [0, 0, 1]],
        "partition": {"A": ["a"], "B": ["b"], "C": ["c"]},
    }
    doc.update(overrides)
    return doc


def test_parse_triad():
    chain, part = parse_document(_triad_doc())
    assert chain.states == ("a", "b", "c")
    assert chain.p("a", "b") == 0.5
    assert part.A == ("a",) and part.B == ("b",) and part.C == ("c",)


def test_sparse_rows_match_dense():
    dense, _ = parse_document(_triad_doc())
    sparse, _ = parse_document(_triad_doc(transitions=[{"b": 0.5, "c": 0.5}, {"a": 0.5, "c": 0.5}, {"c": 1}]))
    np.testing.assert_array_equal(dense.dense, sparse.dense)


def test_optional_schema_keys():
    parse_document(_triad_doc(schema_id=SCHEMA_ID, schema_version=SCHEMA_VERSION))


def test_dump_then_load(tmp_path, tri):
    chain, part = tri
    path = tmp_path / "triad.json"
    path.write_text(dump_document(chain, part), encoding="utf-8")
    again, again_part = load_document(path)
    np.testing.assert_array_equal(chain.dense, again.dense)
    assert again_part.labels == part.labels


def test_large_chains_are_written_sparse():
    chain, part = grid_annulus(GridSpec(width=11, height=11, laziness=0.5, inner_radius=2, outer_radius=4))
    assert chain.n > SPARSE_ABOVE
    payload = document_payload(chain, part)
    assert all(isinstance(row, dict) for row in payload["transitions"])
    again, _ = parse_document(json.loads(json.dumps(payload)))
    np.testing.assert_array_equal(chain.dense, again.dense)


@pytest.mark.parametrize("doc, error", [
    (_triad_doc(transitions=[[0, 0.6, 0.5], [0.5, 0, 0.5], [0, 0, 1]]), RowSumError),
    (_triad_doc(transitions=[[0, 1.5, -0.5], [0.5, 0, 0.5], [0, 0, 1]]), NegativeEntryError),
    (_triad_doc(transitions=[[0, 1], [0.5, 0, 0.5], [0, 0, 1]]), DimensionError),
    (_triad_doc(transitions=[[0, 0.5, 0.5], [0.5, 0, 0.5]]), DimensionError),
    (_triad_doc(transitions=[{"z": 1.0}, [0.5, 0, 0.5], [0, 0, 1]]), UnknownStateError),
    (_triad_doc(transitions=[[0, True, 0], [0.5, 0, 0.5], [0, 0, 1]]), DocumentError),
    (_triad_doc(transitions=[["x", 0.5, 0.5], [0.5, 0, 0.5], [0, 0, 1]]), DocumentError),
    (_triad_doc(transitions=[7, [0.5, 0, 0.5], [0, 0, 1]]), DocumentError),
    (_triad_doc(states=["a", "a", "c"]), DuplicateStateError),
    (_triad_doc(states="abc"), DocumentError),
    (_triad_doc(partition={"A": ["a"], "C": ["c"]}), MissingStateError),
    (_triad_doc(partition={"A": ["a"], "B": ["b"], "C": ["c", "z"]}), UnknownStateError),
    (_triad_doc(partition={"A": ["a"], "B": ["b"], "D": ["c"]}), PartitionClassError),
    (_triad_doc(partition={"A": ["a", "b"], "B": ["b"], "C": ["c"]}), PartitionClassError),
    (_triad_doc(partition={"B": ["a", "b"], "C": ["c"]}), EmptyClassError),
    (_triad_doc(extra=1), DocumentError),
    ({"states": ["a"]}, DocumentError),
    ([], DocumentError),
])
def test_invalid_documents(doc, error):
    with pytest.raises(error):
        parse_document(doc)


def test_load_errors(tmp_path):
    with pytest.raises(DocumentError):
        load_document(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(DocumentError, match="invalid JSON"):
        load_document(bad)


def test_dump_is_strict_json(tri):
    text = dump_document(*tri)
    assert text.endswith("\n")
    assert json.loads(text)["schema_version"] == SCHEMA_VERSION
