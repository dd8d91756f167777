from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp

from tw_chain import (
    Klass,
    build_chain,
    build_partition,
    partition_from_classes,
    stopping_spec,
    validate_absorption,
)
from tw_chain.errors import (
    ChainError,
    DimensionError,
    DuplicateStateError,
    EmptyClassError,
    MissingStateError,
    NegativeEntryError,
    PartitionClassError,
    RowSumError,
    UnknownStateError,
)
from tw_chain.graph import reaching_mask

TRIAD_P = [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.0, 0.0, 1.0]]


def test_build_chain_keeps_order_and_values():
    chain = build_chain(["a", "b", "c"], TRIAD_P)
    assert chain.states == ("a", "b", "c")
    assert chain.p("a", "b") == 0.5
    assert chain.row("c") == {"c": 1.0}
    np.testing.assert_array_equal(chain.dense, np.array(TRIAD_P))


def test_build_chain_accepts_sparse_input():
    chain = build_chain(["a", "b", "c"], sp.csr_matrix(np.array(TRIAD_P)))
    assert chain.p("b", "a") == 0.5


def test_row_within_tolerance_is_rescaled():
    chain = build_chain(["x", "y"], [[0.5, 0.5 + 5e-13], [0.0, 1.0]])
    assert sum(chain.row("x").values()) == pytest.approx(1.0, abs=1e-15)


def test_rebuilding_a_chain_is_lossless():
    rng = np.random.default_rng(3)
    P = rng.random((7, 7))
    P /= P.sum(axis=1, keepdims=True)
    first = build_chain([f"s{i}" for i in range(7)], P)
    second = build_chain(first.states, first.dense.copy())
    np.testing.assert_array_equal(first.dense, second.dense)


@pytest.mark.parametrize(
    "states, matrix, error",
    [
        (["a", "b"], [[1.0, 0.0]], DimensionError),
        (["a", "b"], [[1.0, 0.0], [0.0]], DimensionError),
        (["a", "b"], [[1.1, 0.0], [0.0, 1.0]], RowSumError),
        (["a", "b"], [[0.6, 0.5], [0.0, 1.0]], RowSumError),
        (["a", "b"], [[1.2, -0.2], [0.0, 1.0]], NegativeEntryError),
        (["a", "b"], [[float("nan"), 1.0], [0.0, 1.0]], NegativeEntryError),
        (["a", "a"], [[1.0, 0.0], [0.0, 1.0]], DuplicateStateError),
        ([], [], DimensionError),
    ],
)
def test_build_chain_rejects(states, matrix, error):
    with pytest.raises(error):
        build_chain(states, matrix)


def test_error_kinds_are_stable():
    with pytest.raises(ChainError) as info:
        build_chain(["a", "b"], [[0.6, 0.5], [0.0, 1.0]])
    assert info.value.kind == "row-sum"


class TestPartition:
    def setup_method(self):
        self.chain = build_chain(["a", "b", "c"], TRIAD_P)

    def test_classes_in_state_order(self):
        part = build_partition(self.chain, {"c": "C", "b": Klass.B, "a": "A"})
        assert part.A == ("a",)
        assert part.B == ("b",)
        assert part.C == ("c",)
        assert part.AB == ("a", "b")
        assert part.klass("b") is Klass.B

    def test_missing_state(self):
        with pytest.raises(MissingStateError):
            build_partition(self.chain, {"a": "A", "c": "C"})

    def test_unknown_state(self):
        with pytest.raises(UnknownStateError):
            build_partition(self.chain, {"a": "A", "b": "B", "c": "C", "z": "A"})

    def test_bad_class_label(self):
        with pytest.raises(PartitionClassError):
            build_partition(self.chain, {"a": "A", "b": "D", "c": "C"})

    @pytest.mark.parametrize("assignment", [
        {"a": "B", "b": "B", "c": "C"},
        {"a": "A", "b": "B", "c": "B"},
    ])
    def test_a_and_c_must_be_nonempty(self, assignment):
        with pytest.raises(EmptyClassError):
            build_partition(self.chain, assignment)

    def test_b_may_be_empty(self):
        part = partition_from_classes(self.chain, {"A": ["a", "b"], "C": ["c"]})
        assert part.B == ()

    def test_overlapping_classes(self):
        with pytest.raises(PartitionClassError):
            partition_from_classes(self.chain, {"A": ["a", "b"], "B": ["b"], "C": ["c"]})


class TestStoppingSpec:
    def setup_method(self):
        self.chain = build_chain(["a", "b", "c"], TRIAD_P)

    def test_start_inside_target_stops_at_zero(self):
        spec = stopping_spec(self.chain, ["a", "c"])
        assert spec.stops_at("a")
        assert spec.hitting_index(["a", "b", "c"]) == 0

    def test_first_entry_index(self):
        spec = stopping_spec(self.chain, ["c"])
        assert spec.hitting_index(["a", "b", "a", "c", "c"]) == 3
        assert spec.hitting_index(["a", "b"]) is None

    def test_empty_target(self):
        with pytest.raises(DimensionError):
            stopping_spec(self.chain, [])

    def test_unknown_target(self):
        with pytest.raises(UnknownStateError):
            stopping_spec(self.chain, ["q"])


class TestAbsorption:
    def test_triad_is_absorbing(self):
        chain = build_chain(["a", "b", "c"], TRIAD_P)
        part = build_partition(chain, {"a": "A", "b": "B", "c": "C"})
        assert validate_absorption(chain, part).ok

    def test_swap_pair_never_reaches_c(self):
        chain = build_chain(["a", "b", "c"], [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        report = validate_absorption(chain, build_partition(chain, {"a": "A", "b": "B", "c": "C"}))
        assert not report.ok
        assert report.offending_states == ("a", "b")

    def test_four_state_path(self):
        chain = build_chain(
            ["a", "b", "c", "d"],
            [[0.5, 0.5, 0, 0], [0.5, 0, 0.5, 0], [0, 0.5, 0, 0.5], [0, 0, 0.5, 0.5]],
        )
        part = partition_from_classes(chain, {"A": ["a"], "B": ["b"], "C": ["c", "d"]})
        assert validate_absorption(chain, part).ok

    def test_c_without_incoming_edges(self):
        chain = build_chain(["a", "b", "c"], [[0, 1, 0], [0.5, 0.5, 0], [0, 0, 1]])
        part = partition_from_classes(chain, {"A": ["a"], "B": ["b"], "C": ["c"]})
        assert validate_absorption(chain, part).offending_states == ("a", "b")

    def test_agrees_with_spectral_radius(self, corpus):
        for chain, part in corpus[:40]:
            assert validate_absorption(chain, part).ok == _substochastic(chain, part)

    @pytest.mark.parametrize("rows", [
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[0, 1, 0], [0.5, 0.5, 0], [0, 0, 1]],
    ])
    def test_closed_classes_have_unit_radius(self, rows):
        chain = build_chain(["a", "b", "c"], rows)
        part = partition_from_classes(chain, {"A": ["a"], "B": ["b"], "C": ["c"]})
        assert not validate_absorption(chain, part).ok
        assert not _substochastic(chain, part)


def _substochastic(chain, part) -> bool:
    """Spectral radius of P restricted to A ∪ B below 1."""
    idx = chain.indices(part.AB)
    sub = chain.dense[np.ix_(idx, idx)]
    radius = max(abs(np.linalg.eigvals(sub))) if idx.size else 0.0
    return radius < 1.0 - 1e-12


def test_reaching_mask_respects_domain():
    # 0 -> 1 -> 2 -> 3; with 1 outside the domain, 0 cannot reach 3
    P = sp.csr_matrix(np.array([
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 1.0],
    ]))
    target = np.array([False, False, False, True])
    full = reaching_mask(P, np.array([True, True, True, False]), target)
    cut = reaching_mask(P, np.array([True, False, True, False]), target)
    assert full.tolist() == [True, True, True, False]
    assert cut.tolist() == [False, False, True, False]
