"""
Tests for the chain fixtures v1 (fixtures/chains_v1).

Validates:
- Vector 01: Triad closed forms, every bound tight
- Vector 02: Row summing to 1.1 → row-sum
- Vector 03: C unreachable → not-absorbing
- Vector 04: Non-symmetric path, cross Green bound per orientation
- Vector 05: Sparse rows decode to the same chain as vector 04
"""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from runtime.engine import process_fixture


FIXTURES_DIR = Path(__file__).parent.parent / "fixtures" / "chains_v1"
VECTORS = sorted(p.stem for p in (FIXTURES_DIR / "vectors").glob("*.json"))
TOL = 1e-10


def load_vector(name: str) -> dict:
    return json.loads((FIXTURES_DIR / "vectors" / f"{name}.json").read_text())


def load_expected(name: str) -> dict:
    return json.loads((FIXTURES_DIR / "expected" / f"{name}.json").read_text())


def load_assertions() -> dict:
    return json.loads((FIXTURES_DIR / "acceptance" / "assertions.json").read_text())


def assert_matches(actual, expected, where: str = "") -> None:
    if isinstance(expected, dict):
        assert isinstance(actual, dict), f"{where}: expected an object, got {actual!r}"
        assert set(actual) == set(expected), f"{where}: keys {sorted(actual)} != {sorted(expected)}"
        for k in expected:
            assert_matches(actual[k], expected[k], f"{where}.{k}" if where else k)
    elif isinstance(expected, float):
        assert actual == pytest.approx(expected, abs=TOL), f"{where}: {actual} != {expected}"
    else:
        assert actual == expected, f"{where}: {actual!r} != {expected!r}"


@pytest.mark.parametrize("name", VECTORS)
def test_vector_matches_expected(name):
    assert_matches(process_fixture(load_vector(name)), load_expected(name))


class TestVector01Triad:
    """Vector 01: the canonical triad."""

    def test_excursion_probabilities(self):
        stats = process_fixture(load_vector("01_triad"))["stats"]

        assert stats["psi"]["a"] == pytest.approx(0.5, abs=TOL)
        assert stats["rho"]["a"] == pytest.approx(0.25, abs=TOL)

    def test_every_bound_tight(self):
        bounds = process_fixture(load_vector("01_triad"))["bounds"]

        assert bounds["tight"] == bounds["rows"] == 7


class TestVector04Path:
    """Vector 04: the cross Green's function is not symmetric."""

    def test_cross_green_differs_by_orientation(self):
        green = process_fixture(load_vector("04_path4"))["green"]

        assert green["a,b"] == pytest.approx(2.0, abs=TOL)
        assert green["b,a"] == pytest.approx(1.0, abs=TOL)

    def test_no_violations(self):
        assert process_fixture(load_vector("04_path4"))["bounds"]["violations"] == 0


class TestAcceptanceAssertions:
    """Run all machine-checkable assertions from assertions.json."""

    def test_all_assertions(self):
        assertions = load_assertions()

        for assertion in assertions["v1_assertions"]:
            name = assertion["name"]
            result = process_fixture(load_vector(assertion["when"]["vector"]))

            if "expect" in assertion:
                for path, expected in assertion["expect"].items():
                    actual = self._get_nested(result, path)
                    if isinstance(expected, float):
                        assert actual == pytest.approx(expected, abs=TOL), f"{name}: {path} expected {expected}, got {actual}"
                    else:
                        assert actual == expected, f"{name}: {path} expected {expected}, got {actual}"

            if "expect_same_as" in assertion:
                other = process_fixture(load_vector(assertion["expect_same_as"]))
                assert_matches(result, other, name)

    def _get_nested(self, obj: dict, path: str):
        """Get nested value from dict using dot notation."""
        current = obj
        for part in path.split("."):
            if isinstance(current, dict):
                current = current.get(part)
            else:
                return None
        return current
