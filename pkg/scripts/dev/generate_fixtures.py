"""
Regenerate fixtures/chains_v1/expected/ from the vectors.

Only run after checking the new numbers against the hand derivations in
fixtures/chains_v1/README.md; expected files are the regression oracle.
"""
import json
import sys
from pathlib import Path

from runtime.engine import process_fixture

ROOT = Path(__file__).resolve().parents[2] / "fixtures" / "chains_v1"


def main() -> int:
    out_dir = ROOT / "expected"
    for vec in sorted((ROOT / "vectors").glob("*.json")):
        result = process_fixture(json.loads(vec.read_text(encoding="utf-8")))
        (out_dir / vec.name).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"[fixtures] wrote {vec.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
