#!/usr/bin/env python3
"""
Static contracts gate for tripartite-walk.

- every contracts/*.schema.json stem is mentioned in contracts/CHANGELOG.md
- CONTRACTS_VERSION.json is readable and every schema it lists exists
- every fixture vector carries the chain document's required keys

Usage:
  python scripts/ci/check_contracts.py [--repo-root .]
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List


@dataclass
class Violation:
    code: str
    message: str


def stem(p: Path) -> str:
    return p.name.replace(".schema.json", "")


def _stem_mentioned(text: str, name: str) -> bool:
    """Token-safe match: the stem must appear as a whole word."""
    pat = re.compile(rf"(?<![A-Za-z0-9_]){re.escape(name)}(?![A-Za-z0-9_])")
    return pat.search(text) is not None


def check_changelog(repo_root: Path) -> List[Violation]:
    log_path = repo_root / "contracts" / "CHANGELOG.md"
    if not log_path.exists():
        return [Violation("CHANGELOG_MISSING", "contracts/CHANGELOG.md does not exist")]
    text = log_path.read_text(encoding="utf-8")
    missing = sorted(
        stem(p) for p in (repo_root / "contracts").glob("*.schema.json") if not _stem_mentioned(text, stem(p))
    )
    if missing:
        return [Violation("CHANGELOG_MISSING_MENTIONS", "CHANGELOG must mention: " + ", ".join(missing))]
    return []


def check_version_file(repo_root: Path) -> List[Violation]:
    fp = repo_root / "contracts" / "CONTRACTS_VERSION.json"
    try:
        data = json.loads(fp.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        return [Violation("VERSION_UNREADABLE", f"{fp.as_posix()}: {e}")]
    if not isinstance(data.get("public_released"), bool):
        return [Violation("VERSION_FORMAT", "public_released must be a boolean")]
    missing = [s for s in data.get("schemas", []) if not (repo_root / "contracts" / f"{s}.schema.json").exists()]
    return [Violation("VERSION_SCHEMA", f"listed schema {s} has no file") for s in missing]


def check_vectors(repo_root: Path) -> List[Violation]:
    schema = json.loads((repo_root / "contracts" / "chain_document_v1.schema.json").read_text(encoding="utf-8"))
    required = schema["required"]
    v = []
    for fp in sorted((repo_root / "fixtures").glob("*/vectors/*.json")):
        data = json.loads(fp.read_text(encoding="utf-8"))
        doc = data.get("document", data)
        missing = [k for k in required if k not in doc]
        if missing:
            v.append(Violation("VECTOR_KEYS", f"{fp.relative_to(repo_root).as_posix()} lacks {', '.join(missing)}"))
    return v


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repo-root", default=".")
    a = ap.parse_args()
    repo = Path(a.repo_root).resolve()
    try:
        violations = check_changelog(repo) + check_version_file(repo) + check_vectors(repo)
    except Exception as e:
        print("[contracts] ERROR:", e, file=sys.stderr)
        return 2
    if not violations:
        print("[contracts] PASS")
        return 0
    print(f"[contracts] FAIL ({len(violations)})", file=sys.stderr)
    for x in violations:
        print(f"  - [{x.code}] {x.message}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
