"""Shared paths for the demo scripts."""

from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
MINI = ROOT / "tests" / "fixtures" / "pwc-mini"
CATALOG = ROOT / "tests" / "fixtures" / "catalog-mini.json"


def banner(text: str) -> None:
    print(f"\n== {text} " + "=" * max(0, 70 - len(text)))
