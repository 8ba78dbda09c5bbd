"""Frozen regression floors measured by scripts/measure_floors.py."""

from __future__ import annotations

import json
import os
from importlib import resources

ENV = "NEUTRAL_LAME_FIXTURES"


def fixtures_path():
    p = os.environ.get(ENV)
    if p:
        return p
    return str(resources.files("neutral_lame") / "data" / "fixtures.json")


def load_fixtures(path=None) -> dict:
    path = path or fixtures_path()
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def within(measured: float, frozen: float, rel: float) -> bool:
    return abs(measured - frozen) <= rel * abs(frozen)
