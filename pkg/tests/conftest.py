from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from octantgroups.stepset import StepSet, decode_diagram

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).resolve().parents[1] / "src" / "octantgroups" / "data"

# no short relations: its group looks free on three involutions
FREE = StepSet.from_steps([(-1, -1, -1), (-1, 1, 1), (1, 0, 1), (1, 1, 0)])
# (1,2)-Hadamard: phi_x commutes with phi_y and phi_z
SPLIT = StepSet.from_steps([(-1, 0, 0), (1, -1, 1), (1, 0, 1), (1, 1, -1)])
# singular G4 model with a linear valuation cone w > v > -u > 0
CONE = StepSet.from_steps([(-1, -1, 1), (0, 1, -1), (1, 0, 1)])
# (x + 1/x)(1 + y + 1/y + z + 1/z): generators commute, finite group
PRODUCT = StepSet.from_steps([(e, y, z) for e in (-1, 1)
                              for y, z in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]])


def rare_models() -> dict[str, list[str]]:
    return json.loads((DATA / "rare_models.json").read_text())


def rare_fixtures() -> list[tuple[str, str]]:
    return [(gid, d) for gid, ds in rare_models().items() for d in ds]


@pytest.fixture
def fixtures():
    return [(gid, decode_diagram(d)) for gid, d in rare_fixtures()]


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


def report(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
