from pathlib import Path

import numpy as np
import pytest

from frtcrypt.chaos import MaskSpec
from frtcrypt.container import load_image
from frtcrypt.pipeline import EncryptionKey

DATA = Path(__file__).parent / "data"
NATURAL = DATA / "astronaut256.png"

MASKS = {
    "1": (MaskSpec.uniform(20240601), MaskSpec.uniform(20240602)),
    "2": (MaskSpec.logistic(3.99, 0.3), MaskSpec.logistic(3.99, 0.7)),
    "3": (MaskSpec.kaplan_yorke(1.99, 0.3, 0.3, 0.1), MaskSpec.kaplan_yorke(1.99, 0.3, 0.6, 0.2)),
}


def make_key(algorithm, orders=(0.5, 0.5, 0.5, 0.5)):
    return EncryptionKey(algorithm, orders, *MASKS[algorithm[2]])


@pytest.fixture(scope="session")
def natural():
    """256x256 RGB natural test image as (3, 256, 256) float64 in [0, 255]."""
    return load_image(NATURAL)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance report ---------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion(capsys):
    """Record one acceptance criterion outcome and echo it immediately."""

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print(f"\n    {line}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
