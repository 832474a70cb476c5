import numpy as np
import pytest

from hsgfs.dataset import Dataset, SplitPair

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def planted_split():
    """Two features: column 0 is the class (plus jitter), column 1 is uniform noise."""
    rng = np.random.default_rng(1234)
    y = np.repeat([0, 1], 60)
    X = np.column_stack([y + rng.normal(0, 0.05, y.size), rng.random(y.size)])
    d = Dataset(X, y)
    train = np.arange(0, 120, 3)
    test = np.setdiff1d(np.arange(120), train)
    return SplitPair(d.subset(train), d.subset(test), 0)


def all_masks(n):
    """Every non-empty mask over ``n`` features, as a (2**n - 1, n) bool array."""
    codes = np.arange(1, 2 ** n)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
