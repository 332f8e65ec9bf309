import numpy as np
import pytest

from varsel.data_model import make_dataset

# (criterion number, line) pairs filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20040402)


@pytest.fixture
def noiseless_one_predictor():
    """y is an exact linear function of a single predictor."""
    x = np.linspace(-2.0, 3.0, 20)
    return make_dataset(1.5 + 2.0 * x, x.reshape(-1, 1), ["x"])


@pytest.fixture
def toy_csv(tmp_path):
    """20 cases, four predictors (one binary), y driven by the first."""
    gen = np.random.default_rng(7)
    n = 20
    X = gen.standard_normal((n, 4))
    X[:, 3] = gen.integers(0, 2, n)
    X[0, 3], X[1, 3] = 0, 1
    y = 3.0 * X[:, 0] + 0.5 * gen.standard_normal(n)
    path = tmp_path / "toy.csv"
    with open(path, "w") as fh:
        fh.write("a,b,c,flag,y\n")
        for xi, yi in zip(X, y):
            fh.write(",".join(repr(float(v)) for v in xi) + f",{float(yi)!r}\n")
    return path
