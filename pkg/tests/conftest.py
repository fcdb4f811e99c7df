import numpy as np
import pytest

from mgpmix import HueslerReiss, Logistic, validate

TRIANGULAR = np.array([[1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [1 / 3, 1 / 3, 1 / 3]])
HR_OFFDIAG = 1.38


def exchangeable_variogram(m, value=HR_OFFDIAG):
    g = np.full((m, m), value)
    np.fill_diagonal(g, 0.0)
    return g


def triangular_logistic(alpha=0.5, masses=None):
    return validate(TRIANGULAR, [Logistic(alpha)] * 3, masses)


def triangular_hr(shift=1.0, masses=None):
    fams = [HueslerReiss(exchangeable_variogram(3), shift),
            HueslerReiss(exchangeable_variogram(2), shift),
            HueslerReiss([[0.0]], shift)]
    return validate(TRIANGULAR, fams, masses)


@pytest.fixture(scope="session")
def logistic_model():
    return triangular_logistic()


@pytest.fixture(scope="session")
def hr_model():
    return triangular_hr()


@pytest.fixture(scope="session", params=["logistic", "hr"])
def any_model(request, logistic_model, hr_model):
    return logistic_model if request.param == "logistic" else hr_model


@pytest.fixture(scope="session")
def independence_model():
    return validate(np.eye(3), [Logistic(0.5)] * 3)


@pytest.fixture(scope="session")
def mixed_model():
    # columns of both families, a duplicated signature and d = 4
    a = np.array([[0.5, 0.0, 0.5, 0.0],
                  [0.2, 0.3, 0.2, 0.3],
                  [0.0, 0.6, 0.0, 0.4],
                  [0.0, 0.0, 0.0, 1.0]])
    g = np.array([[0.0, 0.8, 1.5], [0.8, 0.0, 1.1], [1.5, 1.1, 0.0]])
    fams = [Logistic(0.4), HueslerReiss(exchangeable_variogram(2, 0.9)),
            HueslerReiss(exchangeable_variogram(2, 2.0)), HueslerReiss(g)]
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return validate(a, fams, [0.1, 0.2, 0.3, 0.4])


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
