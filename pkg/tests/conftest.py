import numpy as np
import pytest

import hidden_topics.linalg as linalg
from hidden_topics.linalg import _eigen_py

KERNELS = {"python": _eigen_py.symmetric_eigh}
try:
    from hidden_topics.linalg import _eigen

    KERNELS["cython"] = _eigen.symmetric_eigh
except ImportError:
    pass


@pytest.fixture(params=sorted(KERNELS))
def kernel(request, monkeypatch):
    """Run the test once per available eigensolver build."""
    fn = KERNELS[request.param]
    monkeypatch.setattr(linalg, "symmetric_eigh", fn)
    return fn


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write(tmp_path):
    def _write(name: str, content: str):
        p = tmp_path / name
        p.write_text(content, encoding="utf-8")
        return p

    return _write


_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        prev = _ACCEPTANCE.get(report.nodeid)
        if prev != "FAIL":
            _ACCEPTANCE[report.nodeid] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _ACCEPTANCE.items():
        name = nodeid.split("::", 1)[1]
        terminalreporter.write_line(f"{outcome:<5} {name}")
