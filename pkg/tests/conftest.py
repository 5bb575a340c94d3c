import pytest
from hypothesis import settings

from twoprimes.s0calc import validate_config
from twoprimes.singular import default_c0

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def c0():
    return default_c0()


@pytest.fixture(scope="session")
def reference_cfg():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return validate_config({"lambda1": "sqrt(3)", "lambda2": "-sqrt(2)",
                                "mus": ["sqrt(3)/3", "-sqrt(2)/2"], "gamma": "0",
                                "eta": "0.5", "epsilon": "0.2"}, mode="search")


_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rpartition("::")[2]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number = int(name.split("_")[2])
        _CRITERIA[number] = (report.outcome, name.split("_", 3)[3].replace("_", " "), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        outcome, label, secs = _CRITERIA[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {label} ({secs:.1f} s)")
