import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    os.environ["G2FK_CACHE_DIR"] = str(tmp_path_factory.mktemp("g2fk-cache"))


_TABLES = {}


def table(p, tag):
    from g2fk.tables import build_table

    key = (p, tag)
    if key not in _TABLES:
        _TABLES[key] = build_table(p, tag)
    return _TABLES[key]


@pytest.fixture(scope="session")
def poly5():
    return table(5, "poly")


@pytest.fixture(scope="session")
def poly7():
    return table(7, "poly")


@pytest.fixture(scope="session")
def chev3():
    return table(3, "chevalley")


@pytest.fixture(scope="session")
def chev5():
    return table(5, "chevalley")


@pytest.fixture(scope="session")
def chev7():
    return table(7, "chevalley")


@pytest.fixture(scope="session")
def syl5(poly5):
    from g2fk.sylow import SylowContext

    return SylowContext(poly5)


@pytest.fixture(scope="session")
def syl7(poly7):
    from g2fk.sylow import SylowContext

    return SylowContext(poly7)


@pytest.fixture(scope="session")
def aut5(poly5):
    from g2fk.automorphisms import AutContext

    return AutContext(poly5, seed=0)


@pytest.fixture(scope="session")
def aut7(poly7):
    from g2fk.automorphisms import AutContext

    return AutContext(poly7, seed=0)


def pytest_terminal_summary(terminalreporter, config):
    log = getattr(config, "acceptance_results", None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 16):
        entry = log.get(number)
        if entry is None:
            terminalreporter.write_line(f"criterion {number:2d}: NOT RUN")
            continue
        ok = all(part["ok"] for part in entry["parts"])
        detail = ", ".join(
            f"{part['label'] or 'run'} {part['secs']:.1f}s" if part["secs"] is not None else f"{part['label']} failed"
            for part in entry["parts"]
        )
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {entry['title']}  ({detail})")
