import pytest
from hypothesis import settings

from qtwist.characters import character
from qtwist.cyclotomic import tower_for_orders
from qtwist.padic import PadicContext
from qtwist.qbernoulli import QSetting

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx3():
    return PadicContext(3, 30)


@pytest.fixture(scope="session")
def ctx5():
    return PadicContext(5, 25)


@pytest.fixture(scope="session")
def tower3(ctx3):
    return tower_for_orders(ctx3, 1)


@pytest.fixture(scope="session")
def chi4():
    return character(4, 1)


@pytest.fixture(scope="session")
def tower3_xi3_chi4(ctx3, chi4):
    # xi of order 3 (ramified) together with the values of chi mod 4
    return tower_for_orders(ctx3, 3, chi4.order)


@pytest.fixture(scope="session")
def base_setting(ctx3, tower3):
    return QSetting(tower3, ctx3(4), 1, 1)


# acceptance criteria report: criterion -> list of (part, ok, detail)
_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    def record(k: int, part: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.setdefault(k, []).append((part, bool(ok), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[k]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        bits = "; ".join(f"{name} {'ok' if ok else 'FAILED'}{' (' + d + ')' if d else ''}" for name, ok, d in parts)
        tr.write_line(f"criterion {k}: {status} - {bits}")
