import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    passed = call.excinfo is None
    key = (number, title)
    _CRITERIA.setdefault(key, []).append((item.name, passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), runs in sorted(_CRITERIA.items()):
        ok = all(p for _, p in runs)
        failed = [name for name, p in runs if not p]
        extra = f"  (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}{extra}")


@pytest.fixture
def fano():
    from diffam.junta import fano_plane

    return fano_plane()


@pytest.fixture
def tri():
    from diffam.junta import triangle

    return triangle()
