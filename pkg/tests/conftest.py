import re

import pytest

from veccomp.model import preset

# Weightings used by the grid tests, each with the box its grid covers.
# Boxes shrink where f(0) != 0 or N = 3 to keep enumeration affordable.
GRID = {
    "intro": (5, 5),
    "delannoy": (5, 5),
    "ex170": (5, 5),
    "divisibility": (4, 4),
    "nonmultiple": (4, 4),
    "whitney": (6, 6),
    "product2": (5, 5),
    "parity3": (4, 4, 4),
    "unitcube3": (4, 4, 4),
    "onetwo3": (6, 6, 6),
    "fibonacci": (6,),
}
KMAX = 8
PRIMES = (2, 3, 5, 7)


def grid_weights():
    return [(name, preset(name), box) for name, box in GRID.items()]


_RESULTS = pytest.StashKey[dict]()


_CONFIG = []


def pytest_configure(config):
    config.stash[_RESULTS] = {}
    _CONFIG[:] = [config]


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, label, passed, detail)`` for the summary table."""
    store = request.config.stash[_RESULTS]

    def record(criterion: int, label: str, passed: bool, detail: str = "") -> None:
        store.setdefault(criterion, []).append((label, passed, detail))

    return record


def pytest_runtest_logreport(report):
    # a criterion test that raised must not show up as PASS in the summary
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if m and report.when == "call" and report.failed and _CONFIG:
        store = _CONFIG[0].stash[_RESULTS]
        store.setdefault(int(m.group(1)), []).append((report.nodeid.split("::")[-1], False, "test failed"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(store):
        parts = store[criterion]
        ok = all(p for _, p, _ in parts)
        failed = [f"{label} ({detail})" if detail else label for label, p, detail in parts if not p]
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}"
        line += f" [{len(parts) - len(failed)}/{len(parts)} checks]"
        if failed:
            line += " failing: " + "; ".join(failed)
        terminalreporter.write_line(line)
