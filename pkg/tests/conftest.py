"""Per-criterion pass/fail summary for the acceptance suite."""
import pytest

_RESULTS: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(tag, title): acceptance criterion covered by a test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    tag, title = mark.args
    entry = _RESULTS.setdefault(tag, {"title": title, "ok": True, "detail": []})
    entry["ok"] &= call.excinfo is None
    for name, value in item.user_properties:
        if name == "measured":
            entry["detail"].append(str(value))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for tag in sorted(_RESULTS, key=lambda t: (int(t.rstrip("abc")), t)):
        e = _RESULTS[tag]
        line = f"[{'PASS' if e['ok'] else 'FAIL'}] {tag:<3} {e['title']}"
        if e["detail"]:
            line += "  | " + "; ".join(e["detail"])
        tr.write_line(line)


@pytest.fixture
def measured(record_property):
    """Attach a measured value to the acceptance summary line."""
    def note(text):
        record_property("measured", text)
    return note
