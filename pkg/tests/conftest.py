import pytest

_ACCEPTANCE = []


class Recorder:
    def __init__(self, sink):
        self.sink = sink

    def __call__(self, criterion: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  ({detail})" if detail else "")
        self.sink.append(line)
        print(line)
        assert ok, line


@pytest.fixture
def acceptance():
    return Recorder(_ACCEPTANCE)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
