import contextlib

import pytest

# criterion number -> (title, passed, detail)
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def _line(num, title, passed, detail):
    status = "PASS" if passed else "FAIL"
    tail = f" ({detail})" if detail else ""
    return f"acceptance {num}: {status} {title}{tail}"


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion; the body asserts."""

    @contextlib.contextmanager
    def record(num: int, title: str):
        info = {"detail": ""}
        try:
            yield info
        except BaseException:
            ACCEPTANCE[num] = (title, False, info["detail"])
            print(_line(num, title, False, info["detail"]))
            raise
        ACCEPTANCE[num] = (title, True, info["detail"])
        print(_line(num, title, True, info["detail"]))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(_line(num, *ACCEPTANCE[num]))
