import pytest

# criterion number -> (title, passed, detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        print(f"{'PASS' if passed else 'FAIL'} [{number:2d}] {title}: {detail}")
        prev = ACCEPTANCE.get(number)
        if prev is not None:
            # a criterion split over several tests passes only if all parts do
            ACCEPTANCE[number] = (title, prev[1] and bool(passed), "; ".join(d for d in (prev[2], detail) if d))
        else:
            ACCEPTANCE[number] = (title, bool(passed), detail)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} [{number:2d}] {title}: {detail}")
