"""Shared pytest plumbing: verdict lines for the acceptance suite.

Acceptance tests call record_verdict() so every guarantee produces exactly one
[PASS]/[FAIL] line. The lines are replayed in a terminal-summary section,
which pytest writes after output capture ends -- so they are visible in a
plain ``pytest -v`` run, not only with ``-s``.
"""

VERDICTS: list[str] = []


def record_verdict(ok: bool, name: str, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    VERDICTS.append(line)
    print(line)  # also lands in the captured output of the owning test
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)
