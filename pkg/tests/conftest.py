import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        ok, note = acceptance.RESULTS[number]
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {acceptance.DESCRIPTIONS[number]}"
        terminalreporter.write_line(line + (f"  [{note}]" if note else ""))
