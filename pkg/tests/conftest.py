import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items()
                if name.endswith("test_acceptance") and hasattr(m, "RESULTS")), None)
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        status, title, note = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  {note}")
