import os

import sympy
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def to_sympy(p):
    """Oracle view of a Polynomial: parse its canonical text with sympy."""
    return sympy.expand(sympy.sympify(str(p).replace("^", "**")))


# acceptance lines collected by test_acceptance.py, printed after the run
ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    line = f"criterion {criterion:>4}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0].rstrip("h")), k)):
        terminalreporter.write_line(ACCEPTANCE[key])
