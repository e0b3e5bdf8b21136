"""Run the exhaustive check for several code sizes, at and beyond design distance."""

import sys

from dephasecode.experiments import verify_code

failures = 0
for t in (1, 2, 3):
    for weight in (t, t + 1):
        report = verify_code(t, weight, n_inputs=50)
        expect_pass = weight <= t
        print(report.format().splitlines()[0], "->", "PASS" if report.passed else "FAIL",
              f"(max infidelity {report.max_infidelity:.2e})")
        failures += report.passed != expect_pass
sys.exit(1 if failures else 0)
