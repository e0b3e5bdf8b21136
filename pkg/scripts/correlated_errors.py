"""Decoded fidelity of the 3-qubit code under a conditional phase between two lines.

Prints one row per operand pair for a few probe inputs.  Inputs on the X axis
of the Bloch sphere come through untouched: every diagonal error, correlated or
not, reaches the data as a combination of I and X.
"""

import itertools
import math

from dephasecode.circuit import cphase, run_quantum
from dephasecode.codes import quantum_dephasing_code
from dephasecode.statevector import fidelity_with, init_state

S2 = 1 / math.sqrt(2)
INPUTS = {"|0>": (1.0, 0.0), "|+>": (S2, S2), "|+i>": (S2, 1j * S2), "|->": (S2, -S2)}

encode, decode = quantum_dephasing_code(1)
print("pair    phi   " + "  ".join(f"{k:>8}" for k in INPUTS))
for (a, b), phi in itertools.product(itertools.combinations(range(3), 2), (math.pi / 4, math.pi)):
    row = []
    for data in INPUTS.values():
        out = run_quantum(decode, run_quantum([cphase(a, b, phi)], run_quantum(encode, init_state(3, data))))
        row.append(fidelity_with(out, data))
    print(f"({a},{b})  {phi:4.2f}  " + "  ".join(f"{f:8.5f}" for f in row))
