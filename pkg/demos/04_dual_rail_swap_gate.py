"""Assemble the exponential conditional swap from photonic gates.

Two qubit pairs and one ancilla, each a photon shared between two modes.
The circuit conjugates an ancilla rotation by controlled swaps built from
CR gates.  Restricted to the logical subspace with the ancilla in |0> it
equals ``cos(t) I + i sin(t) S``, and the ancilla comes back unentangled.
Running the conjugation in the wrong order breaks the identity.
"""
import math

import numpy as np

from cvtda import fockgates as fg
from cvtda.verification import appendix_case

t = 0.7
for pairs in (1, 2):
    case = appendix_case(t, pairs, n_max=2)
    print(
        f"pairs={pairs}: max deviation {case['circuit_deviation']:.2e}, "
        f"ancilla purity {case['ancilla_purity']:.15f}, leakage {case['leakage']:.1e}"
    )
bad = appendix_case(t, 1, n_max=2, reverse=True)
print(f"reversed order: max deviation {bad['circuit_deviation']:.3f}")

space = fg.FockSpace.for_qubits(3, 1)
q0, q1, anc = (space.qubit(i) for i in range(3))
block = fg.logical_action(fg.exp_cond_swap(t, [(q0, q1)], anc, space), space, [q0, q1], anc).block
np.set_printoptions(precision=3, suppress=True)
print(f"logical block at t={t} (cos t = {math.cos(t):.3f}, sin t = {math.sin(t):.3f}):")
print(block)
