"""Exponentiate a density matrix by repeated partial swaps.

Each step swaps a fresh copy of A in for a short time and discards it.  The
error against exact conjugation by exp(-i A p_R t) falls linearly in the
step size, so halving the step halves the error.
"""
import numpy as np

from cvtda.cvsim import exact_evolution, trace_distance, trotterized_evolution

A = np.diag([0.7, 0.3]).astype(complex)
rho = np.full((2, 2), 0.5, dtype=complex)
exact = exact_evolution(rho, A, 1.0, 1.0)
prev = None
for j in range(8):
    dt = 0.1 / 2**j
    err = trace_distance(trotterized_evolution(rho, A, 1.0, 1.0, dt), exact)
    ratio = "" if prev is None else f"  ratio {prev / err:.3f}"
    print(f"dt={dt:.5f}  error={err:.3e}{ratio}")
    prev = err
