"""
Lifting the scalar factorization to operator coupling blocks
============================================================

The 2x2 result scales up verbatim: for a block matrix

    T = [[a I, P], [0, b I]]

with an r x r coupling block P, a factorization into two positive
contractions exists exactly when the operator norm of P stays within the
same scalar bound.  The factors are assembled by applying the scalar
closed forms to each singular value of P through the functional calculus.

This script lifts a random Hermitian PSD coupling block, checks the
produced certificate, and then pushes the same block past the bound.
"""

import numpy as np

from quadfactor import (
    InfeasibleError,
    factor_block,
    feasibility_bound,
    operator_norm,
)

rng = np.random.default_rng(7)
a, b, r = 0.36, 0.64, 3
bound = feasibility_bound(a, b)

# a random Hermitian PSD coupling block, rescaled to 80% of the bound
g = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
p = g @ g.conj().T
p *= 0.8 * bound / operator_norm(p)

print("coupling block spectrum: %s" % np.round(np.linalg.eigvalsh(p), 6))
print("||P|| = %.6f vs bound %.6f" % (operator_norm(p), bound))
print()

lifted = factor_block(a, b, p)
print("factor shapes: A %s, B %s" % (lifted.A.shape, lifted.B.shape))
print("certificate:")
print("  A positive semidefinite: %s, contraction: %s"
      % (lifted.report.a_psd, lifted.report.a_contraction))
print("  B positive semidefinite: %s, contraction: %s"
      % (lifted.report.b_psd, lifted.report.b_contraction))
print("  product residual: %.3e" % lifted.report.product_residual)
print("  passed: %s" % lifted.report.passed)

# reassemble the target block matrix and compare directly
n = 2 * r
target = np.zeros((n, n), dtype=complex)
target[:r, :r] = a * np.eye(r)
target[r:, r:] = b * np.eye(r)
target[:r, r:] = p
print("  direct check ||A @ B - T||_F = %.3e"
      % np.linalg.norm(lifted.A @ lifted.B - target))
print()

# the same block scaled just past the bound has no factorization
hot = p * (1.05 * bound / operator_norm(p))
print("||P|| = %.6f (5%% past the bound)" % operator_norm(hot))
try:
    factor_block(a, b, hot)
except InfeasibleError as exc:
    print("factor_block refuses: %s" % exc)
