"""
Factoring a 2x2 upper-triangular matrix into two positive contractions
======================================================================

A matrix C = [[a, z], [0, b]] with 0 <= a, b <= 1 is a product of two
positive semidefinite contractions exactly when the coupling z stays below
an explicit bound:

    z <= |sqrt(a) - sqrt(b)| * sqrt((1 - a) * (1 - b))

This script walks the three regimes: a coupling that is too large (no
factorization exists), a strictly feasible coupling (closed-form factors),
and the exact boundary.
"""

import numpy as np

from quadfactor import (
    InfeasibleError,
    assess_feasibility,
    factor_2x2,
    feasibility_bound,
)

a, b = 0.36, 0.64
print("eigenvalue parameters: a = %.2f, b = %.2f" % (a, b))
print("feasibility bound:     %.6f" % feasibility_bound(a, b))
print()

# --- regime 1: coupling beyond the bound -------------------------------
# [[0.36, 0.12], [0, 0.64]] = (1/25) [[9, 3], [0, 16]] is the smallest
# textbook witness that "product of two positive contractions" is a real
# restriction: both eigenvalues sit in [0, 1], yet no factorization exists.
report = assess_feasibility(a, b, 0.12)
print("z = 0.12 -> feasible: %s (margin %+.4f)" % (report.feasible, report.margin))
try:
    factor_2x2(a, b, 0.12)
except InfeasibleError as exc:
    print("factor_2x2 refuses: %s" % exc)
print()

# --- regime 2: strictly feasible coupling ------------------------------
# Below the bound the factors come from closed forms; both are real
# symmetric with top eigenvalue exactly 1.
rep = factor_2x2(a, b, 0.09)
A = np.array([[rep.a11, rep.a12], [rep.a12, rep.a22]])
B = np.array([[rep.b11, rep.b12], [rep.b12, rep.b22]])
target = np.array([[a, 0.09], [0.0, b]])
print("z = 0.09 -> case %r" % rep.case)
print("A =\n%s" % A)
print("B =\n%s" % B)
print("eig(A) = %s  (lambda1 = %.6f)" % (np.linalg.eigvalsh(A), rep.lambda1))
print("eig(B) = %s  (lambda2 = %.6f)" % (np.linalg.eigvalsh(B), rep.lambda2))
print("lambda1 * lambda2 = %.6f  (a*b = %.6f)" % (rep.lambda1 * rep.lambda2, a * b))
print("||A @ B - C||_F = %.3e" % np.linalg.norm(A @ B - target))
print()

# --- regime 3: the exact boundary --------------------------------------
# At z equal to the bound the two middle eigenvalues collide
# (lambda1 = lambda2 = sqrt(ab)) and the factorization still exists.
z_star = feasibility_bound(a, b)
rep = factor_2x2(a, b, z_star)
A = np.array([[rep.a11, rep.a12], [rep.a12, rep.a22]])
B = np.array([[rep.b11, rep.b12], [rep.b12, rep.b22]])
target = np.array([[a, z_star], [0.0, b]])
print("z = bound = %.6f" % z_star)
print("lambda1 = %.8f, lambda2 = %.8f, sqrt(ab) = %.8f"
      % (rep.lambda1, rep.lambda2, np.sqrt(a * b)))
print("||A @ B - C||_F = %.3e" % np.linalg.norm(A @ B - target))
