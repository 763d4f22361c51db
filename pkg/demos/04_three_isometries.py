"""Walkthrough: id + 2-nilpotent is a 3-isometry.

Operators with A^2 = 0 exactly turn id + A into a 3-isometry: the
alternating sum -1 + 3||Bx||^2 - 3||B^2 x||^2 + ||B^3 x||^2 vanishes.
Since 2-nilpotents are plentiful, so are 3-isometries.
"""

import numpy as np

from isolab import (DenseOperator, defect_form, random_2nilpotent,
                    three_isometry_from_nilpotent)

# The smallest example, fully by hand: B = [[1,1],[0,1]], x = (0,1).
# Squared norms along the orbit: 1, 2, 5, 10, so
# d_3 = -1 + 3*2 - 3*5 + 10 = 0.
B = three_isometry_from_nilpotent(
    DenseOperator(np.array([[0, 1], [0, 0]], dtype=complex)))
x = np.array([0.0, 1.0])
print("hand case d_3 =", defect_form(B, x, 3))
print("(but d_2 =", defect_form(B, x, 2), "- not a 2-isometry)")

rng = np.random.default_rng(7)
print(f"\n{'dim':>4} {'||id+A||':>10} {'max |d_3|':>12} {'max |d_2|':>12}")
for dim in (4, 16, 64):
    A = random_2nilpotent(dim, seed=dim)
    B = three_isometry_from_nilpotent(A)
    worst3 = worst2 = 0.0
    for _ in range(200):
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        x /= np.linalg.norm(x)
        worst3 = max(worst3, abs(defect_form(B, x, 3)))
        worst2 = max(worst2, abs(defect_form(B, x, 2)))
    print(f"{dim:>4} {B.operator_norm:>10.3f} {worst3:>12.3e} {worst2:>12.3e}")
