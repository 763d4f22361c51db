"""Walkthrough: 2-isometries that converge to 2*id.

2*id is not a 2-isometry (its order-2 defect is 9 on unit vectors), yet
for every finite-dimensional subspace F there is a 2-isometric block I_F
with ||(I_F - 2 id)x|| = ||x|| / dim(F) on F.  Sweeping nested subspaces
drives the distance to zero pointwise: the set of 2-isometries is not
closed under this kind of limit.
"""

import numpy as np

from isolab import (ScalarOperator, Vector, defect_form, prepare_space,
                    standard_f_basis, theorem1_construct)

rng = np.random.default_rng(1)

print(f"{'n':>4} {'eps = 1/n':>12} {'measured ||(I_F-2id)x||':>26}")
for n in (1, 2, 4, 8, 16, 32):
    space = prepare_space(max(n, 2))
    f_basis = standard_f_basis(space, n)
    block, trace = theorem1_construct(f_basis, space)

    rows = np.array([v.coords for v in f_basis])
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = Vector((c / np.linalg.norm(c)) @ rows, space)
    resid = (block.apply(x) - 2.0 * x).norm()
    print(f"{n:>4} {1 / n:>12.6f} {resid:>26.15f}")

# Each I_F really is a 2-isometry, while the limit 2*id is not.
space = prepare_space(4)
block, _ = theorem1_construct(standard_f_basis(space, 4), space)
x = space.basis_vector(0)
print("\nd_2 of I_F at a basis vector:", defect_form(block, x, 2))
print("d_2 of 2*id at the same vector:", defect_form(ScalarOperator(2.0), x, 2))
