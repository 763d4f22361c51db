"""Walkthrough: Brownian-type block operators and m-isometry defect forms.

A 2-isometry satisfies ||x||^2 - 2||Bx||^2 + ||B^2 x||^2 = 0 for every x.
We build the canonical source of examples: the block (R, V; 0, id_K) with
R an isometry whose range is orthogonal to the range of V, and watch the
defect form vanish even though R is only ever defined lazily.
"""

import numpy as np

from isolab import (AmbientSpace, BrownianBlock, LazyIsometry, Vector,
                    defect_form)

rng = np.random.default_rng(0)


def random_on_first_coords(space, m):
    c = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    coords = np.zeros(space.capacity, dtype=complex)
    coords[:m] = c / np.linalg.norm(c)
    return Vector(coords, space)

# A space with a generous coordinate budget.  Only what we touch exists.
space = AmbientSpace(capacity=256)
space.allocate(4)

# K is spanned by two instantiated coordinates; V maps them to a couple of
# non-isometric images out in L (anything orthogonal to future R outputs).
space.allocate(4)
k_basis = [space.basis_vector(0), space.basis_vector(1)]
v_images = [1.7 * space.basis_vector(4), 0.3 * space.basis_vector(5)]

# R starts completely undefined: the first application invents it.
R = LazyIsometry(space)
B = BrownianBlock(R, K_basis=k_basis, V_images=v_images)

print("defined R directions before any use:", R.defined_count)
x = random_on_first_coords(space, 8)
print("d_2(x) =", defect_form(B, x, 2))
print("defined R directions after one defect evaluation:", R.defined_count)

# The defect stays at roundoff no matter how much of R gets invented.
worst = max(abs(defect_form(B, random_on_first_coords(space, 8), 2))
            for _ in range(200))
print("max |d_2| over 200 random instantiated vectors:", worst)
print("||B|| =", B.operator_norm, " (sqrt(1 + ||V||^2))")

# Order-1 defect does NOT vanish: B is expansive, not an isometry.
print("d_1(x) =", defect_form(B, x, 1), " (nonzero: B expands K)")
