"""The approximation constructions: diagonalizing bases, orthonormal-system
doubling, the 2-isometric net targeting 2*id, and the five-step pipeline
approximating an arbitrary expansive operator, with measured certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotExpansive, SubspaceNotContained
from .linalg import gram_schmidt, extend_ons, hermitian_eig
from .operators import (BrownianBlock, DefectReport, DenseOperator,
                        LazyIsometry, compressed_gram, defect_report,
                        direct_sum_power)
from .spaces import AmbientSpace, Vector

DEFAULT_CAPACITY_FACTOR = 64  # coordinates per dim(H): 16 * (4 copies)


@dataclass
class ConstructionParams:
    """Knobs for one construction run."""
    n: int
    epsilon: float | None = None      # defaults to 1/n
    build_tol: float = 1e-12
    verify_tol: float = 1e-9
    capacity: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.epsilon is not None and not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")


@dataclass
class ConstructionTrace:
    """Every intermediate orthonormal system of a construction run."""
    x: list                      # diagonalizing ONB of F
    y1: list
    y2: list
    z1: list
    z2: list
    sigmas: list
    norms_Tx: list
    yhat1: list | None = None
    yhat1_shift: list | None = None
    yhat2: list | None = None
    orthogonality_max: float = 0.0


@dataclass
class Certificate:
    """Measured vs. theoretical quantities for one construction run."""
    n: int
    epsilon: float
    operator_norm_T: float
    bound_theoretical: float
    bound_measured: float
    defect_report: DefectReport
    expansivity_min: float
    orthogonality_max: float

    @property
    def bound_holds(self) -> bool:
        return self.bound_measured <= self.bound_theoretical * (1 + 1e-9)


def prepare_space(dim_h: int, capacity: int | None = None) -> AmbientSpace:
    """Ambient space with the physical copy of H allocated under label H1."""
    if capacity is None:
        capacity = DEFAULT_CAPACITY_FACTOR * dim_h
    space = AmbientSpace(capacity)
    space.allocate(dim_h, label="H1")
    return space


def standard_f_basis(space: AmbientSpace, n: int):
    """First n coordinates of the H1 copy (nested chain F_2 < F_4 < ...)."""
    h1 = space.labels["H1"]
    if n > len(h1):
        raise ValueError("dim(F) exceeds dim(H)")
    return [space.basis_vector(h1[i]) for i in range(n)]


def translate(v: Vector, from_indices, to_indices) -> Vector:
    """Move a vector's support from one labeled copy onto a disjoint one."""
    from_indices = np.asarray(from_indices)
    to_indices = np.asarray(to_indices)
    coords = np.zeros_like(v.coords)
    coords[to_indices] = v.coords[from_indices]
    return Vector(coords, v.space)


def diagonalizing_basis(T, F_basis):
    """Orthonormal basis x_1..x_n of span(F_basis) whose T-images are
    pairwise orthogonal: the orthonormal eigenbasis of the compression
    P_F T*T|_F."""
    onb = gram_schmidt(F_basis)
    G = compressed_gram(T, onb)
    _, eigvecs = hermitian_eig(G)
    rows = np.array([v.coords for v in onb])
    space = onb[0].space
    return [Vector(eigvecs[:, k] @ rows, space) for k in range(len(onb))]


def split_pair(xs, c: float, partner):
    """Double an ONS with orthogonal images across two copies of the space.

    `partner(x)` must return x moved into the disjoint second copy.  Returns
    (y1, y2) with

        y1_i = sqrt(1-c^2) x_i + c partner(x_i)
        y2_i =        c    x_i - sqrt(1-c^2) partner(x_i)

    so that x_i = sqrt(1-c^2) y1_i + c y2_i, the union is orthonormal, and
    the doubled-operator images of all 2n vectors stay pairwise orthogonal
    whenever the images of the x_i were.
    """
    if not 0.0 <= c <= 1.0:
        raise ValueError("c must lie in [0, 1]")
    s = np.sqrt(1.0 - c * c)
    y1, y2 = [], []
    for x in xs:
        p = partner(x)
        y1.append(s * x + c * p)
        y2.append(c * x - s * p)
    return y1, y2


def theorem1_construct(F_basis, space: AmbientSpace, *, epsilon=None):
    """2-isometric Brownian block within 1/dim(F) of 2*id on F.

    Splits an ONB of F twice (coefficients sqrt(1-eps^2), eps, then 1/2,
    sqrt(3)/2), takes K spanned by the second splitting's complements, and
    assembles the block (R, sigma V; 0, id_K) with
    sigma = sqrt(3(1-eps^2))/eps.  On F the block satisfies
    ||(B - 2 id)x|| = eps ||x|| exactly.
    """
    x = gram_schmidt(F_basis)
    n = len(x)
    eps = 1.0 / n if epsilon is None else float(epsilon)
    if not 0.0 < eps <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    s = np.sqrt(1.0 - eps * eps)

    xt = extend_ons(x, n, space)
    y1 = [s * x[i] + eps * xt[i] for i in range(n)]
    y2 = [eps * x[i] - s * xt[i] for i in range(n)]

    # second splitting, inside L = K^perp (fresh coordinates are
    # automatically orthogonal to K)
    yt = extend_ons(y1, n, space)
    half, tri = 0.5, np.sqrt(3.0) / 2.0
    z1 = [half * y1[i] - tri * yt[i] for i in range(n)]
    z2 = [tri * y1[i] + half * yt[i] for i in range(n)]

    sigma = np.sqrt(3.0 * (1.0 - eps * eps)) / eps
    R = LazyIsometry(space, inputs=y1, outputs=z1)
    block = BrownianBlock(R, K_basis=y2, V_images=z2, sigma_scale=sigma)
    trace = ConstructionTrace(x=x, y1=y1, y2=y2, z1=z1, z2=z2,
                              sigmas=[sigma] * n, norms_Tx=[1.0] * n)
    return block, trace


def _clamped_complement(a: float) -> float:
    """sqrt(1 - a^2) with roundoff clamping; a = 1/||Tx_i|| <= 1."""
    val = 1.0 - a * a
    if val < -1e-12:
        raise NotExpansive(f"image norm below 1: 1/||Tx|| = {a}")
    return float(np.sqrt(max(val, 0.0)))


def theorem2_construct(T: DenseOperator, F_basis, space: AmbientSpace, *,
                       epsilon=None):
    """2-isometric Brownian block within (||T||+1)/dim(F) of T^(4) on F+0.

    Five-step pipeline on four labeled copies of H: diagonalize the
    compression of T*T on F, split twice across the copies, place K on the
    first splitting's complements, scale V by
    sigma_i = sqrt((1-eps^2)(1 - 1/||Tx_i||^2))/eps, and extend R lazily.

    Returns (block, T4, trace).  Raises NotExpansive if some ||Tx_i|| < 1
    beyond tolerance.
    """
    d = T.dim
    h1 = space.labels["H1"]
    if len(h1) != d:
        raise ValueError("T does not act on the H1 copy")
    for name in ("H2", "H3", "H4"):
        if name not in space.labels:
            space.allocate(d, label=name)
    h2, h3, h4 = (space.labels[k] for k in ("H2", "H3", "H4"))
    first_pair = np.concatenate([h1, h2])
    second_pair = np.concatenate([h3, h4])

    T1 = T.embedded(space, h1)
    x = diagonalizing_basis(T1, F_basis)
    n = len(x)
    eps = 1.0 / n if epsilon is None else float(epsilon)
    if not 0.0 < eps <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")

    norms_Tx = [T1.apply(xi).norm() for xi in x]
    if min(norms_Tx) < 1.0 - 1e-10:
        raise NotExpansive(f"min ||Tx_i|| = {min(norms_Tx)} < 1")

    T4 = direct_sum_power(T, 4, space,
                          indices=np.concatenate([h1, h2, h3, h4]))

    # Step 1: split across the first pair of copies
    y1, y2 = split_pair(x, eps, lambda v: translate(v, h1, h2))

    # Step 2: split the y1 once more, across the two H-pair copies
    yhat1 = y1
    yhat1_shift = [translate(v, first_pair, second_pair) for v in y1]
    yhat2 = y2
    a = [1.0 / t for t in norms_Tx]
    b = [_clamped_complement(ai) for ai in a]
    z1 = [a[i] * yhat1[i] + b[i] * yhat1_shift[i] for i in range(n)]
    z2 = [b[i] * yhat1[i] - a[i] * yhat1_shift[i] for i in range(n)]

    # Step 3: K on the yhat2, V scaled per direction, R lazily extended
    sigmas = [np.sqrt(1.0 - eps * eps) * b[i] / eps for i in range(n)]
    t4z1 = [T4.apply(v) for v in z1]
    t4z2 = [T4.apply(v) for v in z2]
    v_images = [sigmas[i] * t4z2[i] for i in range(n)]
    r_outputs = [a[i] * t4z1[i] for i in range(n)]
    R = LazyIsometry(space, inputs=yhat1, outputs=r_outputs)
    block = BrownianBlock(R, K_basis=yhat2, V_images=v_images)

    ortho = 0.0
    for imgs in (t4z1, t4z2):
        for u in imgs:
            for w in yhat2:
                ortho = max(ortho, abs(u.inner(w)))

    trace = ConstructionTrace(x=x, y1=y1, y2=y2, z1=z1, z2=z2,
                              sigmas=sigmas, norms_Tx=norms_Tx,
                              yhat1=yhat1, yhat1_shift=yhat1_shift,
                              yhat2=yhat2, orthogonality_max=ortho)
    return block, T4, trace


def random_instantiated(space: AmbientSpace, rng: np.random.Generator) -> Vector:
    """Random unit vector supported on all coordinates instantiated so far."""
    m = space.allocated
    c = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    coords = np.zeros(space.capacity, dtype=np.complex128)
    coords[:m] = c / np.linalg.norm(c)
    return Vector(coords, space)


def random_orthonormal_system(space: AmbientSpace, size: int,
                              rng: np.random.Generator):
    """Random orthonormal system inside the instantiated span."""
    vecs = [random_instantiated(space, rng) for _ in range(size)]
    return gram_schmidt(vecs)


def certificate_evaluate(target, block, trace, G_basis, sample_count: int, *,
                         operator_norm_T: float, bound_theoretical: float,
                         seed: int = 0) -> Certificate:
    """Measure the approximation bound, the order-2 defect, and expansivity.

    `target` is the operator being approximated (T^(4), or 2*id).  Samples
    random unit vectors in span(G_basis) for the bound, and random vectors
    over the full instantiated span (forcing lazy extension of R for the
    squared applications) for the defect.  G must be contained in F.
    """
    space = G_basis[0].space
    rng = np.random.default_rng(seed)

    f_rows = np.array([v.coords for v in trace.x])
    for g in G_basis:
        resid = g.coords - (np.conj(f_rows) @ g.coords) @ f_rows
        if np.linalg.norm(resid) > 1e-8 * max(g.norm(), 1e-300):
            raise SubspaceNotContained("G is not contained in span(F) to tolerance")

    g_rows = np.array([v.coords for v in G_basis])
    bound_measured = 0.0
    for _ in range(sample_count):
        c = rng.standard_normal(len(G_basis)) + 1j * rng.standard_normal(len(G_basis))
        x = Vector((c / np.linalg.norm(c)) @ g_rows, space)
        resid = (block.apply(x) - target.apply(x)).norm()
        bound_measured = max(bound_measured, resid)

    defect_samples = [random_instantiated(space, rng) for _ in range(sample_count)]
    report = defect_report(block, defect_samples, m=2)

    expansivity_min = np.inf
    for _ in range(4):
        S = random_orthonormal_system(space, min(6, space.allocated), rng)
        w, _ = hermitian_eig(compressed_gram(block, S))
        expansivity_min = min(expansivity_min, w[-1])

    return Certificate(n=len(trace.x), epsilon=_trace_epsilon(trace),
                       operator_norm_T=operator_norm_T,
                       bound_theoretical=bound_theoretical,
                       bound_measured=bound_measured,
                       defect_report=report,
                       expansivity_min=float(expansivity_min),
                       orthogonality_max=trace.orthogonality_max)


def _trace_epsilon(trace: ConstructionTrace) -> float:
    # epsilon is recoverable from the first splitting: <x_i, y_i^(2)> = eps
    return float(np.real(trace.x[0].inner(trace.y2[0])))
