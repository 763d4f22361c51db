"""Growing coordinate model of (a truncation of) an infinite-dimensional Hilbert space.

An :class:`AmbientSpace` hands out coordinates from a fixed budget through a
monotone cursor, so "fresh" directions are always orthogonal to everything
instantiated so far and runs are reproducible.  Vectors are stored at full
capacity length; unallocated coordinates are identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityExceeded, DomainMismatch


@dataclass
class AmbientSpace:
    """Coordinate allocator with named subspace labels.

    Allocation only moves ``next_free`` forward; a coordinate, once handed
    out, is never reused.  Single writer: concurrent construction runs must
    each own their space.
    """

    capacity: int
    next_free: int = 0
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be positive")

    @property
    def allocated(self) -> int:
        return self.next_free

    def allocate(self, count: int, label: str | None = None) -> np.ndarray:
        """Reserve `count` fresh coordinates, optionally under a label."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if self.next_free + count > self.capacity:
            raise CapacityExceeded(
                f"need {count} coordinates, {self.capacity - self.next_free} left "
                f"of {self.capacity}")
        indices = np.arange(self.next_free, self.next_free + count)
        self.next_free += count
        if label is not None:
            self.labels[label] = indices
        return indices

    def basis_vector(self, index: int) -> "Vector":
        if not 0 <= index < self.next_free:
            raise ValueError(f"coordinate {index} not allocated")
        coords = np.zeros(self.capacity, dtype=np.complex128)
        coords[index] = 1.0
        return Vector(coords, self)

    def vector(self, values, indices=None) -> "Vector":
        """Build a vector from `values` placed at `indices` (default: 0..len)."""
        values = np.asarray(values, dtype=np.complex128)
        if values.size == 0:
            raise ValueError("empty value list")
        coords = np.zeros(self.capacity, dtype=np.complex128)
        if indices is None:
            indices = np.arange(len(values))
        indices = np.asarray(indices)
        if np.max(indices) >= self.next_free:
            raise ValueError("values placed on unallocated coordinates")
        coords[indices] = values
        return Vector(coords, self)

    def zero(self) -> "Vector":
        return Vector(np.zeros(self.capacity, dtype=np.complex128), self)


class Vector:
    """Immutable-by-convention coordinate vector tied to one AmbientSpace.

    The inner product is conjugate-linear in the *first* argument:
    ``v.inner(w) == sum(conj(v_k) w_k)``.
    """

    __slots__ = ("coords", "space")

    def __init__(self, coords: np.ndarray, space: AmbientSpace):
        coords = np.asarray(coords, dtype=np.complex128)
        if coords.ndim != 1 or len(coords) != space.capacity:
            raise ValueError("coords length must equal space capacity")
        if not np.all(np.isfinite(coords.view(np.float64))):
            raise ValueError("non-finite entries in vector")
        self.coords = coords
        self.space = space

    def same_space(self, other: "Vector"):
        if other.space is not self.space:
            raise DomainMismatch("vectors belong to different ambient spaces")

    def inner(self, other: "Vector") -> complex:
        self.same_space(other)
        return complex(np.vdot(self.coords, other.coords))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __add__(self, other: "Vector") -> "Vector":
        self.same_space(other)
        return Vector(self.coords + other.coords, self.space)

    def __sub__(self, other: "Vector") -> "Vector":
        self.same_space(other)
        return Vector(self.coords - other.coords, self.space)

    def __mul__(self, scalar) -> "Vector":
        return Vector(self.coords * scalar, self.space)

    __rmul__ = __mul__

    def __neg__(self) -> "Vector":
        return Vector(-self.coords, self.space)

    def __repr__(self):
        support = np.nonzero(np.abs(self.coords) > 0)[0]
        return f"Vector(support={support.tolist()[:8]}..., norm={self.norm():.6g})"
