"""Generic Clifford algebra Cl(p, q, r) on dense coefficient arrays.

An element is stored as a flat array of 2^n coefficients, one per blade.
Blades are indexed by bitmask: bit i set means generator e_{i+1} is part of
the blade, and generators inside a blade are kept in canonical ascending
order. Generator squares follow the signature: the first p generators square
to +1, the next q to -1, and the last r to 0.

This engine is the slow, brute-force substrate used to verify the fast
quaternion / trident types against first principles.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SignatureMismatch

MAX_GENERATORS = 6


@dataclass(frozen=True)
class Signature:
    """Algebra signature: p generators square to +1, q to -1, r to 0."""

    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 0:
            raise ValueError("generator counts must be non-negative")
        if self.n > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators supported")

    @property
    def n(self) -> int:
        return self.p + self.q + self.r

    @property
    def dim(self) -> int:
        return 1 << self.n

    def generator_square(self, i: int) -> int:
        """Square of generator e_{i+1}: one of +1, -1, 0."""
        if not 0 <= i < self.n:
            raise ValueError(f"generator index {i} out of range")
        if i < self.p:
            return 1
        if i < self.p + self.q:
            return -1
        return 0


def _reorder_sign(mask_a: int, mask_b: int) -> int:
    """Sign from counting transpositions needed to merge two canonical blades."""
    a = mask_a >> 1
    swaps = 0
    while a:
        swaps += bin(a & mask_b).count("1")
        a >>= 1
    return 1 if swaps % 2 == 0 else -1


@lru_cache(maxsize=None)
def _product_tables(sig: Signature) -> tuple[np.ndarray, np.ndarray]:
    """Result-blade index table (a^b) and sign table for all blade pairs."""
    dim = sig.dim
    sign = np.zeros((dim, dim), dtype=np.int8)
    for a in range(dim):
        for b in range(dim):
            s = _reorder_sign(a, b)
            common = a & b
            while common:
                gen = (common & -common).bit_length() - 1
                s *= sig.generator_square(gen)
                common &= common - 1
            sign[a, b] = s
    masks = np.arange(dim)
    xor = masks[:, None] ^ masks[None, :]
    return xor, sign


@lru_cache(maxsize=None)
def _product_tensor(sig: Signature) -> np.ndarray:
    """Dense tensor T with (a*b)[k] = sum_ij T[i,j,k] a[i] b[j]; for batch use."""
    xor, sign = _product_tables(sig)
    dim = sig.dim
    tensor = np.zeros((dim, dim, dim))
    idx = np.indices((dim, dim))
    tensor[idx[0], idx[1], xor] = sign
    return tensor


@dataclass(frozen=True)
class Multivector:
    """A general element of Cl(p, q, r)."""

    sig: Signature
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.sig.dim,):
            raise ValueError(f"expected {self.sig.dim} coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def scalar(cls, sig: Signature, value: float = 1.0) -> "Multivector":
        c = np.zeros(sig.dim)
        c[0] = value
        return cls(sig, c)

    @classmethod
    def generator(cls, sig: Signature, i: int) -> "Multivector":
        """Basis generator e_{i+1} (i is 0-based)."""
        if not 0 <= i < sig.n:
            raise ValueError(f"generator index {i} out of range")
        c = np.zeros(sig.dim)
        c[1 << i] = 1.0
        return cls(sig, c)

    @classmethod
    def blade(cls, sig: Signature, mask: int, value: float = 1.0) -> "Multivector":
        c = np.zeros(sig.dim)
        c[mask] = value
        return cls(sig, c)

    def grade(self, k: int) -> "Multivector":
        """Projection onto the grade-k part."""
        c = self.coeffs.copy()
        for mask in range(self.sig.dim):
            if bin(mask).count("1") != k:
                c[mask] = 0.0
        return Multivector(self.sig, c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "Multivector") -> "Multivector":
        _check_sig(self, other)
        return Multivector(self.sig, self.coeffs + other.coeffs)

    def __sub__(self, other: "Multivector") -> "Multivector":
        _check_sig(self, other)
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return Multivector(self.sig, self.coeffs * float(other))

    def __rmul__(self, other):
        return Multivector(self.sig, self.coeffs * float(other))

    def __neg__(self):
        return Multivector(self.sig, -self.coeffs)


def _check_sig(a: Multivector, b: Multivector) -> None:
    if a.sig != b.sig:
        raise SignatureMismatch(f"operands in Cl{a.sig} and Cl{b.sig}")


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Geometric (Clifford) product of two multivectors."""
    _check_sig(a, b)
    xor, sign = _product_tables(a.sig)
    terms = sign * np.outer(a.coeffs, b.coeffs)
    out = np.zeros(a.sig.dim)
    np.add.at(out, xor.ravel(), terms.ravel())
    return Multivector(a.sig, out)


def geometric_product_batch(sig: Signature, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise geometric product of stacked coefficient arrays (N, 2^n)."""
    tensor = _product_tensor(sig)
    return np.einsum("ni,nj,ijk->nk", a, b, tensor)


# Signature of the algebra housing the trident quaternions.
TRIDENT_SIGNATURE = Signature(0, 3, 2)
_E4E5_MASK = 0b11000


def quotient_reduce(m: Multivector) -> Multivector:
    """Apply the quotient e4*e5 = 0 that carves the trident subalgebra out of Cl(0,3,2).

    Every coefficient on a blade containing both e4 and e5 is zeroed.
    """
    if m.sig != TRIDENT_SIGNATURE:
        raise SignatureMismatch(f"quotient_reduce needs Cl(0, 3, 2), got Cl{m.sig}")
    c = m.coeffs.copy()
    for mask in range(m.sig.dim):
        if mask & _E4E5_MASK == _E4E5_MASK:
            c[mask] = 0.0
    return Multivector(m.sig, c)
