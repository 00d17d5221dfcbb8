"""Geometry of the complex unit ball: inner products, Moebius automorphisms
phi_z, and the unitary-invariant coordinates (U, V, Z) of a pair of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError

#: points are accepted while |z|^2 <= 1 - BALL_EPS (series diverge at the boundary)
BALL_EPS = 1e-10


def as_point(coords) -> np.ndarray:
    """Coerce to a 1-D complex vector."""
    z = np.atleast_1d(np.asarray(coords, dtype=complex))
    if z.ndim != 1:
        raise DomainError("a point is a rank-1 complex vector")
    return z


def as_ball_point(coords) -> np.ndarray:
    """Validate membership in the open unit ball."""
    z = as_point(coords)
    if norm_sq(z) > 1.0 - BALL_EPS:
        raise DomainError(f"point with |z|^2 = {norm_sq(z)} is not inside the unit ball")
    return z


def as_sphere_point(coords) -> np.ndarray:
    """Validate membership in the unit sphere (|z|^2 = 1 within 1e-12)."""
    z = as_point(coords)
    if abs(norm_sq(z) - 1.0) > 1e-12:
        raise DomainError(f"point with |z|^2 = {norm_sq(z)} is not on the unit sphere")
    return z


def inner(z, w) -> complex:
    """Hermitian inner product <z,w> = sum_j z_j conj(w_j)."""
    z = as_point(z)
    w = as_point(w)
    if z.shape != w.shape:
        raise DimensionMismatch(f"dimensions differ: {z.shape[0]} vs {w.shape[0]}")
    return complex(np.sum(z * np.conj(w)))


def norm_sq(z) -> float:
    z = as_point(z)
    return float(np.sum(np.abs(z) ** 2).real)


def moebius(z, w) -> np.ndarray:
    """The automorphism phi_z(w) interchanging z and the origin.

    phi_z(w) = (z - P_z w - sqrt(1-|z|^2)(w - P_z w)) / (1 - <w,z>),
    with P_z the projection onto the span of z; phi_0(w) = -w.
    """
    z = as_ball_point(z)
    w = as_ball_point(w)
    if z.shape != w.shape:
        raise DimensionMismatch(f"dimensions differ: {z.shape[0]} vs {w.shape[0]}")
    zz = norm_sq(z)
    if zz == 0.0:
        return -w
    pw = (inner(w, z) / zz) * z
    s = math.sqrt(1.0 - zz)
    return (z - pw - s * (w - pw)) / (1.0 - inner(w, z))


@dataclass(frozen=True)
class InvariantCoords:
    """U = |z|^2, V = |phi_z w|^2, Z = <z, phi_z w>; satisfies |Z|^2 <= U V."""

    U: float
    V: float
    Z: complex


def invariant_coords(z, w) -> InvariantCoords:
    """Complete unitary invariants of a pair of ball points.

    Besides the defining formulas, the closed forms
        Z = (x1 - x2)/(1 - x2),  conj(Z) = (x1 - y1)/(1 - y1),
        V = 1 - (1 - x1)(1 - y2) / ((1 - x2)(1 - y1)),
    with x1=|z|^2, x2=<z,w>, y1=<w,z>, y2=|w|^2, are verified to guard
    against drift between the Moebius route and the algebraic one.
    """
    z = as_ball_point(z)
    w = as_ball_point(w)
    u = norm_sq(z)
    pzw = moebius(z, w)
    v = norm_sq(pzw)
    zz = inner(z, pzw)

    x2 = inner(z, w)
    y1 = inner(w, z)
    y2 = norm_sq(w)
    z_closed = (u - x2) / (1.0 - x2)
    v_closed = 1.0 - ((1.0 - u) * (1.0 - y2) / ((1.0 - x2) * (1.0 - y1))).real
    if abs(zz - z_closed) > 1e-9 or abs(v - v_closed) > 1e-9:
        raise DomainError("invariant-coordinate cross-check failed (points too close to the boundary)")
    if abs(zz) ** 2 > u * v + 1e-12:
        raise DomainError("invariant coordinates violate |Z|^2 <= U V")
    return InvariantCoords(U=u, V=v, Z=zz)


def point_from_invariants(n: int, U: float, V: float, Z: complex) -> tuple[np.ndarray, np.ndarray]:
    """A representative pair (z, w) with the given invariant coordinates.

    Inverts (z,w) -> (U,V,Z) up to a unitary: z = sqrt(U) e1 and w is
    recovered from phi_z w via the involution property of phi_z.
    Requires n >= 2 unless the second component of phi_z w vanishes.
    """
    if not (0.0 <= U < 1.0 and 0.0 <= V < 1.0):
        raise DomainError("U and V must lie in [0, 1)")
    if abs(Z) ** 2 > U * V + 1e-12:
        raise DomainError("invariants must satisfy |Z|^2 <= U V")
    ru = math.sqrt(U)
    z = np.zeros(n, dtype=complex)
    z[0] = ru
    target = np.zeros(n, dtype=complex)
    if U > 0:
        # <z, target> = sqrt(U) conj(target_1) must equal Z
        first = complex(Z).conjugate() / ru
        rest = V - abs(first) ** 2
        if rest < -1e-12:
            raise DomainError("invariants do not correspond to a point pair")
        if n < 2 and rest > 1e-12:
            raise DomainError("n = 1 admits only |Z|^2 = U V")
        target[0] = first
        if n >= 2:
            target[1] = math.sqrt(max(rest, 0.0))
    else:
        if abs(Z) > 1e-14:
            raise DomainError("U = 0 forces Z = 0")
        target[0] = math.sqrt(V)
    w = moebius(z, target)  # phi_z is an involution
    return z, w


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from a QR-orthonormalised complex Gaussian."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
