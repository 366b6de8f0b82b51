"""Embedded geometry of round spheres S^n in R^{n+1} and flat unit tori T^n.

Spheres are handled extrinsically: points are unit vectors in R^{n+1},
tangent vectors are ambient vectors orthogonal to the base point, the
Levi-Civita derivative is the tangential projection of the ambient
directional derivative, and geodesics are great circles.  The torus is the
unit cube with opposite faces glued; everything is Euclidean mod 1.

Points and tangent vectors are plain float ndarrays.  Functions ending in
``_batch`` operate on ``(N, d)`` stacks of points/vectors and are what the
energy, residual and sweep machinery uses internally.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

SPHERE = "sphere"
TORUS = "torus"

MONTE_CARLO = "monte-carlo"
FIBONACCI_2SPHERE = "fibonacci-2sphere"
TORUS_GRID = "torus-grid"

SCHEMES = (MONTE_CARLO, FIBONACCI_2SPHERE, TORUS_GRID)

POINT_TOL = 1e-12
TANGENT_TOL = 1e-10
UNIT_TOL = 1e-10


@dataclass(frozen=True)
class ManifoldSpec:
    """Base manifold: round sphere S^n or flat torus T^n of intrinsic dimension n."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (SPHERE, TORUS):
            raise ValueError(f"unknown manifold kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError(f"manifold dimension must be >= 1, got {self.dim}")

    @property
    def ambient_dim(self) -> int:
        return self.dim + 1 if self.kind == SPHERE else self.dim

    @property
    def is_sphere(self) -> bool:
        return self.kind == SPHERE

    def __str__(self) -> str:
        return f"{self.kind}:{self.dim}"


def sphere(dim: int) -> ManifoldSpec:
    return ManifoldSpec(SPHERE, dim)


def torus(dim: int) -> ManifoldSpec:
    return ManifoldSpec(TORUS, dim)


def parse_manifold(text: str) -> ManifoldSpec:
    """Parse the textual form ``sphere:3`` / ``torus:2``."""
    try:
        kind, _, dim = text.partition(":")
        return ManifoldSpec(kind.strip(), int(dim))
    except ValueError as exc:
        raise ValueError(f"cannot parse manifold {text!r}: {exc}") from None


def check_point(m: ManifoldSpec, x: np.ndarray) -> np.ndarray:
    """Validate a point of ``m`` and return it as a float array."""
    x = np.asarray(x, dtype=float)
    if x.shape != (m.ambient_dim,):
        raise ValueError(
            f"point has shape {x.shape}, expected ({m.ambient_dim},) for {m}"
        )
    if m.is_sphere:
        if abs(np.linalg.norm(x) - 1.0) > POINT_TOL:
            raise ValueError(f"sphere point must have unit norm, |x| = {np.linalg.norm(x)!r}")
        return x
    return np.mod(x, 1.0)


def check_tangent(m: ManifoldSpec, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Validate that ``v`` is tangent to ``m`` at ``x``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (m.ambient_dim,):
        raise ValueError(
            f"vector has shape {v.shape}, expected ({m.ambient_dim},) for {m}"
        )
    if m.is_sphere:
        bound = TANGENT_TOL * max(1.0, float(np.linalg.norm(v)))
        if abs(float(v @ x)) > bound:
            raise ValueError(f"vector is not tangent at the base point: <v,x> = {float(v @ x)!r}")
    return v


def tangent_project(m: ManifoldSpec, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an ambient vector onto the tangent space at x.

    On the sphere this is v - <v,x>x; on the flat torus it is the identity.
    """
    x = check_point(m, x)
    v = np.asarray(v, dtype=float)
    if v.shape != (m.ambient_dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({m.ambient_dim},)")
    if m.is_sphere:
        return v - (v @ x) * x
    return v


def project_batch(m: ManifoldSpec, X: np.ndarray, V: np.ndarray) -> np.ndarray:
    if m.is_sphere:
        return V - np.sum(V * X, axis=1)[:, None] * X
    return V


def orthonormal_frame(m: ManifoldSpec, x: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal tangent frame at x, one row per frame vector.

    Sphere rule: project the standard basis, drop the index maximizing
    |<e_i, x>| (lowest index on ties), Gram-Schmidt in ascending index order.
    Torus: the standard basis.
    """
    x = check_point(m, x)
    return frame_batch(m, x[None, :])[0]


def frame_batch(m: ManifoldSpec, X: np.ndarray) -> np.ndarray:
    """Orthonormal frames for a stack of points; shape (N, dim, ambient_dim)."""
    n_pts, d = X.shape
    n = m.dim
    if not m.is_sphere:
        return np.broadcast_to(np.eye(n), (n_pts, n, n)).copy()
    drop = np.argmax(np.abs(X), axis=1)
    cols = np.arange(d)
    keep_mask = cols[None, :] != drop[:, None]
    kept = np.broadcast_to(cols, (n_pts, d))[keep_mask].reshape(n_pts, n)
    frame = np.eye(d)[kept]  # (N, n, d) raw basis vectors, ascending index
    frame = frame - np.sum(frame * X[:, None, :], axis=2)[:, :, None] * X[:, None, :]
    for i in range(n):
        v = frame[:, i, :]
        for j in range(i):
            prev = frame[:, j, :]
            v = v - np.sum(v * prev, axis=1)[:, None] * prev
        v = v / np.linalg.norm(v, axis=1)[:, None]
        frame[:, i, :] = v
    return frame


def _check_unit(m: ManifoldSpec, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise ValueError(f"direction must be unit length, |u| = {np.linalg.norm(u)!r}")
    return u


def geodesic(m: ManifoldSpec, x: np.ndarray, u: np.ndarray, t: float) -> np.ndarray:
    """Point reached after time t along the unit-speed geodesic from x with velocity u."""
    x = check_point(m, x)
    u = _check_unit(m, u)
    return geodesic_batch(m, x[None, :], u[None, :], t)[0]


def geodesic_batch(m: ManifoldSpec, X: np.ndarray, U: np.ndarray, t: float) -> np.ndarray:
    if m.is_sphere:
        y = math.cos(t) * X + math.sin(t) * U
        # renormalize to suppress drift
        return y / np.linalg.norm(y, axis=1)[:, None]
    return np.mod(X + t * U, 1.0)


def geodesic_velocity_batch(m: ManifoldSpec, X: np.ndarray, U: np.ndarray, t: float) -> np.ndarray:
    """Velocity of the geodesic at parameter t (parallel along the geodesic)."""
    if m.is_sphere:
        return -math.sin(t) * X + math.cos(t) * U
    return U


def parallel_transport(
    m: ManifoldSpec, x: np.ndarray, u: np.ndarray, t: float, v: np.ndarray
) -> np.ndarray:
    """Transport the tangent vector v from x to geodesic(m, x, u, t).

    Sphere: decompose v = a*u + w with w perpendicular to u; the result is
    a*(-sin(t)x + cos(t)u) + w.  Torus: v unchanged.  Norm-preserving.
    """
    x = check_point(m, x)
    u = _check_unit(m, u)
    v = check_tangent(m, x, v)
    return transport_batch(m, x[None, :], u[None, :], t, v[None, :])[0]


def transport_batch(
    m: ManifoldSpec, X: np.ndarray, U: np.ndarray, t: float, V: np.ndarray
) -> np.ndarray:
    if not m.is_sphere:
        return V
    a = np.sum(V * U, axis=1)[:, None]
    w = V - a * U
    return a * (-math.sin(t) * X + math.cos(t) * U) + w


def manifold_volume(m: ManifoldSpec) -> float:
    """Riemannian volume: 2*pi^((n+1)/2)/Gamma((n+1)/2) for S^n, 1 for T^n."""
    if m.is_sphere:
        half = (m.dim + 1) / 2.0
        return 2.0 * math.pi**half / math.gamma(half)
    return 1.0


@dataclass(frozen=True)
class QuadratureSet:
    """Sample points with weights; deterministic for fixed (seed, N, scheme).

    ``points`` has one row per sample (ambient coordinates) and ``weights``
    carries units of volume, so integrals are plain weighted sums.
    """

    points: np.ndarray
    weights: np.ndarray
    seed: int
    scheme: str

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    def to_csv(self, fileobj) -> None:
        """One row per point: coordinates then weight; header names columns."""
        writer = csv.writer(fileobj)
        d = self.points.shape[1]
        writer.writerow([f"x{i}" for i in range(d)] + ["weight"])
        for row, w in zip(self.points, self.weights):
            writer.writerow([format(c, ".17g") for c in row] + [format(w, ".17g")])


def make_quadrature(m: ManifoldSpec, scheme: str, n: int, seed: int = 0) -> QuadratureSet:
    """Build a quadrature set on ``m``.

    Monte Carlo points come from a counter-based (Philox) stream keyed by the
    seed, so regeneration is bitwise reproducible.  Sphere samples are
    normalized standard Gaussians, torus samples uniform; every weight is
    vol(M)/N.  The torus grid uses round(N**(1/n)) points per axis (the actual
    count may differ from N); the Fibonacci lattice requires S^2.
    """
    if n < 1:
        raise ValueError(f"need at least one quadrature point, got {n}")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown quadrature scheme {scheme!r}; choose from {SCHEMES}")
    vol = manifold_volume(m)
    if scheme == MONTE_CARLO:
        rng = np.random.Generator(np.random.Philox(seed))
        if m.is_sphere:
            z = rng.standard_normal((n, m.ambient_dim))
            pts = z / np.linalg.norm(z, axis=1)[:, None]
        else:
            pts = rng.random((n, m.dim))
        w = np.full(n, vol / n)
        return QuadratureSet(pts, w, seed, scheme)
    if scheme == FIBONACCI_2SPHERE:
        if not (m.is_sphere and m.dim == 2):
            raise ValueError("fibonacci-2sphere requires the 2-sphere")
        k = np.arange(n)
        z = 1.0 - (2.0 * k + 1.0) / n
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = k * (math.pi * (3.0 - math.sqrt(5.0)))
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        w = np.full(n, vol / n)
        return QuadratureSet(pts, w, seed, scheme)
    # torus grid
    if m.is_sphere:
        raise ValueError("torus-grid requires a torus manifold")
    per_axis = max(1, round(n ** (1.0 / m.dim)))
    axes = [np.arange(per_axis) / per_axis] * m.dim
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([g.ravel() for g in mesh])
    total = pts.shape[0]
    w = np.full(total, 1.0 / total)
    return QuadratureSet(pts, w, seed, TORUS_GRID)
