"""Star-shaped planar domains: boundary frames, quadratures, geometric functionals.

A domain is a radius function r(theta) about a movable center point.  All
boundary integrals use the uniform trapezoid rule in theta, which converges
spectrally on these smooth closed curves; interior integrals use a polar
tensor rule (trapezoid in angle, Gauss-Legendre in the radial coordinate).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidDomainError, PreconditionError

_VALIDATION_GRID = 4096


@dataclass(frozen=True)
class DomainSpec2D:
    """Parametric star-shaped domain: kind, shape parameters, center offset.

    kinds and params:
      disk     (R,)
      ellipse  (a, b)                       r = ab / sqrt(b^2 cos^2 + a^2 sin^2)
      pdisk    (R, eps, m)                  r = R (1 + eps cos(m theta))
      fourier  (a0, a1, b1, a2, b2, ...)    r = a0 + sum(ak cos k + bk sin k)
    """

    kind: str
    params: tuple
    center: tuple = (0.0, 0.0)


def disk(radius, center=(0.0, 0.0)):
    return DomainSpec2D("disk", (float(radius),), tuple(center))


def ellipse(a, b, center=(0.0, 0.0)):
    return DomainSpec2D("ellipse", (float(a), float(b)), tuple(center))


def perturbed_disk(radius, eps, m, center=(0.0, 0.0)):
    return DomainSpec2D("pdisk", (float(radius), float(eps), int(m)), tuple(center))


def fourier_radius(coeffs, center=(0.0, 0.0)):
    """coeffs = (a0, a1, b1, a2, b2, ...): cos/sin pairs after the constant."""
    return DomainSpec2D("fourier", tuple(float(c) for c in coeffs), tuple(center))


def parse_domain(text):
    """Parse 'disk:R', 'ellipse:a,b', 'pdisk:R,eps,m', 'fourier:a0,a1,b1,...'."""
    try:
        kind, _, rest = text.partition(":")
        vals = [float(v) for v in rest.split(",")] if rest else []
        if kind == "disk" and len(vals) == 1:
            return validate(disk(vals[0]))
        if kind == "ellipse" and len(vals) == 2:
            return validate(ellipse(vals[0], vals[1]))
        if kind == "pdisk" and len(vals) == 3:
            return validate(perturbed_disk(vals[0], vals[1], int(vals[2])))
        if kind == "fourier" and len(vals) >= 1 and len(vals) % 2 == 1:
            return validate(fourier_radius(vals))
    except (ValueError, InvalidDomainError) as exc:
        raise InvalidDomainError(f"cannot parse domain {text!r}: {exc}") from exc
    raise InvalidDomainError(f"cannot parse domain {text!r}")


def format_domain(spec):
    """Inverse of parse_domain, ignoring the center offset."""
    return f"{spec.kind}:" + ",".join(f"{v:.12g}" for v in spec.params)


def validate(spec):
    """Check parameter invariants and positivity of r on a fine grid."""
    p = spec.params
    if spec.kind == "disk":
        if len(p) != 1 or p[0] <= 0:
            raise InvalidDomainError("disk needs R > 0")
    elif spec.kind == "ellipse":
        if len(p) != 2 or p[0] <= 0 or p[1] <= 0:
            raise InvalidDomainError("ellipse needs a, b > 0")
    elif spec.kind == "pdisk":
        if len(p) != 3 or p[0] <= 0:
            raise InvalidDomainError("pdisk needs R > 0")
        if abs(p[1]) >= 1:
            raise InvalidDomainError("pdisk needs |eps| < 1")
    elif spec.kind == "fourier":
        if len(p) < 1 or len(p) % 2 == 0:
            raise InvalidDomainError("fourier needs a0 plus (ak, bk) pairs")
    else:
        raise InvalidDomainError(f"unknown domain kind {spec.kind!r}")
    theta = np.linspace(0.0, 2.0 * np.pi, _VALIDATION_GRID, endpoint=False)
    r, _, _ = radius_profile(spec, theta)
    if not np.all(np.isfinite(r)) or np.min(r) <= 0.0:
        raise InvalidDomainError("radius function is not strictly positive")
    return spec


def radius_profile(spec, theta):
    """Radius and its first two theta-derivatives, analytically per kind."""
    theta = np.asarray(theta, dtype=np.float64)
    p = spec.params
    if spec.kind == "disk":
        r = np.full_like(theta, p[0])
        z = np.zeros_like(theta)
        return r, z, z
    if spec.kind == "ellipse":
        a, b = p
        g = b * b * np.cos(theta) ** 2 + a * a * np.sin(theta) ** 2
        gp = (a * a - b * b) * np.sin(2.0 * theta)
        gpp = 2.0 * (a * a - b * b) * np.cos(2.0 * theta)
        ab = a * b
        r = ab * g ** -0.5
        rp = -0.5 * ab * g ** -1.5 * gp
        rpp = 0.75 * ab * g ** -2.5 * gp * gp - 0.5 * ab * g ** -1.5 * gpp
        return r, rp, rpp
    if spec.kind == "pdisk":
        radius, eps, m = p
        c = np.cos(m * theta)
        s = np.sin(m * theta)
        return (
            radius * (1.0 + eps * c),
            -radius * eps * m * s,
            -radius * eps * m * m * c,
        )
    a0 = p[0]
    r = np.full_like(theta, a0)
    rp = np.zeros_like(theta)
    rpp = np.zeros_like(theta)
    for k in range(1, (len(p) - 1) // 2 + 1):
        ak, bk = p[2 * k - 1], p[2 * k]
        c = np.cos(k * theta)
        s = np.sin(k * theta)
        r += ak * c + bk * s
        rp += k * (-ak * s + bk * c)
        rpp += k * k * (-ak * c - bk * s)
    return r, rp, rpp


def max_radius(spec):
    """max over theta of r(theta), used as the basis length scale."""
    theta = np.linspace(0.0, 2.0 * np.pi, _VALIDATION_GRID, endpoint=False)
    r, _, _ = radius_profile(spec, theta)
    return float(np.max(r))


def diameter_bound(spec):
    return 2.0 * max_radius(spec)


@dataclass(frozen=True)
class BoundaryFrame:
    """Trapezoid-rule boundary nodes with arclength weights and local frame."""

    n: int
    theta: np.ndarray
    nodes: np.ndarray      # (N, 2) positions, center offset included
    weights: np.ndarray    # (N,) arclength weights, sum -> perimeter
    normals: np.ndarray    # (N, 2) outward unit normals
    tangents: np.ndarray   # (N, 2) unit tangents (counterclockwise)
    curvature: np.ndarray  # (N,) signed curvature, positive for convex arcs


def boundary_frame(spec, n):
    """Build the N-node boundary frame for a validated domain."""
    if n < 64 or n % 2 != 0:
        raise PreconditionError("boundary_frame needs N >= 64 and even")
    validate(spec)
    theta = 2.0 * np.pi * np.arange(n) / n
    r, rp, rpp = radius_profile(spec, theta)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    nodes = np.stack(
        [spec.center[0] + r * cos_t, spec.center[1] + r * sin_t], axis=1
    )
    dx = np.stack([rp * cos_t - r * sin_t, rp * sin_t + r * cos_t], axis=1)
    speed = np.sqrt(r * r + rp * rp)
    tangents = dx / speed[:, None]
    normals = np.stack([tangents[:, 1], -tangents[:, 0]], axis=1)
    weights = speed * (2.0 * np.pi / n)
    curvature = (r * r + 2.0 * rp * rp - r * rpp) / speed**3
    return BoundaryFrame(n, theta, nodes, weights, normals, tangents, curvature)


@dataclass(frozen=True)
class InteriorQuad:
    """Polar tensor quadrature over the domain interior."""

    nodes: np.ndarray    # (P, 2)
    weights: np.ndarray  # (P,), sum -> area


def interior_quad(spec, n_theta, n_r):
    """Tensor rule: trapezoid in angle, Gauss-Legendre in scaled radius."""
    if n_theta < 64 or n_r < 8:
        raise PreconditionError("interior_quad needs n_theta >= 64 and n_r >= 8")
    validate(spec)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    r, _, _ = radius_profile(spec, theta)
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_r)
    t = 0.5 * (gl_x + 1.0)
    wt = 0.5 * gl_w
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    # nodes[j, k] = center + t_k * r_j * e(theta_j)
    px = spec.center[0] + np.outer(r * cos_t, t)
    py = spec.center[1] + np.outer(r * sin_t, t)
    nodes = np.stack([px.ravel(), py.ravel()], axis=1)
    weights = ((2.0 * np.pi / n_theta) * np.outer(r * r, wt * t)).ravel()
    return InteriorQuad(nodes, weights)


@dataclass(frozen=True)
class GeoSummary:
    """Geometric functionals of one domain, all by boundary divergence forms."""

    area: float
    perimeter: float
    centroid_volume: tuple
    centroid_boundary: tuple
    j_moments: tuple        # (J_1, J_2) second moments over the interior
    j0: float               # polar moment J_1 + J_2
    jprod: float            # J_1 * J_2
    boundary_moments: tuple  # boundary integrals of x_1^2 and x_2^2
    curvature_energy: float  # boundary integral of curvature^2
    convex: bool


def geo_summary(spec, n=512):
    """Area, perimeter, centroids, moments, curvature energy, convexity."""
    f = boundary_frame(spec, n)
    x, w, nu = f.nodes, f.weights, f.normals
    perimeter = float(np.sum(w))
    area = 0.5 * float(np.sum(w * np.einsum("ij,ij->i", x, nu)))
    j_moments = tuple(
        float(np.sum(w * x[:, k] ** 3 * nu[:, k]) / 3.0) for k in range(2)
    )
    centroid_volume = tuple(
        float(np.sum(w * 0.5 * x[:, k] ** 2 * nu[:, k]) / area) for k in range(2)
    )
    centroid_boundary = tuple(float(np.sum(w * x[:, k]) / perimeter) for k in range(2))
    boundary_moments = tuple(float(np.sum(w * x[:, k] ** 2)) for k in range(2))
    curvature_energy = float(np.sum(w * f.curvature**2))
    kappa_max = float(np.max(np.abs(f.curvature)))
    convex = bool(np.min(f.curvature) >= -1e-9 * kappa_max)
    return GeoSummary(
        area=area,
        perimeter=perimeter,
        centroid_volume=centroid_volume,
        centroid_boundary=centroid_boundary,
        j_moments=j_moments,
        j0=j_moments[0] + j_moments[1],
        jprod=j_moments[0] * j_moments[1],
        boundary_moments=boundary_moments,
        curvature_energy=curvature_energy,
        convex=convex,
    )


def recenter(spec, mode="volume", n=512):
    """Translate the center so the chosen centroid sits at the origin."""
    if mode not in ("volume", "boundary"):
        raise PreconditionError(f"unknown recenter mode {mode!r}")
    g = geo_summary(spec, n)
    c = g.centroid_volume if mode == "volume" else g.centroid_boundary
    return replace(spec, center=(spec.center[0] - c[0], spec.center[1] - c[1]))
