"""Closed oriented triangle meshes in 3-space: generators, OFF input/output,
cotangent Laplace-Beltrami operator, and geometric functionals.

The discrete mean curvature comes from applying the surface Laplacian to the
coordinate functions: H_i = (S X)_i / (2 m_i) per vertex, so the curvature
energy is computed with the same operator that drives the spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateFaceError, PreconditionError, TopologyError

MAX_SUBDIV = 6


@dataclass(frozen=True)
class TriMesh:
    """Vertex positions (V, 3) and face index triples (F, 3)."""

    vertices: np.ndarray
    faces: np.ndarray

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_faces(self):
        return self.faces.shape[0]


@dataclass(frozen=True)
class LaplaceOperator:
    """Cotangent stiffness matrix (PSD, zero row sums) and lumped vertex masses."""

    stiffness: sp.csr_matrix
    mass: np.ndarray


@dataclass(frozen=True)
class MeshSummary:
    """Geometric functionals of a closed mesh."""

    area: float
    volume: float
    centroid_volume: tuple
    centroid_boundary: tuple
    curvature_energy: float
    h_max: float


def _face_cross(mesh):
    v = mesh.vertices
    f = mesh.faces
    return np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])


def face_areas(mesh):
    return 0.5 * np.linalg.norm(_face_cross(mesh), axis=1)


def validate_mesh(mesh):
    """Closed, consistently oriented, outward, no degenerate faces."""
    v, f = mesh.vertices, mesh.faces
    if f.size == 0 or v.size == 0:
        raise TopologyError("empty mesh")
    if f.min() < 0 or f.max() >= len(v):
        raise TopologyError("face index out of range")
    areas = face_areas(mesh)
    scale = float(np.max(np.abs(v))) or 1.0
    if np.min(areas) <= 1e-14 * scale * scale:
        raise DegenerateFaceError("mesh contains a zero-area face")
    edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    codes = edges[:, 0].astype(np.int64) * len(v) + edges[:, 1]
    uniq, counts = np.unique(codes, return_counts=True)
    if np.any(counts > 1):
        raise TopologyError("mesh is not consistently oriented")
    reverse = (uniq % len(v)) * len(v) + uniq // len(v)
    if not np.all(np.isin(reverse, uniq)):
        raise TopologyError("mesh is not closed")
    if enclosed_volume(mesh) <= 0.0:
        raise TopologyError("mesh is oriented inward")
    return mesh


def enclosed_volume(mesh):
    v, f = mesh.vertices, mesh.faces
    return float(np.einsum("ij,ij->", v[f[:, 0]], _face_cross(mesh)) / 6.0)


_PHI = (1.0 + np.sqrt(5.0)) / 2.0

_ICO_VERTS = np.array(
    [
        (-1, _PHI, 0), (1, _PHI, 0), (-1, -_PHI, 0), (1, -_PHI, 0),
        (0, -1, _PHI), (0, 1, _PHI), (0, -1, -_PHI), (0, 1, -_PHI),
        (_PHI, 0, -1), (_PHI, 0, 1), (-_PHI, 0, -1), (-_PHI, 0, 1),
    ],
    dtype=np.float64,
)

_ICO_FACES = np.array(
    [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ],
    dtype=np.int64,
)


def icosphere(subdiv, radius=1.0):
    """Subdivided icosahedron projected to a sphere; 10*4^subdiv + 2 vertices."""
    if not 0 <= subdiv <= MAX_SUBDIV:
        raise PreconditionError(f"icosphere needs 0 <= subdiv <= {MAX_SUBDIV}")
    if radius <= 0:
        raise PreconditionError("icosphere needs radius > 0")
    verts = [tuple(p) for p in _ICO_VERTS]
    faces = _ICO_FACES
    for _ in range(subdiv):
        midpoint = {}
        new_faces = []

        def mid(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in midpoint:
                midpoint[key] = len(verts)
                pa, pb = verts[i], verts[j]
                verts.append(tuple(0.5 * (a + b) for a, b in zip(pa, pb)))
            return midpoint[key]

        for i, j, k in faces:
            a, b, c = mid(i, j), mid(j, k), mid(k, i)
            new_faces += [(i, a, c), (j, b, a), (k, c, b), (a, b, c)]
        faces = np.array(new_faces, dtype=np.int64)
    v = np.array(verts, dtype=np.float64)
    v *= radius / np.linalg.norm(v, axis=1)[:, None]
    return validate_mesh(TriMesh(v, np.array(faces, dtype=np.int64)))


def ellipsoid_mesh(a, b, c, subdiv):
    """Icosphere vertices scaled per axis to semi-axes (a, b, c)."""
    if min(a, b, c) <= 0:
        raise PreconditionError("ellipsoid_mesh needs positive semi-axes")
    unit = icosphere(subdiv, 1.0)
    return TriMesh(unit.vertices * np.array([a, b, c]), unit.faces)


def cotan_laplacian(mesh):
    """Cotangent stiffness with lumped (one-third incident area) masses."""
    validate_mesh(mesh)
    v, f = mesh.vertices, mesh.faces
    n = len(v)
    areas = face_areas(mesh)
    rows, cols, vals = [], [], []
    mass = np.zeros(n)
    for corner in range(3):
        i = f[:, (corner + 1) % 3]
        j = f[:, (corner + 2) % 3]
        k = f[:, corner]
        e1 = v[i] - v[k]
        e2 = v[j] - v[k]
        cross = np.linalg.norm(np.cross(e1, e2), axis=1)
        cot = np.einsum("ij,ij->i", e1, e2) / cross
        if not np.all(np.isfinite(cot)) or np.max(np.abs(cot)) > 1e12:
            raise DegenerateFaceError("cotangent overflow on a degenerate face")
        rows += [i, j]
        cols += [j, i]
        vals += [-0.5 * cot, -0.5 * cot]
        np.add.at(mass, k, areas / 3.0)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    off = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    diag = -np.asarray(off.sum(axis=1)).ravel()
    stiffness = (off + sp.diags(diag)).tocsr()
    return LaplaceOperator(stiffness, mass)


def mesh_summary(mesh, operator=None):
    """Area, volume, centroids, curvature energy, longest edge."""
    validate_mesh(mesh)
    v, f = mesh.vertices, mesh.faces
    areas = face_areas(mesh)
    area = float(np.sum(areas))
    cross = _face_cross(mesh)
    tet_vol = np.einsum("ij,ij->i", v[f[:, 0]], cross) / 6.0
    volume = float(np.sum(tet_vol))
    face_centroids = (v[f[:, 0]] + v[f[:, 1]] + v[f[:, 2]]) / 3.0
    tet_centroids = 0.75 * face_centroids
    centroid_volume = tuple(np.sum(tet_vol[:, None] * tet_centroids, axis=0) / volume)
    centroid_boundary = tuple(np.sum(areas[:, None] * face_centroids, axis=0) / area)
    if operator is None:
        operator = cotan_laplacian(mesh)
    sx = operator.stiffness @ v
    h_vec = sx / (2.0 * operator.mass[:, None])
    curvature_energy = float(np.sum(operator.mass * np.sum(h_vec * h_vec, axis=1)))
    edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    h_max = float(np.max(np.linalg.norm(v[edges[:, 0]] - v[edges[:, 1]], axis=1)))
    return MeshSummary(
        area=area,
        volume=volume,
        centroid_volume=tuple(float(c) for c in centroid_volume),
        centroid_boundary=tuple(float(c) for c in centroid_boundary),
        curvature_energy=curvature_energy,
        h_max=h_max,
    )


def read_off(path):
    """Read an ASCII OFF mesh file."""
    with open(path, encoding="ascii") as fh:
        tokens = []
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if body:
                tokens += body.split()
    if not tokens or tokens[0] != "OFF":
        raise TopologyError(f"{path}: not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4
    verts = np.array(tokens[pos : pos + 3 * nv], dtype=np.float64).reshape(nv, 3)
    pos += 3 * nv
    faces = []
    for _ in range(nf):
        count = int(tokens[pos])
        if count != 3:
            raise TopologyError(f"{path}: only triangle faces are supported")
        faces.append([int(t) for t in tokens[pos + 1 : pos + 4]])
        pos += 4
    return validate_mesh(TriMesh(verts, np.array(faces, dtype=np.int64)))


def write_off(mesh, path):
    """Write an ASCII OFF mesh file."""
    v, f = mesh.vertices, mesh.faces
    lines = ["OFF", f"{len(v)} {len(f)} 0"]
    lines += [f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}" for p in v]
    lines += [f"3 {a} {b} {c}" for a, b, c in f]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
