"""Surface point classes, curvature and genus of closed surfaces.

On a cubical surface every face corner contributes a right angle, so the
angle defect at a vertex with ``m`` incident faces is ``(4 - m)`` quarter
turns.  All cubical arithmetic is done in integer quarter turns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .boundary import BAD_INCIDENCE, BoundarySurface, ManifoldError, ManifoldViolation


class CorruptSurfaceError(ValueError):
    """Point counts that no closed orientable surface can have."""


@dataclass(frozen=True)
class SurfaceClassification:
    m3: int
    m4: int
    m5: int
    m6: int

    @property
    def total(self):
        return self.m3 + self.m4 + self.m5 + self.m6

    def as_dict(self):
        return {"m3": self.m3, "m4": self.m4, "m5": self.m5, "m6": self.m6}


def classify(surface: BoundarySurface) -> SurfaceClassification:
    m = np.asarray(surface.vertex_m)
    bad = (m < 3) | (m > 6)
    if bad.any():
        pts = surface.vertex_points[bad]
        raise ManifoldError(
            ManifoldViolation(BAD_INCIDENCE, (tuple(int(c) for c in p),), f"vertex has {int(k)} incident faces")
            for p, k in zip(pts, m[bad])
        )
    counts = np.bincount(m, minlength=7)
    return SurfaceClassification(*(int(c) for c in counts[3:7]))


def vertex_curvature(m: int) -> int:
    """Angle defect of a cubical surface vertex, in quarter turns."""
    if m not in (3, 4, 5, 6):
        raise ValueError(f"a surface point has 3 to 6 incident faces, got {m}")
    return 4 - m


def genus(c: SurfaceClassification) -> int:
    """Genus from point counts: ``1 + (m5 + 2*m6 - m3) / 8``."""
    excess = c.m5 + 2 * c.m6 - c.m3
    if excess % 8:
        raise CorruptSurfaceError(f"m5 + 2*m6 - m3 = {excess} is not divisible by 8")
    g = 1 + excess // 8
    if g < 0:
        raise CorruptSurfaceError(f"negative genus {g} from {c}")
    return g


def total_curvature(surface: BoundarySurface) -> int:
    """Sum of vertex angle defects in quarter turns."""
    return int(sum(vertex_curvature(int(m)) * n for m, n in zip(*np.unique(surface.vertex_m, return_counts=True))))


def gauss_bonnet_check(surface: BoundarySurface, g: int) -> bool:
    """Total curvature is ``8 - 8g`` quarter turns and ``V - E + F = 2 - 2g``."""
    return total_curvature(surface) == 8 - 8 * g and surface.euler_characteristic == 2 - 2 * g


def satisfies_sphere_identity(c: SurfaceClassification) -> bool:
    """``m3 == 8 + m5 + 2*m6``, which every genus-0 surface must satisfy."""
    return c.m3 == 8 + c.m5 + 2 * c.m6


# -- triangle meshes ----------------------------------------------------------


class MeshError(ValueError):
    pass


@dataclass(eq=False)
class TriMesh:
    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)):
            raise MeshError("triangle index out of range")

    def components(self):
        """Component id per triangle, numbered by first appearance."""
        nv, nt = len(self.vertices), len(self.triangles)
        t = self.triangles
        rows = np.concatenate([t[:, 0], t[:, 1]])
        cols = np.concatenate([t[:, 1], t[:, 2]])
        graph = sparse.coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(nv, nv))
        _, vlabel = connected_components(graph, directed=False)
        tlabel = vlabel[t[:, 0]]
        _, first, inverse = np.unique(tlabel, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        return rank[inverse].reshape(nt)

    def corner_angles(self):
        """``(T, 3)`` interior angle at each triangle corner."""
        p = self.vertices[self.triangles]
        out = np.empty(self.triangles.shape)
        for k in range(3):
            u = p[:, (k + 1) % 3] - p[:, k]
            w = p[:, (k + 2) % 3] - p[:, k]
            out[:, k] = np.arctan2(np.linalg.norm(np.cross(u, w), axis=1), np.einsum("ij,ij->i", u, w))
        return out


def read_off(path) -> TriMesh:
    tokens = []
    lines = Path(path).read_text().splitlines()
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.append(line.split())
    if not tokens or tokens[0][0] != "OFF":
        raise MeshError("first line must be OFF")
    header = tokens[0][1:] or tokens[1]
    body = tokens[1:] if tokens[0][1:] else tokens[2:]
    try:
        nv, nf = int(header[0]), int(header[1])
    except (IndexError, ValueError):
        raise MeshError(f"bad OFF counts line {header!r}") from None
    if len(body) < nv + nf:
        raise MeshError(f"expected {nv} vertices and {nf} faces, file is truncated")
    try:
        verts = [[float(x) for x in row[:3]] for row in body[:nv]]
        faces = [[int(x) for x in row] for row in body[nv:nv + nf]]
    except ValueError as exc:
        raise MeshError(str(exc)) from None
    if any(len(v) != 3 for v in verts):
        raise MeshError("vertex lines need three coordinates")
    for f in faces:
        if f[0] != 3 or len(f) < 4:
            raise MeshError(f"only triangles are supported, got face {f}")
    return TriMesh(np.array(verts).reshape(-1, 3), np.array([f[1:4] for f in faces]).reshape(-1, 3))


def write_off(mesh: TriMesh, path):
    lines = ["OFF", f"{len(mesh.vertices)} {len(mesh.triangles)} 0"]
    lines += [" ".join(repr(float(c)) for c in v) for v in mesh.vertices]
    lines += ["3 " + " ".join(str(int(i)) for i in t) for t in mesh.triangles]
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class MeshComponentGenus:
    component_id: int
    genus: int
    euler: int
    angle_defect: float


def mesh_genus_details(mesh: TriMesh, rtol: float = 1e-6) -> list[MeshComponentGenus]:
    """Genus of every closed component, cross-checked by total angle defect."""
    t = mesh.triangles
    if len(t) == 0:
        return []
    if (t[:, 0] == t[:, 1]).any() or (t[:, 1] == t[:, 2]).any() or (t[:, 0] == t[:, 2]).any():
        raise MeshError("triangle with repeated vertex")
    comp = mesh.components()
    angles = mesh.corner_angles()
    # cross-product check catches collinear corners that arctan2 maps to 0 or pi
    p = mesh.vertices[t]
    area2 = np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)
    if (area2 <= 1e-12 * (1 + np.abs(p).max()) ** 2).any():
        raise MeshError("degenerate (zero-area) triangle")

    edges = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
    ekey, ecount = np.unique(edges[:, 0] * len(mesh.vertices) + edges[:, 1], return_counts=True)
    if (ecount != 2).any():
        a, b = divmod(int(ekey[ecount != 2][0]), len(mesh.vertices))
        raise MeshError(f"edge ({a}, {b}) is in {int(ecount[ecount != 2][0])} triangles, mesh is not closed")

    ncomp = int(comp.max()) + 1
    F = np.bincount(comp, minlength=ncomp)
    E = 3 * F // 2
    vcomp = np.full(len(mesh.vertices), -1)
    vcomp[t.ravel()] = np.repeat(comp, 3)
    used = vcomp >= 0
    V = np.bincount(vcomp[used], minlength=ncomp)
    angle_sum = np.bincount(t.ravel(), weights=angles.ravel(), minlength=len(mesh.vertices))
    defect = np.bincount(vcomp[used], weights=2 * math.pi - angle_sum[used], minlength=ncomp)

    out = []
    for c in range(ncomp):
        chi = int(V[c] - E[c] + F[c])
        if chi > 2:
            raise MeshError(f"component {c} has Euler characteristic {chi} > 2, surfaces are pinched")
        if chi % 2:
            raise MeshError(f"component {c} has odd Euler characteristic {chi}")
        expected = 2 * math.pi * chi
        if abs(defect[c] - expected) > rtol * (1 + abs(expected)):
            raise MeshError(f"component {c}: angle defect {defect[c]!r} disagrees with 2*pi*{chi}")
        out.append(MeshComponentGenus(c, (2 - chi) // 2, chi, float(defect[c])))
    return out


def mesh_genus(mesh: TriMesh) -> list[tuple[int, int]]:
    return [(r.component_id, r.genus) for r in mesh_genus_details(mesh)]
