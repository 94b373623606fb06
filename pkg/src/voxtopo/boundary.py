"""Boundary surfaces of a voxel solid as closed quad complexes.

A boundary face is the unit square shared by a foreground voxel and a
background voxel (or the outside of the grid).  Faces are grouped into closed
surfaces by shared lattice edges.  Lattice points use corner coordinates,
``0..n`` per axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .volume import ComponentLabeling, VoxelVolume, foreground_components

# direction index = 2 * axis + (0 for +axis, 1 for -axis)
DIRECTIONS = ("+x", "-x", "+y", "-y", "+z", "-z")

NONMANIFOLD_EDGE = "nonmanifold_edge"
NONMANIFOLD_VERTEX = "nonmanifold_vertex"
BAD_INCIDENCE = "bad_incidence"

_UNIT = np.eye(3, dtype=np.int64)


@dataclass(frozen=True)
class ManifoldViolation:
    kind: str
    location: tuple
    detail: str

    def to_dict(self):
        return {"kind": self.kind, "location": [list(p) for p in self.location], "detail": self.detail}


class ManifoldError(ValueError):
    """The boundary of a volume is not a union of closed surfaces."""

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0].detail if self.violations else "unknown"
        super().__init__(f"{len(self.violations)} manifold violation(s), first: {first}")


@dataclass(eq=False)
class BoundarySurface:
    """One edge-connected closed component of the boundary.

    ``cells`` and ``directions`` describe the faces: ``cells[i]`` is the
    foreground voxel and ``directions[i]`` indexes :data:`DIRECTIONS`, pointing
    to the background side.  ``vertex_points[j]`` is a lattice point carrying
    ``vertex_m[j]`` incident faces.
    """

    id: int
    owner_component: int
    cells: np.ndarray
    directions: np.ndarray
    vertex_points: np.ndarray
    vertex_m: np.ndarray
    E: int

    @property
    def F(self):
        return len(self.cells)

    @property
    def V(self):
        return len(self.vertex_points)

    @property
    def euler_characteristic(self):
        return self.V - self.E + self.F

    @cached_property
    def faces(self):
        return frozenset(
            (tuple(int(c) for c in cell), DIRECTIONS[d]) for cell, d in zip(self.cells, self.directions)
        )


def vertex_incidence(surface: BoundarySurface) -> dict:
    """Map each lattice point of the surface to its number of incident faces."""
    return {tuple(int(c) for c in p): int(m) for p, m in zip(surface.vertex_points, surface.vertex_m)}


# -- face enumeration ---------------------------------------------------------


@dataclass
class _Faces:
    """All boundary faces of a volume, in padded-lattice coordinates."""

    axis: np.ndarray
    anchor: np.ndarray  # min corner of the face square, padded lattice
    cell: np.ndarray  # foreground voxel, original coordinates
    direction: np.ndarray
    lattice_shape: tuple = field(default=())

    def __len__(self):
        return len(self.axis)

    def vertex_key(self, points):
        lx, ly, _ = self.lattice_shape
        return points[..., 0] + lx * (points[..., 1] + ly * points[..., 2])

    def corners(self):
        """``(F, 4, 3)`` lattice corners of every face."""
        b = _UNIT[(self.axis + 1) % 3]
        d = _UNIT[(self.axis + 2) % 3]
        q = self.anchor
        return np.stack([q, q + b, q + b + d, q + d], axis=1)

    def edge_keys(self):
        """``(F, 4)`` keys of the lattice edges bounding every face."""
        ab = (self.axis + 1) % 3
        ad = (self.axis + 2) % 3
        q = self.anchor
        starts = np.stack([q, q + _UNIT[ad], q, q + _UNIT[ab]], axis=1)
        axes = np.stack([ab, ab, ad, ad], axis=1)
        return self.vertex_key(starts) * 3 + axes


def _enumerate_faces(volume: VoxelVolume) -> _Faces:
    pad = volume.padded()
    axes, anchors, cells, dirs = [], [], [], []
    for a in range(3):
        lo = [slice(None)] * 3
        hi = [slice(None)] * 3
        lo[a] = slice(None, -1)
        hi[a] = slice(1, None)
        lo_cell, hi_cell = pad[tuple(lo)], pad[tuple(hi)]
        for positive, mask in ((True, lo_cell & ~hi_cell), (False, hi_cell & ~lo_cell)):
            idx = np.argwhere(mask)
            anchor = idx.copy()
            anchor[:, a] += 1  # the plane between padded cells i and i+1
            cell = idx - 1
            if not positive:
                cell[:, a] += 1
            axes.append(np.full(len(idx), a, dtype=np.int64))
            anchors.append(anchor)
            cells.append(cell)
            dirs.append(np.full(len(idx), 2 * a + (0 if positive else 1), dtype=np.int64))
    return _Faces(
        np.concatenate(axes),
        np.concatenate(anchors).astype(np.int64),
        np.concatenate(cells).astype(np.int64),
        np.concatenate(dirs),
        tuple(n + 1 for n in pad.shape),
    )


# -- surfaces -----------------------------------------------------------------


def extract_boundary(volume: VoxelVolume, labeling: ComponentLabeling | None = None) -> list[BoundarySurface]:
    """Split the boundary into closed surfaces by edge-connectivity of faces.

    Surfaces are ordered by owning component, then by their lowest lattice
    point, so a component's outer surface precedes its cavity surfaces.
    Raises :class:`ManifoldError` if some lattice edge bounds other than two
    faces.
    """
    if labeling is None:
        labeling = foreground_components(volume)
    faces = _enumerate_faces(volume)
    nf = len(faces)
    if nf == 0:
        return []

    ekeys = faces.edge_keys().ravel()
    order = np.argsort(ekeys, kind="stable")
    sorted_keys = ekeys[order]
    uniq, start, counts = np.unique(sorted_keys, return_index=True, return_counts=True)
    if (counts != 2).any():
        raise ManifoldError(_edge_violations(uniq[counts != 2], counts[counts != 2], faces.lattice_shape))
    face_of = order // 4
    pairs = face_of.reshape(-1, 2)
    # symmetric adjacency, every face has exactly four neighbours; strong
    # components of a symmetric graph are its components and skip a transpose
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    graph = sparse.csr_matrix(
        (np.ones(4 * nf), dst[np.argsort(src, kind="stable")], np.arange(0, 4 * nf + 1, 4)),
        shape=(nf, nf),
    )
    nsurf, face_label = connected_components(graph, directed=True, connection="strong")

    corners = faces.corners()
    vkeys = faces.vertex_key(corners)
    owner_of_face = labeling.label_of[tuple(faces.cell.T)]
    # a surface's lowest vertex key; outer surfaces of a component sort first
    low = np.full(nsurf, np.iinfo(np.int64).max)
    np.minimum.at(low, face_label, vkeys.min(axis=1))
    owner = np.empty(nsurf, dtype=np.int64)
    owner[face_label] = owner_of_face
    rank = np.lexsort((low, owner))
    relabel = np.empty(nsurf, dtype=np.int64)
    relabel[rank] = np.arange(nsurf)
    face_label = relabel[face_label]
    owner = owner[rank]

    # per (surface, vertex) face incidence
    combo = np.repeat(face_label, 4) * (int(vkeys.max()) + 1) + vkeys.ravel()
    vcombo, vcount = np.unique(combo, return_counts=True)
    vsurf = vcombo // (int(vkeys.max()) + 1)
    vkey = vcombo % (int(vkeys.max()) + 1)
    lx, ly, _ = faces.lattice_shape
    vpoints = np.stack([vkey % lx, (vkey // lx) % ly, vkey // (lx * ly)], axis=1) - 1
    vbounds = np.searchsorted(vsurf, np.arange(nsurf + 1))

    edge_surf = face_label[face_of[start]]
    ecount = np.bincount(edge_surf, minlength=nsurf)

    face_order = np.argsort(face_label, kind="stable")
    fbounds = np.searchsorted(face_label[face_order], np.arange(nsurf + 1))

    surfaces = []
    for s in range(nsurf):
        fsel = face_order[fbounds[s]:fbounds[s + 1]]
        vs = slice(vbounds[s], vbounds[s + 1])
        surfaces.append(
            BoundarySurface(
                id=s,
                owner_component=int(owner[s]),
                cells=faces.cell[fsel],
                directions=faces.direction[fsel],
                vertex_points=vpoints[vs],
                vertex_m=vcount[vs],
                E=int(ecount[s]),
            )
        )
    return surfaces


def _edge_violations(keys, counts, lattice_shape):
    lx, ly, _ = lattice_shape
    axis = keys % 3
    v = keys // 3
    starts = np.stack([v % lx, (v // lx) % ly, v // (lx * ly)], axis=1) - 1
    out = []
    for p, a, c in zip(starts, axis, counts):
        p0 = tuple(int(x) for x in p)
        p1 = tuple(int(x) for x in p + _UNIT[a])
        out.append(
            ManifoldViolation(NONMANIFOLD_EDGE, (p0, p1), f"edge {p0}-{p1} bounds {c} boundary faces")
        )
    return out


# -- local manifold check -----------------------------------------------------


def _build_vertex_table():
    """Classify every 2x2x2 occupancy pattern around a lattice point.

    Cell ``b`` of the block sits at offset ``(b & 1, b >> 1 & 1, b >> 2 & 1)``.
    Returns per-pattern face count, number of face fans, and whether one of
    the six lattice edges at the point is surrounded by a diagonal pattern.
    """
    m = np.zeros(256, dtype=np.int64)
    fans = np.zeros(256, dtype=np.int64)
    bad_edge = np.zeros(256, dtype=bool)
    # the 12 faces through the centre point: cell pairs differing in one bit
    pairs = [(c, c | (1 << a), a) for a in range(3) for c in range(8) if not c & (1 << a)]
    for code in range(256):
        occ = [(code >> b) & 1 for b in range(8)]
        active = [(c0, c1, a) for c0, c1, a in pairs if occ[c0] != occ[c1]]
        m[code] = len(active)
        # a face perpendicular to ``a`` contains the two half-edges from the centre
        # along the other axes, on the side given by its cells' bits
        by_edge = {}
        for i, (c0, _, a) in enumerate(active):
            for b in range(3):
                if b != a:
                    by_edge.setdefault((b, (c0 >> b) & 1), []).append(i)
        parent = list(range(len(active)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for members in by_edge.values():
            if len(members) == 4:
                bad_edge[code] = True
            for j in members[1:]:
                parent[find(j)] = find(members[0])
        fans[code] = len({find(i) for i in range(len(active))})
    return m, fans, bad_edge


VERTEX_FACES, VERTEX_FANS, VERTEX_BAD_EDGE = _build_vertex_table()


def vertex_codes(volume: VoxelVolume) -> np.ndarray:
    """8-bit 2x2x2 neighbourhood pattern for every lattice point ``0..n``."""
    pad = volume.padded()
    nx, ny, nz = (n - 1 for n in pad.shape)
    codes = np.zeros((nx, ny, nz), dtype=np.uint8)
    for dx, dy, dz in product((0, 1), repeat=3):
        bit = dx | dy << 1 | dz << 2
        codes |= pad[dx:dx + nx, dy:dy + ny, dz:dz + nz].astype(np.uint8) << bit
    return codes


def _diagonal_edges(pad, axis):
    """Lattice edges along ``axis`` whose four cells form a diagonal pattern."""
    p = np.moveaxis(pad, axis, 2)
    a, b = p[:-1, :-1], p[1:, :-1]
    c, d = p[:-1, 1:], p[1:, 1:]
    diag = (a & d & ~b & ~c) | (b & c & ~a & ~d)
    idx = np.argwhere(diag)
    # block (i, j) surrounds lattice line (i, j); padded cell k spans [k-1, k]
    start = idx - np.array([0, 0, 1])
    # undo moveaxis: the moved array's axes are (others..., axis)
    perm = [ax for ax in range(3) if ax != axis] + [axis]
    out = np.empty_like(start)
    out[:, perm] = start
    return out


def validate_manifold(volume: VoxelVolume) -> list[ManifoldViolation]:
    """Check that the boundary is locally a closed surface.

    Every boundary edge must bound exactly two faces, and the faces around
    every boundary vertex must form one fan with 3 to 6 members.  Vertices on
    a bad edge are reported through that edge only.
    """
    pad = volume.padded()
    violations = []
    for axis in range(3):
        for p in _diagonal_edges(pad, axis):
            p0 = tuple(int(x) for x in p)
            p1 = tuple(int(x) for x in p + _UNIT[axis])
            violations.append(
                ManifoldViolation(NONMANIFOLD_EDGE, (p0, p1), f"edge {p0}-{p1} bounds 4 boundary faces")
            )

    codes = vertex_codes(volume)
    m = VERTEX_FACES[codes]
    fans = VERTEX_FANS[codes]
    clean = ~VERTEX_BAD_EDGE[codes] & (m > 0)
    for p in np.argwhere(clean & (fans > 1)):
        pt = tuple(int(x) for x in p)
        n = int(fans[tuple(p)])
        violations.append(
            ManifoldViolation(NONMANIFOLD_VERTEX, (pt,), f"vertex {pt} joins {n} separate face fans")
        )
    for p in np.argwhere(clean & (fans == 1) & ((m < 3) | (m > 6))):
        pt = tuple(int(x) for x in p)
        violations.append(
            ManifoldViolation(BAD_INCIDENCE, (pt,), f"vertex {pt} has {int(m[tuple(p)])} incident faces")
        )
    violations.sort(key=lambda v: (v.kind, v.location))
    return violations
