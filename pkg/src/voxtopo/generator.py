"""Voxel shapes with known topology, for tests and demonstrations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .volume import VoxelVolume


@dataclass
class Fixture:
    """A volume with its ground-truth invariants.

    ``genera`` holds one list per foreground component (outer surface first);
    ``classification`` holds ``{"m3", "m5", "m6"}`` per surface where known,
    plus ``"m4"`` when that is known too.
    """

    name: str
    volume: VoxelVolume
    genera: list[list[int]]
    classification: list[dict] | None = None
    params: dict = field(default_factory=dict)

    @property
    def component_count(self):
        return len(self.genera)

    @property
    def betti(self):
        b1 = sum(sum(g) for g in self.genera)
        b2 = sum(len(g) - 1 for g in self.genera)
        return (self.component_count, b1, b2)

    def euler_consistent(self):
        chi_solid = self.betti[0] - self.betti[1] + self.betti[2]
        chi_boundary = sum(2 - 2 * g for gs in self.genera for g in gs)
        return 2 * chi_solid == chi_boundary


def box(w: int, h: int, d: int) -> Fixture:
    if min(w, h, d) < 1:
        raise ValueError("box sides must be positive")
    faces = 2 * (w * h + h * d + d * w)
    return Fixture(
        f"box({w},{h},{d})",
        VoxelVolume(np.ones((w, h, d), dtype=bool)),
        [[0]],
        [{"m3": 8, "m4": faces + 2 - 8, "m5": 0, "m6": 0}],
        {"w": w, "h": h, "d": d},
    )


def plate_with_holes(g: int) -> Fixture:
    """One-voxel-thick ``(2g+1) x 3`` plate with ``g`` unit holes in a row."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    occ = np.ones((2 * g + 1, 3, 1), dtype=bool)
    occ[1:2 * g:2, 1, 0] = False
    return Fixture(
        f"plate_with_holes({g})",
        VoxelVolume(occ),
        [[g]],
        [{"m3": 8, "m5": 8 * g, "m6": 0}],
        {"g": g},
    )


def u_shape(handles: int) -> Fixture:
    """A U (two arms on a base) with up to two arch handles on the arms.

    The U lies in the xz plane, three voxels deep in y.  Each handle is an
    arch of two pillars and a bar glued to the outer face of one arm, which
    adds four convex and twelve concave corner points.
    """
    if handles not in (0, 1, 2):
        raise ValueError("handles must be 0, 1 or 2")
    occ = np.zeros((9, 3, 5), dtype=bool)
    occ[2:7, :, 0] = True  # base
    occ[2, :, :] = True  # left arm
    occ[6, :, :] = True  # right arm
    for side in range(handles):
        pillar, bar = (1, 0) if side == 0 else (7, 8)
        occ[pillar, 1, 1] = occ[pillar, 1, 3] = True
        occ[bar, 1, 1:4] = True
    return Fixture(
        f"u_shape({handles})",
        VoxelVolume(occ),
        [[handles]],
        [{"m3": 12 + 4 * handles, "m5": 4 + 12 * handles, "m6": 0}],
        {"handles": handles},
    )


def hollow_box(outer: int, cavity: int) -> Fixture:
    if outer < 3 or cavity < 1 or cavity > outer - 2:
        raise ValueError(f"need outer >= 3 and 1 <= cavity <= outer - 2, got {outer}, {cavity}")
    occ = np.ones((outer,) * 3, dtype=bool)
    lo = (outer - cavity) // 2
    occ[lo:lo + cavity, lo:lo + cavity, lo:lo + cavity] = False
    return Fixture(
        f"hollow_box({outer},{cavity})",
        VoxelVolume(occ),
        [[0, 0]],
        [{"m3": 8, "m5": 0, "m6": 0}, {"m3": 8, "m5": 0, "m6": 0}],
        {"outer": outer, "cavity": cavity},
    )


def nested_box(outer: int, cavity: int) -> Fixture:
    """A hollow box with a free-floating box inside its cavity."""
    if cavity < 3:
        raise ValueError("cavity must be at least 3 to hold a separated box")
    base = hollow_box(outer, cavity)
    occ = base.volume.occupancy.copy()
    lo = (outer - cavity) // 2 + 1
    occ[lo:lo + cavity - 2, lo:lo + cavity - 2, lo:lo + cavity - 2] = True
    return Fixture(
        f"nested_box({outer},{cavity})",
        VoxelVolume(occ),
        [[0, 0], [0]],
        base.classification + [{"m3": 8, "m5": 0, "m6": 0}],
        {"outer": outer, "cavity": cavity},
    )


def disjoint_union(parts, gaps=None, name="union", rng=None) -> Fixture:
    """Lay fixtures side by side along x, at least one background voxel apart."""
    rng = rng if rng is not None else np.random.default_rng(0)
    occs = [p.volume.occupancy for p in parts]
    gaps = gaps if gaps is not None else [1] * max(len(parts) - 1, 0)
    ny = max(o.shape[1] for o in occs)
    nz = max(o.shape[2] for o in occs)
    nx = sum(o.shape[0] for o in occs) + sum(gaps)
    out = np.zeros((nx, ny, nz), dtype=bool)
    x = 0
    for i, o in enumerate(occs):
        y = int(rng.integers(0, ny - o.shape[1] + 1))
        z = int(rng.integers(0, nz - o.shape[2] + 1))
        out[x:x + o.shape[0], y:y + o.shape[1], z:z + o.shape[2]] = o
        x += o.shape[0] + (gaps[i] if i < len(gaps) else 0)
    classification = None
    if all(p.classification is not None for p in parts):
        classification = [c for p in parts for c in p.classification]
    return Fixture(name, VoxelVolume(out), [g for p in parts for g in p.genera], classification)


def _random_primitive(rng) -> Fixture:
    kind = rng.integers(0, 5)
    if kind == 0:
        f = box(*(int(n) for n in rng.integers(1, 5, size=3)))
    elif kind == 1:
        f = plate_with_holes(int(rng.integers(0, 4)))
    elif kind == 2:
        outer = int(rng.integers(3, 7))
        f = hollow_box(outer, int(rng.integers(1, outer - 1)))
    elif kind == 3:
        f = u_shape(int(rng.integers(0, 3)))
    else:
        outer = int(rng.integers(5, 8))
        f = nested_box(outer, int(rng.integers(3, outer - 1)))
    # rigid motions of the grid keep every invariant
    occ = np.transpose(f.volume.occupancy, rng.permutation(3))
    for axis in range(3):
        if rng.integers(0, 2):
            occ = np.flip(occ, axis)
    return Fixture(f.name, VoxelVolume(occ), f.genera, f.classification, f.params)


def random_manifold(seed: int, budget: int) -> Fixture:
    """``budget`` random primitives, deterministic in ``seed``, never touching."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = np.random.default_rng(seed)
    parts = [_random_primitive(rng) for _ in range(budget)]
    gaps = [int(g) for g in rng.integers(1, 3, size=budget - 1)]
    f = disjoint_union(parts, gaps, name=f"random_manifold({seed},{budget})", rng=rng)
    f.params = {"seed": seed, "budget": budget, "parts": [p.name for p in parts]}
    return f


SHAPES = {
    "box": box,
    "plate-with-holes": plate_with_holes,
    "u-shape": u_shape,
    "hollow-box": hollow_box,
    "nested-box": nested_box,
    "random": random_manifold,
}


def reference_fixtures() -> list[Fixture]:
    return [
        box(1, 1, 1),
        plate_with_holes(1),
        plate_with_holes(2),
        u_shape(0),
        u_shape(1),
        u_shape(2),
    ]


def standard_fixtures() -> list[Fixture]:
    return reference_fixtures() + [
        box(4, 3, 2),
        box(1, 1, 9),
        box(3, 3, 3),
        plate_with_holes(0),
        plate_with_holes(3),
        plate_with_holes(5),
        hollow_box(3, 1),
        hollow_box(5, 1),
        hollow_box(5, 3),
        nested_box(7, 5),
    ]
