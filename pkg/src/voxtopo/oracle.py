"""Brute-force Betti numbers from the cubical complex of the solid.

Counts every vertex, edge, square and cube of the union of closed voxel
cubes, takes the Euler characteristic, and recovers ``b1`` from
``chi = b0 - b1 + b2`` with ``b0`` = components and ``b2`` = cavities.
Nothing here touches boundary surfaces or genus.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .volume import VoxelVolume, cavity_count, foreground_components

BETTI_NAMES = ("b0", "b1", "b2")


@dataclass(frozen=True)
class CellCounts:
    V: int
    E: int
    F: int
    C: int

    @property
    def euler(self):
        return self.V - self.E + self.F - self.C


def _touched(pad, axes):
    """Lattice cells spanned by ``axes`` that touch at least one foreground voxel.

    A cell extends one unit along each axis in ``axes`` and is degenerate
    (a lattice point) along the others.  Along a spanned axis it touches one
    voxel layer, along a degenerate axis the two layers on either side.
    """
    shape = tuple(n if ax in axes else n - 1 for ax, n in enumerate(pad.shape))
    out = np.zeros(shape, dtype=bool)
    for off in product(*[(0,) if ax in axes else (0, 1) for ax in range(3)]):
        out |= pad[tuple(slice(o, o + n) for o, n in zip(off, shape))]
    return int(np.count_nonzero(out))


def cell_counts(volume: VoxelVolume) -> CellCounts:
    pad = volume.padded()
    V = _touched(pad, ())
    E = sum(_touched(pad, (a,)) for a in range(3))
    F = sum(_touched(pad, (a, b)) for a, b in ((0, 1), (1, 2), (0, 2)))
    return CellCounts(V, E, F, volume.foreground_count)


def oracle_betti(volume: VoxelVolume) -> tuple[int, int, int]:
    b0 = foreground_components(volume).component_count
    b2 = cavity_count(volume)
    chi = cell_counts(volume).euler
    return b0, b0 + b2 - chi, b2


def compare(volume: VoxelVolume) -> dict:
    """Fast path against the oracle; ``diff`` is empty when they agree."""
    from .boundary import validate_manifold
    from .homology import assemble_report

    oracle = oracle_betti(volume)
    violations = validate_manifold(volume)
    if violations:
        return {
            "verdict": "incomparable",
            "oracle": list(oracle),
            "fast": None,
            "diff": {},
            "reason": f"fast path refuses input: {len(violations)} manifold violation(s)",
            "violations": [v.to_dict() for v in violations],
        }
    fast = assemble_report(volume, validate=False).total.betti[:3]
    diff = {n: {"fast": f, "oracle": o} for n, f, o in zip(BETTI_NAMES, fast, oracle) if f != o}
    return {
        "verdict": "agree" if not diff else "disagree",
        "oracle": list(oracle),
        "fast": list(fast),
        "diff": diff,
    }
