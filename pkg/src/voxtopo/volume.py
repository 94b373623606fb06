"""Binary voxel volumes: storage, file I/O and 6-connected labeling.

Voxels are closed unit cubes (raster space).  The occupancy array is indexed
``[x, y, z]``; the on-disk linear index is ``x + nx * (y + ny * z)``, which is
Fortran order for that array.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import ndimage

BINARY_MAGIC = b"VOX3"
BINARY_VERSION = 1
TEXT_MAGIC = "P3D"
_HEADER = struct.Struct("<4sB3I")

# face neighbours only
SIX_CONNECTIVITY = ndimage.generate_binary_structure(3, 1)


class VolumeFormatError(ValueError):
    """Raised when a volume file does not match its declared format."""


@dataclass(frozen=True, eq=False)
class VoxelVolume:
    """Dense boolean occupancy grid; everything outside the grid is background."""

    occupancy: np.ndarray
    foreground_count: int = field(init=False)

    def __post_init__(self):
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.ndim != 3:
            raise ValueError(f"occupancy must be 3-D, got shape {occ.shape}")
        if min(occ.shape) < 1:
            raise ValueError(f"every axis must be positive, got {occ.shape}")
        occ = occ.copy()
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "foreground_count", int(np.count_nonzero(occ)))

    @classmethod
    def empty(cls, dims):
        return cls(np.zeros(tuple(dims), dtype=bool))

    @classmethod
    def from_coords(cls, dims, coords):
        occ = np.zeros(tuple(dims), dtype=bool)
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, 3)
        if coords.size:
            if (coords < 0).any() or (coords >= np.asarray(occ.shape)).any():
                raise ValueError("coordinate outside the volume")
            occ[coords[:, 0], coords[:, 1], coords[:, 2]] = True
        return cls(occ)

    @property
    def dims(self):
        return tuple(int(n) for n in self.occupancy.shape)

    def coords(self):
        """Foreground coordinates as an ``(N, 3)`` array in linear-index order."""
        idx = np.flatnonzero(self.occupancy.ravel(order="F"))
        return np.stack(np.unravel_index(idx, self.dims, order="F"), axis=1)

    @cached_property
    def _padded(self):
        pad = np.zeros(tuple(n + 2 for n in self.dims), dtype=bool)
        pad[1:-1, 1:-1, 1:-1] = self.occupancy
        pad.setflags(write=False)
        return pad

    def padded(self):
        """Occupancy with one background layer on every side (read-only)."""
        return self._padded

    def __eq__(self, other):
        if not isinstance(other, VoxelVolume):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.occupancy, other.occupancy)

    def __repr__(self):
        return f"VoxelVolume(dims={self.dims}, foreground_count={self.foreground_count})"


@dataclass(frozen=True)
class ComponentLabeling:
    """Dense labels ``0..component_count-1``; ``-1`` marks unlabeled voxels."""

    label_of: np.ndarray
    component_count: int
    sizes: np.ndarray


def _labeling(mask):
    labels, count = ndimage.label(mask, structure=SIX_CONNECTIVITY)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)[1:]
    return ComponentLabeling(labels.astype(np.int64) - 1, int(count), sizes)


def foreground_components(volume: VoxelVolume) -> ComponentLabeling:
    """Label foreground voxels by face adjacency.

    Component ids follow the first voxel of each component in ``[x, y, z]``
    C-order scan.
    """
    return _labeling(volume.occupancy)


def background_components(volume: VoxelVolume) -> tuple[int, ComponentLabeling]:
    """Label background voxels by face adjacency, plus one virtual exterior.

    Every background voxel on a grid face joins the exterior, which is
    returned as label 0.  All other labels are cavities.
    """
    padded = ~volume.padded()
    lab = _labeling(padded)
    # the padding corner belongs to the exterior and is the first voxel scanned
    assert lab.label_of[0, 0, 0] == 0
    inner = lab.label_of[1:-1, 1:-1, 1:-1]
    sizes = lab.sizes.copy()
    sizes[0] -= padded.size - inner.size
    return 0, ComponentLabeling(inner, lab.component_count, sizes)


def cavity_count(volume: VoxelVolume) -> int:
    _, lab = background_components(volume)
    return lab.component_count - 1


# -- file formats -------------------------------------------------------------


def save_volume(volume: VoxelVolume, path, format="binary"):
    path = Path(path)
    if format == "binary":
        bits = np.packbits(volume.occupancy.ravel(order="F"), bitorder="little")
        path.write_bytes(_HEADER.pack(BINARY_MAGIC, BINARY_VERSION, *volume.dims) + bits.tobytes())
    elif format == "text":
        lines = [TEXT_MAGIC, " ".join(map(str, volume.dims))]
        lines += [f"{x} {y} {z}" for x, y, z in volume.coords()]
        path.write_text("\n".join(lines) + "\n")
    else:
        raise ValueError(f"unknown volume format {format!r}")


def load_volume(path, format=None) -> VoxelVolume:
    """Read a ``.vox3`` or ``.p3d`` file; ``format=None`` sniffs the content."""
    data = Path(path).read_bytes()
    if format is None:
        format = sniff_format(data)
    if format == "binary":
        return _parse_binary(data)
    if format == "text":
        return _parse_text(data.decode("ascii", errors="replace"))
    raise VolumeFormatError(f"unsupported format {format!r}")


def sniff_format(data: bytes) -> str:
    if data.startswith(BINARY_MAGIC):
        return "binary"
    first = data.lstrip()[:4]
    if first.startswith(TEXT_MAGIC.encode()):
        return "text"
    if first.startswith(b"OFF"):
        return "off"
    raise VolumeFormatError("unrecognized file content (expected VOX3, P3D or OFF)")


def _check_dims(dims):
    if any(n <= 0 for n in dims):
        raise VolumeFormatError(f"dims must be positive, got {dims}")


def _parse_binary(data: bytes) -> VoxelVolume:
    if len(data) < _HEADER.size:
        raise VolumeFormatError("truncated header")
    magic, version, *dims = _HEADER.unpack_from(data)
    if magic != BINARY_MAGIC:
        raise VolumeFormatError(f"bad magic {magic!r}")
    if version != BINARY_VERSION:
        raise VolumeFormatError(f"unsupported version {version}")
    _check_dims(dims)
    n = dims[0] * dims[1] * dims[2]
    payload = data[_HEADER.size:]
    expected = (n + 7) // 8
    if len(payload) < expected:
        raise VolumeFormatError(f"truncated bitmap: {len(payload)} of {expected} bytes")
    if len(payload) > expected:
        raise VolumeFormatError(f"{len(payload) - expected} trailing bytes")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    if bits[n:].any():
        raise VolumeFormatError("padding bits in the final byte must be zero")
    return VoxelVolume(bits[:n].astype(bool).reshape(dims, order="F"))


def _parse_text(text: str) -> VoxelVolume:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != TEXT_MAGIC:
        raise VolumeFormatError("first line must be P3D")
    if len(lines) < 2:
        raise VolumeFormatError("missing dims line")
    dims = _ints(lines[1])
    _check_dims(dims)
    coords = [_ints(ln) for ln in lines[2:]]
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, 3)
    bad = (coords < 0) | (coords >= np.asarray(dims))
    if bad.any():
        x, y, z = coords[bad.any(axis=1)][0]
        raise VolumeFormatError(f"coordinate ({x}, {y}, {z}) outside dims {tuple(dims)}")
    return VoxelVolume.from_coords(dims, coords)


def _ints(line):
    parts = line.split()
    try:
        values = [int(p) for p in parts]
    except ValueError:
        values = []
    if len(values) != 3:
        raise VolumeFormatError(f"expected three integers, got {line!r}")
    return values
