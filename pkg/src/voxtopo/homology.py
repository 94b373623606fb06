"""Homology of voxel solids from the genera of their boundary surfaces.

A compact connected solid in R^3 whose boundary consists of closed surfaces
of genera ``g_1..g_n`` has ``H_0 = Z``, ``H_1 = Z^(g_1 + ... + g_n)``,
``H_2 = Z^(n - 1)`` and ``H_3 = 0``; all groups are free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .boundary import BoundarySurface, ManifoldError, extract_boundary, validate_manifold
from .invariants import CorruptSurfaceError, SurfaceClassification, classify, gauss_bonnet_check, genus
from .volume import VoxelVolume, foreground_components


def presentation(rank: int) -> str:
    if rank == 0:
        return "0"
    if rank == 1:
        return "Z"
    return f"Z^{rank}"


@dataclass(frozen=True)
class HomologyGroups:
    b0: int
    b1: int
    b2: int
    b3: int = 0

    @property
    def betti(self):
        return (self.b0, self.b1, self.b2, self.b3)

    @property
    def presentation(self):
        return tuple(presentation(b) for b in self.betti)

    @property
    def euler(self):
        return self.b0 - self.b1 + self.b2 - self.b3

    def __add__(self, other):
        return HomologyGroups(*(a + b for a, b in zip(self.betti, other.betti)))


def component_homology(genera) -> HomologyGroups:
    genera = list(genera)
    if not genera:
        raise ValueError("a bounded solid has at least one boundary surface")
    if any(g < 0 for g in genera):
        raise ValueError(f"genera must be non-negative, got {genera}")
    return HomologyGroups(1, sum(genera), len(genera) - 1, 0)


def euler_consistency(genera, homology: HomologyGroups) -> bool:
    """Check that the solid's Euler characteristic is half its boundary's."""
    boundary = sum(2 - 2 * g for g in genera)
    return 2 * homology.euler == boundary


@dataclass
class SurfaceSummary:
    id: int
    V: int
    E: int
    F: int
    classification: SurfaceClassification
    genus: int

    def to_dict(self):
        return {"id": self.id, "V": self.V, "E": self.E, "F": self.F, **self.classification.as_dict(), "genus": self.genus}


@dataclass
class ComponentReport:
    component_id: int
    voxel_count: int
    surfaces: list[SurfaceSummary]
    homology: HomologyGroups

    @property
    def genera(self):
        return [s.genus for s in self.surfaces]

    @property
    def boundary_surface_count(self):
        return len(self.surfaces)

    @property
    def b1_boundary(self):
        return sum(2 * g for g in self.genera)

    @property
    def euler_solid(self):
        return self.homology.euler

    @property
    def euler_boundary(self):
        return sum(2 - 2 * g for g in self.genera)

    def to_dict(self, surfaces=True):
        d = {
            "component_id": self.component_id,
            "voxel_count": self.voxel_count,
            "boundary_surface_count": self.boundary_surface_count,
            "genera": self.genera,
            "b1_boundary": self.b1_boundary,
            "betti": list(self.homology.betti),
            "homology": list(self.homology.presentation),
            "euler_solid": self.euler_solid,
            "euler_boundary": self.euler_boundary,
        }
        if surfaces:
            d["surfaces"] = [s.to_dict() for s in self.surfaces]
        return d


@dataclass
class TopologyReport:
    dims: tuple
    components: list[ComponentReport] = field(default_factory=list)

    @property
    def component_count(self):
        return len(self.components)

    @property
    def total(self) -> HomologyGroups:
        total = HomologyGroups(0, 0, 0, 0)
        for c in self.components:
            total = total + c.homology
        return total

    @property
    def genera(self):
        return [c.genera for c in self.components]

    @property
    def euler_solid(self):
        return sum(c.euler_solid for c in self.components)

    @property
    def euler_boundary(self):
        return sum(c.euler_boundary for c in self.components)

    def to_dict(self, surfaces=True):
        total = self.total
        return {
            "dims": list(self.dims),
            "component_count": self.component_count,
            "genera": self.genera,
            "betti": list(total.betti),
            "homology": list(total.presentation),
            "euler_solid": self.euler_solid,
            "euler_boundary": self.euler_boundary,
            "components": [c.to_dict(surfaces) for c in self.components],
        }

    def render_text(self, per_component=False):
        total = self.total
        h = total.presentation
        lines = [
            f"volume {'x'.join(map(str, self.dims))}: {self.component_count} component(s)",
            f"H0 = {h[0]}, H1 = {h[1]}, H2 = {h[2]}, H3 = {h[3]}",
            f"betti = {list(total.betti)}  chi(M) = {self.euler_solid}  chi(dM) = {self.euler_boundary}",
        ]
        if per_component:
            for c in self.components:
                ch = c.homology.presentation
                lines.append(
                    f"component {c.component_id}: {c.voxel_count} voxels, "
                    f"{c.boundary_surface_count} surface(s), genera {c.genera}, "
                    f"H = ({', '.join(ch)})"
                )
                for s in c.surfaces:
                    k = s.classification
                    lines.append(
                        f"  surface {s.id}: V={s.V} E={s.E} F={s.F} "
                        f"M3={k.m3} M4={k.m4} M5={k.m5} M6={k.m6} genus={s.genus}"
                    )
        return "\n".join(lines)


class AnalysisError(Exception):
    """A pipeline step refused the input."""

    def __init__(self, step, message, violations=()):
        self.step = step
        self.violations = list(violations)
        super().__init__(f"{step}: {message}")


def summarize_surface(surface: BoundarySurface) -> SurfaceSummary:
    c = classify(surface)
    g = genus(c)
    if not gauss_bonnet_check(surface, g):
        raise CorruptSurfaceError(f"surface {surface.id} fails the Gauss-Bonnet check at genus {g}")
    return SurfaceSummary(surface.id, surface.V, surface.E, surface.F, c, g)


def assemble_report(volume: VoxelVolume, validate=True) -> TopologyReport:
    """Run validation, boundary extraction, genus and homology per component."""
    if validate:
        violations = validate_manifold(volume)
        if violations:
            raise AnalysisError("validate", f"{len(violations)} manifold violation(s)", violations)
    labeling = foreground_components(volume)
    try:
        surfaces = extract_boundary(volume, labeling)
    except ManifoldError as exc:
        raise AnalysisError("boundary", str(exc), exc.violations) from exc
    try:
        summaries = [summarize_surface(s) for s in surfaces]
    except ManifoldError as exc:
        raise AnalysisError("genus", str(exc), exc.violations) from exc
    except CorruptSurfaceError as exc:
        raise AnalysisError("genus", str(exc)) from exc

    by_owner = [[] for _ in range(labeling.component_count)]
    for s, summary in zip(surfaces, summaries):
        by_owner[s.owner_component].append(summary)
    report = TopologyReport(volume.dims)
    for cid, owned in enumerate(by_owner):
        h = component_homology([s.genus for s in owned])
        report.components.append(ComponentReport(cid, int(labeling.sizes[cid]), owned, h))
    return report
