"""Linear-time genus and homology of 3-D binary voxel solids."""

from .boundary import BoundarySurface, ManifoldError, ManifoldViolation, extract_boundary, validate_manifold, vertex_incidence
from .homology import AnalysisError, HomologyGroups, TopologyReport, assemble_report, component_homology, euler_consistency
from .invariants import (
    SurfaceClassification,
    TriMesh,
    classify,
    gauss_bonnet_check,
    genus,
    mesh_genus,
    read_off,
    vertex_curvature,
)
from .oracle import cell_counts, compare, oracle_betti
from .volume import VoxelVolume, background_components, foreground_components, load_volume, save_volume

__version__ = "0.1.0"
