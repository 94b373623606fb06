import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import meshes
from voxtopo.boundary import ManifoldError, extract_boundary, validate_manifold
from voxtopo.generator import box, hollow_box, plate_with_holes, standard_fixtures, u_shape
from voxtopo.invariants import (
    CorruptSurfaceError,
    MeshError,
    SurfaceClassification,
    TriMesh,
    classify,
    gauss_bonnet_check,
    genus,
    mesh_genus,
    mesh_genus_details,
    read_off,
    satisfies_sphere_identity,
    total_curvature,
    vertex_curvature,
    write_off,
)
from voxtopo.volume import VoxelVolume


def only_surface(fixture):
    (s,) = extract_boundary(fixture.volume)
    return s


def test_classify_unit_cube():
    assert classify(only_surface(box(1, 1, 1))) == SurfaceClassification(8, 0, 0, 0)


def test_classify_double_ring():
    c = classify(only_surface(plate_with_holes(2)))
    assert (c.m3, c.m5, c.m6) == (8, 16, 0)


def test_classify_u_base():
    c = classify(only_surface(u_shape(0)))
    assert (c.m3, c.m5) == (12, 4)


def test_classify_total_is_vertex_count():
    s = only_surface(u_shape(2))
    assert classify(s).total == s.V


@pytest.mark.parametrize("m, k", [(3, 1), (4, 0), (5, -1), (6, -2)])
def test_vertex_curvature(m, k):
    assert vertex_curvature(m) == k
    # quarter turns agree with the angle defect of m right angles
    assert math.isclose(k * math.pi / 2, 2 * math.pi - m * math.pi / 2)


@pytest.mark.parametrize("m", [0, 2, 7])
def test_vertex_curvature_range(m):
    with pytest.raises(ValueError):
        vertex_curvature(m)


@pytest.mark.parametrize(
    "counts, g",
    [((8, 5, 0, 0), 0), ((8, 0, 8, 0), 1), ((8, 0, 16, 0), 2), ((16, 0, 16, 0), 1), ((8, 0, 0, 4), 1)],
)
def test_genus_formula(counts, g):
    assert genus(SurfaceClassification(*counts)) == g


@pytest.mark.parametrize("counts", [(8, 0, 7, 0), (16, 0, 0, 0), (9, 0, 0, 0)])
def test_genus_rejects_corrupt_counts(counts):
    with pytest.raises(CorruptSurfaceError):
        genus(SurfaceClassification(*counts))


def test_gauss_bonnet_unit_cube():
    s = only_surface(box(1, 1, 1))
    assert total_curvature(s) == 8
    assert (s.V, s.E, s.F) == (8, 12, 6)
    assert gauss_bonnet_check(s, 0)
    assert not gauss_bonnet_check(s, 1)


def test_gauss_bonnet_ring():
    s = only_surface(plate_with_holes(1))
    assert total_curvature(s) == 0
    assert gauss_bonnet_check(s, 1)


@pytest.mark.parametrize("fixture", standard_fixtures(), ids=lambda f: f.name)
def test_fixture_classification_and_genus(fixture):
    surfaces = extract_boundary(fixture.volume)
    genera = [genus(classify(s)) for s in surfaces]
    assert sorted(genera) == sorted(g for gs in fixture.genera for g in gs)
    for s, g, want in zip(surfaces, genera, fixture.classification):
        c = classify(s)
        assert gauss_bonnet_check(s, g)
        assert {k: getattr(c, k) for k in want} == want
        if g == 0:
            assert satisfies_sphere_identity(c)


def test_classify_rejects_bad_incidence():
    s = only_surface(box(1, 1, 1))
    s.vertex_m = s.vertex_m.copy()
    s.vertex_m[0] = 7
    with pytest.raises(ManifoldError):
        classify(s)


volumes = st.tuples(*[st.integers(1, 4)] * 3).flatmap(lambda d: arrays(bool, d).map(VoxelVolume))


@settings(max_examples=200, deadline=None)
@given(volumes)
def test_gauss_bonnet_on_random_valid_volumes(v):
    assume(not validate_manifold(v))
    for s in extract_boundary(v):
        c = classify(s)
        g = genus(c)
        assert total_curvature(s) == 8 - 8 * g
        assert s.euler_characteristic == 2 - 2 * g
        if g == 0:
            assert c.m3 == 8 + c.m5 + 2 * c.m6


@settings(max_examples=60, deadline=None)
@given(volumes, st.permutations(range(3)), st.lists(st.booleans(), min_size=3, max_size=3))
def test_genus_invariant_under_rigid_motions(v, perm, flips):
    assume(not validate_manifold(v))
    occ = np.transpose(v.occupancy, perm)
    for axis, flip in enumerate(flips):
        if flip:
            occ = np.flip(occ, axis)
    before = sorted(genus(classify(s)) for s in extract_boundary(v))
    after = sorted(genus(classify(s)) for s in extract_boundary(VoxelVolume(occ)))
    assert before == after


def test_m6_points_counted():
    # two stacked bars crossing at right angles; the four corners where one
    # bar's side meets the other's top or bottom are saddles with six faces
    occ = np.zeros((3, 3, 2), dtype=bool)
    occ[:, 1, 0] = True
    occ[1, :, 1] = True
    v = VoxelVolume(occ)
    assert validate_manifold(v) == []
    (s,) = extract_boundary(v)
    c = classify(s)
    assert (c.m3, c.m5, c.m6) == (16, 0, 4)
    assert genus(c) == 0
    assert satisfies_sphere_identity(c)


# -- meshes -------------------------------------------------------------------


def test_mesh_tetrahedron():
    assert mesh_genus(meshes.tetrahedron()) == [(0, 0)]


def test_mesh_flat_torus():
    mesh = meshes.torus(8, 8)
    assert (len(mesh.vertices), len(mesh.triangles)) == (64, 128)
    edges = {tuple(sorted(e)) for t in mesh.triangles.tolist() for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))}
    assert len(edges) == 192
    (row,) = mesh_genus_details(mesh)
    assert (row.component_id, row.genus, row.euler) == (0, 1, 0)
    assert abs(row.angle_defect) <= 1e-6


def test_mesh_disjoint_union():
    mesh = meshes.union(meshes.tetrahedron(), meshes.torus())
    assert mesh_genus(mesh) == [(0, 0), (1, 1)]
    mesh = meshes.union(meshes.torus(), meshes.octahedron(), meshes.torus(5, 7))
    assert mesh_genus(mesh) == [(0, 1), (1, 0), (2, 1)]


@pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e3])
def test_mesh_genus_scale_invariant(scale):
    for mesh in (meshes.tetrahedron(), meshes.torus()):
        base = mesh_genus_details(mesh)
        scaled = mesh_genus_details(TriMesh(mesh.vertices * scale, mesh.triangles))
        assert [r.genus for r in base] == [r.genus for r in scaled]
        for a, b in zip(base, scaled):
            assert math.isclose(a.angle_defect, b.angle_defect, abs_tol=1e-9)


def test_mesh_angle_defect_sphere():
    (row,) = mesh_genus_details(meshes.octahedron())
    assert math.isclose(row.angle_defect, 4 * math.pi, rel_tol=1e-12)


def test_mesh_open_rejected():
    t = meshes.tetrahedron()
    with pytest.raises(MeshError, match="not closed"):
        mesh_genus(TriMesh(t.vertices, t.triangles[:3]))


def test_mesh_degenerate_rejected():
    t = meshes.tetrahedron()
    v = t.vertices.copy()
    v[3] = (v[0] + v[1]) / 2
    with pytest.raises(MeshError, match="degenerate"):
        mesh_genus(TriMesh(v, t.triangles))


def test_mesh_pinched_rejected():
    # two tetrahedra sharing one vertex form a single component with chi = 3
    a = meshes.tetrahedron()
    mirrored = 2 * a.vertices[0] - a.vertices[1:]
    v = np.concatenate([a.vertices, mirrored])
    remap = np.array([0, 4, 5, 6])
    tris = np.concatenate([a.triangles, remap[a.triangles]])
    with pytest.raises(MeshError, match="pinched"):
        mesh_genus(TriMesh(v, tris))


def test_off_roundtrip(tmp_path):
    mesh = meshes.torus()
    p = tmp_path / "t.off"
    write_off(mesh, p)
    back = read_off(p)
    assert np.allclose(back.vertices, mesh.vertices)
    assert (back.triangles == mesh.triangles).all()


@pytest.mark.parametrize(
    "text",
    [
        "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n",
        "NOFF\n0 0 0\n",
        "OFF\n4 4 6\n0 0 0\n",
        "OFF\nx y\n",
    ],
)
def test_off_rejects(tmp_path, text):
    p = tmp_path / "bad.off"
    p.write_text(text)
    with pytest.raises(MeshError):
        read_off(p)


def test_hollow_box_sphere_identity():
    for s in extract_boundary(hollow_box(5, 3).volume):
        assert satisfies_sphere_identity(classify(s))
