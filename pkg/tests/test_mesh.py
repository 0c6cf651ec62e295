import math

import pytest
from hypothesis import given, strategies as st

from cpflow.errors import MeshFormatError, MeshValidationError
from cpflow.mesh import (
    builtin_mesh,
    check_star_condition,
    corner_gammas,
    load_mesh,
    save_mesh,
    simplicial_from_faces,
    vertex_adjacency,
)


def test_tetra_combinatorics():
    m = builtin_mesh("tetra")
    assert m.vertex_count == 4
    assert m.edge_count == 6
    assert m.face_count == 4
    assert m.euler_characteristic() == 2
    assert m.degrees() == (3, 3, 3, 3)
    assert m.max_degree() == 3


def test_genus2_combinatorics():
    m = builtin_mesh("genus2_min")
    assert m.vertex_count == 2
    assert m.edge_count == 12
    assert m.face_count == 8
    assert m.euler_characteristic() == -2
    # center holds 8 spoke ends; the rim vertex is hit by 8 spoke ends plus
    # both ends of each of the 4 rim loops
    assert m.degrees() == (8, 16)
    assert m.corner_counts() == (8, 16)


def test_unknown_builtin():
    with pytest.raises(MeshValidationError):
        builtin_mesh("cube")


def test_builtin_weight_range():
    builtin_mesh("tetra", weight=math.pi / 2)
    with pytest.raises(MeshValidationError):
        builtin_mesh("tetra", weight=math.pi)


@pytest.mark.parametrize("name,chi", [("tetra", 2), ("genus2_min", -2)])
def test_save_load_round_trip(name, chi):
    m = builtin_mesh(name, weight=0.1)
    text = save_mesh(m)
    m2 = load_mesh(text)
    assert m2.euler_characteristic() == chi
    assert m2.vertex_count == m.vertex_count
    for e1, e2 in zip(m.edges, m2.edges):
        assert (e1.a, e1.b) == (e2.a, e2.b)
        assert e1.phi == e2.phi          # bit-exact numeric round trip
    assert save_mesh(m2) == text


def test_degree_sum_counts_every_edge_end():
    for name in ("tetra", "genus2_min"):
        m = builtin_mesh(name)
        assert sum(m.degrees()) == 2 * m.edge_count
        assert m.euler_characteristic() % 2 == 0


def test_edge_in_three_faces_rejected():
    m = builtin_mesh("tetra")
    doc = save_mesh(m)
    # duplicate one face so its edges appear three times
    last_face = "  [%d, %d, %d, %d, %d, %d]" % (m.faces[-1].corners + m.faces[-1].edges)
    bad = doc.replace(' "faces": [\n', ' "faces": [\n%s,\n' % last_face)
    with pytest.raises(MeshValidationError, match="exactly two faces"):
        load_mesh(bad)


def test_weight_out_of_range_rejected():
    m = builtin_mesh("tetra")
    text = save_mesh(m)
    first_row = "[0, %d, %d, 0]" % (m.edges[0].a, m.edges[0].b)
    bad = text.replace(first_row, first_row[:-2] + "3.2]")
    assert bad != text
    with pytest.raises(MeshValidationError, match="outside"):
        load_mesh(bad)


def test_vertex_missing_from_faces_rejected():
    m = builtin_mesh("tetra")
    text = save_mesh(m).replace('"vertices": 4', '"vertices": 5')
    with pytest.raises(MeshValidationError, match="no face"):
        load_mesh(text)


def test_corner_edge_mismatch_rejected():
    with pytest.raises(MeshValidationError, match="do not match"):
        # edge 0 joins 0-1 but is declared opposite corner 0 of (0,1,2)
        load_mesh(
            '{"vertices": 3,'
            ' "edges": [[0,0,1,0.0],[1,0,2,0.0],[2,1,2,0.0]],'
            ' "faces": [[0,1,2,0,1,2],[0,2,1,0,2,1]]}'
        )


def test_parse_errors():
    with pytest.raises(MeshFormatError):
        load_mesh("not json")
    with pytest.raises(MeshFormatError):
        load_mesh('{"vertices": 4}')
    with pytest.raises(MeshFormatError, match="dense"):
        load_mesh('{"vertices": 2, "edges": [[5,0,1,0.0]], "faces": []}')


def test_star_condition_zero_weights():
    rep = check_star_condition(builtin_mesh("tetra"))
    assert rep.all_nonnegative
    assert all(g == 2.0 for _, _, g in rep.gammas)


def test_star_condition_orthogonal_weights():
    rep = check_star_condition(builtin_mesh("tetra", weight=math.pi / 2))
    assert rep.all_nonnegative
    assert all(abs(g) < 1e-15 for _, _, g in rep.gammas)


def test_star_condition_obtuse_violation():
    gs = corner_gammas((3 * math.pi / 4, 3 * math.pi / 4, 0.0))
    assert sorted(gs) == pytest.approx([-math.sqrt(2), -math.sqrt(2), 1.5])
    m = builtin_mesh("tetra")
    phis = [0.0] * 6
    f = m.faces[0]
    phis[f.edges[0]] = 3 * math.pi / 4
    phis[f.edges[1]] = 3 * math.pi / 4
    rep = check_star_condition(m.with_weights(phis))
    assert not rep.all_nonnegative
    assert any(g == pytest.approx(-math.sqrt(2)) for _, _, g in rep.violations)


@given(st.permutations([0, 1, 2]),
       st.tuples(*[st.floats(0.0, math.pi, exclude_max=True)] * 3))
def test_gamma_multiset_stable_under_corner_relabeling(perm, weights):
    base = corner_gammas(weights)
    permuted = corner_gammas(tuple(weights[p] for p in perm))
    assert sorted(permuted) == pytest.approx(sorted(base))


def test_vertex_adjacency_tetra():
    records, degrees, d = vertex_adjacency(builtin_mesh("tetra"))
    assert degrees == (3, 3, 3, 3) and d == 3
    for v, entries in enumerate(records):
        assert len(entries) == 3
        for eid, faces, neighbor in entries:
            assert neighbor != v
            assert len(faces) == 2


def test_vertex_adjacency_genus2():
    m = builtin_mesh("genus2_min")
    records, degrees, d = vertex_adjacency(m)
    assert degrees == (8, 16) and d == 16
    assert len(records[0]) == 8
    assert all(nb == 1 for _, _, nb in records[0])        # all spokes hit the rim
    assert len(records[1]) == 16
    loop_entries = [e for e in records[1] if e[2] == 1]   # loop: neighbor is itself
    assert len(loop_entries) == 8                          # 4 loops, both ends


def test_simplicial_builder_octahedron():
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
             (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4)]
    m = simplicial_from_faces(6, faces)
    assert m.euler_characteristic() == 2
    assert m.edge_count == 12
    assert m.degrees() == (4, 4, 4, 4, 4, 4)
