from fractions import Fraction

import pytest
from hypothesis import given

from polychain import DegenerateCell, SimplexCell, clip_halfspace, pluecker, slice_by_hyperplane, volume
from polychain.geometry import boundary_faces, squared_volume

from conftest import rationals, simplices

F = Fraction


def test_frozen_volumes():
    assert volume(SimplexCell(((0, 0), (1, 1)))).squared == 2
    assert volume(SimplexCell(((0, 0, 0), (1, 0, 0), (0, 1, 0)))).squared == F(1, 4)


def test_frozen_pluecker():
    assert pluecker(((0, 0, 0), (1, 0, 0), (0, 1, 0))) == {(0, 1): 1}
    p = pluecker(((0, 0), (1, 2)))
    assert p == {(0,): 1, (1,): 2}


def test_frozen_section_and_clip():
    tri = SimplexCell(((0, 0), (2, 0), (0, 2)))
    [(seg, _)] = slice_by_hyperplane(tri, 0, 1)
    assert set(seg.vertices) == {(1, 0), (1, 1)}
    area = sum(volume(c).exact for c, _ in clip_halfspace(tri, 0, 1, "<"))
    assert area == F(3, 2)


def test_degenerate_cells_are_rejected():
    with pytest.raises(DegenerateCell):
        SimplexCell(((0, 0), (1, 1), (2, 2)))


@given(simplices(3, 2))
def test_squared_volume_is_sum_of_squared_minors(verts):
    # Cauchy-Binet: Gram determinant equals the sum of squared Plücker minors over k!^2
    assert squared_volume(verts) * 4 == sum(m * m for m in pluecker(verts).values())


@given(simplices(2, 2), rationals)
def test_clip_pieces_partition_the_volume(verts, level):
    s = SimplexCell(verts)
    if level in {v[0] for v in verts}:
        return
    whole = volume(s).exact
    up = sum((volume(c).exact for c, _ in clip_halfspace(s, 0, level, ">")), F(0))
    down = sum((volume(c).exact for c, _ in clip_halfspace(s, 0, level, "<")), F(0))
    assert up + down == whole


@given(simplices(3, 2))
def test_faces_have_alternating_signs(verts):
    faces = boundary_faces(SimplexCell(verts))
    assert [sg for _, sg in faces] == [1, -1, 1]
