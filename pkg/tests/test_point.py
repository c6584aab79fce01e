import itertools

import pytest

from c2steenrod.point import (
    Degree, Neg, PointElem, Pos, TateClass, UnderlyingElem, basis_at, classes_in_box, degree_of, mul_class,
    neg_elem, pos_elem, render_point, restriction, tate_boundary, transfer,
)


def test_degrees():
    assert degree_of(Pos(1, 0)) == Degree(1, -1)
    assert degree_of(Pos(0, 0)) == Degree(0, 0)
    assert degree_of(Neg(1, 1)) == Degree(-3, 4)
    assert degree_of(Neg(0, 0)) == Degree(-2, 2)


def test_basis_at():
    assert basis_at(Degree(0, 0)) == [Pos(0, 0)]
    assert basis_at(Degree(-1, 1)) == []
    assert basis_at(Degree(-3, 3)) == [Neg(0, 1)]
    # the rho-multiples: only degree zero is nonzero
    for n in range(-8, 9):
        assert (basis_at(Degree(n, n)) != []) == (n == 0)
    # the two cones never share a degree
    for d in itertools.product(range(-10, 11), repeat=2):
        assert len(basis_at(Degree(*d))) <= 1


def test_basis_at_matches_degree_of():
    for c in classes_in_box(8):
        assert c in basis_at(degree_of(c))


def test_products():
    u, a = pos_elem(1), pos_elem(0, 1)
    assert u * a == pos_elem(1, 1)
    assert a * neg_elem(2, 1) == neg_elem(1, 1)
    assert u * neg_elem(0, 0) == PointElem()
    assert neg_elem(1, 1) * neg_elem(0, 0) == PointElem()
    assert mul_class(Pos(1, 0), Neg(0, 0)) is None


def test_cones_are_distinct_keys():
    assert Pos(0, 0) != Neg(0, 0)
    assert len({Pos(0, 0), Neg(0, 0)}) == 2
    assert PointElem.of(Pos(0, 0), Neg(0, 0)) != PointElem.of(Pos(0, 0))


def test_f2_cancellation():
    x = PointElem.of(Pos(1, 0), Pos(1, 0), Neg(0, 1))
    assert x == PointElem.of(Neg(0, 1))
    assert not (x + x)


def test_restriction():
    assert not restriction(pos_elem(0, 1))
    assert restriction(pos_elem(3)) == UnderlyingElem([3])
    assert not restriction(neg_elem(0, 1))


def test_transfer():
    assert transfer(UnderlyingElem([-2])) == neg_elem(0, 0)
    assert transfer(UnderlyingElem([-5])) == neg_elem(0, 3)
    assert not transfer(UnderlyingElem([0]))
    assert not transfer(UnderlyingElem([3]))


def test_res_tr_and_frobenius():
    for m in range(-10, 10):
        y = UnderlyingElem([m])
        assert not restriction(transfer(y))
        for c in classes_in_box(5):
            x = PointElem.of(c)
            assert transfer(restriction(x) * y) == x * transfer(y)


def test_gamma_acts_trivially():
    y = UnderlyingElem([1, -3])
    assert y.act_gamma() == y


def test_tate_boundary():
    assert tate_boundary(TateClass(-1, -1)) == neg_elem(0, 0)
    assert not tate_boundary(TateClass(2, 0))
    assert tate_boundary(TateClass(-2, -3)) == neg_elem(2, 1)
    for i, j in itertools.product(range(-6, 7), repeat=2):
        z = TateClass(i, j)
        assert pos_elem(1) * tate_boundary(z) == tate_boundary(z * TateClass(1, 0))
        assert pos_elem(0, 1) * tate_boundary(z) == tate_boundary(z * TateClass(0, 1))


def test_render():
    assert render_point(PointElem.of(Neg(2, 1), Pos(3, 1))) == "u^3*a + th/(a^2*u)"
    assert render_point(PointElem()) == "0"
    assert render_point(neg_elem(0, 2)) == "th/u^2"


@pytest.mark.parametrize("bound", [6])
def test_ring_axioms_exhaustive(bound):
    cls = classes_in_box(bound)
    for x, y in itertools.product(cls, repeat=2):
        xy = mul_class(x, y)
        assert xy == mul_class(y, x)
        if xy is not None:
            assert degree_of(xy) == degree_of(x) + degree_of(y)
