from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from abslinf import dupont as D


def form(n, terms):
    return D.PolyForm.from_dict(n, terms)


def test_wedge_examples():
    w = D.whitney(1, (0, 1))
    assert D.wedge_product(1, [D.PolyForm.one(1), w]) == w
    assert D.wedge_product(1, []) == D.PolyForm.one(1)
    assert D.wedge_product(1, [D.dt(1, 1), D.dt(1, 1)]).is_zero()
    t0, t1, dt0, dt1 = D.t(1, 0), D.t(1, 1), D.dt(1, 0), D.dt(1, 1)
    lhs = D.wedge_product(1, [t0, t0 * dt1 - t1 * dt0])
    assert lhs == t0 * t0 * dt1 - t0 * t1 * dt0
    with pytest.raises(D.FormError):
        D.wedge_product(1, [D.t(2, 1)])


def test_whitney_examples():
    for n in range(4):
        for i in range(n + 1):
            assert D.whitney(n, (i,)) == D.t(n, i)
    assert D.whitney(1, (0, 1)) == D.t(1, 0) * D.dt(1, 1) - D.t(1, 1) * D.dt(1, 0)
    assert D.d(D.whitney(1, (0, 1))).is_zero()
    with pytest.raises(D.FormError):
        D.whitney(1, ())
    with pytest.raises(D.FormError):
        D.whitney(1, (0, 2))


def test_projection_examples():
    for n in range(4):
        assert D.elementary_projection(n, D.PolyForm.one(n)) == {(i,): 1 for i in range(n + 1)}
        for I in D.subsets(n):
            assert D.elementary_projection(n, D.whitney(n, I)) == {I: 1}
    assert D.elementary_projection(1, D.t(1, 0) * D.t(1, 0)) == {(0,): 1}


def test_homotopy_examples():
    assert D.dupont_homotopy(0, D.PolyForm.one(0)).is_zero()
    assert D.dupont_homotopy(1, D.whitney(1, (0, 1))).is_zero()
    h = D.dupont_homotopy(1, D.t(1, 0) * D.dt(1, 1))
    assert D.dupont_homotopy(1, h).is_zero()
    # degree +1 means one fewer dt
    assert D.dupont_homotopy(1, D.t(1, 1) * D.dt(1, 1)).degrees() == {0}


def test_verify_contraction_small():
    assert D.verify_contraction(0, 6).ok
    assert D.verify_contraction(1, 4).ok


def test_verify_contraction_negative_control_reports_witness():
    rep = D.verify_contraction(1, 4, scale=2)
    assert not rep["ip-1=dh+hd"]
    assert "ip-1=dh+hd" in rep.counterexamples
    assert rep.counterexamples["ip-1=dh+hd"]


def test_render():
    assert D.render(D.PolyForm.zero(1)) == "0"
    assert "dt1" in D.render(D.whitney(1, (0, 1)))


@st.composite
def forms(draw, n, max_deg=3):
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        J = tuple(sorted(draw(st.sets(st.integers(1, n), max_size=n)))) if n else ()
        terms[(e, J)] = F(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
    return form(n, terms)


@given(st.data())
def test_d_squares_to_zero(data):
    n = data.draw(st.integers(0, 3))
    s = data.draw(forms(n))
    assert D.d(D.d(s)).is_zero()


@given(st.data())
def test_wedge_associative_and_graded_commutative(data):
    n = data.draw(st.integers(1, 3))
    a, b, c = (data.draw(forms(n, 2)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    for da in range(-n, 1):
        for db in range(-n, 1):
            x, y = a.part(da), b.part(db)
            assert x * y == (y * x).scale((-1) ** (da * db))


@given(st.data())
def test_d_is_a_derivation(data):
    n = data.draw(st.integers(1, 3))
    a, b = data.draw(forms(n, 2)), data.draw(forms(n, 2))
    for da in range(-n, 1):
        x = a.part(da)
        # d has degree -1 in the homological grading
        assert D.d(x * b) == D.d(x) * b + (x * D.d(b)).scale((-1) ** da)


@given(st.data())
def test_contraction_identities_on_random_forms(data):
    n = data.draw(st.integers(1, 2))
    s = data.draw(forms(n, 3))
    h = D.dupont_homotopy(n, s)
    ip = D.include(n, D.elementary_projection(n, s))
    assert ip - s == D.d(h) + D.dupont_homotopy(n, D.d(s))
    assert D.dupont_homotopy(n, h).is_zero()
    assert not D.elementary_projection(n, h)
