"""Complexes of shifted words, tensor products, chain maps, homotopies."""

from fractions import Fraction

import pytest

from catbraid.cartan import Weight, builtin
from catbraid.complexes import (
    ChainMap, Complex, Homotopy, Unsolvable, compose_chainmaps,
    homotopy_check, homotopy_solve, k0_class, tensor, tensor_chainmaps,
    word_hcompose,
)
from catbraid.diagram import Cross, Diagram, Dot, Morphism2, SignedWord
from catbraid.laurent import LaurentPoly, RatFunc
from catbraid.udot import Letter, UElement, UWord

U, D = 1, -1


@pytest.fixture(scope="module")
def a2():
    return builtin("A2")


def two_term(cfg, wt, j, i):
    """[ (+)E_jE_i --cross--> E_iE_j<1> ] with the left term in degree 0."""
    w0 = SignedWord(wt, ((U, j), (U, i)), 0)
    w1 = SignedWord(wt, ((U, i), (U, j)), 1)
    dd = Diagram(cfg, w0, ((Cross("u", j, i), 0),), target_shift=1)
    d = Morphism2(cfg, w0, w1, {dd: Fraction(1)})
    return Complex(cfg, {0: (w0,), 1: (w1,)}, {0: {(0, 0): d}})


def test_word_hcompose_weights(a2):
    wt = Weight((0, 0))
    right = SignedWord(wt, ((U, 1),), 0)
    left_ok = SignedWord(right.target_weight(a2), ((U, 2),), 3)
    w = word_hcompose(a2, left_ok, right)
    assert w.letters == ((U, 2), (U, 1)) and w.shift == 3
    with pytest.raises(ValueError):
        word_hcompose(a2, SignedWord(wt, ((U, 2),), 0), right)


def test_two_term_is_complex(a2):
    x = two_term(a2, Weight((0, 0)), 2, 1)
    assert x.is_complex()
    assert x.degrees() == [0, 1]


def test_tensor_square_zero(a2):
    wt = Weight((0, 0))
    x = two_term(a2, wt, 2, 1)
    wt2 = x.obj(0)[0].target_weight(a2)
    y = two_term(a2, wt2, 2, 1)
    z = tensor(y, x)
    assert z.is_complex()
    assert [len(z.obj(i)) for i in z.degrees()] == [1, 2, 1]
    # a third factor exercises the sign bookkeeping at both parities
    wt3 = z.obj(0)[0].target_weight(a2)
    w3 = tensor(two_term(a2, wt3, 1, 2), z)
    assert w3.is_complex()


def test_k0_multiplicative(a2):
    wt = Weight((1, -1))
    x = two_term(a2, wt, 2, 1)
    wt2 = x.obj(0)[0].target_weight(a2)
    y = two_term(a2, wt2, 1, 2)
    z = tensor(y, x)
    assert k0_class(z) == k0_class(y) * k0_class(x)


def test_k0_signs_and_shifts(a2):
    wt = Weight((0, 0))
    x = two_term(a2, wt, 2, 1)
    q = RatFunc(LaurentPoly.q(1))
    e21 = UElement(a2, {UWord(wt, (Letter(U, 2), Letter(U, 1))): RatFunc(1)})
    e12 = UElement(a2, {UWord(wt, (Letter(U, 1), Letter(U, 2))): q})
    assert k0_class(x) == e21 - e12
    assert k0_class(x.hshift(1)) == e12 - e21
    assert k0_class(x.gshift(2)) == (e21 - e12).scale(RatFunc(
        LaurentPoly.q(2)))


def test_gshift_hshift_stay_complexes(a2):
    x = two_term(a2, Weight((0, 0)), 2, 1)
    assert x.gshift(3).is_complex()
    assert x.hshift(1).is_complex()
    assert x.hshift(1).degrees() == [1, 2]


def test_identity_chainmap_and_compose(a2):
    wt = Weight((0, 0))
    x = two_term(a2, wt, 2, 1)
    f = ChainMap.identity(x)
    assert f.check()
    assert compose_chainmaps(f, f).comps == f.comps
    assert (f - f).is_zero()


def test_chainmap_validation(a2):
    wt = Weight((0, 0))
    x = two_term(a2, wt, 2, 1)
    wrong = Morphism2.identity(a2, x.obj(1)[0])
    with pytest.raises(ValueError):
        ChainMap(x, x, {0: {(0, 0): wrong}})


def test_tensor_chainmaps_identity(a2):
    wt = Weight((0, 0))
    x = two_term(a2, wt, 2, 1)
    wt2 = x.obj(0)[0].target_weight(a2)
    y = two_term(a2, wt2, 2, 1)
    fg = tensor_chainmaps(ChainMap.identity(y), ChainMap.identity(x))
    assert fg.check()
    z = tensor(y, x)
    assert fg.source.objects == z.objects
    for i in z.degrees():
        assert set(fg.comp(i)) == {(k, k) for k in range(len(z.obj(i)))}


def test_homotopy_check_detects_failure(a2):
    wt = Weight((0, 0))
    x = two_term(a2, wt, 2, 1)
    f = ChainMap.identity(x)
    zero = ChainMap.zero(x, x)
    empty = Homotopy(x, x, {})
    assert homotopy_check(f, f, empty)
    assert not homotopy_check(f, zero, empty)


def test_homotopy_solve_contractible(a2):
    wt = Weight((0, 0))
    w = SignedWord(wt, ((U, 1),), 0)
    c = Complex(a2, {0: (w,), 1: (w,)},
                {0: {(0, 0): Morphism2.identity(a2, w)}})
    one, zero = ChainMap.identity(c), ChainMap.zero(c, c)
    h = homotopy_solve(one, zero)
    assert homotopy_check(one, zero, h)


def test_homotopy_solve_unsolvable(a2):
    wt = Weight((0, 0))
    w0 = SignedWord(wt, ((U, 1),), 0)
    w1 = SignedWord(wt, ((U, 1),), 2)
    dot = Morphism2.from_diagram(
        Diagram(a2, w0, ((Dot(U, 1), 0),), target_shift=2))
    c = Complex(a2, {0: (w0,), 1: (w1,)}, {0: {(0, 0): dot}})
    assert c.is_complex()
    one, zero = ChainMap.identity(c), ChainMap.zero(c, c)
    with pytest.raises(Unsolvable) as exc:
        homotopy_solve(one, zero)
    assert exc.value.span_size == 0


def test_homotopy_solve_needs_crossing():
    """Contracting [EE -> EE] whose differential is a distant crossing."""
    cfg = builtin("A1xA1")
    wt = Weight((0, 0))
    w0 = SignedWord(wt, ((U, 1), (U, 2)), 0)
    mid = SignedWord(wt, ((U, 2), (U, 1)), 0)
    d1 = Morphism2.from_diagram(
        Diagram(cfg, w0, ((Cross("u", 1, 2), 0),), target_shift=0))
    c = Complex(cfg, {0: (w0,), 1: (mid,)}, {0: {(0, 0): d1}})
    t = cfg.t(1, 2)
    f = ChainMap(c, c, {
        0: {(0, 0): Morphism2.identity(cfg, w0).scale(t)},
        1: {(0, 0): Morphism2.identity(cfg, mid).scale(t)},
    })
    assert f.check()
    h = homotopy_solve(f, ChainMap.zero(c, c))
    assert homotopy_check(f, ChainMap.zero(c, c), h)
