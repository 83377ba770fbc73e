"""Formal quantum-group words, tensor modules, and the word-level operators."""

import itertools

import pytest

from catbraid.cartan import Weight, a_n
from catbraid.laurent import LaurentPoly, RatFunc, qint
from catbraid.udot import (
    E, F, Letter, TensorModule, UElement, UWord, act, lusztig_T,
    module_equal_zero, quantum_weyl_t, symmetry,
)


def gen(c, sign, node, wt):
    return UElement.generator(c, sign, node, wt)


def word2(c, s1, n1, s2, n2, source):
    mid = source
    from catbraid.udot import _scale_root
    mid = source + _scale_root(c, Letter(s2, n2))
    return UElement.generator(c, s1, n1, mid) * UElement.generator(c, s2, n2, source)


@pytest.fixture(scope="module")
def sl2():
    return a_n(1)


@pytest.fixture(scope="module")
def sl3():
    return a_n(2)


def weights(rank, bound=2):
    return [Weight(t) for t in itertools.product(range(-bound, bound + 1),
                                                 repeat=rank)]


def test_commutator_relation(sl3):
    """[E_i, F_j] 1_lam = delta_ij [lam_i] 1_lam on the module battery."""
    for wt in weights(2, 1):
        for i in (1, 2):
            for j in (1, 2):
                lhs = word2(sl3, E, i, F, j, wt) - word2(sl3, F, j, E, i, wt)
                rhs = UElement.idempotent(sl3, wt).scale(
                    RatFunc(qint(wt.pairings[i - 1]))) if i == j else \
                    UElement(sl3)
                assert (lhs - rhs).expand().terms == {} or \
                    module_equal_zero(lhs - rhs)


def test_divided_power_expansion(sl2):
    e2 = gen(sl2, E, 1, Weight((-2,)))
    sq = (gen(sl2, E, 1, Weight((0,))) * gen(sl2, E, 1, Weight((-2,))))
    dp = UElement.generator(sl2, E, 1, Weight((-2,)), power=2)
    assert dp.scale(RatFunc(qint(2))) == sq


def test_lusztig_T_single_letters(sl3):
    q = lambda n: RatFunc(LaurentPoly.q(n))
    wt = Weight((1, 0))
    # i = ell case: T'(E_1 1_lam) = -q^{-(2+lam_1)} F_1 1_{s_1 lam}
    img = lusztig_T("T'", 1, 1, gen(sl3, E, 1, wt))
    sw = sl3.reflect(1, wt)
    assert img == gen(sl3, F, 1, sw).scale(-q(-(2 + 1)))
    # i.ell = -1 case: T'(E_2 1_lam) = (E_2 E_1 - q E_1 E_2) 1_{s_1 lam}
    img2 = lusztig_T("T'", 1, 1, gen(sl3, E, 2, wt))
    expected = word2(sl3, E, 2, E, 1, sw) - word2(sl3, E, 1, E, 2, sw).scale(q(1))
    assert img2 == expected
    # F-side, i = ell: T'(F_1 1_lam) = -q^{lam_1} E_1
    img3 = lusztig_T("T'", 1, 1, gen(sl3, F, 1, wt))
    assert img3 == gen(sl3, E, 1, sw).scale(-q(1))


@pytest.mark.parametrize("e", [1, -1])
def test_T_inverse(sl3, e):
    for wt in weights(2, 1):
        for sign in (E, F):
            for node in (1, 2):
                x = gen(sl3, sign, node, wt)
                assert lusztig_T("T''", 1, -e, lusztig_T("T'", 1, e, x)) == x
                assert lusztig_T("T'", 1, e, lusztig_T("T''", 1, -e, x)) == x


def test_T_braid_relation(sl3):
    for wt in weights(2, 1):
        for sign in (E, F):
            for node in (1, 2):
                x = gen(sl3, sign, node, wt)
                l = lusztig_T("T'", 1, 1, lusztig_T("T'", 2, 1,
                                                    lusztig_T("T'", 1, 1, x)))
                r = lusztig_T("T'", 2, 1, lusztig_T("T'", 1, 1,
                                                    lusztig_T("T'", 2, 1, x)))
                assert l == r


@pytest.mark.parametrize("e", [1, -1])
def test_symmetry_conjugation(sl3, e):
    for wt in [Weight((1, 0)), Weight((0, -1)), Weight((2, 1))]:
        for sign in (E, F):
            for node in (1, 2):
                x = gen(sl3, sign, node, wt)
                conj = lambda s, y: symmetry(s, lusztig_T("T'", 1, e,
                                                          symmetry(s, y)))
                assert conj("sigma", x) == lusztig_T("T''", 1, -e, x)
                assert conj("omega", x) == lusztig_T("T''", 1, e, x)
                assert conj("psi", x) == lusztig_T("T'", 1, -e, x)


def test_module_commutator(sl2):
    M = TensorModule(2, 3)
    for b in M.basis:
        v = {b: RatFunc(1)}
        lam = M.weight_of(b).pairings[0]
        ef = M.apply_E(1, M.apply_F(1, v))
        fe = M.apply_F(1, M.apply_E(1, v))
        diff = dict(ef)
        for k, c in fe.items():
            diff[k] = diff.get(k, RatFunc(0)) - c
        diff = {k: c for k, c in diff.items() if c}
        expected = {b: RatFunc(qint(lam))} if lam else {}
        assert diff == expected


def test_quantum_weyl_braid(sl3):
    M = TensorModule(3, 2)
    for b in M.basis:
        v = {b: RatFunc(1)}
        l = quantum_weyl_t("t'", 1, 1, M,
                           quantum_weyl_t("t'", 2, 1, M,
                                          quantum_weyl_t("t'", 1, 1, M, v)))
        r = quantum_weyl_t("t'", 2, 1, M,
                           quantum_weyl_t("t'", 1, 1, M,
                                          quantum_weyl_t("t'", 2, 1, M, v)))
        assert l == r


def test_quantum_weyl_inverse(sl2):
    M = TensorModule(2, 3)
    for b in M.basis:
        v = {b: RatFunc(1)}
        assert quantum_weyl_t("t''", 1, -1, M,
                              quantum_weyl_t("t'", 1, 1, M, v)) == v


def test_act_T_compatibility(sl3):
    """act(T'(u)) after t' equals t' after act(u)."""
    M = TensorModule(3, 2)
    for b in M.basis:
        v = {b: RatFunc(1)}
        wb = M.weight_of(b)
        for sign in (E, F):
            for node in (1, 2):
                u = gen(sl3, sign, node, wb)
                lhs = quantum_weyl_t("t'", 1, 1, M, act(u, M, v))
                rhs = act(lusztig_T("T'", 1, 1, u), M,
                          quantum_weyl_t("t'", 1, 1, M, v))
                assert lhs == rhs
