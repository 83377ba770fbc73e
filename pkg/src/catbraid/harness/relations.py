"""Instances of the defining local relations, as pairs of 2-morphisms.

Each builder returns a list of ``(variant, word, lhs, rhs)`` tuples where
``lhs`` and ``rhs`` are :class:`~catbraid.diagram.Morphism2` with identical
endpoints.  The relation holds in the diagrammatic calculus; the suites
check that the braid 2-functor sends both sides to the same chain map,
either on the nose or up to an explicit homotopy.
"""

from fractions import Fraction

from ..diagram import (
    DOWN, UP, Bubble, Cap, Cross, Cup, Diagram, Dot, Morphism2, SignedWord,
)
from ..rewrite import _ext_sl2_terms, normalize

RELATION_IDS = (
    "adjunction", "dot-cyc", "cross-cyc", "quad-KLR", "dot-slide",
    "cubic-KLR", "mixed-EF", "bubble", "ext-sl2", "curl", "grassmannian",
    "triple",
)


def _word(lam, *letters):
    return SignedWord(lam, tuple(letters), 0)


def _mor(config, word, events, coeff=1, target_shift=None):
    d = Diagram(config, word, events, target_shift=target_shift)
    return Morphism2.from_diagram(d, Fraction(coeff))


def _identity(config, word):
    return Morphism2.identity(config, word)


# ---------------------------------------------------------------------------
# individual relations
# ---------------------------------------------------------------------------

def adjunction(config, labels, lam):
    (l,) = labels
    e, f = _word(lam, (UP, l)), _word(lam, (DOWN, l))
    out = []
    for name, word, evs in [
        ("E-right", e, [(Cup("r", l), 1), (Cap("r", l), 0)]),
        ("E-left", e, [(Cup("l", l), 0), (Cap("l", l), 1)]),
        ("F-right", f, [(Cup("r", l), 0), (Cap("r", l), 1)]),
        ("F-left", f, [(Cup("l", l), 1), (Cap("l", l), 0)]),
    ]:
        out.append((name, word, _mor(config, word, evs),
                    _identity(config, word)))
    return out


def dot_cyc(config, labels, lam):
    (l,) = labels
    word = _word(lam, (DOWN, l))
    lhs = _mor(config, word,
               [(Cup("r", l), 0), (Dot(UP, l), 1), (Cap("r", l), 1)])
    rhs = _mor(config, word,
               [(Cup("l", l), 1), (Dot(UP, l), 1), (Cap("l", l), 0)])
    return [("rotate", word, lhs, rhs)]


def cross_cyc(config, labels, lam):
    a, b = labels
    word = _word(lam, (DOWN, a), (DOWN, b))
    lhs = _mor(config, word, [
        (Cup("r", b), 0), (Cup("r", a), 1), (Cross("u", a, b), 2),
        (Cap("r", a), 3), (Cap("r", b), 2)])
    rhs = _mor(config, word, [
        (Cup("l", a), 2), (Cup("l", b), 3), (Cross("u", a, b), 2),
        (Cap("l", b), 1), (Cap("l", a), 0)])
    return [("half-turn", word, lhs, rhs)]


def quad_klr(config, labels, lam):
    a, b = labels
    word = _word(lam, (UP, a), (UP, b))
    lhs = _mor(config, word, [(Cross("u", a, b), 0), (Cross("u", b, a), 0)])
    if a == b:
        rhs = Morphism2.zero(config, word, lhs.target)
    elif config.pair(a, b) == 0:
        rhs = _identity(config, word).scale(config.t(a, b))
    else:
        rhs = (_mor(config, word, [(Dot(UP, a), 0)], config.t(a, b))
               + _mor(config, word, [(Dot(UP, b), 1)], config.t(b, a)))
    return [("double", word, lhs, rhs)]


def dot_slide(config, labels, lam):
    a, b = labels
    word = _word(lam, (UP, a), (UP, b))
    out = []
    for leg in (0, 1):
        node = a if leg == 0 else b
        lhs = _mor(config, word,
                   [(Dot(UP, node), leg), (Cross("u", a, b), 0)])
        rhs = _mor(config, word,
                   [(Cross("u", a, b), 0), (Dot(UP, node), 1 - leg)])
        if a == b:
            sign = 1 if leg == 0 else -1
            rhs = rhs + _identity(config, word).scale(sign)
        out.append((f"leg{leg}", word, lhs, rhs))
    return out


def cubic_klr(config, labels, lam):
    x, y, z = labels
    word = _word(lam, (UP, x), (UP, y), (UP, z))
    lhs = _mor(config, word, [
        (Cross("u", x, y), 0), (Cross("u", x, z), 1), (Cross("u", y, z), 0)])
    rhs = _mor(config, word, [
        (Cross("u", y, z), 1), (Cross("u", x, z), 0), (Cross("u", x, y), 1)])
    if x == z and config.pair(x, y) == -1:
        rhs = rhs + _identity(config, word).scale(config.t(x, y))
    return [("braid", word, lhs, rhs)]


def mixed_ef(config, labels, lam):
    a, b = labels
    if a == b:
        raise ValueError("the same-label case is the extended loop relation")
    ef = _word(lam, (UP, a), (DOWN, b))
    fe = _word(lam, (DOWN, a), (UP, b))
    out = [
        ("EF", ef, _mor(config, ef, [(Cross("r", a, b), 0),
                                     (Cross("l", b, a), 0)]),
         _identity(config, ef)),
        ("FE", fe, _mor(config, fe, [(Cross("l", a, b), 0),
                                     (Cross("r", b, a), 0)]),
         _identity(config, fe)),
    ]
    return out


def ext_sl2(config, labels, lam):
    (l,) = labels
    out = []
    for name, letters, kind_pair, bottom in [
        ("EF", ((UP, l), (DOWN, l)), ("r", "l"), "r"),
        ("FE", ((DOWN, l), (UP, l)), ("l", "r"), "l"),
    ]:
        word = _word(lam, *letters)
        k1, k2 = kind_pair
        lhs = _mor(config, word, [(Cross(k1, l, l), 0), (Cross(k2, l, l), 0)])
        rhs = None
        for c, evs in _ext_sl2_terms(config, lam, l, 0, bottom):
            term = _mor(config, word, evs, c)
            rhs = term if rhs is None else rhs + term
        out.append((name, word, lhs, rhs))
    return out


def _raw0(config, lam, l, orient):
    lam_l = config.lam(lam, l)
    return lam_l - 1 if orient == "cw" else -lam_l - 1


def bubble(config, labels, lam):
    (l,) = labels
    word = _word(lam)
    out = []
    for orient in ("cw", "ccw"):
        r0 = _raw0(config, lam, l, orient)
        if r0 >= 1:
            lhs = _mor(config, word, [(Bubble(l, orient, r0 - 1), 0)])
            out.append((f"{orient}-null", word, lhs,
                        Morphism2.zero(config, word, lhs.target)))
        if r0 >= 0:
            lhs = _mor(config, word, [(Bubble(l, orient, r0), 0)])
            c = config.bubble_param(l, lam)
            coeff = c if orient == "cw" else 1 / c
            out.append((f"{orient}-scalar", word, lhs,
                        _identity(config, word).scale(coeff)))
    return out


def _nf_to_morphism(config, word, nf, reference):
    """Rebuild a Morphism2 from a normal form, loops as rightmost cells."""
    pos = len(word.letters)
    total = None
    for (d, mono), c in nf.terms.items():
        events = list(d.events)
        for node, orient, alpha in mono.entries:
            raw = _raw0(config, lam_of(word), node, orient) + alpha
            events.insert(0, (Bubble(node, orient, raw), pos))
        term = _mor(config, word, events, c, target_shift=d.target.shift)
        total = term if total is None else total + term
    if total is None:
        total = Morphism2.zero(config, word, reference.target)
    return total


def lam_of(word):
    return word.source_weight


def curl(config, labels, lam, max_dots=2):
    (l,) = labels
    word = _word(lam, (UP, l))
    out = []
    for m in range(max_dots + 1):
        left = ([(Cup("r", l), 0)] + [(Dot(UP, l), 1)] * m
                + [(Cross("u", l, l), 1), (Cap("l", l), 0)])
        right = ([(Cup("l", l), 1)] + [(Dot(UP, l), 1)] * m
                 + [(Cross("u", l, l), 0), (Cap("r", l), 1)])
        for name, evs in [(f"left-{m}", left), (f"right-{m}", right)]:
            lhs = _mor(config, word, evs)
            nf = normalize(lhs, budget=200000)
            rhs = _nf_to_morphism(config, word, nf, lhs)
            out.append((name, word, lhs, rhs))
    return out


def grassmannian(config, labels, lam, alpha_max=4):
    (l,) = labels
    word = _word(lam)
    lam_l = config.lam(lam, l)
    out = []
    for alpha in range(alpha_max + 1):
        lhs = None
        for g in range(alpha + 1):
            h = alpha - g
            term = _mor(config, word, [
                (Bubble(l, "cw", lam_l - 1 + g), 0),
                (Bubble(l, "ccw", -lam_l - 1 + h), 0)])
            lhs = term if lhs is None else lhs + term
        rhs = (_identity(config, word) if alpha == 0
               else Morphism2.zero(config, word, lhs.target))
        out.append((f"deg{alpha}", word, lhs, rhs))
    return out


def triple(config, labels, lam):
    x, y, z = labels
    if x == y == z:
        raise ValueError("all-equal labels are the braid correction case")
    out = []
    dl = _word(lam, (DOWN, x), (UP, y), (UP, z))
    out.append(("down-left", dl,
                _mor(config, dl, [(Cross("l", x, y), 0),
                                  (Cross("l", x, z), 1),
                                  (Cross("u", y, z), 0)]),
                _mor(config, dl, [(Cross("u", y, z), 1),
                                  (Cross("l", x, z), 0),
                                  (Cross("l", x, y), 1)])))
    dr = _word(lam, (UP, x), (UP, y), (DOWN, z))
    out.append(("down-right", dr,
                _mor(config, dr, [(Cross("u", x, y), 0),
                                  (Cross("r", x, z), 1),
                                  (Cross("r", y, z), 0)]),
                _mor(config, dr, [(Cross("r", y, z), 1),
                                  (Cross("r", x, z), 0),
                                  (Cross("u", x, y), 1)])))
    return out


_BUILDERS = {
    "adjunction": adjunction,
    "dot-cyc": dot_cyc,
    "cross-cyc": cross_cyc,
    "quad-KLR": quad_klr,
    "dot-slide": dot_slide,
    "cubic-KLR": cubic_klr,
    "mixed-EF": mixed_ef,
    "bubble": bubble,
    "ext-sl2": ext_sl2,
    "curl": curl,
    "grassmannian": grassmannian,
    "triple": triple,
}


def build_relation(config, rel_id, labels, lam):
    """All checked variants of one relation instance."""
    return _BUILDERS[rel_id](config, labels, lam)
