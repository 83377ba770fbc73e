"""Directed normalization engine for diagram 2-morphisms.

The engine rewrites a :class:`~catbraid.diagram.Morphism2` toward a normal
form: a linear combination of (bubble monomial in the rightmost region) x
(reduced diagram).  The rule set straightens zig-zags, collects closed loops
into formal bubble cells, eliminates curls and reducible double crossings,
slides dots to strand tops and bubbles to the rightmost region, and reduces
braid patterns toward a fixed order.  Equality of 2-morphisms is semi-decided
by normalizing the difference; an independent polynomial-operator oracle is
provided for the upward-only fragment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .diagram import (
    Bubble, Cap, Cross, Cup, DOWN, Diagram, Dot, MismatchError, Morphism2,
    UP, weight_right_of,
)

__all__ = [
    "Budget", "BudgetExceeded", "BubbleMonomial", "NormalForm",
    "normalize", "eq", "eq_explain", "fake_bubbles", "bubble_slide",
    "klr_poly_eval", "klr_equal", "rules_dump",
]


_FLIP = {"cw": "ccw", "ccw": "cw"}


class BudgetExceeded(Exception):
    """The step limit was reached before normalization finished."""


class Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit=100000):
        self.limit = limit
        self.used = 0

    def tick(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.limit)


# ---------------------------------------------------------------------------
# bubble monomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BubbleMonomial:
    """Multiset of closed-loop generators ``(node, orient, alpha)``.

    ``alpha`` is the offset from the degree-zero loop, so the generator has
    degree ``2*alpha``; clockwise loops carry ``lam_i - 1 + alpha`` dots and
    counterclockwise ones ``-lam_i - 1 + alpha``.
    """

    entries: tuple = ()

    def __mul__(self, other):
        return BubbleMonomial(tuple(sorted(
            self.entries + other.entries,
            key=lambda e: (str(e[0]), e[1], e[2]))))

    def degree(self):
        return 2 * sum(alpha for _, _, alpha in self.entries)

    def is_empty(self):
        return not self.entries

    def __repr__(self):
        if not self.entries:
            return "1"
        return "*".join(f"{o}[{n};+{a}]" for n, o, a in self.entries)


_EMPTY = BubbleMonomial()


def _canonical_orient(config, node, lam_weight, alpha):
    """Which loop orientation is a genuine (non-formal) generator here."""
    lam_i = config.lam(lam_weight, node)
    return "cw" if lam_i >= 1 - alpha else "ccw"


def _express(config, lam_weight, node, orient, alpha, _memo=None):
    """A single loop as a combination of canonical generators.

    Returns ``{BubbleMonomial: Fraction}``.  Formal loops with a negative
    dot count expand recursively through the relation that makes the
    product of the two loop generating series the identity.
    """
    if _memo is None:
        _memo = {}
    key = (node, orient, alpha)
    if key in _memo:
        return _memo[key]
    c = config.bubble_param(node, lam_weight)
    if alpha < 0:
        out = {}
    elif alpha == 0:
        out = {_EMPTY: c if orient == "cw" else 1 / c}
    elif orient == _canonical_orient(config, node, lam_weight, alpha):
        out = {BubbleMonomial(((node, orient, alpha),)): Fraction(1)}
    else:
        other = "ccw" if orient == "cw" else "cw"
        scale = -c if orient == "cw" else -1 / c
        out = {}
        for b in range(1, alpha + 1):
            left = _express(config, lam_weight, node, orient, alpha - b, _memo)
            right = _express(config, lam_weight, node, other, b, _memo)
            for m1, c1 in left.items():
                for m2, c2 in right.items():
                    m = m1 * m2
                    out[m] = out.get(m, Fraction(0)) + scale * c1 * c2
        out = {m: v for m, v in out.items() if v}
    _memo[key] = out
    return out


def fake_bubbles(config, node, lam_weight, alpha_max):
    """All formal (negative-dot-count) loops of degree <= 2*alpha_max.

    Computed as coefficients of the truncated multiplicative inverse of the
    genuine-loop generating series.  Returns a list of triples
    ``(orient, alpha, {BubbleMonomial: Fraction})``.
    """
    lam_i = config.lam(lam_weight, node)
    c = config.bubble_param(node, lam_weight)
    out = []
    for orient in ("cw", "ccw"):
        # the loop is formal when its literal dot count is negative
        raw = (lam_i - 1) if orient == "cw" else (-lam_i - 1)
        fake_alphas = [a for a in range(alpha_max + 1) if raw + a < 0]
        if not fake_alphas:
            continue
        # series of the opposite orientation, expressed in canonical
        # generators; its inverse gives this orientation degree by degree
        other = "ccw" if orient == "cw" else "cw"
        series = [_express(config, lam_weight, node, other, a)
                  for a in range(alpha_max + 1)]
        inv = [None] * (alpha_max + 1)
        c0 = c if other == "cw" else 1 / c
        inv[0] = {_EMPTY: 1 / c0}
        for a in range(1, alpha_max + 1):
            acc = {}
            for k in range(1, a + 1):
                for m1, c1 in series[k].items():
                    for m2, c2 in inv[a - k].items():
                        m = m1 * m2
                        acc[m] = acc.get(m, Fraction(0)) - c1 * c2 / c0
            inv[a] = {m: v for m, v in acc.items() if v}
        for a in fake_alphas:
            out.append((orient, a, inv[a]))
    return out


# ---------------------------------------------------------------------------
# bubble slides
# ---------------------------------------------------------------------------

def _slide_terms(config, i, orient, alpha, j, direction):
    """Slide one loop of node ``i`` across a strand of node ``j``.

    Returns ``[(Fraction coeff, dots_on_strand, beta)]`` with ``beta`` the
    loop offset on the other side.  ``direction`` is the side the loop moves
    to ("right" or "left"); up and down strands obey the same formulas.
    """
    a_ij = config.pair(i, j)
    t_ij, t_ji = config.t(i, j), config.t(j, i)
    v_ij = t_ji / t_ij
    terms = []
    if orient == "ccw":
        if direction == "right":
            if i == j:
                terms = [(Fraction(1), 2, alpha - 2),
                         (Fraction(-2), 1, alpha - 1),
                         (Fraction(1), 0, alpha)]
            elif a_ij == -1:
                terms = [((-v_ij) ** f / t_ij, f, alpha - f)
                         for f in range(alpha + 1)]
            else:
                terms = [(1 / t_ij, 0, alpha)]
        else:
            if i == j:
                terms = [(Fraction(alpha + 1 - f), alpha - f, f)
                         for f in range(alpha + 1)]
            elif a_ij == -1:
                terms = [(t_ij, 0, alpha), (t_ji, 1, alpha - 1)]
            else:
                terms = [(t_ij, 0, alpha)]
    else:
        if direction == "right":
            if i == j:
                terms = [(Fraction(alpha + 1 - f), alpha - f, f)
                         for f in range(alpha + 1)]
            elif a_ij == -1:
                terms = [(t_ji, 1, alpha - 1), (t_ij, 0, alpha)]
            else:
                terms = [(t_ji, 0, alpha)]
        else:
            if i == j:
                terms = [(Fraction(1), 2, alpha - 2),
                         (Fraction(-2), 1, alpha - 1),
                         (Fraction(1), 0, alpha)]
            elif a_ij == -1:
                terms = [((-v_ij) ** f / t_ij, f, alpha - f)
                         for f in range(alpha + 1)]
            else:
                terms = [(1 / t_ji, 0, alpha)]
    return terms


def bubble_slide(config, lam_weight, bubble, strand, from_side="right"):
    """Slide a single loop across one strand, as an explicit 2-morphism.

    ``bubble`` is ``(node, orient, alpha)``; ``strand`` is
    ``(orient, node)`` as in a signed word; ``lam_weight`` is the weight of
    the region right of the strand.  The loop starts on ``from_side`` of the
    strand and ends on the other side.
    """
    from .diagram import SignedWord
    i, orient, alpha = bubble
    s_orient, j = strand
    word = SignedWord(lam_weight, ((s_orient, j),))
    direction = "left" if from_side == "right" else "right"
    # the loop's own region weight on each side of the strand
    w_right = lam_weight
    w_left = weight_right_of(config, lam_weight, ((s_orient, j),), -1)
    w_from = w_right if from_side == "right" else w_left
    w_to = w_left if from_side == "right" else w_right
    lam_from = config.lam(w_from, i)
    lam_to = config.lam(w_to, i)
    raw_from = (lam_from - 1 if orient == "cw" else -lam_from - 1) + alpha
    eff = orient if s_orient == 1 else _FLIP[orient]
    out = {}
    for c, d, beta in _slide_terms(config, i, eff, alpha, j, direction):
        raw_to = (lam_to - 1 if orient == "cw" else -lam_to - 1) + beta
        pos_b = 0 if direction == "left" else 1
        events = [(Dot(s_orient, j), 0)] * d + [(Bubble(i, orient, raw_to),
                                                 pos_b)]
        diag = Diagram(config, word, events, target_shift=None)
        out[diag] = out.get(diag, Fraction(0)) + c
    src = Diagram(config, word,
                  [(Bubble(i, orient, raw_from),
                    1 if from_side == "right" else 0)])
    m = Morphism2(config, word, src.target, out) if out else \
        Morphism2.zero(config, word, src.target)
    return m


# ---------------------------------------------------------------------------
# connectivity
# ---------------------------------------------------------------------------

def _links(evs, n_src):
    """Producer/consumer maps for every strand segment.

    Producer tokens: ``('s', p)`` (source strand) or ``(k, i)`` (top leg
    ``i`` of event ``k``).  Consumer slots: ``('t', p)`` or ``(k, i)``
    (bottom leg ``i`` of event ``k``).
    """
    prod, cons = {}, {}
    cur = [("s", p) for p in range(n_src)]
    for k, (cell, pos) in enumerate(evs):
        bottom, top = cell.signature()
        for i in range(len(bottom)):
            prod[(k, i)] = cur[pos + i]
            cons[cur[pos + i]] = (k, i)
        cur[pos:pos + len(bottom)] = [(k, i) for i in range(len(top))]
    for p, tok in enumerate(cur):
        cons[tok] = ("t", p)
    return prod, cons


def _chain_up(evs, cons, token):
    """Follow a strand upward through dots; returns (slot, [dot indices])."""
    dots = []
    slot = cons[token]
    while slot[0] != "t" and isinstance(evs[slot[0]][0], Dot):
        dots.append(slot[0])
        slot = cons[(slot[0], 0)]
    return slot, dots


def _chain_down(evs, prod, slot):
    dots = []
    tok = prod[slot]
    while tok[0] != "s" and isinstance(evs[tok[0]][0], Dot):
        dots.append(tok[0])
        tok = prod[(tok[0], 0)]
    return tok, dots


def _swap(evs, k):
    """Interchange evs[k] and evs[k+1] if they are independent."""
    (c1, p1), (c2, p2) = evs[k], evs[k + 1]
    b1, t1 = c1.signature()
    b2, t2 = c2.signature()
    if p2 + len(b2) <= p1:
        evs[k], evs[k + 1] = (c2, p2), (c1, p1 + len(t2) - len(b2))
        return True
    if p2 >= p1 + len(t1):
        evs[k], evs[k + 1] = (c2, p2 - (len(t1) - len(b1))), (c1, p1)
        return True
    return False


def _move(evs, flags, u, steps, down):
    for _ in range(steps):
        k = u - 1 if down else u
        if not _swap(evs, k):
            return False
        flags[k], flags[k + 1] = flags[k + 1], flags[k]
        u += -1 if down else 1
    return True


def _make_adjacent(evs, idxs):
    """Reorder so the events in ``idxs`` are consecutive.

    Returns ``(events, start, length)`` or None if blocked.  Only sound
    interchanges of independent events are used.
    """
    evs = list(evs)
    flags = [i in idxs for i in range(len(evs))]
    while True:
        mpos = [i for i, f in enumerate(flags) if f]
        lo, hi = mpos[0], mpos[-1]
        gaps = [i for i in range(lo, hi + 1) if not flags[i]]
        if not gaps:
            return evs, lo, len(mpos)
        u = gaps[0]
        e2, f2 = list(evs), list(flags)
        if _move(e2, f2, u, u - lo, down=True):
            evs, flags = e2, f2
            continue
        e2, f2 = list(evs), list(flags)
        if _move(e2, f2, u, hi - u, down=False):
            evs, flags = e2, f2
            continue
        # move the outermost matched events inward instead
        if len(mpos) >= 2:
            steps_hi = hi - mpos[-2] - 1
            if steps_hi > 0:
                e2, f2 = list(evs), list(flags)
                if _move(e2, f2, hi, steps_hi, down=True):
                    evs, flags = e2, f2
                    continue
            steps_lo = mpos[1] - lo - 1
            if steps_lo > 0:
                e2, f2 = list(evs), list(flags)
                if _move(e2, f2, lo, steps_lo, down=False):
                    evs, flags = e2, f2
                    continue
        return None


def _block_context(d, evs, start, length):
    """Row below the block and the block-bottom strand positions it uses."""
    row = list(d.source.letters)
    for cell, pos in evs[:start]:
        bottom, top = cell.signature()
        row[pos:pos + len(bottom)] = list(top)
    cur = list(range(len(row)))
    consumed = []
    for cell, pos in evs[start:start + length]:
        bottom, top = cell.signature()
        for i in range(len(bottom)):
            if cur[pos + i] is not None:
                consumed.append(cur[pos + i])
        cur[pos:pos + len(bottom)] = [None] * len(top)
    return tuple(row), sorted(consumed)


def _splice(evs, start, length, replacement):
    return tuple(evs[:start]) + tuple(replacement) + tuple(evs[start + length:])


_KIND_FROM_BOTTOM = {(UP, UP): "u", (DOWN, DOWN): "d",
                     (DOWN, UP): "l", (UP, DOWN): "r"}
_KIND_WEIGHT = {"u": 0, "l": 1, "r": 1, "d": 2}


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------
# Each rule takes (diagram, prod, cons) and returns None (no match) or a
# list of (Fraction, full event tuple, BubbleMonomial factor or None).
# An empty list rewrites the term to zero.

def _rule_bubble_null(d, prod, cons):
    rows = d.rows()
    for k, (cell, pos) in enumerate(d.events):
        if not isinstance(cell, Bubble):
            continue
        w = weight_right_of(d.config, d.source.source_weight, rows[k], pos - 1)
        lam_i = d.config.lam(w, cell.node)
        raw0 = lam_i - 1 if cell.orient == "cw" else -lam_i - 1
        alpha = cell.dots - raw0
        if alpha < 0:
            return []
        if alpha == 0:
            c = d.config.bubble_param(cell.node, w)
            coeff = c if cell.orient == "cw" else 1 / c
            evs = d.events[:k] + d.events[k + 1:]
            return [(coeff, evs, None)]
    return None


def _rule_bubble_extract(d, prod, cons):
    rows = d.rows()
    for k, (cell, pos) in enumerate(d.events):
        if not isinstance(cell, Bubble) or pos != len(rows[k]):
            continue
        w = d.source.source_weight
        lam_i = d.config.lam(w, cell.node)
        raw0 = lam_i - 1 if cell.orient == "cw" else -lam_i - 1
        alpha = cell.dots - raw0
        if alpha <= 0:
            continue  # bubble-null handles it
        evs = d.events[:k] + d.events[k + 1:]
        expr = _express(d.config, w, cell.node, cell.orient, alpha)
        return [(c, evs, mono) for mono, c in expr.items()]
    return None


def _rule_zigzag(d, prod, cons):
    evs = d.events
    for ku, (cell, pos) in enumerate(evs):
        if not isinstance(cell, Cup):
            continue
        for leg in (0, 1):
            slot, dots1 = _chain_up(evs, cons, (ku, leg))
            if slot[0] == "t" or not isinstance(evs[slot[0]][0], Cap):
                continue
            kc, cap_leg = slot
            # both legs to the same cap is a closed loop, not a zig-zag
            slot2, dots2 = _chain_up(evs, cons, (ku, 1 - leg))
            if slot2[0] != "t" and slot2[0] == kc:
                continue
            _, dots3 = _chain_down(evs, prod, (kc, 1 - cap_leg))
            matched = {ku, kc} | set(dots1) | set(dots2) | set(dots3)
            arranged = _make_adjacent(evs, matched)
            if arranged is None:
                continue
            nevs, start, length = arranged
            row, consumed = _block_context(d, nevs, start, length)
            if len(consumed) != 1:
                continue
            q = consumed[0]
            orient, node = row[q]
            n_dots = len(dots1) + len(dots2) + len(dots3)
            repl = [(Dot(orient, node), q)] * n_dots
            return [(Fraction(1), _splice(nevs, start, length, repl), None)]
    return None


def _rule_circle(d, prod, cons):
    evs = d.events
    for ku, (cell, pos) in enumerate(evs):
        if not isinstance(cell, Cup):
            continue
        slot0, dots0 = _chain_up(evs, cons, (ku, 0))
        if slot0[0] == "t" or not isinstance(evs[slot0[0]][0], Cap):
            continue
        slot1, dots1 = _chain_up(evs, cons, (ku, 1))
        if slot1[0] == "t" or slot1[0] != slot0[0]:
            continue
        kc = slot0[0]
        cap = evs[kc][0]
        orient = "ccw" if cell.side == "r" else "cw"
        matched = {ku, kc} | set(dots0) | set(dots1)
        arranged = _make_adjacent(evs, matched)
        if arranged is None:
            continue
        nevs, start, length = arranged
        row, consumed = _block_context(d, nevs, start, length)
        if consumed:
            continue
        q = nevs[start][1]  # the cup is the lowest block event
        m = len(dots0) + len(dots1)
        repl = [(Bubble(cell.node, orient, m), q)]
        return [(Fraction(1), _splice(nevs, start, length, repl), None)]
    return None


def _rule_rotation_collapse(d, prod, cons):
    """Collapse a crossing rotated by one quarter turn into a single cell.

    Pattern (clockwise form): a cup feeds the crossing's bottom-left leg
    with its right leg, a cap takes the crossing's top-right leg with its
    left leg, and the other cup/cap legs are external.  The mirrored form
    rotates counterclockwise.  Both reduce the event count by two.
    """
    evs = d.events
    for kc, (cap, _) in enumerate(evs):
        if not isinstance(cap, Cap):
            continue
        for x_top, x_bot, cap_leg, cup_leg in ((1, 0, 0, 1), (0, 1, 1, 0)):
            tok = prod[(kc, cap_leg)]
            if tok[0] == "s" or not isinstance(evs[tok[0]][0], Cross) or \
                    tok[1] != x_top:
                continue
            kx = tok[0]
            tok2 = prod[(kx, x_bot)]
            if tok2[0] == "s" or not isinstance(evs[tok2[0]][0], Cup) or \
                    tok2[1] != cup_leg:
                continue
            ku = tok2[0]
            if evs[ku][0].node != cap.node:
                continue
            # other cup/cap legs must be external to the pattern
            other_slot = cons[(ku, 1 - cup_leg)]
            if other_slot[0] != "t" and other_slot[0] in (kx, kc):
                continue
            other_tok = prod[(kc, 1 - cap_leg)]
            if other_tok[0] != "s" and other_tok[0] in (kx, ku):
                continue
            arranged = _make_adjacent(evs, {ku, kx, kc})
            if arranged is None:
                continue
            nevs, start, length = arranged
            row, consumed = _block_context(d, nevs, start, length)
            if len(consumed) != 2 or consumed[1] != consumed[0] + 1:
                continue
            p = consumed[0]
            (o1, n1), (o2, n2) = row[p], row[p + 1]
            kind = _KIND_FROM_BOTTOM[(o1, o2)]
            try:
                nd_events = _splice(nevs, start, length,
                                    [(Cross(kind, n1, n2), p)])
                probe = Diagram(d.config, d.source, nd_events,
                                target_shift=d.target.shift)
            except Exception:
                continue
            if probe.target.letters != d.target.letters:
                continue
            return [(Fraction(1), nd_events, None)]
    return None


def _ext_sl2_terms(config, w, i, pos, bottom_kind):
    """Identity-plus-loop-tail expansion of a same-label sideways R2.

    ``bottom_kind`` is the kind of the lower crossing ('l' for source FE,
    'r' for source EF); ``w`` is the weight right of the strand pair.
    """
    lam_i = config.lam(w, i)
    terms = [(Fraction(-1), [])]
    if bottom_kind == "l":
        # source F_i E_i: loop tail has a cw loop between lcap and rcup
        bound = -lam_i - 1
        for a in range(max(bound, -1) + 1):
            for b in range(bound - a + 1):
                c = bound - a - b
                raw = lam_i - 1 + b
                evs = ([(Dot(DOWN, i), pos)] * c
                       + [(Cap("l", i), pos), (Bubble(i, "cw", raw), pos),
                          (Cup("r", i), pos)]
                       + [(Dot(UP, i), pos + 1)] * a)
                terms.append((Fraction(1), evs))
    else:
        # source E_i F_i: loop tail has a ccw loop between rcap and lcup
        bound = lam_i - 1
        for a in range(max(bound, -1) + 1):
            for b in range(bound - a + 1):
                c = bound - a - b
                raw = -lam_i - 1 + b
                evs = ([(Dot(UP, i), pos)] * c
                       + [(Cap("r", i), pos), (Bubble(i, "ccw", raw), pos),
                          (Cup("l", i), pos)]
                       + [(Dot(DOWN, i), pos + 1)] * a)
                terms.append((Fraction(1), evs))
    return terms


def _rule_r2(d, prod, cons):
    evs = d.events
    config = d.config
    for k2, (c2, _) in enumerate(evs):
        if not isinstance(c2, Cross):
            continue
        tok0, tok1 = prod[(k2, 0)], prod[(k2, 1)]
        if tok0[0] == "s" or tok1[0] == "s" or tok0[0] != tok1[0]:
            continue
        k1 = tok0[0]
        c1 = evs[k1][0]
        if not isinstance(c1, Cross) or (tok0[1], tok1[1]) != (0, 1):
            continue
        arranged = _make_adjacent(evs, {k1, k2})
        if arranged is None:
            continue
        nevs, start, length = arranged
        row, consumed = _block_context(d, nevs, start, length)
        p = consumed[0]
        a, b = c1.a, c1.b
        if c1.kind in ("u", "d") and c2.kind == c1.kind:
            orient = UP if c1.kind == "u" else DOWN
            if a == b:
                return []
            if config.pair(a, b) == 0:
                return [(config.t(a, b), _splice(nevs, start, length, []),
                         None)]
            return [
                (config.t(a, b),
                 _splice(nevs, start, length, [(Dot(orient, a), p)]), None),
                (config.t(b, a),
                 _splice(nevs, start, length, [(Dot(orient, b), p + 1)]),
                 None),
            ]
        if {c1.kind, c2.kind} == {"l", "r"} and c1.kind != c2.kind:
            if a != b:
                return [(Fraction(1), _splice(nevs, start, length, []), None)]
            w = weight_right_of(config, d.source.source_weight, row, p + 1)
            terms = _ext_sl2_terms(config, w, a, p, c1.kind)
            return [(c, _splice(nevs, start, length, repl), None)
                    for c, repl in terms]
    return None


def _rule_dot_slide(d, prod, cons):
    evs = d.events
    for kx, (cell, _) in enumerate(evs):
        if not isinstance(cell, Cross):
            continue
        for leg in (0, 1):
            tok = prod[(kx, leg)]
            if tok[0] == "s" or not isinstance(evs[tok[0]][0], Dot):
                continue
            kd = tok[0]
            dot = evs[kd][0]
            arranged = _make_adjacent(evs, {kd, kx})
            if arranged is None:
                continue
            nevs, start, length = arranged
            row, consumed = _block_context(d, nevs, start, length)
            p = consumed[0]
            repl = [(cell, p), (dot, p + 1 - leg)]
            out = [(Fraction(1), _splice(nevs, start, length, repl), None)]
            if cell.a == cell.b and cell.kind in ("u", "d"):
                sign = 1 if (cell.kind == "u") == (leg == 0) else -1
                out.append((Fraction(sign),
                            _splice(nevs, start, length, []), None))
            elif cell.a == cell.b:
                # sideways: the resolution term is a turnback, not the
                # identity; its sign depends only on the side
                sign = 1 if cell.kind == "l" else -1
                corr = [(Cap(cell.kind, cell.a), p),
                        (Cup(cell.kind, cell.a), p)]
                out.append((Fraction(sign),
                            _splice(nevs, start, length, corr), None))
            return out
    return None


def _rule_dot_extremum(d, prod, cons):
    evs = d.events
    for k, (cell, pos) in enumerate(evs):
        if isinstance(cell, Cap):
            bottom, _ = cell.signature()
            down_leg = 0 if bottom[0][0] == DOWN else 1
            tok = prod[(k, down_leg)]
            if tok[0] != "s" and isinstance(evs[tok[0]][0], Dot):
                kd = tok[0]
                arranged = _make_adjacent(evs, {kd, k})
                if arranged is None:
                    continue
                nevs, start, length = arranged
                row, consumed = _block_context(d, nevs, start, length)
                p = consumed[0]
                up_leg = 1 - down_leg
                repl = [(Dot(UP, cell.node), p + up_leg), (cell, p)]
                return [(Fraction(1), _splice(nevs, start, length, repl),
                         None)]
        if isinstance(cell, Cup):
            _, top = cell.signature()
            down_leg = 0 if top[0][0] == DOWN else 1
            slot = cons[(k, down_leg)]
            if slot[0] != "t" and isinstance(evs[slot[0]][0], Dot):
                kd = slot[0]
                arranged = _make_adjacent(evs, {k, kd})
                if arranged is None:
                    continue
                nevs, start, length = arranged
                row, consumed = _block_context(d, nevs, start, length)
                q = nevs[start][1]
                up_leg = 1 - down_leg
                repl = [(cell, q), (Dot(UP, cell.node), q + up_leg)]
                return [(Fraction(1), _splice(nevs, start, length, repl),
                         None)]
    return None


def _curl_matches(evs, prod, cons):
    """All curl occurrences: (side, matched set, loop dots, through dots).

    Three link patterns close a strand onto itself around one crossing:
    the loop runs cap-to-cup on one side, or a single cap joins both
    crossing tops, or a single cup feeds both crossing bottoms.
    """
    for kc, (cap, _) in enumerate(evs):
        if not isinstance(cap, Cap):
            continue
        ends = [_chain_down(evs, prod, (kc, leg)) for leg in (0, 1)]
        # cap-to-cup loop
        for cap_x_leg in (0, 1):
            (tok_x, dots_a) = ends[cap_x_leg]
            (tok_u, dots_b) = ends[1 - cap_x_leg]
            if tok_x[0] == "s" or tok_u[0] == "s":
                continue
            kx, ti = tok_x
            ku, uleg = tok_u
            if not isinstance(evs[kx][0], Cross) or \
                    not isinstance(evs[ku][0], Cup):
                continue
            if evs[kx][0].a != evs[kx][0].b:
                continue
            slot, dots_c = _chain_up(evs, cons, (ku, 1 - uleg))
            if slot[0] == "t" or slot[0] != kx or slot[1] != ti:
                continue
            side = "r" if ti == 1 else "l"
            _, thru1 = _chain_down(evs, prod, (kx, 1 - ti))
            _, thru2 = _chain_up(evs, cons, (kx, 1 - ti))
            yield (side,
                   {kc, ku, kx} | set(dots_a) | set(dots_b) | set(dots_c)
                   | set(thru1) | set(thru2),
                   len(dots_a) + len(dots_b) + len(dots_c),
                   len(thru1) + len(thru2))
        # cap joining both crossing tops; a cup feeds one bottom leg
        (tok0, dots0), (tok1, dots1) = ends
        if tok0[0] != "s" and tok1[0] != "s" and tok0[0] == tok1[0] and \
                isinstance(evs[tok0[0]][0], Cross) and \
                {tok0[1], tok1[1]} == {0, 1}:
            kx = tok0[0]
            if evs[kx][0].a == evs[kx][0].b:
                for j in (0, 1):
                    tokb, dots_b = _chain_down(evs, prod, (kx, j))
                    if tokb[0] == "s" or \
                            not isinstance(evs[tokb[0]][0], Cup):
                        continue
                    ku, uleg = tokb
                    _, thru1 = _chain_down(evs, prod, (kx, 1 - j))
                    _, thru2 = _chain_up(evs, cons, (ku, 1 - uleg))
                    side = "l" if j == 1 else "r"
                    yield (side,
                           {kc, ku, kx} | set(dots0) | set(dots1)
                           | set(dots_b) | set(thru1) | set(thru2),
                           len(dots0) + len(dots1),
                           len(dots_b) + len(thru1) + len(thru2))
                    break
    # cup feeding both crossing bottoms; a cap takes one top leg
    for ku, (cup, _) in enumerate(evs):
        if not isinstance(cup, Cup):
            continue
        s0, dots0 = _chain_up(evs, cons, (ku, 0))
        s1, dots1 = _chain_up(evs, cons, (ku, 1))
        if s0[0] == "t" or s1[0] == "t" or s0[0] != s1[0]:
            continue
        kx = s0[0]
        if not isinstance(evs[kx][0], Cross) or \
                evs[kx][0].a != evs[kx][0].b or {s0[1], s1[1]} != {0, 1}:
            continue
        for j in (0, 1):
            slot, dots_c = _chain_up(evs, cons, (kx, j))
            if slot[0] == "t" or not isinstance(evs[slot[0]][0], Cap):
                continue
            kc, cleg = slot
            _, thru1 = _chain_down(evs, prod, (kc, 1 - cleg))
            _, thru2 = _chain_up(evs, cons, (kx, 1 - j))
            side = "l" if j == 1 else "r"
            yield (side,
                   {kc, ku, kx} | set(dots0) | set(dots1) | set(dots_c)
                   | set(thru1) | set(thru2),
                   len(dots0) + len(dots1),
                   len(dots_c) + len(thru1) + len(thru2))
            break


def _rule_curl(d, prod, cons):
    evs = d.events
    config = d.config
    for side, matched, m, thru in _curl_matches(evs, prod, cons):
        arranged = _make_adjacent(evs, matched)
        if arranged is None:
            continue
        nevs, start, length = arranged
        row, consumed = _block_context(d, nevs, start, length)
        if len(consumed) != 1:
            continue
        q = consumed[0]
        orient, node = row[q]
        # the relation's weight is the region the loop bulges into
        w = weight_right_of(config, d.source.source_weight, row,
                            q if side == "r" else q - 1)
        lam_i = config.lam(w, node)
        out = []
        if side == "r":
            for f1 in range(m - lam_i + 1):
                f2 = m - lam_i - f1
                repl = ([(Dot(orient, node), q)] * (thru + f1)
                        + [(Bubble(node, "cw", lam_i - 1 + f2), q + 1)])
                out.append((Fraction(-1),
                            _splice(nevs, start, length, repl), None))
        else:
            for f1 in range(m + lam_i + 1):
                f2 = m + lam_i - f1
                repl = ([(Dot(orient, node), q)] * (thru + f1)
                        + [(Bubble(node, "ccw", -lam_i - 1 + f2), q)])
                out.append((Fraction(1),
                            _splice(nevs, start, length, repl), None))
        return out
    return None


def _rule_bubble_slide(d, prod, cons):
    rows = d.rows()
    config = d.config
    for k, (cell, pos) in enumerate(d.events):
        if not isinstance(cell, Bubble) or pos >= len(rows[k]):
            continue
        s_orient, j = rows[k][pos]
        i = cell.node
        w_here = weight_right_of(config, d.source.source_weight, rows[k],
                                 pos - 1)
        w_to = weight_right_of(config, d.source.source_weight, rows[k], pos)
        lam_here = config.lam(w_here, i)
        lam_to = config.lam(w_to, i)
        raw0 = lam_here - 1 if cell.orient == "cw" else -lam_here - 1
        alpha = cell.dots - raw0
        if alpha <= 0:
            continue  # bubble-null first
        raw0_to = lam_to - 1 if cell.orient == "cw" else -lam_to - 1
        # crossing a downward strand is the orientation-reversed picture:
        # weights negate, the alpha offset survives, the loop sense flips
        eff = cell.orient if s_orient == 1 else _FLIP[cell.orient]
        out = []
        for c, n_dots, beta in _slide_terms(config, i, eff, alpha, j,
                                            "right"):
            repl = ([(Dot(s_orient, j), pos)] * n_dots
                    + [(Bubble(i, cell.orient, raw0_to + beta), pos + 1)])
            evs = d.events[:k] + tuple(repl) + d.events[k + 1:]
            out.append((c, evs, None))
        return out
    return None


def _pitchfork_alternatives(d, prod, cons):
    """All one-step rotations of a crossing around an adjacent cap or cup.

    Yields (matched index set, replacement builder) pairs; the builder takes
    (block bottom row, consumed positions, block events) and returns the
    replacement events, or None when the configuration fails a sanity check.
    """
    evs = d.events
    for kx, (x, _) in enumerate(evs):
        if not isinstance(x, Cross):
            continue
        xb, xt = x.signature()
        # cap absorbing the top-right leg and the strand right of it
        slot = cons[(kx, 1)]
        if slot[0] != "t" and isinstance(evs[slot[0]][0], Cap) and \
                slot[1] == 0:
            kc = slot[0]

            def build_a(row, p, kx=kx, kc=kc):
                o1, o2, oe = row[p], row[p + 1], row[p + 2]
                kind2 = _KIND_FROM_BOTTOM[(o2[0], oe[0])]
                side2 = "r" if o1[0] == UP else "l"
                return ([(Cross(kind2, o2[1], oe[1]), p + 1),
                         (Cap(side2, o1[1]), p)], kind2)

            yield {kx, kc}, build_a, x.kind
        # cap absorbing the top-left leg and the strand left of it
        slot = cons[(kx, 0)]
        if slot[0] != "t" and isinstance(evs[slot[0]][0], Cap) and \
                slot[1] == 1:
            kc = slot[0]

            def build_b(row, p, kx=kx, kc=kc):
                oe, o1, o2 = row[p], row[p + 1], row[p + 2]
                kind2 = _KIND_FROM_BOTTOM[(oe[0], o1[0])]
                side2 = "r" if oe[0] == UP else "l"
                return ([(Cross(kind2, oe[1], o1[1]), p),
                         (Cap(side2, o2[1]), p + 1)], kind2)

            yield {kx, kc}, build_b, x.kind
        # cup feeding the bottom-right leg with its left leg
        tok = prod[(kx, 1)]
        if tok[0] != "s" and isinstance(evs[tok[0]][0], Cup) and tok[1] == 0:
            ku = tok[0]
            cup = evs[ku][0]

            def build_c(row, p, cup=cup):
                # block bottom: (ext); new: cup at p, crossing at p+1
                oe = row[p]
                _, top = cup.signature()
                o_fed, o_stay = top[0], top[1]
                side2 = "l" if (o_stay[0], o_fed[0]) == (UP, DOWN) else "r"
                kind2 = _KIND_FROM_BOTTOM[(o_fed[0], oe[0])]
                return ([(Cup(side2, cup.node), p),
                         (Cross(kind2, cup.node, oe[1]), p + 1)], kind2)

            yield {kx, ku}, build_c, x.kind

            def build_c2(row, p, cup=cup):
                # crossing rotates around the cusp; the cup is unchanged
                oe = row[p]
                _, top = cup.signature()
                o_stay = top[1]
                kind2 = _KIND_FROM_BOTTOM[(o_stay[0], oe[0])]
                return ([(Cup(cup.side, cup.node), p),
                         (Cross(kind2, cup.node, oe[1]), p + 1)], kind2)

            yield {kx, ku}, build_c2, x.kind
        # cup feeding the bottom-left leg with its right leg
        tok = prod[(kx, 0)]
        if tok[0] != "s" and isinstance(evs[tok[0]][0], Cup) and tok[1] == 1:
            ku = tok[0]
            cup = evs[ku][0]

            def build_d(row, p, cup=cup):
                oe = row[p]
                _, top = cup.signature()
                o_stay, o_fed = top[0], top[1]
                side2 = "l" if (o_fed[0], o_stay[0]) == (UP, DOWN) else "r"
                kind2 = _KIND_FROM_BOTTOM[(oe[0], o_fed[0])]
                return ([(Cup(side2, cup.node), p + 1),
                         (Cross(kind2, oe[1], cup.node), p)], kind2)

            yield {kx, ku}, build_d, x.kind

            def build_d2(row, p, cup=cup):
                # crossing rotates around the cusp; the cup is unchanged
                oe = row[p]
                _, top = cup.signature()
                o_stay = top[0]
                kind2 = _KIND_FROM_BOTTOM[(oe[0], o_stay[0])]
                return ([(Cup(cup.side, cup.node), p + 1),
                         (Cross(kind2, oe[1], cup.node), p)], kind2)

            yield {kx, ku}, build_d2, x.kind


def _rule_pitchfork(d, prod, cons):
    evs = d.events
    for matched, build, old_kind in _pitchfork_alternatives(d, prod, cons):
        arranged = _make_adjacent(evs, matched)
        if arranged is None:
            continue
        nevs, start, length = arranged
        row, consumed = _block_context(d, nevs, start, length)
        p = consumed[0]
        try:
            repl, new_kind = build(row, p)
        except KeyError:
            continue
        if _KIND_WEIGHT[new_kind] >= _KIND_WEIGHT[old_kind]:
            continue
        return [(Fraction(1), _splice(nevs, start, length, repl), None)]
    return None


def _iter_braids(evs, prod, cons, pattern, any_kind=False):
    """Yield directly-stacked triple crossings as index triples.

    ``pattern`` is "aba" (positions p, p+1, p) or "bab" (p+1, p, p+1); the
    three crossings must share legs directly.  By default they must have a
    common kind u or d; with ``any_kind`` every kind combination (including
    sideways crossings) is admitted.
    """
    for k1, (c1, _) in enumerate(evs):
        if not isinstance(c1, Cross):
            continue
        if not any_kind and c1.kind not in ("u", "d"):
            continue
        if pattern == "aba":
            slot = cons[(k1, 1)]
            if slot[0] == "t" or slot[1] != 0:
                continue
            k2 = slot[0]
            c2 = evs[k2][0]
            if not isinstance(c2, Cross):
                continue
            if not any_kind and c2.kind != c1.kind:
                continue
            s3a = cons[(k1, 0)]
            s3b = cons[(k2, 0)]
            if s3a[0] == "t" or s3b[0] == "t" or s3a[0] != s3b[0]:
                continue
            if (s3a[1], s3b[1]) != (0, 1):
                continue
            k3 = s3a[0]
            c3 = evs[k3][0]
            if isinstance(c3, Cross) and (any_kind or c3.kind == c1.kind):
                yield k1, k2, k3
        else:
            slot = cons[(k1, 0)]
            if slot[0] == "t" or slot[1] != 1:
                continue
            k2 = slot[0]
            c2 = evs[k2][0]
            if not isinstance(c2, Cross):
                continue
            if not any_kind and c2.kind != c1.kind:
                continue
            s3a = cons[(k2, 1)]
            s3b = cons[(k1, 1)]
            if s3a[0] == "t" or s3b[0] == "t" or s3a[0] != s3b[0]:
                continue
            if (s3a[1], s3b[1]) != (0, 1):
                continue
            k3 = s3a[0]
            c3 = evs[k3][0]
            if isinstance(c3, Cross) and (any_kind or c3.kind == c1.kind):
                yield k1, k2, k3


def _find_braid(evs, prod, cons, pattern):
    for hit in _iter_braids(evs, prod, cons, pattern):
        return hit
    return None


def _braid_delta(config, kind, x, y, z):
    if x == z and config.pair(x, y) == -1:
        t = config.t(x, y)
        return t if kind == "u" else -t
    return Fraction(0)


def _rule_r3(d, prod, cons):
    evs = d.events
    config = d.config
    hit = _find_braid(evs, prod, cons, "aba")
    if hit is None:
        return None
    k1, k2, k3 = hit
    kind = evs[k1][0].kind
    arranged = _make_adjacent(evs, {k1, k2, k3})
    if arranged is None:
        return None
    nevs, start, length = arranged
    row, consumed = _block_context(d, nevs, start, length)
    p = consumed[0]
    x, y, z = row[p][1], row[p + 1][1], row[p + 2][1]
    repl = [(Cross(kind, y, z), p + 1), (Cross(kind, x, z), p),
            (Cross(kind, x, y), p + 1)]
    out = [(Fraction(1), _splice(nevs, start, length, repl), None)]
    delta = _braid_delta(config, kind, x, y, z)
    if delta:
        out.append((delta, _splice(nevs, start, length, []), None))
    return out


_RULES = [
    ("bubble-null", _rule_bubble_null,
     "closed loop of non-positive formal degree evaluates to a scalar"),
    ("bubble-extract", _rule_bubble_extract,
     "closed loop in the rightmost region becomes a bubble-monomial factor"),
    ("zigzag", _rule_zigzag,
     "cup-cap zig-zag straightens to the identity, dots riding along"),
    ("circle", _rule_circle,
     "crossing-free closed loop becomes a formal loop cell"),
    ("rotation-collapse", _rule_rotation_collapse,
     "a quarter-turn-rotated crossing (flanked by one cup and one cap) "
     "collapses to the single rotated crossing cell"),
    ("r2", _rule_r2,
     "directly stacked double crossing reduces: quadratic relation for "
     "parallel strands, identity or identity-plus-loop-tail for sideways"),
    ("curl", _rule_curl,
     "a strand crossing itself around one extremum reduces to dotted "
     "strands times loops"),
    ("dot-slide", _rule_dot_slide,
     "a dot moves up through a crossing, with equal-label corrections"),
    ("dot-extremum", _rule_dot_extremum,
     "a dot next to a cap or cup moves to the upward-oriented leg"),
    ("pitchfork", _rule_pitchfork,
     "a crossing rotates around an adjacent cap or cup when that lowers "
     "its kind (up < sideways < down)"),
    ("bubble-slide", _rule_bubble_slide,
     "a loop cell slides right across one strand"),
    ("r3", _rule_r3,
     "a left-leaning triple crossing reorders to right-leaning, plus the "
     "equal-outer-label correction term"),
]


def rules_dump():
    """The rule set, for audit."""
    return [{"id": name, "description": desc} for name, _, desc in _RULES]


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

class NormalForm:
    """Result of normalization: bubble-monomial x reduced-diagram combo."""

    __slots__ = ("config", "source", "target", "terms", "steps", "trace")

    def __init__(self, config, source, target, terms, steps=0, trace=None):
        self.config = config
        self.source = source
        self.target = target
        self.terms = {k: v for k, v in terms.items() if v}
        self.steps = steps
        self.trace = trace

    def is_zero(self):
        return not self.terms

    def is_basic(self):
        """No crossings and no loop cells left: a genuine spanning form."""
        return all(
            not any(isinstance(cell, (Cross, Bubble)) for cell, _ in d.events)
            for d, _ in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{mono!r}*{d!r}"
                          for (d, mono), c in self.terms.items())


def _diagram_key(d):
    from .diagram import _cell_key
    return tuple((pos, _cell_key(cell)) for cell, pos in d.events)


def _isotopy_neighbors(d, budget):
    """Braid-move neighbors with no correction term (both directions).

    Same-orientation triples move freely unless the outer labels agree and
    pair to -1 with the middle one; mixed-orientation triples move freely
    unless all three labels coincide.
    """
    out = []
    evs = d.events
    prod, cons = _links(evs, len(d.source.letters))
    for pattern in ("aba", "bab"):
        for hit in _iter_braids(evs, prod, cons, pattern, any_kind=True):
            arranged = _make_adjacent(evs, set(hit))
            if arranged is None:
                continue
            nevs, start, length = arranged
            row, consumed = _block_context(d, nevs, start, length)
            p = consumed[0]
            (o1, x), (o2, y), (o3, z) = row[p], row[p + 1], row[p + 2]
            if o1 == o2 == o3:
                kind = "u" if o1 == UP else "d"
                if _braid_delta(d.config, kind, x, y, z):
                    continue
            elif x == y == z:
                continue

            def cr(oa, la, ob, lb):
                return Cross(_KIND_FROM_BOTTOM[(oa, ob)], la, lb)

            if pattern == "aba":
                repl = [(cr(o2, y, o3, z), p + 1), (cr(o1, x, o3, z), p),
                        (cr(o1, x, o2, y), p + 1)]
            else:
                repl = [(cr(o1, x, o2, y), p), (cr(o1, x, o3, z), p + 1),
                        (cr(o2, y, o3, z), p)]
            budget.tick()
            out.append(d.with_events(_splice(nevs, start, length, repl)))
    # every rotation of a crossing around an adjacent cap or cup is exact,
    # in either direction
    for matched, build, _ in _pitchfork_alternatives(d, prod, cons):
        arranged = _make_adjacent(evs, matched)
        if arranged is None:
            continue
        nevs, start, length = arranged
        row, consumed = _block_context(d, nevs, start, length)
        p = consumed[0]
        try:
            repl, _ = build(row, p)
        except KeyError:
            continue
        budget.tick()
        try:
            out.append(d.with_events(_splice(nevs, start, length, repl)))
        except MismatchError:
            continue
    return out


def _canonical_rep(d, budget, cap=600):
    """Minimal representative of d under correction-free braid moves."""
    seen = {d}
    frontier = [d]
    while frontier and len(seen) < cap:
        nxt = []
        for cur in frontier:
            for nb in _isotopy_neighbors(cur, budget):
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        frontier = nxt
    return min(seen, key=_diagram_key)


def normalize(m, budget=100000, trace=False, rule_order=None):
    """Apply the directed rule set until no rule fires.

    Raises :class:`BudgetExceeded` when the step limit is reached.
    """
    if isinstance(budget, Budget):
        bud = budget
    else:
        bud = Budget(budget)
    if rule_order is None:
        rules = _RULES
    else:
        by_name = {name: entry for entry in _RULES for name in (entry[0],)}
        rules = [_RULES[r] if isinstance(r, int) else by_name[r]
                 for r in rule_order]
    trace_log = [] if trace else None
    work = {}
    for d, c in m.terms.items():
        work[(d, _EMPTY)] = work.get((d, _EMPTY), Fraction(0)) + c
    done = {}
    while work:
        (d, mono), coeff = work.popitem()
        if not coeff:
            continue
        bud.tick()
        prod, cons = _links(d.events, len(d.source.letters))
        res = name = None
        for rname, fn, _ in rules:
            res = fn(d, prod, cons)
            if res is not None:
                name = rname
                break
        if res is None:
            key = (d, mono)
            done[key] = done.get(key, Fraction(0)) + coeff
            if not done[key]:
                del done[key]
            continue
        if trace_log is not None:
            trace_log.append((name, d, len(res)))
        base_deg = d.degree_raw()
        for c2, evs2, mono2 in res:
            nd = Diagram(d.config, d.source, evs2,
                         target_shift=d.target.shift)
            extracted = 0 if mono2 is None else mono2.degree()
            if nd.degree_raw() + extracted != base_deg:
                raise AssertionError(
                    f"rule {name} changed degree on {d!r}")
            nmono = mono if mono2 is None else mono * mono2
            key = (nd, nmono)
            work[key] = work.get(key, Fraction(0)) + coeff * c2
            if not work[key]:
                del work[key]
    # cancel residue terms related by correction-free braid moves
    if any(any(isinstance(cell, Cross) for cell, _ in d.events)
           for d, _ in done):
        merged = {}
        for (d, mono), c in done.items():
            rep = _canonical_rep(d, bud)
            key = (rep, mono)
            merged[key] = merged.get(key, Fraction(0)) + c
        done = merged
    return NormalForm(m.config, m.source, m.target, done, steps=bud.used,
                      trace=trace_log)


def eq_explain(m1, m2, budget=100000, trace=False):
    """Compare two parallel 2-morphisms; returns (verdict, NormalForm|None).

    Verdicts: "equal", "unequal", "unknown".
    """
    diff = m1 - m2
    try:
        nf = normalize(diff, budget=budget, trace=trace)
    except BudgetExceeded:
        return "unknown", None
    if nf.is_zero():
        return "equal", nf
    # second pass: expand sideways/downward generators into the upward
    # calculus, where the dot-slide and braid rules are complete
    from .diagram import macro_expand
    expanded_rules = [name for name, _, _ in _RULES
                      if name != "rotation-collapse"]
    try:
        nf2 = normalize(macro_expand(diff), budget=budget, trace=trace,
                        rule_order=expanded_rules)
    except BudgetExceeded:
        return "unknown", nf
    if nf2.is_zero():
        return "equal", nf2
    if nf.is_basic():
        return "unequal", nf
    return "unequal", nf


def eq(m1, m2, budget=100000):
    """Semi-decision of equality modulo the defining relations."""
    verdict, _ = eq_explain(m1, m2, budget=budget)
    return verdict


# ---------------------------------------------------------------------------
# polynomial oracle for the upward-only fragment
# ---------------------------------------------------------------------------

def _poly_add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, Fraction(0)) + c
        if not out[e]:
            del out[e]
    return out


def _poly_scale(p, c):
    if not c:
        return {}
    return {e: v * c for e, v in p.items()}


def _poly_mul_var(p, k, power=1):
    return {tuple(e[j] + (power if j == k else 0) for j in range(len(e))): c
            for e, c in p.items()}


def _poly_swap(p, k):
    out = {}
    for e, c in p.items():
        e2 = list(e)
        e2[k], e2[k + 1] = e2[k + 1], e2[k]
        e2 = tuple(e2)
        out[e2] = out.get(e2, Fraction(0)) + c
    return out


def _poly_demazure(p, k):
    """(f - s_k f) / (x_k - x_{k+1}), exactly, monomial by monomial."""
    out = {}
    for e, c in p.items():
        a, b = e[k], e[k + 1]
        if a == b:
            continue
        lo, hi = min(a, b), max(a, b)
        sign = 1 if a > b else -1
        for j in range(lo, hi):
            e2 = list(e)
            e2[k], e2[k + 1] = j, a + b - 1 - j
            e2 = tuple(e2)
            out[e2] = out.get(e2, Fraction(0)) + sign * c
    return {e: c for e, c in out.items() if c}


def _node_order(config):
    return {n: i for i, n in enumerate(sorted(config.nodes, key=str))}


def _apply_upward(config, d, poly, order):
    """Act with one upward diagram on a polynomial, bottom to top."""
    labels = [n for _, n in d.source.letters]
    p = poly
    for cell, pos in d.events:
        if isinstance(cell, Dot):
            p = _poly_mul_var(p, pos)
        elif isinstance(cell, Cross):
            a, b = labels[pos], labels[pos + 1]
            if a == b:
                p = _poly_demazure(p, pos)
            elif order[a] < order[b]:
                p = _poly_swap(p, pos)
            else:
                sp = _poly_swap(p, pos)
                if config.pair(a, b) == 0:
                    p = _poly_scale(sp, config.t(b, a))
                else:
                    p = _poly_add(
                        _poly_scale(_poly_mul_var(sp, pos),
                                    config.t(b, a)),
                        _poly_scale(_poly_mul_var(sp, pos + 1),
                                    config.t(a, b)))
            labels[pos], labels[pos + 1] = labels[pos + 1], labels[pos]
        else:
            raise ValueError(f"not an upward cell: {cell}")
    return p


def _oracle_inputs(n):
    """A separating family of exponent tuples for n-strand operators."""
    base = list(itertools.permutations(range(n)))
    if n >= 1:
        base += list(itertools.permutations([0] + list(range(2, n + 1))))
        base.append(tuple([0] * n))
    seen = []
    for e in base:
        if e not in seen:
            seen.append(e)
    return seen


def klr_poly_eval(m):
    """The polynomial-operator value of an upward-only 2-morphism.

    Strand ``k`` acts on the variable ``x_k``; dots multiply, equal-label
    crossings apply the divided-difference operator, distinct-label
    crossings transpose (and multiply by the asymmetric linear form on
    descents).  The operator is represented by its exact action on a fixed
    separating family of monomials; two upward morphisms are equal iff these
    representations agree (calibrated against the quadratic, dot-slide and
    cubic relations).
    """
    for d, _ in m.terms.items():
        if any(o == DOWN for o, _ in d.source.letters) or any(
                not isinstance(cell, (Dot, Cross)) or
                (isinstance(cell, Cross) and cell.kind != "u")
                for cell, _ in d.events):
            raise ValueError("klr_poly_eval requires upward-only diagrams")
    n = len(m.source.letters)
    order = _node_order(m.config)
    table = {}
    for exps in _oracle_inputs(n):
        acc = {}
        for d, c in m.terms.items():
            out = _apply_upward(m.config, d, {exps: Fraction(1)}, order)
            acc = _poly_add(acc, _poly_scale(out, c))
        table[exps] = tuple(sorted(acc.items()))
    return (m.source, m.target, tuple(sorted(table.items())))


def klr_equal(m1, m2):
    return klr_poly_eval(m1) == klr_poly_eval(m2)
