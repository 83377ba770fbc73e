"""Planar string diagrams for the graded 2-category attached to a graph.

Objects are weights; 1-morphisms are signed words (sequences of up/down
strands labelled by nodes, with a grading shift); 2-morphisms are exact
rational linear combinations of diagrams.  Diagrams are stored as a source
word plus a bottom-to-top list of *events* ``(cell, position)``, one cell per
horizontal level, normalized so that each cell sits as low and as far left as
it can slide.  This canonical event list is what gets hashed.

Conventions: strands are listed left to right; the region to the right of all
strands carries the source weight; crossing an up strand labelled ``a``
leftwards adds the simple root ``alpha_a`` to the region weight, a down strand
subtracts it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cartan import Weight

UP, DOWN = +1, -1


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dot:
    orient: int
    node: object

    def signature(self):
        leg = ((self.orient, self.node),)
        return leg, leg


@dataclass(frozen=True)
class Cross:
    """kind 'u': both up; 'd': both down; 'l'/'r': sideways.

    ``a``/``b`` are the labels of the bottom endpoints, left to right.
    'l' has bottom (down a, up b); 'r' has bottom (up a, down b).
    """

    kind: str
    a: object
    b: object

    _BOTTOM = {"u": (UP, UP), "d": (DOWN, DOWN), "l": (DOWN, UP), "r": (UP, DOWN)}

    def signature(self):
        o1, o2 = Cross._BOTTOM[self.kind]
        bottom = ((o1, self.a), (o2, self.b))
        top = ((o2, self.b), (o1, self.a))
        return bottom, top


@dataclass(frozen=True)
class Cap:
    """'l': bottom (down i, up i); 'r': bottom (up i, down i)."""

    side: str
    node: object

    def signature(self):
        if self.side == "l":
            return ((DOWN, self.node), (UP, self.node)), ()
        return ((UP, self.node), (DOWN, self.node)), ()


@dataclass(frozen=True)
class Cup:
    """'l': top (up i, down i); 'r': top (down i, up i)."""

    side: str
    node: object

    def signature(self):
        if self.side == "l":
            return (), ((UP, self.node), (DOWN, self.node))
        return (), ((DOWN, self.node), (UP, self.node))


@dataclass(frozen=True)
class Bubble:
    """A closed loop with no crossings, as a zero-width formal cell.

    ``dots`` may be negative: such cells stand for the formal
    positive-degree endomorphisms that expand into products of genuine
    bubbles when evaluated.  ``orient`` is "cw" or "ccw".  The cell sits
    between strand positions ``pos-1`` and ``pos``.
    """

    node: object
    orient: str
    dots: int

    def signature(self):
        return (), ()


@dataclass(frozen=True)
class IdStrand:
    """Identity cell, used only when assembling multi-cell slices."""

    orient: int
    node: object

    def signature(self):
        leg = ((self.orient, self.node),)
        return leg, leg


def _cell_key(cell):
    if isinstance(cell, Dot):
        return (0, cell.orient, str(cell.node))
    if isinstance(cell, Cross):
        return (1, cell.kind, str(cell.a), str(cell.b))
    if isinstance(cell, Cap):
        return (2, cell.side, str(cell.node))
    if isinstance(cell, Cup):
        return (3, cell.side, str(cell.node))
    return (4, cell.orient, str(cell.node), cell.dots)


# ---------------------------------------------------------------------------
# signed words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedWord:
    """A 1-morphism: strands (orient, node) left to right, plus a shift."""

    source_weight: Weight
    letters: tuple
    shift: int = 0

    def target_weight(self, config):
        w = self.source_weight
        for orient, node in self.letters:
            w = w + _scaled_root(config, orient, node)
        return w

    def shifted(self, t):
        return SignedWord(self.source_weight, self.letters, self.shift + t)

    def __repr__(self):
        def letter(orient, node):
            return f"{'E' if orient == UP else 'F'}{node}"

        body = "".join(letter(o, n) for o, n in self.letters)
        s = f"<{self.shift}>" if self.shift else ""
        return f"{body or '1'}_{self.source_weight.pairings}{s}"


def _scaled_root(config, orient, node):
    root = config.root(node)
    return Weight(tuple(orient * x for x in root.pairings))


def weight_right_of(config, source_weight, letters, pos):
    """Weight of the region just right of strand position ``pos``."""
    w = source_weight
    for k in range(len(letters) - 1, pos, -1):
        w = w + _scaled_root(config, *letters[k])
    return w


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------

class MismatchError(ValueError):
    pass


class Diagram:
    """An immutable diagram: source word + normalized event list.

    ``target_shift`` defaults so that the diagram is a degree-zero map from
    its (shifted) source to its (shifted) target; pass it explicitly when a
    different grading is wanted.
    """

    __slots__ = ("config", "source", "events", "target", "_hash")

    def __init__(self, config, source, events, target_shift=None,
                 _normalize=True):
        self.config = config
        self.source = source
        events = tuple((cell, int(pos)) for cell, pos in events)
        row = list(source.letters)
        for cell, pos in events:
            bottom, top = cell.signature()
            if pos < 0 or pos + len(bottom) > len(row) \
                    or row[pos:pos + len(bottom)] != list(bottom):
                raise MismatchError(
                    f"cell {cell} at {pos} does not match row {row}")
            row[pos:pos + len(bottom)] = list(top)
        if _normalize:
            events = _normalize_events(events)
        self.events = events
        if target_shift is None:
            target_shift = source.shift + self.degree_raw()
        self.target = SignedWord(source.source_weight, tuple(row), target_shift)
        self._hash = hash((self.source, self.events, self.target))

    # -- grading ----------------------------------------------------------

    def degree_raw(self):
        """Sum of intrinsic cell degrees (independent of shifts)."""
        total = 0
        row = list(self.source.letters)
        for cell, pos in self.events:
            bottom, top = cell.signature()
            lam = weight_right_of(self.config, self.source.source_weight,
                                  tuple(row), pos + len(bottom) - 1) \
                if bottom else weight_right_of(
                    self.config, self.source.source_weight, tuple(row), pos - 1)
            total += cell_degree(self.config, cell, lam)
            row[pos:pos + len(bottom)] = list(top)
        return total

    def degree(self):
        """Degree as a map source<shift> -> target<shift>."""
        return self.degree_raw() + self.source.shift - self.target.shift

    # -- structure ----------------------------------------------------------

    def rows(self):
        """All horizontal cuts, bottom row first (len(events)+1 rows)."""
        row = list(self.source.letters)
        out = [tuple(row)]
        for cell, pos in self.events:
            bottom, top = cell.signature()
            row[pos:pos + len(bottom)] = list(top)
            out.append(tuple(row))
        return out

    def with_events(self, events, target_shift=None):
        if target_shift is None:
            target_shift = self.target.shift
        return Diagram(self.config, self.source, events, target_shift)

    def retarget(self, source_shift, target_shift):
        src = SignedWord(self.source.source_weight, self.source.letters,
                         source_shift)
        return Diagram(self.config, src, self.events, target_shift)

    def __eq__(self, other):
        return (isinstance(other, Diagram)
                and self.source == other.source
                and self.target == other.target
                and self.events == other.events)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        evs = "; ".join(f"{cell}@{pos}" for cell, pos in self.events)
        return f"Diagram({self.source} => {self.target} : [{evs}])"


def cell_degree(config, cell, right_weight):
    """Intrinsic degree of a cell given the weight just right of it."""
    if isinstance(cell, (IdStrand,)):
        return 0
    if isinstance(cell, Dot):
        return 2
    if isinstance(cell, Cross):
        if cell.kind in ("u", "d"):
            return -config.pair(cell.a, cell.b)
        return 0
    lam_i = config.lam(right_weight, cell.node)
    if isinstance(cell, Bubble):
        if cell.orient == "cw":
            return 2 * (cell.dots - lam_i + 1)
        return 2 * (cell.dots + lam_i + 1)
    if isinstance(cell, Cup):
        return 1 + lam_i if cell.side == "r" else 1 - lam_i
    if isinstance(cell, Cap):
        return 1 + lam_i if cell.side == "l" else 1 - lam_i
    raise TypeError(cell)


def _normalize_events(events):
    """Slide each cell as low, then as far left, as it can go (canonical)."""
    evs = list(events)
    changed = True
    while changed:
        changed = False
        for k in range(len(evs) - 1):
            (c1, p1), (c2, p2) = evs[k], evs[k + 1]
            b1, t1 = c1.signature()
            b2, t2 = c2.signature()
            d1 = len(t1) - len(b1)
            if p2 + len(b2) <= p1 and (p2, _cell_key(c2)) < (p1, _cell_key(c1)):
                # upper cell entirely left of lower: swap, positions unchanged
                # for the upper; lower shifts by upper's width change
                evs[k], evs[k + 1] = (c2, p2), (c1, p1 + len(t2) - len(b2))
                changed = True
            elif p2 >= p1 + len(t1) and (p2 - d1, _cell_key(c2)) < (p1, _cell_key(c1)):
                # upper cell entirely right; swap only if it would sort lower
                evs[k], evs[k + 1] = (c2, p2 - d1), (c1, p1)
                changed = True
    return tuple(evs)


def slices_to_events(source, slices):
    """Flatten multi-cell slices (rows of cells incl. IdStrand) to events."""
    events = []
    for cells in slices:
        pos = 0
        row_events = []
        for cell in cells:
            bottom, top = cell.signature()
            if not isinstance(cell, IdStrand):
                row_events.append((cell, pos))
            pos += len(bottom)
        # apply left cells first; each earlier cell changes later positions
        offset = 0
        for cell, p in row_events:
            bottom, top = cell.signature()
            events.append((cell, p + offset))
            offset += len(top) - len(bottom)
    return events


def from_slices(config, source, slices, target_shift=None):
    return Diagram(config, source, slices_to_events(source, slices),
                   target_shift)


# ---------------------------------------------------------------------------
# linear combinations
# ---------------------------------------------------------------------------

class Morphism2:
    """Exact rational linear combination of diagrams with common endpoints."""

    __slots__ = ("config", "source", "target", "terms")

    def __init__(self, config, source, target, terms=None):
        self.config = config
        self.source = source
        self.target = target
        self.terms = {}
        if terms:
            for d, c in terms.items():
                c = Fraction(c)
                if not c:
                    continue
                if d.source != source or d.target != target:
                    raise MismatchError(
                        f"term {d} does not match {source} => {target}")
                self.terms[d] = self.terms.get(d, Fraction(0)) + c
            self.terms = {d: c for d, c in self.terms.items() if c}

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_diagram(cls, diagram, coeff=1):
        return cls(diagram.config, diagram.source, diagram.target,
                   {diagram: Fraction(coeff)})

    @classmethod
    def identity(cls, config, word):
        d = Diagram(config, word, (), target_shift=word.shift)
        return cls.from_diagram(d)

    @classmethod
    def zero(cls, config, source, target):
        return cls(config, source, target)

    # -- linear structure -------------------------------------------------

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise MismatchError("sum of morphisms with different endpoints")
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, Fraction(0)) + c
        return Morphism2(self.config, self.source, self.target, out)

    def __neg__(self):
        return Morphism2(self.config, self.source, self.target,
                         {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return Morphism2(self.config, self.source, self.target,
                         {d: c * v for d, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def shifted(self, t):
        """The same map between shifted endpoints."""
        return Morphism2(
            self.config, self.source.shifted(t), self.target.shifted(t),
            {d.retarget(d.source.shift + t, d.target.shift + t): c
             for d, c in self.terms.items()})

    def degree(self):
        return self.target.shift - self.source.shift + next(
            iter(self.terms)).degree_raw() if self.terms else 0

    def __eq__(self, other):
        """Syntactic equality of normalized event lists (see rewrite.eq for
        equality modulo relations)."""
        return (isinstance(other, Morphism2)
                and self.source == other.source
                and self.target == other.target
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target,
                     frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"0: {self.source} => {self.target}"
        return " + ".join(f"({c})*{d!r}" for d, c in self.terms.items())


def vcompose(top, bottom):
    """top after bottom."""
    if bottom.target != top.source:
        raise MismatchError(
            f"cannot stack {top.source} on {bottom.target}")
    out = {}
    for d1, c1 in bottom.terms.items():
        for d2, c2 in top.terms.items():
            offset = len(d1.events)
            d = Diagram(d1.config, d1.source, d1.events + d2.events,
                        target_shift=d2.target.shift)
            out[d] = out.get(d, Fraction(0)) + c1 * c2
    return Morphism2(bottom.config, bottom.source, top.target, out)


def hcompose(left, right):
    """Place ``left`` to the left of ``right`` (right is closer to the
    source weight)."""
    config = left.config
    lw = right.source.target_weight(config)
    if left.source.source_weight != lw:
        raise MismatchError(
            f"left factor sits at {left.source.source_weight}, expected {lw}")
    src = SignedWord(right.source.source_weight,
                     left.source.letters + right.source.letters,
                     left.source.shift + right.source.shift)
    tshift = left.target.shift + right.target.shift
    out = {}
    for d1, c1 in left.terms.items():
        for d2, c2 in right.terms.items():
            width = len(d1.target.letters)
            events = d1.events + tuple(
                (cell, pos + width) for cell, pos in d2.events)
            d = Diagram(config, src, events, target_shift=tshift)
            out[d] = out.get(d, Fraction(0)) + c1 * c2
    return Morphism2(config, src,
                     SignedWord(src.source_weight,
                                left.target.letters + right.target.letters,
                                tshift),
                     out)


def generator(config, word, cell, pos, coeff=1, target_shift=None):
    """The one-cell 2-morphism given by ``cell`` at ``pos`` on ``word``."""
    d = Diagram(config, word, ((cell, pos),), target_shift)
    return Morphism2.from_diagram(d, coeff)


# ---------------------------------------------------------------------------
# macro expansion to the reduced generating set
# ---------------------------------------------------------------------------

def _expand_cell(cell, pos):
    """Rewrite one cell into up-dots, up-crossings, caps and cups.

    The composites are the standard rotations; any two choices agree by
    cyclicity, which the rewrite engine checks independently.
    """
    if isinstance(cell, Dot) and cell.orient == DOWN:
        i = cell.node
        return [(Cup("r", i), pos), (Dot(UP, i), pos + 1), (Cap("r", i), pos + 1)]
    if isinstance(cell, Cross):
        a, b = cell.a, cell.b
        if cell.kind == "r":
            return [(Cup("r", b), pos), (Cross("u", b, a), pos + 1),
                    (Cap("r", b), pos + 2)]
        if cell.kind == "l":
            return [(Cup("l", a), pos + 2), (Cross("u", b, a), pos + 1),
                    (Cap("l", a), pos)]
        if cell.kind == "d":
            return [(Cup("r", b), pos), (Cup("r", a), pos + 1),
                    (Cross("u", a, b), pos + 2), (Cap("r", a), pos + 3),
                    (Cap("r", b), pos + 2)]
    return [(cell, pos)]


def macro_expand(m):
    """Expand every sideways/downward generator in a Morphism2."""
    out = {}
    for d, c in m.terms.items():
        events = []
        for cell, pos in d.events:
            events.extend(_expand_cell(cell, pos))
        nd = Diagram(d.config, d.source, events, target_shift=d.target.shift)
        out[nd] = out.get(nd, Fraction(0)) + c
    return Morphism2(m.config, m.source, m.target, out)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _cell_to_json(cell):
    if isinstance(cell, Dot):
        return ["Dot", cell.orient, cell.node]
    if isinstance(cell, Cross):
        return ["Cross", cell.kind, cell.a, cell.b]
    if isinstance(cell, Cap):
        return ["Cap", cell.side, cell.node]
    if isinstance(cell, Cup):
        return ["Cup", cell.side, cell.node]
    if isinstance(cell, Bubble):
        return ["Bubble", cell.orient, cell.node, cell.dots]
    raise TypeError(cell)


def _cell_from_json(data):
    tag, *rest = data
    if tag == "Dot":
        return Dot(rest[0], rest[1])
    if tag == "Cross":
        return Cross(rest[0], rest[1], rest[2])
    if tag == "Cap":
        return Cap(rest[0], rest[1])
    if tag == "Cup":
        return Cup(rest[0], rest[1])
    if tag == "Bubble":
        return Bubble(rest[1], rest[0], rest[2])
    raise ValueError(tag)


def word_to_json(word):
    return {"weight": list(word.source_weight.pairings),
            "letters": [[o, n] for o, n in word.letters],
            "shift": word.shift}


def word_from_json(data):
    return SignedWord(Weight(tuple(data["weight"])),
                      tuple((o, n) for o, n in data["letters"]),
                      data.get("shift", 0))


def morphism_to_json(m):
    return {"source": word_to_json(m.source),
            "target": word_to_json(m.target),
            "terms": [{"coeff": str(c),
                       "events": [[_cell_to_json(cell), pos]
                                  for cell, pos in d.events]}
                      for d, c in m.terms.items()]}


def morphism_from_json(config, data):
    source = word_from_json(data["source"])
    target = word_from_json(data["target"])
    terms = {}
    for t in data["terms"]:
        d = Diagram(config, source,
                    [( _cell_from_json(cd), pos) for cd, pos in t["events"]],
                    target_shift=target.shift)
        terms[d] = terms.get(d, Fraction(0)) + Fraction(t["coeff"])
    return Morphism2(config, source, target, terms)


def dumps(m):
    return json.dumps(morphism_to_json(m))


def loads(config, text):
    return morphism_from_json(config, json.loads(text))
