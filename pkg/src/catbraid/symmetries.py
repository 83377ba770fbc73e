"""The three diagrammatic symmetries: mirror (sigma), orientation reversal
(omega), and vertical flip (psi).

All three are strict 2-functors (contravariant in various ways).  On a single
diagram they act cell by cell:

* ``sigma`` mirrors left-right, negates weights, keeps orientations, and
  multiplies each crossing of equal labels by -1;
* ``omega`` reverses all strand orientations, negates weights, and multiplies
  each crossing of equal labels by -1;
* ``psi`` flips diagrams upside down (swapping source and target and negating
  grading shifts), keeping weights.

Each preserves the intrinsic degree of every cell.
"""

from __future__ import annotations

from fractions import Fraction

from .cartan import Weight
from .diagram import (
    Bubble, Cap, Cross, Cup, Diagram, Dot, Morphism2, SignedWord,
)

_FLIP_ORIENT = {"cw": "ccw", "ccw": "cw"}


def _neg(w):
    return Weight(tuple(-x for x in w.pairings))


def _sigma_cell(cell):
    """Mirrored cell and its scalar."""
    if isinstance(cell, Dot):
        return cell, 1
    if isinstance(cell, Cross):
        sign = -1 if cell.a == cell.b else 1
        kind = {"u": "u", "d": "d", "l": "r", "r": "l"}[cell.kind]
        return Cross(kind, cell.b, cell.a), sign
    if isinstance(cell, Cap):
        return Cap("r" if cell.side == "l" else "l", cell.node), 1
    if isinstance(cell, Cup):
        return Cup("r" if cell.side == "l" else "l", cell.node), 1
    if isinstance(cell, Bubble):
        return Bubble(cell.node, _FLIP_ORIENT[cell.orient], cell.dots), 1
    raise TypeError(cell)


def _omega_cell(cell):
    if isinstance(cell, Dot):
        return Dot(-cell.orient, cell.node), 1
    if isinstance(cell, Cross):
        sign = -1 if cell.a == cell.b else 1
        kind = {"u": "d", "d": "u", "l": "r", "r": "l"}[cell.kind]
        return Cross(kind, cell.a, cell.b), sign
    if isinstance(cell, Cap):
        return Cap("r" if cell.side == "l" else "l", cell.node), 1
    if isinstance(cell, Cup):
        return Cup("r" if cell.side == "l" else "l", cell.node), 1
    if isinstance(cell, Bubble):
        return Bubble(cell.node, _FLIP_ORIENT[cell.orient], cell.dots), 1
    raise TypeError(cell)


def _psi_cell(cell):
    if isinstance(cell, Dot):
        return Dot(cell.orient, cell.node), 1
    if isinstance(cell, Cross):
        kind = {"u": "u", "d": "d", "l": "r", "r": "l"}[cell.kind]
        return Cross(kind, cell.b, cell.a), 1
    if isinstance(cell, Cap):
        return Cup("l" if cell.side == "r" else "r", cell.node), 1
    if isinstance(cell, Cup):
        return Cap("l" if cell.side == "r" else "r", cell.node), 1
    if isinstance(cell, Bubble):
        return cell, 1
    raise TypeError(cell)


def _flip_letter(letter):
    orient, node = letter
    return (-orient, node)


def sigma_diagram(d):
    """Mirror image; returns (Diagram, scalar)."""
    config = d.config
    new_source_weight = _neg(d.source.target_weight(config))
    src = SignedWord(new_source_weight, tuple(reversed(d.source.letters)),
                     d.source.shift)
    rows = d.rows()
    events = []
    scalar = 1
    for (cell, pos), row in zip(d.events, rows):
        ncell, s = _sigma_cell(cell)
        scalar *= s
        bottom, _ = cell.signature()
        events.append((ncell, len(row) - pos - len(bottom)))
    nd = Diagram(config, src, events, target_shift=d.target.shift)
    return nd, scalar


def omega_diagram(d):
    config = d.config
    src = SignedWord(_neg(d.source.source_weight),
                     tuple(_flip_letter(l) for l in d.source.letters),
                     d.source.shift)
    events = []
    scalar = 1
    for cell, pos in d.events:
        ncell, s = _omega_cell(cell)
        scalar *= s
        events.append((ncell, pos))
    nd = Diagram(config, src, events, target_shift=d.target.shift)
    return nd, scalar


def psi_diagram(d):
    config = d.config
    src = SignedWord(d.target.source_weight, d.target.letters,
                     -d.target.shift)
    events = []
    scalar = 1
    for cell, pos in reversed(d.events):
        ncell, s = _psi_cell(cell)
        scalar *= s
        events.append((ncell, pos))
    nd = Diagram(config, src, events, target_shift=-d.source.shift)
    return nd, scalar


_DIAGRAM_MAPS = {"sigma": sigma_diagram, "omega": omega_diagram,
                 "psi": psi_diagram}


def apply_symmetry(kind, m):
    """Apply sigma/omega/psi to a Morphism2."""
    fn = _DIAGRAM_MAPS[kind]
    out = {}
    source = target = None
    for d, c in m.terms.items():
        nd, s = fn(d)
        out[nd] = out.get(nd, Fraction(0)) + c * s
        source, target = nd.source, nd.target
    if source is None:
        # transform the endpoints of a zero morphism
        probe = Diagram(m.config, m.source, (), target_shift=m.source.shift)
        nd, _ = fn(probe)
        src = nd.source
        # build target analogously
        probe_t = Diagram(m.config, m.target, (), target_shift=m.target.shift)
        ndt, _ = fn(probe_t)
        if kind == "psi":
            return Morphism2(m.config, ndt.source, nd.source)
        return Morphism2(m.config, src, ndt.source)
    return Morphism2(m.config, source, target, out)


def word_image(kind, config, word):
    """Image of a SignedWord under a symmetry."""
    probe = Diagram(config, word, (), target_shift=word.shift)
    nd, _ = _DIAGRAM_MAPS[kind](probe)
    return nd.source
