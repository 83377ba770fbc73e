"""Bounded complexes of shifted words, chain maps, and null-homotopies.

A complex stores, per homological degree, a finite direct sum of shifted
signed words together with a differential of degree +1 (squaring to zero up
to the diagrammatic relations).  Chain maps and homotopies are stored as
sparse matrices of 2-morphisms; the tensor (horizontal) product uses the
usual alternating sign on the differential of the left factor's degree.

All equality checks go through :mod:`.rewrite`, so "commutes" always means
"commutes modulo the local relations", never just syntactic equality.
"""

from __future__ import annotations

from fractions import Fraction

from .diagram import (
    Morphism2, SignedWord, hcompose, vcompose,
)
from .laurent import LaurentPoly, RatFunc
from .rewrite import Budget, BudgetExceeded, eq
from .udot import Letter, UElement, UWord

__all__ = [
    "Complex", "ChainMap", "Homotopy", "Unsolvable", "tensor",
    "tensor_chainmaps", "compose_chainmaps", "homotopy_check",
    "homotopy_solve", "k0_class", "word_hcompose",
]


def word_hcompose(config, left, right):
    """Concatenate 1-morphisms, ``left`` placed left of ``right``."""
    if left.source_weight != right.target_weight(config):
        raise ValueError(
            f"{left} does not compose onto {right}")
    return SignedWord(right.source_weight, left.letters + right.letters,
                      left.shift + right.shift)


def _mat_entry(mat, r, c):
    return mat.get((r, c))


def _mat_add(a, b):
    out = dict(a)
    for k, m in b.items():
        if k in out:
            out[k] = out[k] + m
        else:
            out[k] = m
    return {k: m for k, m in out.items() if not m.is_zero()}


def _mat_scale(a, c):
    if not c:
        return {}
    return {k: m.scale(c) for k, m in a.items()}


def _mat_mul(a, b):
    """Matrix product: ``a`` after ``b``."""
    out = {}
    for (r, k), m1 in a.items():
        for (k2, c), m2 in b.items():
            if k != k2:
                continue
            prod = vcompose(m1, m2)
            key = (r, c)
            out[key] = out[key] + prod if key in out else prod
    return {k: m for k, m in out.items() if not m.is_zero()}


class Complex:
    """A bounded complex; ``objects[i]`` is a tuple of shifted words and
    ``diffs[i]`` the sparse matrix X^i -> X^{i+1}."""

    __slots__ = ("config", "objects", "diffs", "_tensor_index")

    def __init__(self, config, objects, diffs=None):
        self.config = config
        self._tensor_index = None
        self.objects = {i: tuple(obs) for i, obs in objects.items() if obs}
        self.diffs = {}
        for i, mat in (diffs or {}).items():
            mat = {k: m for k, m in mat.items() if not m.is_zero()}
            if not mat:
                continue
            for (r, c), m in mat.items():
                if m.source != self.objects[i][c] or \
                        m.target != self.objects[i + 1][r]:
                    raise ValueError(
                        f"differential entry {m} does not match the "
                        f"summands at degree {i}")
            self.diffs[i] = mat

    @classmethod
    def single(cls, config, word, deg=0):
        return cls(config, {deg: (word,)})

    def degrees(self):
        return sorted(self.objects)

    def obj(self, i):
        return self.objects.get(i, ())

    def diff(self, i):
        return self.diffs.get(i, {})

    def gshift(self, t):
        """Shift every summand by <t>."""
        objects = {i: tuple(w.shifted(t) for w in obs)
                   for i, obs in self.objects.items()}
        diffs = {i: {k: m.shifted(t) for k, m in mat.items()}
                 for i, mat in self.diffs.items()}
        return Complex(self.config, objects, diffs)

    def hshift(self, n):
        """Shift homological degree by ``n``, twisting d by (-1)^n."""
        sign = Fraction(-1 if n % 2 else 1)
        objects = {i + n: obs for i, obs in self.objects.items()}
        diffs = {i + n: {k: m.scale(sign) for k, m in mat.items()}
                 for i, mat in self.diffs.items()}
        return Complex(self.config, objects, diffs)

    def is_complex(self, budget=100000):
        for i in self.degrees():
            sq = _mat_mul(self.diff(i + 1), self.diff(i))
            for (r, c), m in sq.items():
                if eq(m, Morphism2.zero(self.config, m.source, m.target),
                      budget=budget) != "equal":
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Complex)
                and self.objects == other.objects
                and self.diffs == other.diffs)

    def __hash__(self):
        return hash((tuple(sorted(self.objects.items())),))

    def __repr__(self):
        parts = []
        for i in self.degrees():
            body = " (+) ".join(repr(w) for w in self.obj(i))
            parts.append(f"[{i}: {body}]")
        return " -> ".join(parts) or "0"


def tensor(x, y):
    """Horizontal product, ``x`` placed left of ``y``.

    The summands of degree ``i`` are the pairs (x^r, y^s) with r + s = i,
    ordered by increasing r; the differential of the right factor picks up
    the sign (-1)^r.
    """
    config = x.config
    index = {}
    objects = {}
    for i in range(min(x.degrees(), default=0) + min(y.degrees(), default=0),
                   max(x.degrees(), default=0) + max(y.degrees(), default=0)
                   + 1):
        summands = []
        for r in x.degrees():
            s = i - r
            for ai, a in enumerate(x.obj(r)):
                for bi, b in enumerate(y.obj(s)):
                    index[(r, ai, s, bi)] = (i, len(summands))
                    summands.append(word_hcompose(config, a, b))
        if summands:
            objects[i] = tuple(summands)
    diffs = {}
    for (r, ai, s, bi), (i, col) in index.items():
        a, b = x.obj(r)[ai], y.obj(s)[bi]
        for (r2, ai2), m in ((k, v) for k, v in x.diff(r).items()):
            if ai2 != ai:
                continue
            row = index[(r + 1, r2, s, bi)][1]
            entry = hcompose(m, Morphism2.identity(config, b))
            mat = diffs.setdefault(i, {})
            key = (row, col)
            mat[key] = mat[key] + entry if key in mat else entry
        sign = Fraction(-1 if r % 2 else 1)
        for (s2, bi2), m in ((k, v) for k, v in y.diff(s).items()):
            if bi2 != bi:
                continue
            row = index[(r, ai, s + 1, s2)][1]
            entry = hcompose(Morphism2.identity(config, a), m).scale(sign)
            mat = diffs.setdefault(i, {})
            key = (row, col)
            mat[key] = mat[key] + entry if key in mat else entry
    z = Complex(config, objects, diffs)
    z._tensor_index = index  # noqa: SLF001 -- consumed by tensor_chainmaps
    return z


class ChainMap:
    """Degreewise matrix of 2-morphisms between two complexes."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source, target, comps):
        self.source = source
        self.target = target
        self.comps = {}
        for i, mat in comps.items():
            mat = {k: m for k, m in mat.items() if not m.is_zero()}
            if not mat:
                continue
            for (r, c), m in mat.items():
                if m.source != source.obj(i)[c] or \
                        m.target != target.obj(i)[r]:
                    raise ValueError(
                        f"component {m} does not match degree {i}")
            self.comps[i] = mat

    @classmethod
    def identity(cls, x):
        comps = {i: {(k, k): Morphism2.identity(x.config, w)
                     for k, w in enumerate(x.obj(i))}
                 for i in x.degrees()}
        return cls(x, x, comps)

    @classmethod
    def zero(cls, x, y):
        return cls(x, y, {})

    def comp(self, i):
        return self.comps.get(i, {})

    def __add__(self, other):
        return ChainMap(self.source, self.target,
                        {i: _mat_add(self.comp(i), other.comp(i))
                         for i in set(self.comps) | set(other.comps)})

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        return ChainMap(self.source, self.target,
                        {i: _mat_scale(mat, c)
                         for i, mat in self.comps.items()})

    def gshift(self, t):
        return ChainMap(self.source.gshift(t), self.target.gshift(t),
                        {i: {k: m.shifted(t) for k, m in mat.items()}
                         for i, mat in self.comps.items()})

    def is_zero(self):
        return not self.comps

    def check(self, budget=100000):
        """Do all squares against the differentials commute?"""
        degs = set(self.source.degrees()) | set(self.target.degrees())
        for i in degs:
            lhs = _mat_mul(self.target.diff(i), self.comp(i))
            rhs = _mat_mul(self.comps.get(i + 1, {}), self.source.diff(i))
            diff = _mat_add(lhs, _mat_scale(rhs, Fraction(-1)))
            for m in diff.values():
                if eq(m, Morphism2.zero(m.config, m.source, m.target),
                      budget=budget) != "equal":
                    return False
        return True

    def __repr__(self):
        return f"ChainMap({self.source!r} => {self.target!r})"


def compose_chainmaps(f2, f1):
    """``f2`` after ``f1``."""
    return ChainMap(f1.source, f2.target,
                    {i: _mat_mul(f2.comp(i), f1.comp(i))
                     for i in set(f1.comps) & set(f2.comps)})


def tensor_chainmaps(f, g, zx=None, zy=None):
    """Horizontal product of chain maps (no signs on the components).

    ``zx``/``zy`` may supply precomputed tensor complexes of the sources
    and targets; otherwise they are rebuilt.
    """
    config = f.source.config
    zx = zx or tensor(f.source, g.source)
    zy = zy or tensor(f.target, g.target)
    ix, iy = zx._tensor_index, zy._tensor_index
    comps = {}
    for (r, ai, s, bi), (i, col) in ix.items():
        fr = f.comp(r)
        gs = g.comp(s)
        for (ar, ac), fm in fr.items():
            if ac != ai:
                continue
            for (br, bc), gm in gs.items():
                if bc != bi:
                    continue
                row = iy[(r, ar, s, br)][1]
                entry = hcompose(fm, gm)
                mat = comps.setdefault(i, {})
                key = (row, col)
                mat[key] = mat[key] + entry if key in mat else entry
    return ChainMap(zx, zy, comps)


class Homotopy:
    """Degree-lowering matrices h^i : X^i -> Y^{i-1}."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source, target, comps):
        self.source = source
        self.target = target
        self.comps = {i: dict(mat) for i, mat in comps.items() if mat}

    def comp(self, i):
        return self.comps.get(i, {})

    def __repr__(self):
        return f"Homotopy({self.source!r} => {self.target!r})"


def homotopy_check(f, g, h, budget=100000):
    """Does ``h`` witness f ~ g, i.e. f - g = h d + d' h degreewise?"""
    degs = (set(f.comps) | set(g.comps) | set(h.comps)
            | set(f.source.degrees()))
    for i in degs:
        want = _mat_add(f.comp(i), _mat_scale(g.comp(i), Fraction(-1)))
        got = _mat_add(_mat_mul(h.comp(i + 1), f.source.diff(i)),
                       _mat_mul(f.target.diff(i - 1), h.comp(i)))
        diff = _mat_add(want, _mat_scale(got, Fraction(-1)))
        for m in diff.values():
            if eq(m, Morphism2.zero(m.config, m.source, m.target),
                  budget=budget) != "equal":
                return False
    return True


class Unsolvable(Exception):
    """No homotopy exists inside the enumerated morphism span."""

    def __init__(self, span_size, message=""):
        self.span_size = span_size
        super().__init__(message or f"span of size {span_size} exhausted")


# -- morphism-space enumeration for the solver ------------------------------

def _matchings(ins, outs):
    """All label-preserving bijections between endpoint lists."""
    if not ins:
        yield ()
        return
    (label, tok), rest = ins[0], ins[1:]
    for k, (label2, tok2) in enumerate(outs):
        if label2 != label:
            continue
        for tail in _matchings(rest, outs[:k] + outs[k + 1:]):
            yield ((tok, tok2),) + tail


def _route(config, src, tgt, pairing):
    """Build one diagram realizing an endpoint pairing, as raw events.

    Works greedily on a running row; returns None when the router gets
    stuck (the spanning family tolerates unroutable pairings).
    """
    from .diagram import Cap, Cross, Cup, Diagram
    # tokens: ("b", k) bottom endpoint k, ("t", k) top endpoint k
    partner = {}
    for a, b in pairing:
        partner[a] = b
        partner[b] = a
    row = [("b", k) for k in range(len(src.letters))]
    orient = {("b", k): o for k, (o, _) in enumerate(src.letters)}
    orient.update({("t", k): o for k, (o, _) in enumerate(tgt.letters)})
    label = {("b", k): n for k, (_, n) in enumerate(src.letters)}
    label.update({("t", k): n for k, (_, n) in enumerate(tgt.letters)})
    events = []

    def cell_for(o1, o2, n1, n2):
        kinds = {(1, 1): "u", (-1, -1): "d", (-1, 1): "l", (1, -1): "r"}
        return Cross(kinds[(o1, o2)], n1, n2)

    for _ in range(200):
        # 1. cancel adjacent partners (caps)
        done = True
        for p in range(len(row) - 1):
            x, y = row[p], row[p + 1]
            if partner.get(x) == y and x[0] == "b" and y[0] == "b":
                o1, o2 = orient[x], orient[y]
                if (o1, o2) == (1, -1):
                    events.append((Cap("r", label[x]), p))
                elif (o1, o2) == (-1, 1):
                    events.append((Cap("l", label[x]), p))
                else:
                    return None
                del row[p:p + 2]
                done = False
                break
        if not done:
            continue
        # 2. emit cups for target endpoints paired together
        emitted = False
        for k in range(len(tgt.letters) - 1):
            a, b = ("t", k), ("t", k + 1)
            if partner.get(a) == b and a not in row and b not in row:
                o1, o2 = orient[a], orient[b]
                pos = _cup_pos(row, k)
                if pos is None:
                    continue
                if (o1, o2) == (-1, 1):
                    events.append((Cup("r", label[a]), pos))
                elif (o1, o2) == (1, -1):
                    events.append((Cup("l", label[a]), pos))
                else:
                    return None
                row[pos:pos] = [a, b]
                emitted = True
                break
        if emitted:
            continue
        # 3. bring bottom endpoints paired with each other adjacent
        moved = False
        for p, xx in enumerate(row):
            if xx[0] == "b" and partner.get(xx, ("?",))[0] == "b":
                p2 = row.index(partner[xx])
                if p2 > p + 1:
                    q = p2 - 1
                    a, b = row[q], row[q + 1]
                    events.append((cell_for(orient[a], orient[b],
                                            label[a], label[b]), q))
                    row[q], row[q + 1] = b, a
                    moved = True
                    break
        if moved:
            continue
        # 4. rename bottoms to their top partners, then sort by crossings
        for p, x in enumerate(row):
            if x[0] == "b" and partner.get(x, ("?",))[0] == "t":
                row[p] = partner[x]
        targets = [x[1] for x in row]
        if all(x[0] == "t" for x in row):
            if targets == sorted(targets):
                break
            # bubble sort with crossings
            for p in range(len(row) - 1):
                if targets[p] > targets[p + 1]:
                    x, y = row[p], row[p + 1]
                    events.append((cell_for(orient[x], orient[y],
                                            label[x], label[y]), p))
                    row[p], row[p + 1] = y, x
                    break
            continue
        return None
    else:
        return None
    try:
        d = Diagram(config, src, events)
    except Exception:
        return None
    if d.target.letters != tgt.letters:
        return None
    return d


def _cup_pos(row, k):
    """Insertion slot so that target endpoint order stays increasing."""
    pos = 0
    for p, x in enumerate(row):
        if x[0] == "t" and x[1] < k:
            pos = p + 1
        elif x[0] == "t" and x[1] > k:
            return pos if pos <= p else None
    return pos


def _hom_span(config, src, tgt, max_extra_dots=6):
    """A spanning family of 2-morphisms ``src -> tgt`` of degree zero.

    Pairs endpoints in every label/orientation-compatible way, routes each
    pairing, then pads with dots to land in degree zero.  Bubble factors are
    not enumerated: after normalization they are redundant for spanning.
    """
    from .diagram import Dot
    ins, outs = [], []
    for k, (o, n) in enumerate(src.letters):
        (ins if o == 1 else outs).append((n, ("b", k)))
    for k, (o, n) in enumerate(tgt.letters):
        (outs if o == 1 else ins).append((n, ("t", k)))
    if len(ins) != len(outs):
        return []
    span = []
    seen = set()
    for pairing in _matchings(tuple(ins), tuple(outs)):
        d = _route(config, src, tgt, pairing)
        if d is None:
            continue
        base = d.with_events(d.events, target_shift=tgt.shift)
        deficit = -base.degree()
        if deficit < 0 or deficit % 2 or deficit > 2 * max_extra_dots:
            continue
        need = deficit // 2
        for combo in _dot_splits(need, len(src.letters)):
            evs = tuple((Dot(src.letters[p][0], src.letters[p][1]), p)
                        for p, cnt in enumerate(combo) for _ in range(cnt))
            try:
                nd = base.with_events(evs + base.events, tgt.shift)
            except Exception:
                continue
            if nd in seen:
                continue
            seen.add(nd)
            span.append(Morphism2.from_diagram(nd))
    return span


def _dot_splits(total, slots):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _dot_splits(total - first, slots - 1):
            yield (first,) + rest


def _nf_vector(m, budget):
    from .rewrite import normalize
    nf = normalize(m, budget=budget)
    return dict(nf.terms)


def homotopy_solve(f, g, budget=500000, max_extra_dots=6):
    """Search for a null-homotopy witnessing f ~ g by exact linear algebra.

    Unknowns run over an enumerated spanning family of each relevant
    morphism space; raises :class:`Unsolvable` (carrying the span size)
    when the system has no solution over the rationals.
    """
    x, y = f.source, f.target
    config = x.config
    bud = Budget(budget)
    candidates = []  # (i, row, col, Morphism2)
    for i in x.degrees():
        for c, a in enumerate(x.obj(i)):
            for r, b in enumerate(y.obj(i - 1)):
                for m in _hom_span(config, a, b,
                                  max_extra_dots=max_extra_dots):
                    candidates.append((i, r, c, m))
    # target vector: f - g, flattened per (degree, row, col, term-key)
    columns = []
    for cand in candidates:
        i, r, c, m = cand
        contrib = {}
        # d' h at degree i
        for (r2, rr), dm in y.diff(i - 1).items():
            if rr != r:
                continue
            v = _nf_vector(vcompose(dm, m), bud)
            for key, coeff in v.items():
                k = (i, r2, c, key)
                contrib[k] = contrib.get(k, Fraction(0)) + coeff
        # h d at degree i-1
        for (rr, c2), dm in x.diff(i - 1).items():
            if rr != c:
                continue
            v = _nf_vector(vcompose(m, dm), bud)
            for key, coeff in v.items():
                k = (i - 1, r, c2, key)
                contrib[k] = contrib.get(k, Fraction(0)) + coeff
        columns.append(contrib)
    rhs = {}
    fg = f - g
    for i, mat in fg.comps.items():
        for (r, c), m in mat.items():
            for key, coeff in _nf_vector(m, bud).items():
                k = (i, r, c, key)
                rhs[k] = rhs.get(k, Fraction(0)) + coeff
    sol = _solve_exact(columns, rhs)
    if sol is None:
        raise Unsolvable(len(candidates))
    comps = {}
    for coeff, (i, r, c, m) in zip(sol, candidates):
        if not coeff:
            continue
        mat = comps.setdefault(i, {})
        key = (r, c)
        scaled = m.scale(coeff)
        mat[key] = mat[key] + scaled if key in mat else scaled
    return Homotopy(x, y, comps)


def _solve_exact(columns, rhs):
    """Solve sum_k x_k columns[k] = rhs over the rationals, or None."""
    keys = sorted({k for col in columns for k in col} | set(rhs))
    key_ix = {k: i for i, k in enumerate(keys)}
    nrows, ncols = len(keys), len(columns)
    mat = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for k, v in col.items():
            mat[key_ix[k]][j] = v
    for k, v in rhs.items():
        mat[key_ix[k]][ncols] = v
    # Gaussian elimination
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if mat[r][col]), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for r in range(nrows):
            if r != row and mat[r][col]:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    for r in range(row, nrows):
        if mat[r][ncols]:
            return None
    sol = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        sol[col] = mat[r][ncols]
    return sol


# -- decategorification -----------------------------------------------------

def k0_class(z):
    """Alternating-sum image of a complex in the formal word algebra."""
    terms = {}
    for i in z.degrees():
        sign = -1 if i % 2 else 1
        for w in z.obj(i):
            letters = tuple(Letter(o, n) for o, n in w.letters)
            uw = UWord(w.source_weight, letters)
            lp = LaurentPoly.q(w.shift)
            coeff = RatFunc(-lp if sign < 0 else lp)
            terms[uw] = terms.get(uw, RatFunc(0)) + coeff
    return UElement(z.config, terms)
