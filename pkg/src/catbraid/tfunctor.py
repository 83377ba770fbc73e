"""The elementary positive-braid 2-functor and its conjugate variants.

For a fixed node ``i`` of a simply-laced root datum, the 2-functor sends
weights to their simple reflection, each generating 1-morphism to a short
complex (at most two terms for a single letter), and each generating
2-morphism to an explicit chain map between the image complexes.  Arbitrary
words and string diagrams are handled by tensoring the per-letter data and
vertically composing the per-event chain maps.

The three diagrammatic symmetries conjugate this functor into its inverse
and reverse-braid companions; the mirror and orientation-reversal versions
live in the theory with primed bubble parameters c'(i, w) = c(i, -w)^-1.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .cartan import CartanConfig, Weight
from .complexes import (
    ChainMap, Complex, tensor, tensor_chainmaps, compose_chainmaps,
)
from .diagram import (
    Bubble, Cap, Cross, Cup, Diagram, Dot, Morphism2, SignedWord,
    cell_degree, macro_expand, weight_right_of,
)
from . import symmetries

UP, DOWN = 1, -1

_ENGINES = {}


def _engine(config, i):
    key = (id(config), i)
    if key not in _ENGINES:
        _ENGINES[key] = _Engine(config, i)
    return _ENGINES[key]


def image_cases():
    """The tagged case list of generator images, as shipped data."""
    text = resources.files("catbraid.data").joinpath(
        "gen_image_cases.json").read_text()
    return json.loads(text)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def T_weight(config, i, w):
    """Image of a weight: the simple reflection at ``i``."""
    return config.reflect(i, w)


def T_word(config, i, word):
    """Image of a (shifted) word of generators, as a one-sided complex."""
    return _engine(config, i).on_word(word)


def T_gen2(config, i, cell, lam):
    """Image of one generating cell whose right region carries ``lam``."""
    return _engine(config, i).gen2(cell, lam)


def T_mor2(config, i, m):
    """Image of an arbitrary 2-morphism, as a chain map."""
    return _engine(config, i).on_morphism(m)


# ---------------------------------------------------------------------------
# the primed theory and the symmetry action on complexes
# ---------------------------------------------------------------------------

class _PrimedConfig(CartanConfig):
    """Same root datum and scalars, bubble parameters c'(i,w) = c(i,-w)^-1."""

    def __init__(self, base):
        super().__init__(base.nodes,
                         [list(row) for row in base.mat],
                         scalars={k: v for k, v in base.scalars.items()
                                  if k[0] != k[1]},
                         bubble_seeds=None)
        self._base = base

    def bubble_param(self, i, w):
        return 1 / self._base.bubble_param(i, -w)


def primed_config(config):
    """The companion theory in which the mirrored relations hold."""
    if isinstance(config, _PrimedConfig):
        return config._base
    return _PrimedConfig(config)


def _retag(config, m):
    """Rebuild a 2-morphism under another config of the same root datum."""
    terms = {}
    for d, c in m.terms.items():
        terms[Diagram(config, d.source, d.events,
                      target_shift=d.target.shift)] = c
    return Morphism2(config, m.source, m.target, terms)


def symmetry_complex(kind, z, config=None):
    """Apply sigma/omega/psi to a complex of words.

    The mirror symmetry alternates the sign of the differential with the
    homological degree, the vertical flip negates the homological degree,
    and orientation reversal acts plainly degreewise.
    """
    cfg = config or z.config
    objects, diffs = {}, {}
    if kind == "psi":
        for deg in z.degrees():
            objects[-deg] = tuple(
                symmetries.word_image(kind, cfg, w) for w in z.obj(deg))
        for deg in z.degrees():
            for (r, c), m in z.diff(deg).items():
                # d: X^deg -> X^(deg+1) becomes psi(X)^(-deg-1) -> psi(X)^(-deg)
                nm = _retag(cfg, symmetries.apply_symmetry(kind, m))
                diffs.setdefault(-deg - 1, {})[(c, r)] = nm
        return Complex(cfg, objects, diffs)
    for deg in z.degrees():
        objects[deg] = tuple(
            symmetries.word_image(kind, cfg, w) for w in z.obj(deg))
    for deg in z.degrees():
        sign = -1 if (kind == "sigma" and deg % 2) else 1
        for (r, c), m in z.diff(deg).items():
            nm = _retag(cfg, symmetries.apply_symmetry(kind, m))
            if sign < 0:
                nm = -nm
            diffs.setdefault(deg, {})[(r, c)] = nm
    return Complex(cfg, objects, diffs)


def symmetry_chainmap(kind, f, config=None):
    """Apply a symmetry to a chain map; the vertical flip is contravariant."""
    cfg = config or f.source.config
    sx = symmetry_complex(kind, f.source, cfg)
    sy = symmetry_complex(kind, f.target, cfg)
    comps = {}
    for deg, mat in f.comps.items():
        for (r, c), m in mat.items():
            nm = _retag(cfg, symmetries.apply_symmetry(kind, m))
            if kind == "psi":
                comps.setdefault(-deg, {})[(c, r)] = nm
            else:
                comps.setdefault(deg, {})[(r, c)] = nm
    if kind == "psi":
        return ChainMap(sy, sx, comps)
    return ChainMap(sx, sy, comps)


_VARIANTS = {
    # (name, e) -> symmetry used for conjugation
    ("T''", -1): "sigma",
    ("T''", 1): "omega",
    ("T'", -1): "psi",
}


class TVariant:
    """A conjugated braid functor: one of T''(-1), T''(+1), or T'(-1).

    The mirrored and orientation-reversed versions apply the core functor
    inside the primed-parameter theory; the vertical flip stays put.
    """

    def __init__(self, config, i, name, e):
        if (name, e) == ("T'", 1):
            raise ValueError("the identity conjugation; use the core functor")
        self.kind = _VARIANTS[(name, e)]
        self.config = config
        self.i = i
        inner_cfg = (config if self.kind == "psi"
                     else primed_config(config))
        self.inner_cfg = inner_cfg
        self.inner = _engine(inner_cfg, i)

    def on_weight(self, w):
        return self.config.reflect(self.i, w)

    def on_word(self, word):
        w1 = symmetries.word_image(self.kind, self.inner_cfg, word)
        z = self.inner.on_word(w1)
        return symmetry_complex(self.kind, z, self.config)

    def on_morphism(self, m):
        m1 = _retag(self.inner_cfg,
                    symmetries.apply_symmetry(self.kind, m))
        f = self.inner.on_morphism(m1)
        return symmetry_chainmap(self.kind, f, self.config)


def T_variant(config, i, name, e):
    return TVariant(config, i, name, e)


# ---------------------------------------------------------------------------
# the core engine
# ---------------------------------------------------------------------------

class _Engine:
    def __init__(self, config, i):
        self.config = config
        self.i = i
        self._letters = {}
        self._gens = {}

    # -- classification --------------------------------------------------

    def rel(self, n):
        """'i', 'j' (adjacent to i), or 'k' (distant from i)."""
        if n == self.i:
            return "i"
        return "j" if self.config.pair(self.i, n) == -1 else "k"

    # -- words ------------------------------------------------------------

    def _letter(self, orient, node, lam):
        """Image complex of a single letter whose right region is ``lam``."""
        key = (orient, node, lam)
        if key in self._letters:
            return self._letters[key]
        cfg, i = self.config, self.i
        mu = cfg.reflect(i, lam)
        li = cfg.lam(lam, i)
        kind = self.rel(node)
        if kind == "i":
            if orient == UP:
                z = Complex.single(
                    cfg, SignedWord(mu, ((DOWN, i),), -2 - li), deg=-1)
            else:
                z = Complex.single(
                    cfg, SignedWord(mu, ((UP, i),), li), deg=1)
        elif kind == "k":
            z = Complex.single(cfg, SignedWord(mu, ((orient, node),), 0))
        elif orient == UP:
            w0 = SignedWord(mu, ((UP, node), (UP, i)), 0)
            w1 = SignedWord(mu, ((UP, i), (UP, node)), 1)
            d = Morphism2.from_diagram(
                Diagram(cfg, w0, ((Cross("u", node, i), 0),), target_shift=1))
            z = Complex(cfg, {0: (w0,), 1: (w1,)}, {0: {(0, 0): d}})
        else:
            w0 = SignedWord(mu, ((DOWN, node), (DOWN, i)), -1)
            w1 = SignedWord(mu, ((DOWN, i), (DOWN, node)), 0)
            d = Morphism2.from_diagram(
                Diagram(cfg, w0, ((Cross("d", node, i), 0),), target_shift=0))
            z = Complex(cfg, {-1: (w0,), 0: (w1,)}, {-1: {(0, 0): d}})
        self._letters[key] = z
        return z

    def _segment(self, letters, lam):
        """Image of an unshifted run of letters with right region ``lam``."""
        cfg = self.config
        if not letters:
            return Complex.single(
                cfg, SignedWord(cfg.reflect(self.i, lam), (), 0))
        out = None
        mu = lam
        for orient, node in reversed(letters):
            c = self._letter(orient, node, mu)
            out = c if out is None else tensor(c, out)
            root = cfg.root(node)
            mu = mu + Weight(tuple(orient * x for x in root.pairings))
        return out

    def on_word(self, word):
        z = self._segment(word.letters, word.source_weight)
        return z.gshift(word.shift) if word.shift else z

    # -- 2-morphisms -------------------------------------------------------

    def on_morphism(self, m):
        cfg = self.config
        x = self.on_word(m.source)
        y = self.on_word(m.target)
        expanded = macro_expand(m)
        total = None
        for d, coeff in expanded.terms.items():
            f = self._diagram_chainmap(d)
            f = f.scale(coeff)
            total = f if total is None else total + f
        if total is None:
            return ChainMap.zero(x, y)
        return self._with_target(total, y)

    def _diagram_chainmap(self, d):
        cfg = self.config
        src = d.source
        f = ChainMap.identity(self.on_word(src))
        letters = list(src.letters)
        sh = src.shift
        for cell, pos in d.events:
            bottom, top = cell.signature()
            nb = len(bottom)
            lam = weight_right_of(cfg, src.source_weight, tuple(letters),
                                  pos + nb - 1)
            g = self.gen2(cell, lam)
            right = tuple(letters[pos + nb:])
            left = tuple(letters[:pos])
            step = g
            if right:
                id_r = ChainMap.identity(
                    self._segment(right, src.source_weight))
                step = tensor_chainmaps(step, id_r)
            if left:
                lam_l = weight_right_of(cfg, src.source_weight,
                                        tuple(letters), pos - 1)
                id_l = ChainMap.identity(self._segment(left, lam_l))
                step = tensor_chainmaps(id_l, step)
            if sh:
                step = step.gshift(sh)
            f = compose_chainmaps(step, f)
            letters[pos:pos + nb] = list(top)
            sh += cell_degree(cfg, cell, lam)
        # reconcile a possibly retargeted diagram shift
        want = self.on_word(d.target)
        return self._with_target(f, want)

    def _with_target(self, f, ynew):
        """Present ``f`` against ``ynew``, an overall-regrade of its target."""
        if f.target is ynew or f.target == ynew:
            return ChainMap(f.source, ynew, f.comps)
        cfg = self.config
        comps = {}
        for deg, mat in f.comps.items():
            for (r, c), m in mat.items():
                tgt = ynew.obj(deg)[r]
                if m.target.letters != tgt.letters:
                    raise ValueError("target mismatch beyond a regrade")
                terms = {d.retarget(d.source.shift, tgt.shift): co
                         for d, co in m.terms.items()}
                comps.setdefault(deg, {})[(r, c)] = Morphism2(
                    cfg, m.source, tgt, terms)
        return ChainMap(f.source, ynew, comps)

    # -- generator images --------------------------------------------------

    def gen2(self, cell, lam):
        key = (cell, lam)
        if key not in self._gens:
            self._gens[key] = self._build_gen2(cell, lam)
        return self._gens[key]

    def _endpoints(self, cell, lam):
        bottom, top = cell.signature()
        x = self._segment(bottom, lam)
        deg = cell_degree(self.config, cell, lam)
        y = self._segment(top, lam)
        if deg:
            y = y.gshift(deg)
        return x, y

    @staticmethod
    def _idx(z, deg, letters):
        hits = [n for n, w in enumerate(z.obj(deg)) if w.letters == letters]
        if len(hits) != 1:
            raise AssertionError(f"summand lookup failed: {letters} at {deg}")
        return hits[0]

    def _mor(self, src_word, events, tgt_word, coeff=1):
        d = Diagram(self.config, src_word, events,
                    target_shift=tgt_word.shift)
        if d.target != tgt_word:
            raise AssertionError(f"built {d.target}, wanted {tgt_word}")
        return Morphism2.from_diagram(d, Fraction(coeff))

    def _build_gen2(self, cell, lam):
        cfg, i = self.config, self.i
        if isinstance(cell, Dot):
            if cell.orient != UP:
                raise ValueError("downward dots are composite; expand first")
            return self._dot(cell.node, lam)
        if isinstance(cell, Cross):
            if cell.kind != "u":
                raise ValueError("sideways/downward crossings are composite")
            return self._ucross(cell.a, cell.b, lam)
        if isinstance(cell, (Cap, Cup)):
            return self._capcup(cell, lam)
        if isinstance(cell, Bubble):
            return self._bubble(cell, lam)
        raise TypeError(cell)

    # dots ---------------------------------------------------------------

    def _dot(self, node, lam):
        cfg, i = self.config, self.i
        x, y = self._endpoints(Dot(UP, node), lam)
        kind = self.rel(node)
        if kind == "i":
            m = self._mor(x.obj(-1)[0], ((Dot(DOWN, i), 0),), y.obj(-1)[0])
            return ChainMap(x, y, {-1: {(0, 0): m}})
        if kind == "k":
            m = self._mor(x.obj(0)[0], ((Dot(UP, node), 0),), y.obj(0)[0])
            return ChainMap(x, y, {0: {(0, 0): m}})
        comps = {}
        for deg, pos in ((0, 0), (1, 1)):
            m = self._mor(x.obj(deg)[0], ((Dot(UP, node), pos),),
                          y.obj(deg)[0])
            comps[deg] = {(0, 0): m}
        return ChainMap(x, y, comps)

    # upward crossings ---------------------------------------------------

    def _ucross(self, a, b, lam):
        cfg, i = self.config, self.i
        x, y = self._endpoints(Cross("u", a, b), lam)
        case = self.rel(a) + self.rel(b)
        t = cfg.t
        if case == "ii":
            m = self._mor(x.obj(-2)[0], ((Cross("d", i, i), 0),),
                          y.obj(-2)[0], -1)
            return ChainMap(x, y, {-2: {(0, 0): m}})
        if case == "kk":
            m = self._mor(x.obj(0)[0], ((Cross("u", a, b), 0),), y.obj(0)[0])
            return ChainMap(x, y, {0: {(0, 0): m}})
        if case == "ik":
            m = self._mor(x.obj(-1)[0], ((Cross("l", i, b), 0),),
                          y.obj(-1)[0], t(b, i))
            return ChainMap(x, y, {-1: {(0, 0): m}})
        if case == "ki":
            m = self._mor(x.obj(-1)[0], ((Cross("r", a, i), 0),),
                          y.obj(-1)[0])
            return ChainMap(x, y, {-1: {(0, 0): m}})
        if case == "ij":
            j = b
            lo = self._mor(x.obj(-1)[0],
                           ((Cross("l", i, j), 0), (Cross("l", i, i), 1)),
                           y.obj(-1)[0])
            hi = self._mor(x.obj(0)[0],
                           ((Cross("l", i, i), 0), (Cross("l", i, j), 1)),
                           y.obj(0)[0], -1)
            return ChainMap(x, y, {-1: {(0, 0): lo}, 0: {(0, 0): hi}})
        if case == "ji":
            j = a
            tij = t(i, j)
            rho = ((Cross("r", i, i), 1), (Cross("r", j, i), 0))
            lo = (self._mor(x.obj(-1)[0], rho + ((Dot(UP, i), 2),),
                            y.obj(-1)[0], tij)
                  + self._mor(x.obj(-1)[0], rho + ((Dot(DOWN, i), 0),),
                              y.obj(-1)[0], -tij))
            rho2 = ((Cross("r", j, i), 1), (Cross("r", i, i), 0))
            hi = (self._mor(x.obj(0)[0], rho2 + ((Dot(DOWN, i), 0),),
                            y.obj(0)[0], tij)
                  + self._mor(x.obj(0)[0], rho2 + ((Dot(UP, i), 1),),
                              y.obj(0)[0], -tij))
            return ChainMap(x, y, {-1: {(0, 0): lo}, 0: {(0, 0): hi}})
        if case == "jk":
            j, k = a, b
            c = 1 / t(k, i)
            lo = self._mor(x.obj(0)[0],
                           ((Cross("u", i, k), 1), (Cross("u", j, k), 0)),
                           y.obj(0)[0], c)
            hi = self._mor(x.obj(1)[0],
                           ((Cross("u", j, k), 1), (Cross("u", i, k), 0)),
                           y.obj(1)[0], c)
            return ChainMap(x, y, {0: {(0, 0): lo}, 1: {(0, 0): hi}})
        if case == "kj":
            k, j = a, b
            lo = self._mor(x.obj(0)[0],
                           ((Cross("u", k, j), 0), (Cross("u", k, i), 1)),
                           y.obj(0)[0])
            hi = self._mor(x.obj(1)[0],
                           ((Cross("u", k, i), 0), (Cross("u", k, j), 1)),
                           y.obj(1)[0])
            return ChainMap(x, y, {0: {(0, 0): lo}, 1: {(0, 0): hi}})
        # jj': the square-to-square ("cube") case, valid also for j = j'
        j, jp = a, b
        U = lambda p, q: Cross("u", p, q)  # noqa: E731
        tij, tijp = t(i, j), t(i, jp)
        E = lambda *ns: tuple((UP, n) for n in ns)  # noqa: E731
        bl = self._idx(x, 0, E(j, i, jp, i))
        bb = self._idx(x, 1, E(j, i, i, jp))
        bt = self._idx(x, 1, E(i, j, jp, i))
        br = self._idx(x, 2, E(i, j, i, jp))
        tl = self._idx(y, 0, E(jp, i, j, i))
        tb = self._idx(y, 1, E(jp, i, i, j))
        tt = self._idx(y, 1, E(i, jp, j, i))
        tr = self._idx(y, 2, E(i, jp, i, j))
        comps = {0: {}, 1: {}, 2: {}}
        comps[0][(tl, bl)] = self._mor(
            x.obj(0)[bl],
            ((U(i, jp), 1), (U(j, jp), 0), (U(i, i), 2), (U(j, i), 1)),
            y.obj(0)[tl], 1 / tij)
        comps[2][(tr, br)] = self._mor(
            x.obj(2)[br],
            ((U(j, i), 1), (U(i, i), 0), (U(j, jp), 2), (U(i, jp), 1)),
            y.obj(2)[tr], -1 / tij)
        comps[1][(tt, bt)] = self._mor(
            x.obj(1)[bt], ((U(j, jp), 1),), y.obj(1)[tt], tijp / tij)
        if j == jp:
            comps[1][(tb, bb)] = self._mor(
                x.obj(1)[bb], ((U(i, i), 1),), y.obj(1)[tb], -cfg.v(i, j))
        comps[1][(tb, bt)] = self._mor(
            x.obj(1)[bt],
            ((U(j, jp), 1), (U(i, jp), 0), (U(j, i), 2), (U(i, i), 1)),
            y.obj(1)[tb], 1 / tij)
        comps[1][(tt, bb)] = self._mor(
            x.obj(1)[bb],
            ((U(i, i), 1), (U(j, i), 0), (U(i, jp), 2), (U(j, jp), 1)),
            y.obj(1)[tt], 1 / tij)
        return ChainMap(x, y, comps)

    # caps and cups --------------------------------------------------------

    def _capcup(self, cell, lam):
        cfg, i = self.config, self.i
        x, y = self._endpoints(cell, lam)
        node, side = cell.node, cell.side
        kind = self.rel(node)
        li = cfg.lam(lam, i)
        is_cap = isinstance(cell, Cap)
        if kind == "i":
            c = cfg.bubble_param(i, lam)
            flip = {"r": "l", "l": "r"}[side]
            coeff = {(True, "r"): c, (True, "l"): 1 / c,
                     (False, "r"): 1 / c, (False, "l"): c}[(is_cap, side)]
            mk = (Cap if is_cap else Cup)(flip, i)
            src = x.obj(0)[0]
            m = self._mor(src, ((mk, 0),), y.obj(0)[0], coeff)
            return ChainMap(x, y, {0: {(0, 0): m}})
        if kind == "k":
            tki = cfg.t(node, i)
            coeff = {(True, "r"): tki ** li, (True, "l"): Fraction(1),
                     (False, "r"): tki ** (-li),
                     (False, "l"): Fraction(1)}[(is_cap, side)]
            m = self._mor(x.obj(0)[0], ((cell, 0),), y.obj(0)[0], coeff)
            return ChainMap(x, y, {0: {(0, 0): m}})
        # adjacent label: two nested caps/cups into/out of the square
        j = node
        lj = cfg.lam(lam, j)
        cj = cfg.bubble_param(j, lam)
        sgn = Fraction(-1) ** lj
        if not is_cap and side == "r":
            bt = self._idx(y, 0, ((DOWN, i), (DOWN, j), (UP, j), (UP, i)))
            bb = self._idx(y, 0, ((DOWN, j), (DOWN, i), (UP, i), (UP, j)))
            src = x.obj(0)[0]
            comps = {0: {
                (bt, 0): self._mor(src, ((Cup("r", i), 0), (Cup("r", j), 1)),
                                   y.obj(0)[bt], sgn * cj),
                (bb, 0): self._mor(src, ((Cup("r", j), 0), (Cup("r", i), 1)),
                                   y.obj(0)[bb], -sgn * cj),
            }}
            return ChainMap(x, y, comps)
        if is_cap and side == "r":
            bt = self._idx(x, 0, ((UP, i), (UP, j), (DOWN, j), (DOWN, i)))
            bb = self._idx(x, 0, ((UP, j), (UP, i), (DOWN, i), (DOWN, j)))
            tgt = y.obj(0)[0]
            comps = {0: {
                (0, bt): self._mor(x.obj(0)[bt],
                                   ((Cap("r", j), 1), (Cap("r", i), 0)),
                                   tgt, -sgn / cj),
                (0, bb): self._mor(x.obj(0)[bb],
                                   ((Cap("r", i), 1), (Cap("r", j), 0)),
                                   tgt, sgn / cj),
            }}
            return ChainMap(x, y, comps)
        if not is_cap:  # left cup
            ci = cfg.bubble_param(i, lam - cfg.root(j))
            coeff = ((-cfg.t(i, j)) ** li) / ci * sgn * cj
            bt = self._idx(y, 0, ((UP, i), (UP, j), (DOWN, j), (DOWN, i)))
            bb = self._idx(y, 0, ((UP, j), (UP, i), (DOWN, i), (DOWN, j)))
            src = x.obj(0)[0]
            comps = {0: {
                (bt, 0): self._mor(src, ((Cup("l", i), 0), (Cup("l", j), 1)),
                                   y.obj(0)[bt], coeff),
                (bb, 0): self._mor(src, ((Cup("l", j), 0), (Cup("l", i), 1)),
                                   y.obj(0)[bb], coeff),
            }}
            return ChainMap(x, y, comps)
        # left cap
        ci = cfg.bubble_param(i, lam)
        coeff = ((-cfg.t(i, j)) ** (1 - li)) * ci * sgn / cj
        bt = self._idx(x, 0, ((DOWN, i), (DOWN, j), (UP, j), (UP, i)))
        bb = self._idx(x, 0, ((DOWN, j), (DOWN, i), (UP, i), (UP, j)))
        tgt = y.obj(0)[0]
        comps = {0: {
            (0, bt): self._mor(x.obj(0)[bt],
                               ((Cap("l", j), 1), (Cap("l", i), 0)),
                               tgt, coeff),
            (0, bb): self._mor(x.obj(0)[bb],
                               ((Cap("l", i), 1), (Cap("l", j), 0)),
                               tgt, coeff),
        }}
        return ChainMap(x, y, comps)

    # bubbles --------------------------------------------------------------

    def _bubble(self, cell, lam):
        cfg, i = self.config, self.i
        x, y = self._endpoints(cell, lam)
        node, orient = cell.node, cell.orient
        mu = cfg.reflect(i, lam)
        li = cfg.lam(lam, i)
        src, tgt = x.obj(0)[0], y.obj(0)[0]
        kind = self.rel(node)
        base = (cfg.lam(lam, node) - 1 if orient == "cw"
                else -cfg.lam(lam, node) - 1)
        alpha = cell.dots - base
        if kind == "i":
            c = cfg.bubble_param(i, lam)
            flip = {"cw": "ccw", "ccw": "cw"}[orient]
            nbase = (cfg.lam(mu, node) - 1 if flip == "cw"
                     else -cfg.lam(mu, node) - 1)
            coeff = c * c if orient == "cw" else 1 / (c * c)
            m = self._mor(src, ((Bubble(i, flip, nbase + alpha), 0),),
                          tgt, coeff)
            return ChainMap(x, y, {0: {(0, 0): m}})
        if kind == "k":
            tki = cfg.t(node, i)
            coeff = tki ** li if orient == "cw" else tki ** (-li)
            m = self._mor(src, ((Bubble(node, orient, cell.dots), 0),),
                          tgt, coeff)
            return ChainMap(x, y, {0: {(0, 0): m}})
        j = node
        tji = cfg.t(j, i)
        cpar = cfg.bubble_param(i, lam)
        pref = (tji ** li / cpar if orient == "cw"
                else tji ** (-li) * cpar)
        vij = cfg.v(i, j)
        jbase = (cfg.lam(mu, j) - 1 if orient == "cw"
                 else -cfg.lam(mu, j) - 1)
        ibase = (cfg.lam(mu, i) - 1 if orient == "cw"
                 else -cfg.lam(mu, i) - 1)
        total = None
        for h in range(alpha + 1):
            coeff = pref * (-vij) ** (-h)
            m = self._mor(src,
                          ((Bubble(j, orient, jbase + alpha - h), 0),
                           (Bubble(i, orient, ibase + h), 0)),
                          tgt, coeff)
            total = m if total is None else total + m
        if total is None:
            return ChainMap.zero(x, y)
        return ChainMap(x, y, {0: {(0, 0): total}})
