"""Simply-laced Cartan data, weights, reflections, and bubble parameters.

A :class:`CartanConfig` carries the node set I with its symmetric pairing
(i.i = 2, i.j in {0, -1} off the diagonal), the invertible scalars t_ij, and
seeds for the bubble parameters c_{i,lam}, one per coset of the root lattice.
Weights are represented by their coroot-pairing vectors (lam_i)_{i in I}; this
is the only weight data any formula in the calculus consumes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class Weight:
    """A weight, stored as its tuple of coroot pairings (lam_i)."""

    pairings: tuple

    def __getitem__(self, idx):
        return self.pairings[idx]

    def __len__(self):
        return len(self.pairings)

    def __neg__(self):
        return Weight(tuple(-x for x in self.pairings))

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.pairings, other.pairings)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.pairings, other.pairings)))

    def __repr__(self):
        return f"Weight{self.pairings}"


class CartanConfig:
    """Simply-laced Cartan datum + scalar choice + bubble-parameter seeds.

    Immutable after construction; share freely.

    INPUT:
    - ``nodes``: ordered list of hashable node labels.
    - ``pairing``: dict {(i, j): integer} or full symmetric matrix (list of
      lists) with 2 on the diagonal and 0/-1 off it.
    - ``scalars``: dict {(i, j): Fraction} of the t_ij; missing entries
      default to 1.  t_ii is forced to 1; t_ij = t_ji is forced when i.j = 0.
    - ``bubble_seeds``: dict {(i, coset key): Fraction} or a list of
      (i, representative-weight-pairings, value) triples.
    - ``strict_seeds``: if True, looking up a bubble parameter in a coset
      without a registered seed is an error instead of defaulting to 1.
    """

    def __init__(self, nodes, pairing, scalars=None, bubble_seeds=None,
                 strict_seeds=False, name=None):
        self.nodes = tuple(nodes)
        self.index = {n: a for a, n in enumerate(self.nodes)}
        n = len(self.nodes)
        mat = [[0] * n for _ in range(n)]
        if isinstance(pairing, dict):
            for (i, j), v in pairing.items():
                mat[self.index[i]][self.index[j]] = v
                mat[self.index[j]][self.index[i]] = v
        else:
            for a in range(n):
                for b in range(n):
                    mat[a][b] = pairing[a][b]
        for a in range(n):
            if mat[a][a] != 2:
                raise ValueError("pairing must have i.i = 2 on the diagonal")
            for b in range(n):
                if a != b and mat[a][b] not in (0, -1):
                    raise ValueError("off-diagonal pairings must be 0 or -1")
                if mat[a][b] != mat[b][a]:
                    raise ValueError("pairing must be symmetric")
        self.mat = tuple(tuple(row) for row in mat)
        self.name = name or "custom"

        t = {}
        scalars = scalars or {}
        for (i, j), v in scalars.items():
            t[(i, j)] = Fraction(v)
        for i in self.nodes:
            t[(i, i)] = Fraction(1)
            for j in self.nodes:
                t.setdefault((i, j), Fraction(1))
        for i in self.nodes:
            for j in self.nodes:
                if i != j and self.pair(i, j) == 0 and t[(i, j)] != t[(j, i)]:
                    raise ValueError("t_ij must equal t_ji when i.j = 0")
                if t[(i, j)] == 0:
                    raise ValueError("t_ij must be nonzero")
        self.scalars = t
        self.strict_seeds = strict_seeds

        self._snf = _smith(self.mat)
        seeds = {}
        if bubble_seeds:
            items = bubble_seeds.items() if isinstance(bubble_seeds, dict) else bubble_seeds
            for entry in items:
                if isinstance(bubble_seeds, dict):
                    (i, key), v = entry
                    seeds[(i, tuple(key))] = Fraction(v)
                else:
                    i, rep, v = entry
                    seeds[(i, self.coset_key(Weight(tuple(rep))))] = Fraction(v)
        self.bubble_seeds = seeds

    # -- basic datum -----------------------------------------------------

    def pair(self, i, j):
        """The symmetric pairing i.j."""
        return self.mat[self.index[i]][self.index[j]]

    def root(self, j):
        """Simple root alpha_j in pairing coordinates: (i.j)_i."""
        b = self.index[j]
        return Weight(tuple(self.mat[a][b] for a in range(len(self.nodes))))

    def weight(self, *pairings):
        if len(pairings) == 1 and isinstance(pairings[0], (tuple, list)):
            pairings = tuple(pairings[0])
        if len(pairings) != len(self.nodes):
            raise ValueError("weight length must match the node count")
        return Weight(tuple(int(x) for x in pairings))

    def lam(self, w, i):
        """Coroot pairing lam_i = <h_i, lam>."""
        return w.pairings[self.index[i]]

    def reflect(self, i, w):
        """Simple reflection s_i(lam) = lam - lam_i alpha_i."""
        if i not in self.index:
            raise KeyError(f"unknown node {i!r}")
        li = self.lam(w, i)
        root = self.root(i)
        return Weight(tuple(a - li * b for a, b in zip(w.pairings, root.pairings)))

    # -- scalars -----------------------------------------------------------

    def t(self, i, j):
        return self.scalars[(i, j)]

    def v(self, i, j):
        """v_ij = t_ij^-1 t_ji."""
        return self.scalars[(j, i)] / self.scalars[(i, j)]

    # -- bubble parameters ---------------------------------------------

    def coset_key(self, w):
        """A canonical key for the root-lattice coset of ``w``.

        Computed through the Smith normal form U*C*V = S of the pairing
        matrix C: the key is (U w) reduced mod the elementary divisors.
        """
        U, S, _V = self._snf
        y = _matvec(U, w.pairings)
        key = []
        for a, s in enumerate(S):
            key.append(y[a] % s if s != 0 else y[a])
        return tuple(key)

    def _root_coordinates(self, w):
        """Solve w - rep(coset) = C n; returns n as a tuple, rep implicit."""
        U, S, V = self._snf
        y = _matvec(U, w.pairings)
        m = []
        for a, s in enumerate(S):
            if s != 0:
                m.append((y[a] - (y[a] % s)) // s)
            else:
                m.append(0)
        return tuple(_matvec(V, m))

    def bubble_param(self, i, w):
        """The bubble parameter c_{i,lam}, telescoped from the coset seed.

        c_{i,lam+alpha_j} = t_ij c_{i,lam}; in particular c is constant along
        i-strings (t_ii = 1), so the result is path-independent.
        """
        key = (i, self.coset_key(w))
        if key in self.bubble_seeds:
            seed = self.bubble_seeds[key]
        elif self.strict_seeds:
            raise KeyError(f"no bubble seed registered for node {i!r}, coset {key[1]}")
        else:
            seed = Fraction(1)
        value = seed
        for j, nj in zip(self.nodes, self._root_coordinates(w)):
            if nj:
                value *= self.scalars[(i, j)] ** nj
        return value

    # -- serialization ---------------------------------------------------

    def to_json(self):
        edges = []
        for a, i in enumerate(self.nodes):
            for b, j in enumerate(self.nodes):
                if a < b and self.pair(i, j) == -1:
                    edges.append([i, j])
        return {
            "name": self.name,
            "nodes": list(self.nodes),
            "edges": edges,
            "scalars": [[i, j, str(v)] for (i, j), v in sorted(self.scalars.items(),
                        key=lambda kv: (str(kv[0][0]), str(kv[0][1]))) if v != 1],
            "bubble_seeds": [[i, list(key), str(v)]
                             for (i, key), v in sorted(self.bubble_seeds.items(),
                             key=lambda kv: (str(kv[0][0]), kv[0][1]))],
        }

    @classmethod
    def from_json(cls, data, strict_seeds=False):
        nodes = [_node(n) for n in data["nodes"]]
        pairing = {}
        for i, j in data.get("edges", []):
            pairing[(_node(i), _node(j))] = -1
        for i in nodes:
            pairing[(i, i)] = 2
        scalars = {(_node(i), _node(j)): Fraction(v)
                   for i, j, v in data.get("scalars", [])}
        cfg = cls(nodes, pairing, scalars, strict_seeds=strict_seeds,
                  name=data.get("name"))
        seeds = {}
        for i, key, v in data.get("bubble_seeds", []):
            seeds[(_node(i), tuple(key))] = Fraction(v)
        cfg.bubble_seeds.update(seeds)
        return cfg

    @classmethod
    def load(cls, path, strict_seeds=False):
        with open(path) as fh:
            return cls.from_json(json.load(fh), strict_seeds=strict_seeds)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)

    def __repr__(self):
        return f"CartanConfig({self.name}: {len(self.nodes)} nodes)"


def _node(n):
    # JSON round-trips integer labels as ints, everything else as strings
    return n


def _matvec(M, v):
    return [sum(M[a][b] * v[b] for b in range(len(v))) for a in range(len(M))]


def _smith(mat):
    """Smith normal form with transforms: returns (U, diag(S), V) with U M V = S."""
    n = len(mat)
    A = [list(row) for row in mat]
    U = [[int(a == b) for b in range(n)] for a in range(n)]
    V = [[int(a == b) for b in range(n)] for a in range(n)]

    def row_op(a, b, k):  # row a += k * row b
        for c in range(n):
            A[a][c] += k * A[b][c]
            U[a][c] += k * U[b][c]

    def col_op(a, b, k):  # col a += k * col b
        for r in range(n):
            A[r][a] += k * A[r][b]
            V[r][a] += k * V[r][b]

    def row_swap(a, b):
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]

    def col_swap(a, b):
        for r in range(n):
            A[r][a], A[r][b] = A[r][b], A[r][a]
            V[r][a], V[r][b] = V[r][b], V[r][a]

    for t in range(n):
        # find a pivot
        pivot = None
        best = None
        for a in range(t, n):
            for b in range(t, n):
                if A[a][b] != 0 and (best is None or abs(A[a][b]) < best):
                    best = abs(A[a][b])
                    pivot = (a, b)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        done = False
        while not done:
            done = True
            for a in range(t + 1, n):
                if A[a][t] != 0:
                    row_op(a, t, -(A[a][t] // A[t][t]))
                    if A[a][t] != 0:
                        row_swap(t, a)
                        done = False
            for b in range(t + 1, n):
                if A[t][b] != 0:
                    col_op(b, t, -(A[t][b] // A[t][t]))
                    if A[t][b] != 0:
                        col_swap(t, b)
                        done = False
        if A[t][t] < 0:
            row_op(t, t, -2)
    S = [A[a][a] for a in range(n)]
    # divisibility chain is not needed by coset_key; skip the final shuffle
    return tuple(tuple(r) for r in U), tuple(S), tuple(tuple(r) for r in V)


# ---------------------------------------------------------------------------
# graph builders
# ---------------------------------------------------------------------------

def a_n(rank, scalars=None, **kw):
    """Type A path graph on nodes 1..rank."""
    nodes = list(range(1, rank + 1))
    pairing = {(i, i): 2 for i in nodes}
    for i in nodes[:-1]:
        pairing[(i, i + 1)] = -1
    return CartanConfig(nodes, pairing, scalars, name=f"A{rank}", **kw)


def d_n(rank, scalars=None, **kw):
    """Type D graph: path 1..rank-1 with node ``rank`` attached to rank-2.

    For rank 4 the central node 2 has the three pairwise non-adjacent
    neighbors 1, 3, 4.
    """
    if rank < 4:
        raise ValueError("type D needs rank >= 4")
    nodes = list(range(1, rank + 1))
    pairing = {(i, i): 2 for i in nodes}
    for i in range(1, rank - 1):
        pairing[(i, i + 1)] = -1
    pairing[(rank - 2, rank)] = -1
    return CartanConfig(nodes, pairing, scalars, name=f"D{rank}", **kw)


def a1(scalars=None, **kw):
    return CartanConfig([1], {(1, 1): 2}, scalars, name="A1", **kw)


def a1xa1(scalars=None, **kw):
    """Two disconnected nodes (the i.j = 0 adjacency case)."""
    return CartanConfig([1, 2], {(1, 1): 2, (2, 2): 2}, scalars, name="A1xA1", **kw)


def cycle3(scalars=None, **kw):
    """The 3-cycle graph (every pair of distinct nodes pairs to -1).

    Its "Cartan matrix" is singular; it only exists to realize the cubic
    relation pattern where the outer labels are distinct but adjacent.
    """
    nodes = [1, 2, 3]
    pairing = {(i, i): 2 for i in nodes}
    pairing[(1, 2)] = pairing[(2, 3)] = pairing[(1, 3)] = -1
    return CartanConfig(nodes, pairing, scalars, name="cycle3", **kw)


GRAPHS = {
    "A1": a1,
    "A1xA1": a1xa1,
    "A2": lambda **kw: a_n(2, **kw),
    "A3": lambda **kw: a_n(3, **kw),
    "D4": lambda **kw: d_n(4, **kw),
    "cycle3": cycle3,
}


@lru_cache(maxsize=None)
def builtin(name):
    """A shared immutable instance of one of the shipped graphs."""
    return GRAPHS[name]()
