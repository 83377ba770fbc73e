"""Enumeration of relation-preservation cases for a chosen functor node.

Labels are classified relative to the functor node ``i``: the node itself
is class ``i``; neighbours (pairing -1) are class ``j``; all other nodes
are class ``k``.  Distinct nodes of the same class get primes, and the
mutual pairings among the non-``i`` labels refine the pattern.  One
representative node tuple is kept per pattern.
"""

import itertools
from dataclasses import dataclass, field

from ..cartan import Weight

_ARITY = {
    "adjunction": 1, "dot-cyc": 1, "bubble": 1, "ext-sl2": 1, "curl": 1,
    "grassmannian": 1, "cross-cyc": 2, "quad-KLR": 2, "dot-slide": 2,
    "mixed-EF": 2, "cubic-KLR": 3, "triple": 3,
}


def classify(config, i, labels):
    """(class word, mutual pairing signature) of a label tuple."""
    word = []
    names = {}
    counters = {"j": 0, "k": 0}
    for l in labels:
        if l == i:
            word.append("i")
            continue
        c = "j" if config.pair(i, l) == -1 else "k"
        if l not in names:
            names[l] = c + "'" * counters[c]
            counters[c] += 1
        word.append(names[l])
    distinct = [l for l in dict.fromkeys(labels) if l != i]
    pair_sig = tuple(config.pair(a, b)
                     for n, a in enumerate(distinct)
                     for b in distinct[n + 1:])
    return tuple(word), pair_sig


def pattern_string(word, pair_sig):
    s = "".join(word)
    if pair_sig:
        s += "|" + ",".join(str(p) for p in pair_sig)
    return s


@dataclass(frozen=True)
class RelationCase:
    relation: str
    node: object                 # the functor node i
    labels: tuple                # representative node labels
    pattern: str
    weight: Weight
    report_only: bool = False

    @property
    def case_id(self):
        lam = ",".join(str(x) for x in self.weight.pairings)
        lab = ",".join(str(l) for l in self.labels)
        return f"{self.relation}[{lab}]@({lam})"


def _admissible(rel, labels):
    if rel == "mixed-EF" and labels[0] == labels[1]:
        return False        # same-label case lives under ext-sl2
    if rel == "triple" and len(set(labels)) == 1:
        return False        # all-equal case is the cubic correction
    return True


def patterns(config, i, relation):
    """Representative label tuples, one per pattern, in a stable order."""
    arity = _ARITY[relation]
    nodes = sorted(config.nodes, key=str)
    out = {}
    for labels in itertools.product(nodes, repeat=arity):
        if not _admissible(relation, labels):
            continue
        sig = classify(config, i, labels)
        if sig not in out:
            out[sig] = labels
    return [(pattern_string(*sig), labels)
            for sig, labels in sorted(out.items(),
                                      key=lambda kv: pattern_string(*kv[0]))]


def expected_case_count(config, i, relation):
    """Pattern count, recomputed from the pairing matrix alone.

    Works over abstract class sequences extended one position at a time:
    a partial pattern is a sequence of (class, which-previous-label-or-new)
    choices plus the pairings of each new label with all previous ones.  A
    pattern is counted when some assignment of actual nodes realizes it.
    """
    arity = _ARITY[relation]
    nodes = sorted(config.nodes, key=str)

    def extend(assignments):
        out = []
        seen = set()
        for used in assignments:
            for n in nodes:
                key = _abstract_key(config, i, used + (n,))
                if key not in seen:
                    seen.add(key)
                    out.append(used + (n,))
        return out

    assignments = [()]
    for _ in range(arity):
        assignments = extend(assignments)
    return sum(1 for a in assignments if _admissible(relation, a))


def _abstract_key(config, i, labels):
    word = []
    order = {}
    for l in labels:
        if l == i:
            word.append(("i",))
            continue
        if l not in order:
            order[l] = len(order)
        word.append(("j" if config.pair(i, l) == -1 else "k", order[l]))
    distinct = [l for l in dict.fromkeys(labels) if l != i]
    mat = tuple(config.pair(a, b)
                for n, a in enumerate(distinct) for b in distinct[n + 1:])
    return tuple(word), mat


def weight_box(config, bound):
    for tup in itertools.product(range(-bound, bound + 1),
                                 repeat=len(config.nodes)):
        yield Weight(tup)


def enumerate_cases(config, i, relations=None, bound=2,
                    include_report_only=False):
    from .modes import is_report_only
    rels = relations or sorted(_ARITY)
    out = []
    for rel in rels:
        for pattern, labels in patterns(config, i, rel):
            report_only = is_report_only(config, i, rel, labels)
            if report_only and not include_report_only:
                continue
            for lam in weight_box(config, bound):
                out.append(RelationCase(rel, i, labels, pattern, lam,
                                        report_only))
    return out
