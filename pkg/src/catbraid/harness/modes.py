"""Which relation cases close on the nose and which need a homotopy.

The assignment is by class pattern relative to the functor node.  A value
of ``None`` means the images agree degreewise; a string names a builder in
:mod:`catbraid.harness.homotopies`; ``"solve"`` means no explicit witness
is registered and the exact search is used directly.
"""

from .cases import classify


def _classes(config, i, labels):
    word, pair_sig = classify(config, i, labels)
    base = tuple(c[0] for c in word)          # strip primes
    return word, base, pair_sig


def is_report_only(config, i, rel, labels):
    """The one case outside the default guarantee: the adjacent-pair
    triple-composite correction on a 3-cycle graph (both outer labels a
    neighbour of the functor node and adjacent to each other)."""
    if rel != "cubic-KLR":
        return False
    word, base, pair_sig = _classes(config, i, labels)
    if base != ("j", "j", "j"):
        return False
    x, y, z = labels
    return x == z and y != x and config.pair(x, y) == -1


def homotopy_key(config, i, rel, labels, variant):
    """None for an on-the-nose variant, otherwise a registry key."""
    word, base, pair_sig = _classes(config, i, labels)
    x = labels[0]

    if rel == "quad-KLR":
        if base == ("i", "j"):
            return "quad_ij"
        if base == ("j", "i"):
            return "quad_ji"
        return None

    if rel == "dot-slide":
        if base == ("i", "j") and variant == "leg0":
            return "dotslide_ij_leg0"
        if base == ("j", "j") and labels[0] == labels[1]:
            return "dotslide_jj_leg0" if variant == "leg0" else "solve"
        return None

    if rel == "cubic-KLR":
        a, b, c = labels
        if base == ("i", "j", "i"):
            return "cubic_iji"
        if base == ("j", "k", "j") and a == c and config.pair(a, b) == -1:
            return "cubic_jkj"
        if base == ("j", "i", "j"):
            return "cubic_jij"
        if base == ("j", "j", "j") and a == c and b != a:
            if config.pair(a, b) == 0:
                return "cubic_jjj0"
            return "solve"              # 3-cycle graph, report-only case
        return None

    if rel == "mixed-EF":
        if base in (("i", "j"), ("j", "i")):
            return f"mixedEF_{''.join(base)}_{variant}"
        if base == ("j", "j"):
            # covered by the extended loop proposition with a zero
            # same-label correction term
            return "extsl2_jj_EF" if variant == "EF" else "extsl2_jj_FE"
        return None

    if rel == "ext-sl2":
        if base == ("j",):
            return "extsl2_jj_EF" if variant == "EF" else "extsl2_jj_FE"
        return None

    return None
