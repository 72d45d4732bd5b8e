"""Iterative closure computing q-characters of fundamental modules.

Monomials are stored as anchored A-monomial vectors; Y-expansions are derived
on demand.  The closure processes monomials in increasing A-height (sum of
the vector entries), expanding every node direction in which the monomial is
dominant through the rank-one string decomposition below.  Within a height
class the processing order is irrelevant, which the determinism tests check
by shuffling it.
"""

from __future__ import annotations

from .conventions import CONVENTIONS_VERSION
from .errors import CapExceeded
from .lweights import AMonomialVector, classical_weight, expand_to_y

DEFAULT_MAX_MONOMIALS = 200000
DEFAULT_MAX_HEIGHT = 64


def i_dominant(datum, monomial, i):
    """True iff every Y_{i,.} exponent of the monomial is nonnegative."""
    return all(e >= 0 for e in monomial.node_exponents(i).values())


def sl2_expansion(d_i, multiset):
    """Rank-one character generator.

    ``multiset`` maps spectral parameters to positive multiplicities.  It is
    decomposed greedily (ascending) into maximal strings
    {b, b+2d_i, ..., b+2(l-1)d_i}; a string of length l contributes the l+1
    exponent patterns picking up A_{p + d_i}^{-1} factors from the top of the
    string downward.  The full output is the distributive product over
    strings, multiplicities added when patterns collide.  The empty pattern
    (the top term) is always present with multiplicity 1.
    """
    counts = {p: m for p, m in multiset.items() if m}
    if any(m < 0 for m in counts.values()):
        raise ValueError("multiset multiplicities must be positive")
    strings = []
    while counts:
        b = min(counts)
        string = []
        p = b
        while counts.get(p, 0) > 0:
            counts[p] -= 1
            if not counts[p]:
                del counts[p]
            string.append(p)
            p += 2 * d_i
        strings.append(string)

    # terms of one string: r = 0..l, picking the top r lowering positions
    def string_terms(string):
        length = len(string)
        terms = []
        for r in range(length + 1):
            pattern = {}
            for t in range(1, r + 1):
                pos = string[length - t] + d_i
                pattern[pos] = pattern.get(pos, 0) + 1
            terms.append(pattern)
        return terms

    result = {(): 1}
    for string in strings:
        new = {}
        for key, mult in result.items():
            base = dict(key)
            for pattern in string_terms(string):
                combined = dict(base)
                for pos, e in pattern.items():
                    combined[pos] = combined.get(pos, 0) + e
                ckey = tuple(sorted(combined.items()))
                new[ckey] = new.get(ckey, 0) + mult
        result = new
    return sorted(
        ((dict(key), mult) for key, mult in result.items()),
        key=lambda item: sorted(item[0].items()),
    )


class QChar:
    """A q-character: anchor node plus multiplicities over A-monomial vectors."""

    def __init__(self, datum, anchor, entries):
        self.datum = datum
        self.anchor = anchor
        self.entries = dict(entries)

    def multiplicity(self, vec):
        return self.entries.get(vec, 0)

    def monomial_count(self):
        return len(self.entries)

    def total_multiplicity(self):
        return sum(self.entries.values())

    def max_height(self):
        return max(vec.height() for vec in self.entries)

    def sorted_entries(self):
        return sorted(
            self.entries.items(), key=lambda kv: (kv[0].height(), kv[0].items())
        )

    def __eq__(self, other):
        return (
            isinstance(other, QChar)
            and self.datum.label == other.datum.label
            and self.anchor == other.anchor
            and self.entries == other.entries
        )

    def __repr__(self):
        return (
            f"QChar({self.datum.label}, node {self.anchor}, "
            f"{self.monomial_count()} monomials)"
        )

    def to_json_obj(self):
        return {
            "conventions": CONVENTIONS_VERSION,
            "type": self.datum.label,
            "node": self.anchor,
            "entries": [
                {"v": [[i, a, m] for (i, a), m in vec.items()], "mu": mu}
                for vec, mu in self.sorted_entries()
            ],
        }

    @classmethod
    def from_json_obj(cls, datum, obj):
        entries = {}
        for item in obj["entries"]:
            vec = AMonomialVector(
                int(obj["node"]), {(int(i), int(a)): int(m) for i, a, m in item["v"]}
            )
            entries[vec] = int(item["mu"])
        return cls(datum, int(obj["node"]), entries)


def fm_qchar(
    datum,
    node,
    max_monomials=DEFAULT_MAX_MONOMIALS,
    max_height=DEFAULT_MAX_HEIGHT,
    shuffle_rng=None,
):
    """q-character of the fundamental module anchored at Y_{node,0}.

    Fixpoint of the dominance closure: each monomial, processed once its
    height class is reached, contributes its rank-one expansion in every
    dominant direction; a generated monomial accumulates mu(source) * c per
    direction and its own multiplicity is the max over directions.  Caps are
    hard errors (a truncated character would corrupt downstream checks).
    """
    if node not in datum.nodes:
        raise ValueError(f"node {node} not in {datum.label}")
    anchor_vec = AMonomialVector(node)
    entries = {}
    # pending: vector -> {direction: accumulated requirement}
    pending = {anchor_vec: {0: 1}}
    height = 0
    while pending:
        if height > max_height:
            raise CapExceeded(
                f"height cap {max_height} exceeded computing {datum.label} "
                f"node {node} ({len(entries)} monomials so far)",
                monomials=len(entries),
                height=height,
            )
        bucket = [vec for vec in pending if vec.height() == height]
        bucket.sort(key=lambda vec: vec.items())
        if shuffle_rng is not None:
            shuffle_rng.shuffle(bucket)
        for vec in bucket:
            mu = max(pending.pop(vec).values())
            entries[vec] = mu
            if len(entries) > max_monomials:
                raise CapExceeded(
                    f"monomial cap {max_monomials} exceeded computing "
                    f"{datum.label} node {node} at height {height}",
                    monomials=len(entries),
                    height=height,
                )
            monomial = expand_to_y(datum, vec)
            for i in datum.nodes:
                part = monomial.node_exponents(i)
                if not part or any(e < 0 for e in part.values()):
                    continue
                for pattern, coeff in sl2_expansion(datum.di(i), part):
                    if not pattern:
                        continue  # the top term regenerates vec itself
                    target = vec.add_entries(
                        {(i, p): r for p, r in pattern.items()}
                    )
                    slot = pending.setdefault(target, {})
                    slot[i] = slot.get(i, 0) + mu * coeff
        height += 1
    return QChar(datum, node, entries)


def classical_character(qchar):
    """Pushforward of the multiplicities along the classical-weight shadow."""
    datum = qchar.datum
    out = {}
    for vec, mu in qchar.entries.items():
        weight = classical_weight(datum, expand_to_y(datum, vec))
        out[weight] = out.get(weight, 0) + mu
    return out
