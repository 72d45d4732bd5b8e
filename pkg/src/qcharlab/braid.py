"""Braid-group operators on l-weight monomials and on dimension vectors.

The single source of truth is the generator rule

    S_i(Y_{j,x}) = Y_{j,x} * A_{i, x - d_i}^{-delta_ij}

extended multiplicatively; see :mod:`qcharlab.conventions` for why the shift
is downward.  Everything else (the A-level action, the closed form on
dimension vectors) is a derived consequence, asserted by tests.
"""

from __future__ import annotations

import random

from .lweights import AMonomialVector, LaurentMonomial, a_monomial_inverse


def apply_s(datum, i, monomial):
    """S_i: multiply by A_{i, b - d_i}^{-u} for each Y_{i,b}^{u} factor."""
    di = datum.di(i)
    out = monomial
    for b, u in monomial.node_exponents(i).items():
        out = out * a_monomial_inverse(datum, i, b - di) ** u
    return out


def apply_s_inverse(datum, i, monomial):
    """Two-sided inverse of S_i: the shift goes up instead of down."""
    di = datum.di(i)
    out = monomial
    for b, u in monomial.node_exponents(i).items():
        out = out * a_monomial_inverse(datum, i, b + di) ** u
    return out


def apply_s_word(datum, word, monomial):
    """S_w for w = s_{i_t} ... s_{i_1} and word (i_1, ..., i_t): i_1 acts first."""
    for i in word:
        monomial = apply_s(datum, i, monomial)
    return monomial


def apply_s_word_inverse(datum, word, monomial):
    """Inverse of :func:`apply_s_word`: S_{i_t}^{-1} acts first."""
    for i in reversed(word):
        monomial = apply_s_inverse(datum, i, monomial)
    return monomial


def reflect_dimensions(datum, i, v, w):
    """Closed form of the induced action on dimension vectors.

    Entries away from node i are untouched;

        vbar_i^a = w_i^{a+d_i} - v_i^{a+d_ii}
                   + sum_{j ~ i} sum_{t=1}^{-c_ij} v_j^{a + d_ij + t*d_ii}

    ``v`` and ``w`` are plain dicts (node, param) -> int; the framing ``w``
    stays fixed (for an anchor Y_{k,0} it is the unit at (k, 0)).
    """
    di = datum.di(i)
    dii = 2 * di
    out = {key: mult for key, mult in v.items() if key[0] != i}

    positions = set()
    for (node, param), mult in w.items():
        if node == i and mult:
            positions.add(param - di)
    for (node, param), mult in v.items():
        if not mult:
            continue
        if node == i:
            positions.add(param - dii)
        elif datum.c(i, node) != 0:
            dij = datum.b(i, node)
            for t in range(1, -datum.c(i, node) + 1):
                positions.add(param - dij - t * dii)

    for a in positions:
        value = w.get((i, a + di), 0) - v.get((i, a + dii), 0)
        for j in datum.neighbors(i):
            dij = datum.b(i, j)
            for t in range(1, -datum.c(i, j) + 1):
                value += v.get((j, a + dij + t * dii), 0)
        if value:
            out[(i, a)] = value
    return out


def unit_framing(k):
    """The framing of the fundamental anchor Y_{k,0}."""
    return {(k, 0): 1}


def apply_s_on_v(datum, i, vec, framing):
    """S_i on an anchored A-monomial vector, for a fixed framing."""
    new = reflect_dimensions(datum, i, vec.as_dict(), dict(framing))
    return AMonomialVector(vec.anchor, new)


def random_monomial(datum, rng, max_terms=4, param_range=6, max_exp=3):
    """A random sparse monomial, for property checks."""
    exps = {}
    for _ in range(rng.randint(0, max_terms)):
        node = rng.randint(1, datum.rank)
        param = rng.randint(-param_range, param_range)
        exp = rng.choice([e for e in range(-max_exp, max_exp + 1) if e])
        exps[(node, param)] = exps.get((node, param), 0) + exp
    return LaurentMonomial(exps)


def braid_relation_check(datum, i, j, sample_count, seed=0):
    """True iff the m_ij-fold alternating products of S_i, S_j agree on samples."""
    if i == j:
        raise ValueError("braid relations concern distinct nodes")
    m = datum.m[i - 1][j - 1]
    word_a = tuple(i if t % 2 == 0 else j for t in range(m))
    word_b = tuple(j if t % 2 == 0 else i for t in range(m))
    rng = random.Random(seed)
    for _ in range(sample_count):
        monomial = random_monomial(datum, rng)
        if apply_s_word(datum, word_a, monomial) != apply_s_word(
            datum, word_b, monomial
        ):
            return False
    return True
