"""Verifier for the extremal-cone bound on q-character monomials.

Every monomial of a fundamental q-character, pushed through the braid action
along any Weyl element, must stay inside the nonnegative cone; the cone
vertices are the images of the anchor under the inverse operators.  The
verifier never trusts braid well-definedness: for small groups each element
is re-checked with a second reduced word when one exists.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .braid import apply_s_word_inverse, reflect_dimensions, unit_framing
from .cartan import DEFAULT_WEYL_CAP, fundamental_weight, weight_orbit, weyl_elements
from .lweights import LaurentMonomial, factor_to_a
from .qchar import fm_qchar


def cone_membership(vec):
    """True iff every entry of the A-monomial vector is nonnegative."""
    return vec.in_cone()


@dataclass(frozen=True)
class ConeViolation:
    word: tuple
    vector: object
    image: object
    positions: tuple


@dataclass
class ExtremalReport:
    word: tuple
    checked: int
    violations: list

    @property
    def ok(self):
        return not self.violations


def _push_dims(datum, word, dims, framing):
    for i in word:
        dims = reflect_dimensions(datum, i, dims, framing)
    return dims


def extremal_check(datum, qchar, element, framing=None):
    """Push every q-character monomial through S_w and record cone exits."""
    if framing is None:
        framing = unit_framing(qchar.anchor)
    violations = []
    for vec in qchar.entries:
        image = _push_dims(datum, element.word, vec.as_dict(), framing)
        bad = tuple(sorted(pos for pos, mult in image.items() if mult < 0))
        if bad:
            violations.append(
                ConeViolation(
                    word=element.word,
                    vector=vec,
                    image=tuple(sorted(image.items())),
                    positions=bad,
                )
            )
    return ExtremalReport(
        word=element.word, checked=len(qchar.entries), violations=violations
    )


def _second_reduced_word(elements_by_matrix, element, datum):
    """A reduced word for the same element ending in a different letter, if any."""
    from .cartan import _mat_mul, simple_reflection_matrix

    if not element.word:
        return None
    for g in datum.nodes:
        if g == element.word[-1]:
            continue
        shorter = _mat_mul(simple_reflection_matrix(datum, g), element.matrix)
        candidate = elements_by_matrix.get(shorter)
        if candidate is not None and candidate.length == element.length - 1:
            return candidate.word + (g,)
    return None


@dataclass
class TheoremSummary:
    label: str
    node: int
    monomial_count: int
    group_order: int
    checks: int
    violations: list
    word_mismatches: int
    simple_reflection_violations: int
    longest_element_violations: int
    elapsed: float = field(default=0.0)

    @property
    def ok(self):
        return not self.violations and self.word_mismatches == 0

    def to_json_obj(self):
        return {
            "type": self.label,
            "node": self.node,
            "monomials": self.monomial_count,
            "group_order": self.group_order,
            "checks": self.checks,
            "violations": [
                {
                    "word": list(v.word),
                    "vector": [[i, a, m] for (i, a), m in v.vector.items()],
                    "image": [[i, a, m] for (i, a), m in v.image],
                    "positions": [list(p) for p in v.positions],
                }
                for v in self.violations
            ],
            "word_mismatches": self.word_mismatches,
            "proven_subcases": {
                "simple_reflections": self.simple_reflection_violations,
                "longest_element": self.longest_element_violations,
            },
        }


def verify_theorem_main(datum, node, weyl_cap=DEFAULT_WEYL_CAP, recheck_limit=48):
    """Run the cone check for every Weyl element against one fundamental module.

    The rank-one reflections and the longest element are tallied separately
    (those instances carry independent proofs and anchor the conventions).
    For groups of order <= ``recheck_limit`` each element is recomputed with
    a second reduced word; any disagreement counts as a word mismatch.
    """
    start = time.perf_counter()
    qchar = fm_qchar(datum, node)
    elements = weyl_elements(datum, weyl_cap)
    framing = unit_framing(node)
    by_matrix = {e.matrix: e for e in elements}
    longest = max(elements, key=lambda e: e.length)

    violations = []
    word_mismatches = 0
    simple_bad = 0
    longest_bad = 0
    checks = 0
    do_recheck = len(elements) <= recheck_limit
    for element in elements:
        alt_word = (
            _second_reduced_word(by_matrix, element, datum) if do_recheck else None
        )
        for vec in qchar.entries:
            checks += 1
            image = _push_dims(datum, element.word, vec.as_dict(), framing)
            bad = tuple(sorted(pos for pos, mult in image.items() if mult < 0))
            if bad:
                violations.append(
                    ConeViolation(
                        word=element.word,
                        vector=vec,
                        image=tuple(sorted(image.items())),
                        positions=bad,
                    )
                )
                if element.length == 1:
                    simple_bad += 1
                if element is longest:
                    longest_bad += 1
            if alt_word is not None:
                other = _push_dims(datum, alt_word, vec.as_dict(), framing)
                if other != image:
                    word_mismatches += 1
    return TheoremSummary(
        label=datum.label,
        node=node,
        monomial_count=qchar.monomial_count(),
        group_order=len(elements),
        checks=checks,
        violations=violations,
        word_mismatches=word_mismatches,
        simple_reflection_violations=simple_bad,
        longest_element_violations=longest_bad,
        elapsed=time.perf_counter() - start,
    )


def cone_vertices(datum, node, weyl_cap=DEFAULT_WEYL_CAP):
    """The vertex S_w^{-1}(anchor) of each Weyl cone, as an A-monomial vector.

    Propagates NotFactorable, which would indicate convention breakage: the
    inverse-braid images of the anchor always factor.
    """
    anchor = LaurentMonomial.y(node, 0)
    out = {}
    for element in weyl_elements(datum, weyl_cap):
        image = apply_s_word_inverse(datum, element.word, anchor)
        out[element] = factor_to_a(datum, node, image)
    return out


def vertex_orbit_size(datum, node):
    """|W . omega_k|, the expected number of distinct cone vertices."""
    return len(weight_orbit(datum, fundamental_weight(datum, node)))
