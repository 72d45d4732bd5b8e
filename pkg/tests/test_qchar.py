import json
import random

import pytest

from qcharlab.cartan import build_cartan, reflect_weight
from qcharlab.errors import CapExceeded
from qcharlab.lweights import AMonomialVector, LaurentMonomial
from qcharlab.qchar import (
    QChar,
    classical_character,
    fm_qchar,
    i_dominant,
    sl2_expansion,
)

Y = LaurentMonomial.y


def vec(anchor, *entries):
    return AMonomialVector(anchor, {(i, a): m for i, a, m in entries})


# ---------------------------------------------------------------------------
# dominance and the rank-one generator


def test_i_dominant():
    datum = build_cartan("A2")
    assert i_dominant(datum, Y(1, 0), 1)
    assert not i_dominant(datum, Y(1, 2, -1), 1)
    assert i_dominant(datum, Y(1, 2, -1) * Y(2, 1), 2)
    assert i_dominant(datum, Y(2, 1), 1)  # empty i-part counts as dominant


def test_sl2_expansion_singleton():
    assert sl2_expansion(1, {0: 1}) == [({}, 1), ({1: 1}, 1)]


def test_sl2_expansion_empty():
    assert sl2_expansion(1, {}) == [({}, 1)]


def test_sl2_expansion_string_of_two():
    terms = sl2_expansion(1, {0: 1, 2: 1})
    assert sorted(terms, key=lambda t: sorted(t[0].items())) == [
        ({}, 1),
        ({1: 1, 3: 1}, 1),
        ({3: 1}, 1),
    ]


def test_sl2_expansion_repeated_parameter():
    # {0,0} splits into two singleton strings; the middle term collides
    terms = dict()
    for pattern, mult in sl2_expansion(1, {0: 2}):
        terms[tuple(sorted(pattern.items()))] = mult
    assert terms == {(): 1, ((1, 1),): 2, ((1, 2),): 1}


def test_sl2_expansion_respects_step():
    # with d_i = 2 the string step is 4 and the lowering parameters shift by 2
    assert sl2_expansion(2, {0: 1}) == [({}, 1), ({2: 1}, 1)]
    terms = sl2_expansion(2, {0: 1, 4: 1})
    assert ({6: 1, 2: 1}, 1) in terms and len(terms) == 3


def test_sl2_expansion_rejects_negative_multiplicities():
    with pytest.raises(ValueError):
        sl2_expansion(1, {0: -1})


# ---------------------------------------------------------------------------
# the closure on fundamental modules


def test_a1_fundamental_exact():
    datum = build_cartan("A1")
    q = fm_qchar(datum, 1)
    assert q.entries == {vec(1): 1, vec(1, (1, 1, 1)): 1}


def test_a2_fundamental_exact():
    datum = build_cartan("A2")
    q = fm_qchar(datum, 1)
    assert q.entries == {
        vec(1): 1,
        vec(1, (1, 1, 1)): 1,
        vec(1, (1, 1, 1), (2, 2, 1)): 1,
    }


def test_bad_node_rejected():
    with pytest.raises(ValueError):
        fm_qchar(build_cartan("A2"), 3)


def test_caps_are_hard_errors():
    datum = build_cartan("B2")
    with pytest.raises(CapExceeded) as info:
        fm_qchar(datum, 2, max_monomials=2)
    assert info.value.diagnostics["monomials"] >= 2
    with pytest.raises(CapExceeded):
        fm_qchar(datum, 2, max_height=1)


@pytest.mark.parametrize(
    "label,node,size",
    [("B2", 1, 4), ("B2", 2, 5), ("C2", 1, 5), ("C2", 2, 4),
     ("G2", 1, 7), ("G2", 2, 15), ("A3", 2, 6)],
)
def test_known_sizes(label, node, size):
    q = fm_qchar(build_cartan(label), node)
    assert q.monomial_count() == size
    assert q.total_multiplicity() == size


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "C2", "B3", "C3", "G2", "D4"])
def test_structural_invariants(label):
    datum = build_cartan(label)
    for node in datum.nodes:
        q = fm_qchar(datum, node)
        assert q.multiplicity(AMonomialVector(node)) == 1
        for v, mu in q.entries.items():
            assert mu >= 1
            assert v.in_cone()
        # Weyl invariance of the restricted character
        character = classical_character(q)
        for i in datum.nodes:
            reflected = {
                reflect_weight(datum, i, weight): mult
                for weight, mult in character.items()
            }
            assert reflected == character


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_connectedness(label):
    # every non-anchor monomial is one lowering step above another member
    datum = build_cartan(label)
    for node in datum.nodes:
        q = fm_qchar(datum, node)
        for v in q.entries:
            if v.height() == 0:
                continue
            parents = []
            for (i, a), mult in v.items():
                if mult > 0:
                    parent = v.add_entries({(i, a): -1})
                    if parent in q.entries:
                        parents.append(parent)
            assert parents, (label, node, v)


@pytest.mark.parametrize("label", ["A4", "B4", "C4", "D4", "F4"])
def test_rank_four_terminates_within_default_caps(label):
    datum = build_cartan(label)
    for node in datum.nodes:
        q = fm_qchar(datum, node)
        assert q.monomial_count() >= 1


def test_d4_adjoint_slot_carries_multiplicity_two():
    q = fm_qchar(build_cartan("D4"), 2)
    assert q.total_multiplicity() == q.monomial_count() + 1
    assert max(q.entries.values()) == 2


def test_shuffled_processing_order_is_irrelevant():
    for label, node in [("B2", 2), ("G2", 2), ("C3", 2)]:
        datum = build_cartan(label)
        reference = fm_qchar(datum, node)
        for seed in range(3):
            shuffled = fm_qchar(datum, node, shuffle_rng=random.Random(seed))
            assert shuffled.entries == reference.entries


def test_classical_character_examples():
    a1 = build_cartan("A1")
    assert classical_character(fm_qchar(a1, 1)) == {(1,): 1, (-1,): 1}
    a2 = build_cartan("A2")
    assert classical_character(fm_qchar(a2, 1)) == {
        (1, 0): 1,
        (-1, 1): 1,
        (0, -1): 1,
    }


def test_g2_adjoint_has_a_multiplicity_two_weight():
    # the long-node module of G2 restricts with a two-dimensional zero weight
    q = fm_qchar(build_cartan("G2"), 2)
    character = classical_character(q)
    assert character[(0, 0)] == 3  # adjoint zero space (2) plus the trivial summand


def test_json_round_trip_and_sorting():
    datum = build_cartan("B2")
    q = fm_qchar(datum, 2)
    obj = json.loads(json.dumps(q.to_json_obj()))
    assert obj["type"] == "B2" and obj["node"] == 2
    heights = [sum(m for _, _, m in entry["v"]) for entry in obj["entries"]]
    assert heights == sorted(heights)
    assert QChar.from_json_obj(datum, obj) == q
