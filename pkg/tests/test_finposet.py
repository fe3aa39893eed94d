from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

import oracles as O
from fgspace import fixtures as fx
from fgspace.errors import CapExceeded, EmptyPoset, InvalidBasis, NotAPartialOrder
from fgspace.finposet import (
    FinPoset,
    MonotoneMap,
    all_labeled_posets,
    build_poset_space,
    classify_poset,
    is_scott_continuous,
    monotone_maps,
    poset_to_fgcs,
    random_poset,
    regular_characterization,
    regular_poset,
    roundtrip_iso,
    way_below_matrix,
    way_below_poset,
)

# frozen from oracles.poset_flags; every fixture is also a dcpo, continuous and algebraic
FLAGS = {
    "CHAIN2": (True, True, True),
    "V": (False, True, True),
    "DIAMOND": (True, True, True),
    "M": (False, True, False),
    "2TOP": (False, False, False),
}
POSET_NAMES = tuple(FLAGS)


def _plain_labels(space, masks):
    return sorted(sorted(space.universe.elements(m)) for m in masks)


def test_labeled_poset_counts_match_oracle():
    got = [sum(1 for _ in all_labeled_posets(n)) for n in range(1, 5)]
    assert got == [1, 3, 19, 219]
    assert got == [O.count_partial_orders(n) for n in range(1, 5)]


def test_constructor_errors():
    with pytest.raises(EmptyPoset):
        FinPoset.from_pairs([], [])
    with pytest.raises(NotAPartialOrder):
        FinPoset.from_pairs(["a", "b"], [("a", "b"), ("b", "a")])
    u = fx.chain2().elements
    with pytest.raises(NotAPartialOrder):
        FinPoset(u, (0b01, 0b01))
    with pytest.raises(NotAPartialOrder):
        FinPoset(u, (0b01,))


def test_chain_structure():
    p = FinPoset.chain(3)
    assert p.leq(0, 2) and not p.leq(2, 0)
    assert p.sup(0b011) == 1 and p.sup(0) == 0
    assert p.greatest(0b101) == 2 and p.least(0b110) == 1
    assert p.to_dict() == {"elements": ["0", "1", "2"], "leq": [["0", "1"], ["0", "2"], ["1", "2"]]}


@pytest.mark.parametrize("name", POSET_NAMES)
def test_fixture_flags_frozen(name):
    flags = classify_poset(fx.poset(name)).as_dict()
    assert flags["dcpo"] and flags["continuous"] and flags["algebraic"]
    assert (flags["complete_lattice"], flags["L_domain"], flags["bounded_complete"]) == FLAGS[name]
    assert flags == O.poset_flags(O.poset_of(fx.poset(name)))


def test_flags_match_oracle_on_all_posets_up_to_three():
    for n in range(1, 4):
        for p in all_labeled_posets(n):
            assert classify_poset(p).as_dict() == O.poset_flags(O.poset_of(p))


def test_cap_note_for_large_posets():
    flags = classify_poset(FinPoset.chain(12))
    assert flags.notes and flags.complete_lattice
    with pytest.raises(CapExceeded):
        FinPoset.chain(12).directed_subsets()


@pytest.mark.parametrize("name", POSET_NAMES)
def test_way_below_fast_equals_oracle(name):
    p = fx.poset(name)
    assert way_below_matrix(p, "fast") == way_below_matrix(p, "oracle")
    q = O.poset_of(p)
    for x in p.elements.labels:
        for y in p.elements.labels:
            assert way_below_poset(p, x, y) == q.way_below(x, y)


def test_poset_space_matches_oracle_construction():
    for name in POSET_NAMES:
        x = poset_to_fgcs(fx.poset(name))
        ref = O.poset_space(O.poset_of(fx.poset(name)))
        got = O.plain(x)
        assert got.gamma == ref.gamma
        assert all(got.tau[ref.gamma[a]] == ref.tau[ref.gamma[a]] for a in ref.gamma)
        assert sorted(map(sorted, got.family)) == sorted(map(sorted, ref.family))
        assert x.validated


def test_basis_argument():
    p = fx.poset("DIAMOND")
    assert build_poset_space(p, ["bot", "a", "b", "top"]).basis == (0, 1, 2, 3)
    with pytest.raises(InvalidBasis):
        build_poset_space(p, ["bot", "a"])


@pytest.mark.parametrize("name", POSET_NAMES)
def test_roundtrip_fixtures(name):
    rep = roundtrip_iso(fx.poset(name))
    assert rep.ok, rep.to_dict()
    assert rep.data["regulars"] == fx.poset(name).n


def test_roundtrip_chain2_maps():
    rep = roundtrip_iso(fx.chain2())
    assert rep.data["f"] == {"0": "{0}", "1": "{0,1}"}
    assert rep.data["g"] == {"{0}": "0", "{0,1}": "1"}


def test_regular_poset_is_isomorphic_order():
    p, regs = regular_poset(poset_to_fgcs(fx.poset("V")))
    assert p.n == 3 and len(regs) == 3
    assert classify_poset(p).as_dict() == classify_poset(fx.poset("V")).as_dict()


def test_regular_characterization_modes_agree_with_oracle():
    for n in range(1, 4):
        for p in all_labeled_posets(n):
            x = poset_to_fgcs(p)
            plain = O.plain(x)
            for m in range(1 << n):
                s = p.elements.subset([p.label(i) for i in range(n) if m >> i & 1])
                ref = O.is_regular(plain, frozenset(p.elements.elements(m)))
                assert regular_characterization(p, s) == ref
                assert regular_characterization(p, s, "direct") == ref


def test_monotone_map_enumeration():
    c = fx.chain2()
    maps = list(monotone_maps(c, c))
    assert [m.table for m in maps] == [(0, 0), (0, 1), (1, 1)]
    v = fx.poset("V")
    count = sum(1 for _ in monotone_maps(v, c))
    brute = sum(1 for t in product(range(2), repeat=3)
                if MonotoneMap(v, c, t).is_monotone())
    assert count == brute == 5


def test_scott_continuity_modes():
    c = fx.chain2()
    flip = MonotoneMap(c, c, (1, 0))
    assert not flip.is_monotone()
    assert not is_scott_continuous(flip)
    assert not is_scott_continuous(flip, "oracle")
    for f in monotone_maps(fx.poset("M"), fx.poset("DIAMOND")):
        assert is_scott_continuous(f, "oracle")


def test_map_composition_and_labels():
    c = fx.chain2()
    up = MonotoneMap.from_labels(c, c, {"0": "1", "1": "1"})
    assert up.then(MonotoneMap.identity(c)) == up
    assert up.as_labels() == {"0": "1", "1": "1"}


@given(st.integers(0, 2 ** 32), st.integers(1, 5))
def test_random_posets_roundtrip(seed, n):
    p = random_poset(n, random.Random(seed))
    assert roundtrip_iso(p).ok
    assert way_below_matrix(p, "fast") == way_below_matrix(p, "oracle")
