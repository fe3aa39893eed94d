from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from fgspace import fixtures as fx
from fgspace.errors import MNotInHull, NotInFamily
from fgspace.fgcs import degenerate_members
from fgspace.miner import random_fgcs
from fgspace.subclasses import (
    f_sups,
    is_consistent,
    is_locally_consistent,
    regular_flags,
    sigma_laws,
    space_class,
    verify_subclass_theorems,
)

# (locally consistent, consistent), frozen from the oracle
CLASSES = {
    "POINT": (True, False),
    "FLAT": (False, False),
    "CHAIN2": (True, False),
    "V": (True, False),
    "DIAMOND": (True, False),
    "M": (True, False),
    "2TOP": (False, False),
    "FLAT-EMPTY": (True, True),
}


@pytest.mark.parametrize("name", CLASSES)
def test_class_flags_frozen_and_match_oracle(name):
    x = fx.space(name)
    got = (is_locally_consistent(x).ok, is_consistent(x).ok)
    assert got == CLASSES[name]
    p = O.plain(x)
    assert got == (O.locally_consistent(p), O.consistent(p))


def test_space_class_labels():
    assert space_class(fx.space("FLAT")) == "general"
    assert space_class(fx.space("CHAIN2")) == "locally-consistent"
    assert space_class(fx.space("FLAT-EMPTY")) == "consistent"


def test_sigma_examples():
    c = fx.space("CHAIN2")
    u = c.universe
    s = f_sups(c, u.parse("{1}"), u.parse("{0}"))
    assert s.members.render() == ["{0}"]
    assert u.render(s.hull) == "{0}"
    f = fx.space("FLAT")
    v = f.universe
    assert not f_sups(f, v.parse("{a,b}"), v.parse("{}"))
    p = fx.space("POINT")
    assert f_sups(p, p.universe.parse("{a}"), p.universe.parse("{}")).members.render() == ["{a}"]


def test_sigma_errors():
    c = fx.space("CHAIN2")
    u = c.universe
    with pytest.raises(NotInFamily):
        f_sups(c, u.parse("{}"), u.parse("{}"))
    f = fx.space("FLAT")
    with pytest.raises(MNotInHull):
        f_sups(f, f.universe.parse("{a}"), f.universe.parse("{b}"))


def test_flat_local_consistency_witness():
    rep = is_locally_consistent(fx.space("FLAT"))
    assert [v.witness for v in rep.violations] == [{"F": "{a,b}", "M": "{}"}]


def test_consistency_failures_on_m_include_missing_pair():
    x = fx.space("M")
    ws = [v.witness for v in is_consistent(x).violations]
    assert {"F": "{bot,a,b,top1}", "M": "{a,b}"} in ws
    assert any(w["M"] == "{}" for w in ws)


def test_bad_fixture_is_rejected():
    with pytest.raises(Exception):
        is_locally_consistent(fx.space("BAD-FGCS"))


@pytest.mark.parametrize("name", [n for n in CLASSES if n != "FLAT-EMPTY"])
def test_theorems_hold_on_fixtures(name):
    rep = verify_subclass_theorems(fx.space(name))
    assert rep.ok and not rep.notes


def test_degenerate_space_breaks_theorems():
    x = fx.space("FLAT-EMPTY")
    assert degenerate_members(x)
    rep = verify_subclass_theorems(x)
    assert {v.rule for v in rep.violations} == {"L-domain", "bounded-complete"}
    assert rep.notes and rep.notes[0].startswith("degenerate")
    flags = regular_flags(x)
    assert not flags.L_domain and not flags.bounded_complete


@pytest.mark.parametrize("name", CLASSES)
def test_sigma_laws_on_fixtures(name):
    assert sigma_laws(fx.space(name)).ok


@given(st.integers(0, 2 ** 32))
def test_sigma_matches_oracle_on_random_spaces(seed):
    x = random_fgcs(random.Random(seed), 4)
    p = O.plain(x)
    u = x.universe
    for f in x.family:
        for m in O.powerset(p.hull(frozenset(f))):
            got = f_sups(x, f, u.subset(sorted(m)))
            ref = O.sigma(p, frozenset(f), m)
            assert sorted(got.members.render()) == sorted(u.render(u.mask_of(g)) for g in ref)
    assert (is_locally_consistent(x).ok, is_consistent(x).ok) == (O.locally_consistent(p), O.consistent(p))


@given(st.integers(0, 2 ** 32))
def test_theorems_on_nondegenerate_random_spaces(seed):
    x = random_fgcs(random.Random(seed), 5)
    assert sigma_laws(x).ok
    if not degenerate_members(x):
        assert verify_subclass_theorems(x).ok


def test_cross_context_laws_need_local_consistency():
    rep = sigma_laws(fx.space("FLAT"))
    assert rep.ok and rep.notes == ["not locally consistent: cross-context laws not checked"]
    assert not sigma_laws(fx.space("CHAIN2")).notes
