from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from fgspace import fixtures as fx
from fgspace.closurespace import ClosureSpec, GCSpace, TauSpec
from fgspace.errors import InvalidSpace, NotRegular
from fgspace.fgcs import (
    FGCSpace,
    basis_of,
    enumerate_regulars,
    is_classical_fa,
    is_regular_open,
    mode_agreement,
    regular_laws,
    validate_fgcs,
    way_below,
)
from fgspace.miner import random_fgcs
from fgspace.setcore import SubsetFamily, Universe

NAMES = ("POINT", "FLAT", "CHAIN2", "V", "DIAMOND", "M", "2TOP")

# frozen from oracles.regulars (labels sorted inside each set)
REGULARS = {
    "POINT": ["{a}"],
    "FLAT": ["{a}", "{b}", "{a,b}"],
    "CHAIN2": ["{0}", "{0,1}"],
    "V": ["{bot}", "{bot,a}", "{bot,b}"],
    "DIAMOND": ["{bot}", "{bot,a}", "{bot,b}", "{bot,a,b,top}"],
    "M": ["{bot}", "{bot,a}", "{bot,b}", "{bot,a,b,top1}", "{bot,a,b,top2}"],
    "2TOP": ["{a}", "{b}", "{a,b,top1}", "{a,b,top2}"],
}


def _sorted_render(u, masks):
    return sorted((u.render(m) for m in masks), key=lambda s: (s.count(","), s))


@pytest.mark.parametrize("name", NAMES)
def test_fixtures_validate(name):
    x = fx.space(name)
    assert validate_fgcs(x).ok
    assert O.fgcs_ok(O.plain(x))


@pytest.mark.parametrize("name", NAMES)
def test_regulars_match_oracle_and_frozen_values(name):
    x = fx.space(name)
    got = _sorted_render(x.universe, enumerate_regulars(x).masks)
    assert got == sorted(REGULARS[name], key=lambda s: (s.count(","), s))
    p = O.plain(x)
    assert sorted(map(sorted, O.regulars(p))) == sorted(sorted(x.universe.elements(m)) for m in x.regulars)


def test_negative_fixture_reports_f_and_empty_m():
    x = fx.bad_fgcs()
    rep = validate_fgcs(x)
    assert [(v.rule, v.witness) for v in rep.violations] == [("fgcs-axiom", {"F": "{a}", "M": "{}"})]
    assert O.fgcs_failures(O.plain(x)) == [(frozenset("a"), frozenset())]
    with pytest.raises(InvalidSpace):
        enumerate_regulars(x)


def test_chain2_regularity_examples():
    x = fx.space("CHAIN2")
    u = x.universe
    assert is_regular_open(x, u.parse("{0,1}"))
    assert not is_regular_open(x, u.parse("{1}"))
    assert not is_regular_open(x, u.parse("{}"))
    assert not is_regular_open(x, u.parse("{}"), "oracle")


def test_way_below_examples():
    x = fx.space("CHAIN2")
    u = x.universe
    assert way_below(x, u.parse("{0}"), u.parse("{0,1}"))
    assert not way_below(x, u.parse("{0,1}"), u.parse("{0}"))
    f = fx.space("FLAT")
    assert way_below(f, f.universe.parse("{a}"), f.universe.parse("{a}"), "oracle")
    with pytest.raises(NotRegular):
        way_below(x, u.parse("{1}"), u.parse("{0,1}"))


def test_basis_examples():
    assert basis_of(fx.space("CHAIN2")).render() == ["{0}", "{0,1}"]
    assert basis_of(fx.space("POINT")).render() == ["{a}"]
    assert basis_of(fx.space("FLAT")).render() == ["{a}", "{b}", "{a,b}"]


def test_classical_instances():
    assert is_classical_fa(fx.space("FLAT")).ok
    assert is_classical_fa(fx.space("CHAIN2")).ok
    u = Universe(("a", "b"))
    g = GCSpace(u, ClosureSpec.identity(u), TauSpec.from_open_sets(u, [[], ["a"]]))
    x = FGCSpace(g, SubsetFamily.of(u, [["a"]]))
    assert not is_classical_fa(x).ok


@pytest.mark.parametrize("name", NAMES)
def test_modes_agree_and_laws_hold_on_fixtures(name):
    x = fx.space(name)
    assert mode_agreement(x).ok
    assert regular_laws(x).ok
    p = O.plain(x)
    regs = O.regulars(p)
    for a in regs:
        for b in regs:
            assert O.way_below_def(p, a, b) == O.way_below_eq(p, a, b)


@given(st.integers(0, 2 ** 32))
def test_modes_agree_on_random_spaces(seed):
    x = random_fgcs(random.Random(seed), 5)
    rep = mode_agreement(x)
    assert rep.ok and not rep.notes
    assert regular_laws(x).ok


@given(st.integers(0, 2 ** 32))
def test_regulars_agree_with_oracle_on_random_spaces(seed):
    x = random_fgcs(random.Random(seed), 4)
    p = O.plain(x)
    assert O.fgcs_ok(p)
    oracle = sorted(sorted(r) for r in O.regulars(p))
    assert oracle == sorted(sorted(x.universe.elements(m)) for m in x.regulars)
    regs = O.regulars(p)
    lab = {frozenset(x.universe.elements(m)): m for m in x.regulars}
    for a in regs:
        for b in regs:
            ua, ub = (x.universe.subset(sorted(s)) for s in (a, b))
            assert way_below(x, ua, ub, "oracle") == O.way_below_def(p, a, b)
            assert way_below(x, ua, ub) == O.way_below_eq(p, a, b)
    assert len(lab) == len(regs)
