from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from fgspace import fixtures as fx
from fgspace.closurespace import (
    ClosureSpec,
    GCSpace,
    TauSpec,
    find_ci_witness,
    from_closure,
    from_topology,
    gamma_apply,
    hull,
    is_algebraic_closure,
    is_topology,
    validate_gcs,
)
from fgspace.errors import InvalidClosure, NotATopology, TauUndefined, UniverseMismatch
from fgspace.miner import random_moore_family
from fgspace.setcore import SubsetFamily, Universe

AB = Universe(("a", "b"))


def test_gamma_and_hull_on_chain2():
    g = fx.space("CHAIN2").space
    u = g.universe
    assert str(gamma_apply(g, u.parse("{1}"))) == "{0,1}"
    assert str(hull(g, u.parse("{1}"))) == "{0,1}"
    assert str(hull(g, u.parse("{0}"))) == "{0}"


def test_flat_operators_are_identities():
    g = fx.space("FLAT").space
    assert str(gamma_apply(g, AB.parse("{a}"))) == "{a}"
    assert str(hull(g, AB.parse("{a,b}"))) == "{a,b}"
    assert validate_gcs(g).ok


def test_chain2_is_valid_and_agrees_with_oracle():
    g = fx.space("CHAIN2").space
    assert validate_gcs(g).ok
    assert O.gcs_conditions(O.plain(g)) == {"defined": True, "c1": True, "c2": True, "c3": True}


def test_patched_tau_breaks_monotonicity():
    g = fx.bad_gcs()
    rep = validate_gcs(g)
    assert rep.rules() == {"cond3"}
    assert rep.violations[0].witness == {"A": "{0}", "B": "{0,1}"}
    assert O.gcs_conditions(O.plain(g))["c3"] is False


def test_closed_system_must_be_a_moore_family():
    with pytest.raises(InvalidClosure):
        ClosureSpec.from_closed_sets(AB, [["a"], ["b"], ["a", "b"]])  # {a} & {b} missing
    with pytest.raises(InvalidClosure):
        ClosureSpec.from_closed_sets(AB, [["a"]])  # X missing


def test_closure_table_axioms_are_checked():
    bad = ClosureSpec.from_table(AB, {"{}": "{}", "{a}": "{}", "{b}": "{b}", "{a,b}": "{a,b}"})
    assert bad.axioms().rules() == {"gamma-extensive"}


def test_partial_tau_raises_outside_its_domain():
    tau = TauSpec.from_table(AB, {"{a,b}": "{a,b}"})
    with pytest.raises(TauUndefined):
        tau(AB.parse("{a}").mask)
    g = GCSpace(AB, ClosureSpec.identity(AB), tau)
    assert "tau-undefined" in validate_gcs(g).rules()


def test_universe_mismatch():
    g = fx.space("FLAT").space
    with pytest.raises(UniverseMismatch):
        gamma_apply(g, Universe(("z",)).subset(["z"]))


def test_discrete_topology_gives_identity_operators():
    g = from_topology(SubsetFamily.of(AB, [[], ["a"], ["b"], ["a", "b"]]))
    for m in range(4):
        assert g.gamma(m) == m and g.tau(m) == m


def test_indiscrete_topology():
    g = from_topology(SubsetFamily.of(AB, [[], ["a", "b"]]))
    assert [g.gamma(m) for m in range(4)] == [0, 3, 3, 3]
    assert [g.tau(m) for m in range(4)] == [0, 0, 0, 3]
    assert validate_gcs(g).ok


def test_sierpinski_hull_of_open_point():
    # the oracle gives {0,1}: the closure of {1} is everything and that is open
    u = Universe(("0", "1"))
    g = from_topology(SubsetFamily.of(u, [[], ["1"], ["0", "1"]]))
    assert str(hull(g, u.parse("{1}"))) == "{0,1}"
    p = O.from_topology("01", [frozenset(), frozenset("1"), frozenset("01")], [])
    assert p.hull(frozenset("1")) == frozenset("01")


def test_not_a_topology_is_rejected():
    fam = SubsetFamily.of(AB, [[], ["a"], ["b"]])
    assert not is_topology(AB, fam).ok
    with pytest.raises(NotATopology):
        from_topology(fam)


def test_interior_then_closure_witness():
    w = find_ci_witness()
    assert w == {"universe": ["0", "1"], "opens": ["{}", "{0}", "{0,1}"],
                 "violation": {"rule": "cond1", "witness": {"A": "{0}"},
                               "message": "tau(gamma({0})) = {0,1} is not inside gamma = {0}"}}
    # the same pair of maps, read by the oracle
    op = O.from_topology("01", [frozenset(), frozenset("0"), frozenset("01")], [])
    swapped = O.Plain(["0", "1"], op.tau, op.gamma, [])
    assert O.gcs_conditions(swapped)["c1"] is False


def test_finite_closures_are_algebraic():
    for name in ("FLAT", "CHAIN2", "DIAMOND"):
        assert is_algebraic_closure(fx.space(name).space.gamma).ok


@given(st.integers(1, 5), st.integers(0, 2 ** 32))
def test_closure_with_interior_system_is_always_valid(n, seed):
    rng = random.Random(seed)
    u = Universe(tuple(str(i) for i in range(n)))
    gamma = ClosureSpec(u, closed_sets=tuple(random_moore_family(n, rng)))
    opens = tuple({0} | {a for a in range(1 << n) if rng.random() < 0.3})
    g = GCSpace(u, gamma, TauSpec(u, open_sets=opens))
    assert validate_gcs(g).ok
    assert O.gcs_conditions(O.plain(g))["c3"]


@given(st.integers(1, 5), st.integers(0, 2 ** 32))
def test_hull_is_idempotent_and_monotone(n, seed):
    rng = random.Random(seed)
    u = Universe(tuple(str(i) for i in range(n)))
    g = from_closure(ClosureSpec(u, closed_sets=tuple(random_moore_family(n, rng))))
    for a in range(1 << n):
        h = g.hull(a)
        assert g.hull(h) == h
        for i in range(n):
            assert g.hull(a) & ~g.hull(a | 1 << i) == 0


@given(st.integers(1, 4), st.integers(0, 2 ** 32))
def test_validator_matches_oracle_on_random_tables(n, seed):
    from fgspace.miner import random_gcs

    g = random_gcs(n, random.Random(seed))
    conds = O.gcs_conditions(O.plain(g)) if all(
        g.tau.defined_on(g.gamma(a)) for a in range(1 << n)) else None
    rep = validate_gcs(g)
    if conds is None or not conds["defined"]:
        assert not rep.ok
    else:
        assert rep.ok == (conds["c1"] and conds["c2"] and conds["c3"])
