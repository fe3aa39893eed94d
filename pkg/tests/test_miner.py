from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from fgspace.closurespace import validate_gcs
from fgspace.fgcs import FGCSpace, validate_fgcs
from fgspace.io import space_from_doc
from fgspace.miner import (
    CHECKS,
    TARGETS,
    MinerConfig,
    hull_laws,
    mine,
    random_gcs,
    random_instance,
    replay_instance,
    restrict,
    shrink,
)
from fgspace.setcore import SubsetFamily
from fgspace.subclasses import verify_subclass_theorems


def test_config_validation():
    for bad in (dict(count=-1), dict(max_n=0), dict(max_n=99), dict(targets=("nope",)), dict(seed=-1)):
        with pytest.raises(ValueError):
            MinerConfig(**bad)


def test_zero_count_is_empty_and_ok():
    out = mine(MinerConfig(count=0))
    assert out["ok"] and out["instances"] == {} and not out["violations"]
    assert set(out["targets"]) == set(TARGETS)


def test_mine_is_deterministic():
    cfg = MinerConfig(seed=7, count=40)
    assert mine(cfg) == mine(cfg)


def test_replay_reproduces_instance():
    a = replay_instance(42, 17, 5)
    b = replay_instance(42, 17, 5)
    assert a[0] == b[0] and a[1] == b[1]


def test_seed_42_small_run_clean():
    out = mine(MinerConfig(count=150))
    assert out["ok"], out["violations"][:1]
    assert out["targets"]["Lconsistency"]["premise"] > 0
    assert out["targets"]["BC"]["premise"] > 0


def test_degenerate_counterexamples_shrink_and_replay():
    out = mine(MinerConfig(count=30, targets=("Lconsistency",), include_degenerate=True))
    assert not out["ok"]
    for v in out["violations"]:
        small = space_from_doc(v["shrunk"])
        assert small.universe.n <= space_from_doc(v["space"]).universe.n
        assert set(v["rules"]) <= verify_subclass_theorems(small).rules()
        assert set(v["rules"]) <= CHECKS["Lconsistency"](small, None, True).rules()
        assert any(h == 0 for _, h in small.member_hulls)


@given(st.integers(0, 2 ** 32), st.integers(1, 4))
def test_random_gcs_validator_matches_oracle(seed, n):
    g = random_gcs(n, random.Random(seed))
    c = O.gcs_conditions(O.plain(g))
    assert validate_gcs(g).ok == all(c.values())
    if validate_gcs(g).ok:
        assert hull_laws(g).ok


@given(st.integers(0, 2 ** 32))
def test_random_instances_are_classified_consistently(seed):
    status, x = random_instance(random.Random(seed), 4)
    if status == "ok":
        assert validate_fgcs(x).ok and O.fgcs_ok(O.plain(x))


@given(st.integers(0, 2 ** 32))
def test_restrict_keeps_valid_spaces(seed):
    status, x = random_instance(random.Random(seed), 4)
    if status != "ok" or x.universe.n < 2:
        return
    y = restrict(x, 1)
    if y is not None:
        assert y.universe.n == x.universe.n - 1 and y.validated


def test_shrink_finds_smaller_failing_space():
    rng = random.Random(3)
    while True:
        status, x = random_instance(rng, 5)
        if status == "ok" and x.universe.n >= 3:
            break
    small = shrink(x, lambda y: True)
    assert small.universe.n < x.universe.n and small.validated
    # greedy shrinking stops at a local minimum
    assert all(restrict(small, i) is None for i in range(small.universe.n))
    assert len(small.family.masks) == 1 or all(
        not FGCSpace(small.space, SubsetFamily(small.universe, tuple(m for m in small.family.masks if m != f))).validated
        for f in small.family.masks)
