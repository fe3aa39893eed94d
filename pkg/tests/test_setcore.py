from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fgspace.errors import CapExceeded, UniverseMismatch
from fgspace.setcore import (
    Report,
    Subset,
    SubsetFamily,
    Universe,
    bits,
    canonical_index,
    check_cap,
    enumerate_subsets,
    is_sub,
    popcount,
    submasks,
)

U = Universe(("a", "b", "c"))


def test_parse_and_render_round_trip():
    s = U.parse("{c, a}")
    assert s.mask == 0b101
    assert str(s) == "{a,c}"
    assert U.parse("{}").mask == 0


def test_canonical_index_is_mask_order():
    u = Universe(("a", "b"))
    assert canonical_index(u.subset(["a"])) == 1
    assert canonical_index(u.subset(["b"])) == 2
    assert [str(s) for s in enumerate_subsets(u)] == ["{}", "{a}", "{b}", "{a,b}"]


def test_cap_is_enforced():
    with pytest.raises(CapExceeded):
        check_cap(17)
    check_cap(16)
    big = Universe(tuple(str(i) for i in range(5)))
    with pytest.raises(CapExceeded):
        list(enumerate_subsets(big, cap=4))


def test_family_is_sorted_and_deduplicated():
    fam = SubsetFamily.of(U, ["{b}", ["a"], "{b}", U.subset(["a", "c"])])
    assert fam.render() == ["{a}", "{b}", "{a,c}"]
    assert U.parse("{b}") in fam
    with pytest.raises(UniverseMismatch):
        SubsetFamily.of(U, [Universe(("z",)).subset(["z"])])


def test_subset_operations_need_one_universe():
    with pytest.raises(UniverseMismatch):
        U.subset(["a"]) | Universe(("a",)).subset(["a"])


def test_report_accumulates_violations():
    r = Report()
    assert r.ok
    r.fail("rule-x", "broken", A="{a}")
    assert not r.ok and r.rules() == {"rule-x"}
    assert r.to_dict()["violations"][0]["witness"] == {"A": "{a}"}


masks = st.integers(min_value=0, max_value=(1 << 6) - 1)


@given(masks)
def test_submasks_enumerates_exactly_the_subsets(m):
    subs = list(submasks(m))
    assert subs == sorted(subs)
    assert len(subs) == 2 ** popcount(m)
    assert all(is_sub(s, m) for s in subs)


@given(masks, masks)
def test_set_algebra_matches_python_sets(x, y):
    u = Universe(tuple("abcdef"))
    a, b = Subset(u, x), Subset(u, y)
    sa, sb = set(a), set(b)
    assert set(a | b) == sa | sb
    assert set(a & b) == sa & sb
    assert set(a - b) == sa - sb
    assert a.issubset(b) == (sa <= sb)
    assert list(bits(x)) == [i for i in range(6) if x >> i & 1]
