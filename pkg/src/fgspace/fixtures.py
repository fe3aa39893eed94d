"""Named example spaces and posets used by the CLI and the tests."""
from __future__ import annotations

from typing import Callable

from .closurespace import ClosureSpec, GCSpace, TauSpec
from .fgcs import FGCSpace
from .finposet import FinPoset, poset_to_fgcs
from .setcore import SubsetFamily, Universe


def _identity_space(labels, family) -> FGCSpace:
    u = Universe(tuple(labels))
    g = GCSpace(u, ClosureSpec.identity(u), TauSpec.identity(u))
    return FGCSpace(g, SubsetFamily.of(u, family))


def chain2() -> FinPoset:
    return FinPoset.chain(2)


def poset_v() -> FinPoset:
    return FinPoset.from_pairs(["bot", "a", "b"], [("bot", "a"), ("bot", "b")])


def poset_diamond() -> FinPoset:
    return FinPoset.from_pairs(["bot", "a", "b", "top"],
                               [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def poset_m() -> FinPoset:
    """Two incomparable tops over two incomparable middles over a bottom."""
    return FinPoset.from_pairs(
        ["bot", "a", "b", "top1", "top2"],
        [("bot", "a"), ("bot", "b"), ("a", "top1"), ("b", "top1"), ("a", "top2"), ("b", "top2")])


def poset_2top() -> FinPoset:
    return FinPoset.from_pairs(
        ["a", "b", "top1", "top2"],
        [("a", "top1"), ("b", "top1"), ("a", "top2"), ("b", "top2")])


def point() -> FGCSpace:
    return _identity_space(["a"], [["a"]])


def flat() -> FGCSpace:
    return _identity_space(["a", "b"], [["a"], ["b"], ["a", "b"]])


def flat_with_empty() -> FGCSpace:
    """``flat`` plus the empty member: its hull is empty, so R(X) loses its
    least element while both consistency conditions hold."""
    return _identity_space(["a", "b"], [[], ["a"], ["b"], ["a", "b"]])


def bad_fgcs() -> FGCSpace:
    """Refinement fails at ``F={a}, M=empty``: ``<{a}>`` is empty and no
    member fits inside it."""
    u = Universe(("a", "b"))
    g = GCSpace(u, ClosureSpec.identity(u), TauSpec.from_open_sets(u, [[], ["b"], ["a", "b"]]))
    return FGCSpace(g, SubsetFamily.of(u, [["a"]]))


def bad_gcs() -> GCSpace:
    """The 2-chain space with ``tau({0,1})`` patched to ``{1}``."""
    base = poset_to_fgcs(chain2()).space
    u = base.universe
    tau = TauSpec.from_table(u, {"{}": "{}", "{0}": "{0}", "{1}": "{1}", "{0,1}": "{1}"})
    return GCSpace(u, base.gamma, tau)


POSETS: dict[str, Callable[[], FinPoset]] = {
    "CHAIN2": chain2,
    "V": poset_v,
    "DIAMOND": poset_diamond,
    "M": poset_m,
    "2TOP": poset_2top,
}

SPACES: dict[str, Callable[[], FGCSpace]] = {
    "POINT": point,
    "FLAT": flat,
    "FLAT-EMPTY": flat_with_empty,
    "BAD-FGCS": bad_fgcs,
    **{k: (lambda f=f: poset_to_fgcs(f())) for k, f in POSETS.items()},
}


def space(name: str) -> FGCSpace:
    key = name.upper().removeprefix("FIX-")
    if key not in SPACES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(SPACES)}")
    return SPACES[key]()


def poset(name: str) -> FinPoset:
    key = name.upper().removeprefix("FIX-")
    if key not in POSETS:
        raise KeyError(f"unknown poset fixture {name!r}; known: {', '.join(POSETS)}")
    return POSETS[key]()
