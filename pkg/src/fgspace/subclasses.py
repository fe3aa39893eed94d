"""F-sups, local consistency, condition (BC), and the checks that tie them to
L-domains and bounded complete domains."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import EmptyPoset, MNotInHull, NotInFamily
from .fgcs import FGCSpace, degenerate_members
from .finposet import PosetFlags, classify_poset, regular_poset
from .setcore import DEFAULT_CAP, Report, Subset, SubsetFamily, check_cap, is_sub, submasks


@dataclass(frozen=True)
class SigmaSet:
    """All F-sups of ``m`` relative to the member ``f``."""

    space: FGCSpace
    f: int
    m: int
    members: SubsetFamily

    @property
    def representative(self) -> Optional[Subset]:
        return next(iter(self.members), None)

    @property
    def hull(self) -> Optional[int]:
        """The common hull of all members (None when there are none)."""
        return self.space.hull(self.members.masks[0]) if self.members.masks else None

    def __bool__(self):
        return bool(self.members.masks)


def _sigma(x: FGCSpace, f: int, m: int) -> tuple[int, ...]:
    hm = x.hull(m)
    hf = x.hull(f)
    between = [h for _, h in x.member_hulls if is_sub(hm, h) and is_sub(h, hf)]
    return tuple(g for g, h in x.member_hulls
                 if is_sub(hm, h) and is_sub(g, hf) and all(is_sub(h, h1) for h1 in between))


def f_sups(x: FGCSpace, f: Subset, m: Subset) -> SigmaSet:
    """Members ``G`` with ``<M> <= <G>``, ``G <= <F>``, and ``<G>`` least among
    hulls ``<G1>`` squeezed between ``<M>`` and ``<F>``."""
    x.require_valid()
    fm, mm = f.mask, m.mask
    if fm not in x.family:
        raise NotInFamily(f"{f} is not a family member")
    if not is_sub(mm, x.hull(fm)):
        raise MNotInHull(f"{m} is not inside <{f}> = {x.render(x.hull(fm))}")
    return SigmaSet(x, fm, mm, SubsetFamily(x.universe, _sigma(x, fm, mm)))


def is_locally_consistent(x: FGCSpace, cap: int = DEFAULT_CAP) -> Report:
    x.require_valid()
    check_cap(x.universe.n, cap)
    rep = Report()
    r = x.render
    for f, hf in x.member_hulls:
        for m in submasks(hf):
            if not _sigma(x, f, m):
                rep.fail("local-consistency", f"no F-sup of {r(m)} relative to {r(f)}", F=r(f), M=r(m))
    return rep


def is_consistent(x: FGCSpace, cap: int = DEFAULT_CAP) -> Report:
    """(BC): every finite subset of every member hull is itself a member."""
    x.require_valid()
    check_cap(x.universe.n, cap)
    rep = Report()
    r = x.render
    fam = x.family
    for f, hf in x.member_hulls:
        for m in submasks(hf):
            if m not in fam:
                rep.fail("BC", f"{r(m)} <= <{r(f)}> = {r(hf)} is not a family member", F=r(f), M=r(m))
    return rep


def space_class(x: FGCSpace) -> str:
    if is_consistent(x).ok:
        return "consistent"
    if is_locally_consistent(x).ok:
        return "locally-consistent"
    return "general"


def sigma_laws(x: FGCSpace) -> Report:
    """Common hull of F-sups; monotonicity in the context; agreement across
    contexts inside a regular set.

    Monotonicity is only checked where the larger context has an F-sup, and
    the cross-context laws only in locally consistent spaces: both arguments
    pick an element of a possibly empty Sigma."""
    x.require_valid()
    rep = Report()
    r = x.render
    mh = dict(x.member_hulls)
    ctx = [(f, m) for f, hf in x.member_hulls for m in submasks(hf)]
    sig = {(f, m): _sigma(x, f, m) for f, m in ctx}
    for (f, m), gs in sig.items():
        if len({x.hull(g) for g in gs}) > 1:
            rep.fail("sigma-hull", f"F-sups of {r(m)} rel {r(f)} have different hulls", F=r(f), M=r(m))
    for (f1, m), gs in sig.items():
        for f2, h2 in x.member_hulls:
            if is_sub(mh[f1], h2) and sig[(f2, m)] and not set(gs) <= set(sig[(f2, m)]):
                rep.fail("sigma-monotone", f"Sigma({r(f1)},{r(m)}) not inside Sigma({r(f2)},{r(m)})",
                         F1=r(f1), F2=r(f2), M=r(m))
    if not all(sig.values()):
        rep.notes.append("not locally consistent: cross-context laws not checked")
        return rep
    for u in x.regulars:
        inside = [f for f in x.family.masks if is_sub(f, u)]
        for f1 in inside:
            for f2 in inside:
                common = mh[f1] & mh[f2]
                for m2 in submasks(common):
                    h2 = {x.hull(g) for g in sig[(f2, m2)]}
                    for m1 in submasks(m2):
                        h1 = {x.hull(g) for g in sig[(f1, m1)]}
                        if any(not is_sub(a, b) for a in h1 for b in h2):
                            rep.fail("sigma-cross", f"hull of Sigma({r(f1)},{r(m1)}) not inside "
                                     f"hull of Sigma({r(f2)},{r(m2)}) within {r(u)}",
                                     U=r(u), F1=r(f1), F2=r(f2), M1=r(m1), M2=r(m2))
    return rep


def regular_flags(x: FGCSpace) -> Optional[PosetFlags]:
    try:
        p, _ = regular_poset(x)
    except EmptyPoset:
        return None
    return classify_poset(p)


def verify_subclass_theorems(x: FGCSpace) -> Report:
    """Locally consistent implies R(X) is an L-domain; consistent implies
    locally consistent and R(X) bounded complete."""
    x.require_valid()
    rep = Report()
    lc = is_locally_consistent(x).ok
    bc = is_consistent(x).ok
    flags = regular_flags(x)
    rep.data.update({"locally_consistent": lc, "consistent": bc,
                     "flags": flags.as_dict() if flags else None})
    deg = degenerate_members(x)
    if deg:
        rep.notes.append("degenerate: members " + ", ".join(x.render(f) for f in deg)
                         + " have an empty hull, which is not a regular open set")
    if flags is None:
        rep.notes.append("R(X) is empty")
        if lc or bc:
            rep.fail("empty-R", "R(X) is empty but the space is locally consistent")
        return rep
    if lc and not flags.L_domain:
        rep.fail("L-domain", "locally consistent but R(X) is not an L-domain")
    if bc and not lc:
        rep.fail("BC-implies-LC", "consistent but not locally consistent")
    if bc and not flags.bounded_complete:
        rep.fail("bounded-complete", "consistent but R(X) is not bounded complete")
    return rep
