"""F-augmented generalized closure spaces, regular open sets and way-below.

A space here is a validated :class:`GCSpace` together with a nonempty family
of (finite) subsets ``F``.  The refinement axiom asks that for every member
``F`` and every ``M <= <F>`` some member ``F1`` satisfies ``M <= <F1>`` and
``F1 <= <F>``.

A nonempty ``U`` is *regular open* when every finite ``M <= U`` sits inside
some ``<F> <= U``.  The empty set is never regular; spaces whose family
contains a member with an empty hull are called *degenerate* and are flagged
by :func:`degenerate_members`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal

from .closurespace import GCSpace
from .errors import CapExceeded, InvalidSpace, NotRegular, UniverseMismatch
from .setcore import (
    DEFAULT_CAP,
    Report,
    Subset,
    SubsetFamily,
    check_cap,
    is_sub,
    popcount,
    submasks,
    warn_exponential,
)

Mode = Literal["fast", "oracle"]

# way-below oracle enumerates subfamilies of R(X); skipped beyond this size
ORACLE_FAMILY_CAP = 12


@dataclass(frozen=True)
class FGCSpace:
    space: GCSpace
    family: SubsetFamily

    def __post_init__(self):
        if self.family.universe != self.space.universe:
            raise UniverseMismatch("family and space must share one universe")

    @property
    def universe(self):
        return self.space.universe

    @cached_property
    def report(self) -> Report:
        return validate_fgcs(self)

    @property
    def validated(self) -> bool:
        return self.report.ok

    def require_valid(self) -> "FGCSpace":
        if not self.validated:
            raise InvalidSpace(self.report)
        return self

    def hull(self, mask: int) -> int:
        return self.space.hull(mask)

    def render(self, mask: int) -> str:
        return self.space.universe.render(mask)

    @cached_property
    def member_hulls(self) -> tuple[tuple[int, int], ...]:
        """``(F, <F>)`` for each family member, canonical order."""
        return tuple((f, self.space.hull(f)) for f in self.family.masks)

    @cached_property
    def regulars(self) -> tuple[int, ...]:
        n = self.universe.n
        return tuple(u for u in range(1, 1 << n) if _regular_fast(self, u))

    @cached_property
    def _directed_subfamilies(self) -> list[tuple[int, tuple[int, ...]]]:
        regs = self.regulars
        if len(regs) > ORACLE_FAMILY_CAP:
            raise CapExceeded(len(regs), ORACLE_FAMILY_CAP)
        out = []
        for pick in range(1, 1 << len(regs)):
            members = tuple(regs[i] for i in range(len(regs)) if pick >> i & 1)
            if is_directed(members):
                union = 0
                for m in members:
                    union |= m
                out.append((union, members))
        return out


def validate_fgcs(x: FGCSpace, cap: int = DEFAULT_CAP) -> Report:
    """Check the refinement axiom, quantifying ``M`` over every subset of each
    member hull (the empty set included).  Violations carry ``(F, M)`` with
    ``M`` the first failing subset in canonical order.
    """
    x.space.require_valid()
    check_cap(x.universe.n, cap)
    rep = Report()
    if not x.family.masks:
        rep.fail("family-empty", "the family must be nonempty")
        return rep
    r = x.render
    for f, hf in x.member_hulls:
        warn_exponential(popcount(hf), "validate_fgcs")
        covers = [h1 for f1, h1 in x.member_hulls if is_sub(f1, hf)]
        for m in submasks(hf):
            if not any(is_sub(m, h1) for h1 in covers):
                rep.fail("fgcs-axiom", f"no F1 with {r(m)} <= <F1> and F1 <= <{r(f)}> = {r(hf)}",
                         F=r(f), M=r(m))
                break
    return rep


def degenerate_members(x: FGCSpace) -> list[int]:
    """Family members whose hull is empty (their hull is not regular)."""
    return [f for f, h in x.member_hulls if h == 0]


def is_classical_fa(x: FGCSpace) -> Report:
    """tau fixes every gamma-image and ``M <= F1 <= gamma(F)`` is always solvable."""
    g = x.space
    n = x.universe.n
    r = x.render
    rep = Report()
    for a in range(1 << n):
        ga = g.gamma(a)
        if g.tau.defined_on(ga) and g.tau(ga) != ga:
            rep.fail("tau-not-identity", f"tau({r(ga)}) = {r(g.tau(ga))}", A=r(a))
            break
        if not g.tau.defined_on(ga):
            rep.fail("tau-not-identity", f"tau undefined on {r(ga)}", A=r(a))
            break
    fam = x.family.masks
    for f in fam:
        gf = g.gamma(f)
        inside = [f1 for f1 in fam if is_sub(f1, gf)]
        for m in submasks(gf):
            if not any(is_sub(m, f1) for f1 in inside):
                rep.fail("classical-axiom", f"no F1 with {r(m)} <= F1 <= gamma({r(f)})", F=r(f), M=r(m))
                break
    return rep


def is_directed(masks) -> bool:
    """Nonempty and every pair has an upper bound (by inclusion) inside."""
    masks = list(masks)
    if not masks:
        return False
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            ab = a | b
            if not any(is_sub(ab, c) for c in masks):
                return False
    return True


def _regular_fast(x: FGCSpace, u: int) -> bool:
    if u == 0:
        return False
    hulls = {h for f, h in x.member_hulls if is_sub(f, u)}
    union = 0
    for h in hulls:
        union |= h
    return union == u and is_directed(hulls)


def _regular_oracle(x: FGCSpace, u: int, cap: int) -> bool:
    if u == 0:
        return False
    check_cap(popcount(u), cap)
    inside = [h for _, h in x.member_hulls if is_sub(h, u)]
    return all(any(is_sub(m, h) for h in inside) for m in submasks(u))


def _mask_of(x: FGCSpace, s) -> int:
    if isinstance(s, Subset):
        if s.universe != x.universe:
            raise UniverseMismatch(f"{s} is not over {x.universe}")
        return s.mask
    return s


def is_regular_open(x: FGCSpace, u: Subset, mode: Mode = "fast", cap: int = DEFAULT_CAP) -> bool:
    """fast: the hulls ``{<F> : F <= u}`` form a directed family with union ``u``.
    oracle: the definition, quantifying every ``M <= u``.
    """
    x.require_valid()
    m = _mask_of(x, u)
    if mode == "fast":
        return _regular_fast(x, m)
    if mode == "oracle":
        return _regular_oracle(x, m, cap)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class RegularFamily:
    space: FGCSpace
    members: SubsetFamily

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def masks(self) -> tuple[int, ...]:
        return self.members.masks


def enumerate_regulars(x: FGCSpace, cap: int = DEFAULT_CAP) -> RegularFamily:
    x.require_valid()
    check_cap(x.universe.n, cap)
    return RegularFamily(x, SubsetFamily(x.universe, x.regulars))


def _way_below_fast(x: FGCSpace, u1: int, u2: int) -> bool:
    return any(is_sub(f, u2) and is_sub(u1, h) for f, h in x.member_hulls)


def _way_below_oracle(x: FGCSpace, u1: int, u2: int) -> bool:
    for union, members in x._directed_subfamilies:
        if is_sub(u2, union) and not any(is_sub(u1, d) for d in members):
            return False
    return True


def way_below(x: FGCSpace, u1: Subset, u2: Subset, mode: Mode = "fast") -> bool:
    """``u1 << u2`` in R(X).

    fast: some member ``F <= u2`` has ``u1 <= <F>``.  oracle: every directed
    subfamily of R(X) whose union covers ``u2`` has a member containing ``u1``
    (raises :class:`CapExceeded` when R(X) has more than 12 members).
    """
    x.require_valid()
    a, b = _mask_of(x, u1), _mask_of(x, u2)
    regs = set(x.regulars)
    for m in (a, b):
        if m not in regs:
            raise NotRegular(f"{x.render(m)} is not regular open")
    if mode == "fast":
        return _way_below_fast(x, a, b)
    if mode == "oracle":
        return _way_below_oracle(x, a, b)
    raise ValueError(f"unknown mode {mode!r}")


def basis_of(x: FGCSpace) -> SubsetFamily:
    """Distinct hulls of family members, excluding the empty hull."""
    x.require_valid()
    return SubsetFamily(x.universe, tuple({h for _, h in x.member_hulls if h}))


def mode_agreement(x: FGCSpace, cap: int = DEFAULT_CAP) -> Report:
    """Fast-vs-oracle agreement for regularity on every subset and for
    way-below on every pair of regulars."""
    x.require_valid()
    rep = Report()
    r = x.render
    for u in range(1 << x.universe.n):
        fast, slow = _regular_fast(x, u), _regular_oracle(x, u, cap)
        if fast != slow:
            rep.fail("regular-modes", f"regularity of {r(u)}: fast={fast} oracle={slow}", U=r(u))
    try:
        x._directed_subfamilies
    except CapExceeded:
        rep.notes.append(f"way-below oracle skipped: |R(X)| = {len(x.regulars)} > {ORACLE_FAMILY_CAP}")
        return rep
    for a in x.regulars:
        for b in x.regulars:
            fast, slow = _way_below_fast(x, a, b), _way_below_oracle(x, a, b)
            if fast != slow:
                rep.fail("waybelow-modes", f"{r(a)} << {r(b)}: fast={fast} oracle={slow}", U1=r(a), U2=r(b))
    return rep


def regular_laws(x: FGCSpace) -> Report:
    """Finite restatements of the structural facts about R(X) and its basis:

    * each nondegenerate member hull is regular;
    * for ``U`` regular and ``M <= U`` some ``F <= U`` has ``M <= <F> <= U``;
    * R(X) is closed under unions of directed subfamilies;
    * every regular ``U`` is the directed union of basis elements way below it;
    * way-below is transitive, inside inclusion, and interpolates through the basis.
    """
    x.require_valid()
    rep = Report()
    r = x.render
    regs = x.regulars
    regset = set(regs)
    for f, h in x.member_hulls:
        if h and h not in regset:
            rep.fail("hull-regular", f"<{r(f)}> = {r(h)} is not regular", F=r(f))
    for u in regs:
        for m in submasks(u):
            if not any(is_sub(f, u) and is_sub(m, h) and is_sub(h, u) for f, h in x.member_hulls):
                rep.fail("regular-refine", f"no F <= {r(u)} with {r(m)} <= <F> <= {r(u)}", U=r(u), M=r(m))
                break
    try:
        subfams = x._directed_subfamilies
    except CapExceeded:
        rep.notes.append("directed-union closure skipped: R(X) too large")
        subfams = []
    for union, members in subfams:
        if union not in regset:
            rep.fail("directed-union", f"directed union {r(union)} is not regular",
                     D=[r(m) for m in members])
    basis = {h for _, h in x.member_hulls if h}
    wb = {(a, b): _way_below_fast(x, a, b) for a in regs for b in regs}
    for u in regs:
        approx = [b for b in basis if b in regset and wb[(b, u)]]
        union = 0
        for b in approx:
            union |= b
        if union != u or not is_directed(approx):
            rep.fail("basis", f"basis elements way below {r(u)} do not form a directed family with union {r(u)}",
                     U=r(u))
    for (a, b), v in wb.items():
        if v and not is_sub(a, b):
            rep.fail("waybelow-inclusion", f"{r(a)} << {r(b)} but not {r(a)} <= {r(b)}", U1=r(a), U2=r(b))
        if v:
            for c in regs:
                if wb[(b, c)] and not wb[(a, c)]:
                    rep.fail("waybelow-transitive", f"{r(a)} << {r(b)} << {r(c)} but not {r(a)} << {r(c)}",
                             U1=r(a), U2=r(b), U3=r(c))
    # interpolation for finite M of size <= 2 (M empty included)
    ys = [y for y in basis if y in regset]
    for u in regs:
        below = [a for a in regs if wb[(a, u)]]
        ms = [()] + [(a,) for a in below] + [(a, b) for i, a in enumerate(below) for b in below[i + 1:]]
        for m in ms:
            if not any(wb[(y, u)] and all(wb[(a, y)] for a in m) for y in ys):
                rep.fail("interpolation", f"no basis element y with M << y << {r(u)}",
                         M=[r(a) for a in m], U=r(u))
    return rep
