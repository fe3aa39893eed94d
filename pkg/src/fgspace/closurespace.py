"""Closure operators, the post-composed map tau, and generalized closure spaces.

A generalized closure space pairs a closure operator ``gamma`` with a map
``tau`` that only needs to behave on gamma-images:

1. ``tau(gamma(A)) <= gamma(A)``
2. ``tau(tau(gamma(A))) == tau(gamma(A))``
3. ``A <= B`` implies ``tau(gamma(A)) <= tau(gamma(B))``

The composite ``tau . gamma`` is called the hull and written ``<A>`` in
docstrings below.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Mapping, Optional

from .errors import InvalidClosure, InvalidSpace, NotATopology, TauUndefined, UniverseMismatch
from .setcore import (
    DEFAULT_CAP,
    Report,
    Subset,
    SubsetFamily,
    Universe,
    bits,
    check_cap,
    is_sub,
    submasks,
)


@dataclass(frozen=True)
class ClosureSpec:
    """A closure operator given either by its closed sets or by a full table."""

    universe: Universe
    closed_sets: Optional[tuple[int, ...]] = None
    table: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if (self.closed_sets is None) == (self.table is None):
            raise InvalidClosure("give exactly one of closed_sets or table")
        if self.closed_sets is not None:
            cs = tuple(sorted(set(self.closed_sets)))
            object.__setattr__(self, "closed_sets", cs)
            members = set(cs)
            if self.universe.full not in members:
                raise InvalidClosure(f"closed system must contain the universe {self.universe}")
            for a, b in combinations(cs, 2):
                if a & b not in members:
                    r = self.universe.render
                    raise InvalidClosure(f"{r(a)} & {r(b)} = {r(a & b)} is not closed")
        else:
            if len(self.table) != 1 << self.universe.n:
                raise InvalidClosure("a full closure table needs one entry per subset")

    @classmethod
    def from_closed_sets(cls, universe: Universe, closed) -> "ClosureSpec":
        return cls(universe, closed_sets=SubsetFamily.of(universe, closed).masks)

    @classmethod
    def from_table(cls, universe: Universe, table: Mapping) -> "ClosureSpec":
        """``table`` maps every subset (mask, Subset or ``{a}`` string) to its closure."""
        rows = [None] * (1 << universe.n)
        for k, v in table.items():
            rows[_mask(universe, k)] = _mask(universe, v)
        if any(r is None for r in rows):
            missing = [universe.render(i) for i, r in enumerate(rows) if r is None]
            raise InvalidClosure(f"closure table is missing {missing[:4]}")
        return cls(universe, table=tuple(rows))

    @classmethod
    def identity(cls, universe: Universe) -> "ClosureSpec":
        return cls(universe, table=tuple(range(1 << universe.n)))

    @cached_property
    def _memo(self) -> dict[int, int]:
        return {}

    def __call__(self, mask: int) -> int:
        if self.table is not None:
            return self.table[mask]
        memo = self._memo
        out = memo.get(mask)
        if out is None:
            out = self.universe.full
            for c in self.closed_sets:
                if mask & ~c == 0:
                    out &= c
            memo[mask] = out
        return out

    def fixed_points(self) -> list[int]:
        if self.closed_sets is not None:
            return list(self.closed_sets)
        return sorted({m for m in range(1 << self.universe.n) if self.table[m] == m})

    def axioms(self, cap: int = DEFAULT_CAP) -> Report:
        """Extensive, idempotent and monotone, checked on every subset."""
        u = self.universe
        check_cap(u.n, cap)
        rep = Report()
        if self.closed_sets is not None:
            return rep  # a Moore family always induces a closure operator
        r = u.render
        for a in range(1 << u.n):
            ga = self(a)
            if not is_sub(a, ga):
                rep.fail("gamma-extensive", f"{r(a)} is not contained in gamma({r(a)}) = {r(ga)}", A=r(a))
            if self(ga) != ga:
                rep.fail("gamma-idempotent", f"gamma(gamma({r(a)})) != gamma({r(a)})", A=r(a))
            for i in range(u.n):
                b = a | 1 << i
                if b != a and not is_sub(ga, self(b)):
                    rep.fail("gamma-monotone", f"{r(a)} <= {r(b)} but gamma not monotone", A=r(a), B=r(b))
        return rep


@dataclass(frozen=True)
class TauSpec:
    """``tau`` as an interior system (opens) or as a partial table."""

    universe: Universe
    open_sets: Optional[tuple[int, ...]] = None
    table: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        if (self.open_sets is None) == (self.table is None):
            raise ValueError("give exactly one of open_sets or table")
        if self.open_sets is not None:
            object.__setattr__(self, "open_sets", tuple(sorted(set(self.open_sets))))
        else:
            object.__setattr__(self, "table", tuple(sorted(dict(self.table).items())))

    @classmethod
    def from_open_sets(cls, universe: Universe, opens) -> "TauSpec":
        return cls(universe, open_sets=SubsetFamily.of(universe, opens).masks)

    @classmethod
    def from_table(cls, universe: Universe, table: Mapping) -> "TauSpec":
        rows = tuple((_mask(universe, k), _mask(universe, v)) for k, v in table.items())
        return cls(universe, table=rows)

    @classmethod
    def identity(cls, universe: Universe) -> "TauSpec":
        return cls(universe, open_sets=tuple(1 << i for i in range(universe.n)))

    @cached_property
    def _lookup(self) -> dict[int, int]:
        return dict(self.table) if self.table is not None else {}

    def defined_on(self, mask: int) -> bool:
        return self.open_sets is not None or mask in self._lookup

    def __call__(self, mask: int) -> int:
        if self.open_sets is not None:
            out = 0
            for o in self.open_sets:
                if o & ~mask == 0:
                    out |= o
            return out
        try:
            return self._lookup[mask]
        except KeyError:
            raise TauUndefined(self.universe.render(mask)) from None


def _mask(universe: Universe, x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Subset):
        if x.universe != universe:
            raise UniverseMismatch(f"{x} is not over {universe}")
        return x.mask
    if isinstance(x, str):
        return universe.parse(x).mask
    return universe.mask_of(x)


def check_generalized(
    n: int,
    gamma: Callable[[int], int],
    tau: Callable[[int], int],
    render: Callable[[int], str],
) -> Report:
    """Check the three generalized-closure conditions for arbitrary maps.

    Monotonicity (condition 3) is checked on covering pairs ``A <= A+{x}``,
    which generate the inclusion order; the reported pair is such a pair.
    """
    rep = Report()
    hull = {}
    for a in range(1 << n):
        ga = gamma(a)
        try:
            t = tau(ga)
        except TauUndefined:
            rep.fail("tau-undefined", f"tau undefined on gamma({render(a)}) = {render(ga)}", A=render(a))
            continue
        hull[a] = t
        if not is_sub(t, ga):
            rep.fail("cond1", f"tau(gamma({render(a)})) = {render(t)} is not inside gamma = {render(ga)}",
                     A=render(a))
        try:
            tt = tau(t)
        except TauUndefined:
            rep.fail("tau-undefined", f"tau undefined on the image {render(t)}", A=render(a))
            continue
        if tt != t:
            rep.fail("cond2", f"tau(tau(gamma({render(a)}))) = {render(tt)} != {render(t)}", A=render(a))
    for a, ha in hull.items():
        for i in range(n):
            b = a | 1 << i
            if b != a and b in hull and not is_sub(ha, hull[b]):
                rep.fail("cond3", f"{render(a)} <= {render(b)} but <{render(a)}> = {render(ha)} "
                         f"is not inside <{render(b)}> = {render(hull[b])}", A=render(a), B=render(b))
    return rep


@dataclass(frozen=True)
class GCSpace:
    universe: Universe
    gamma: ClosureSpec
    tau: TauSpec

    def __post_init__(self):
        if self.gamma.universe != self.universe or self.tau.universe != self.universe:
            raise UniverseMismatch("gamma, tau and the space must share one universe")

    @cached_property
    def report(self) -> Report:
        return validate_gcs(self)

    @property
    def validated(self) -> bool:
        return self.report.ok

    def require_valid(self) -> "GCSpace":
        if not self.validated:
            raise InvalidSpace(self.report)
        return self

    @cached_property
    def _hulls(self) -> dict[int, int]:
        return {}

    def hull(self, mask: int) -> int:
        h = self._hulls.get(mask)
        if h is None:
            h = self.tau(self.gamma(mask))
            self._hulls[mask] = h
        return h

    def render(self, mask: int) -> str:
        return self.universe.render(mask)


def validate_gcs(g: GCSpace, cap: int = DEFAULT_CAP) -> Report:
    check_cap(g.universe.n, cap)
    rep = g.gamma.axioms(cap)
    rep.extend(check_generalized(g.universe.n, g.gamma, g.tau, g.universe.render))
    return rep


def _check_arg(g: GCSpace, a: Subset) -> None:
    if a.universe != g.universe:
        raise UniverseMismatch(f"{a} is not over {g.universe}")


def gamma_apply(g: GCSpace, a: Subset) -> Subset:
    _check_arg(g, a)
    return Subset(g.universe, g.gamma(a.mask))


def tau_apply(g: GCSpace, a: Subset) -> Subset:
    _check_arg(g, a)
    return Subset(g.universe, g.tau(a.mask))


def hull(g: GCSpace, a: Subset) -> Subset:
    """``tau(gamma(a))``."""
    _check_arg(g, a)
    g.require_valid()
    return Subset(g.universe, g.hull(a.mask))


# -- generators ---------------------------------------------------------------

def is_topology(universe: Universe, opens: SubsetFamily) -> Report:
    rep = Report()
    members = set(opens.masks)
    r = universe.render
    if 0 not in members:
        rep.fail("top-empty", "the empty set is not open")
    if universe.full not in members:
        rep.fail("top-full", f"{universe} is not open")
    for a, b in combinations(sorted(members), 2):
        if a | b not in members:
            rep.fail("top-union", f"{r(a)} | {r(b)} is not open", A=r(a), B=r(b))
        if a & b not in members:
            rep.fail("top-meet", f"{r(a)} & {r(b)} is not open", A=r(a), B=r(b))
    return rep


def from_topology(opens: SubsetFamily) -> GCSpace:
    """Topological closure as gamma, topological interior as tau."""
    u = opens.universe
    rep = is_topology(u, opens)
    if not rep.ok:
        raise NotATopology(rep.violations[0].message)
    closed = tuple(u.full & ~o for o in opens.masks)
    return GCSpace(u, ClosureSpec(u, closed_sets=closed), TauSpec(u, open_sets=opens.masks))


def from_closure(gamma: ClosureSpec, tau: Optional[TauSpec] = None) -> GCSpace:
    """Pair a closure with tau (identity when omitted, the classical case)."""
    u = gamma.universe
    return GCSpace(u, gamma, tau if tau is not None else TauSpec.identity(u))


def from_interior(tau: TauSpec) -> GCSpace:
    u = tau.universe
    return GCSpace(u, ClosureSpec.identity(u), tau)


def is_algebraic_closure(g: ClosureSpec, cap: int = DEFAULT_CAP) -> Report:
    """gamma(A) equals the union of gamma(F) over finite F <= A, for every A.

    On a finite universe this always holds (take F = A); the check runs the
    quantifier anyway.
    """
    u = g.universe
    check_cap(u.n, cap)
    rep = Report()
    for a in range(1 << u.n):
        acc = 0
        for f in submasks(a):
            acc |= g(f)
        if acc != g(a):
            rep.fail("algebraic", f"gamma({u.render(a)}) is not the union of finite closures",
                     A=u.render(a))
    return rep


def finite_topologies(n: int):
    """All topologies on ``{0..n-1}`` as sorted tuples of open masks."""
    full = (1 << n) - 1
    inner = [m for m in range(1, full)]
    for k in range(len(inner) + 1):
        for pick in combinations(inner, k):
            opens = {0, full, *pick}
            if all(a | b in opens and a & b in opens for a in opens for b in opens):
                yield tuple(sorted(opens))


def find_ci_witness(max_n: int = 3) -> Optional[dict]:
    """Search finite topologies for one where interior-then-closure breaks
    the generalized-closure conditions (with ``i`` in gamma's slot and ``c``
    in tau's slot).  Returns the first witness found in canonical order.
    """
    for n in range(1, max_n + 1):
        u = Universe(tuple(str(i) for i in range(n)))
        for opens in finite_topologies(n):
            space = from_topology(SubsetFamily(u, opens))
            interior = space.tau
            closure = space.gamma
            rep = check_generalized(n, interior, closure, u.render)
            if not rep.ok:
                return {
                    "universe": list(u.labels),
                    "opens": [u.render(o) for o in opens],
                    "violation": rep.violations[0].to_dict(),
                }
    return None


def closed_sets_of(g: GCSpace) -> list[int]:
    return g.gamma.fixed_points()


def hull_fixed_points(g: GCSpace) -> list[int]:
    return sorted({g.hull(a) for a in range(1 << g.universe.n)})


__all__ = [
    "ClosureSpec",
    "TauSpec",
    "GCSpace",
    "validate_gcs",
    "gamma_apply",
    "tau_apply",
    "hull",
    "from_topology",
    "from_closure",
    "from_interior",
    "is_algebraic_closure",
    "is_topology",
    "finite_topologies",
    "find_ci_witness",
    "check_generalized",
    "bits",
]
