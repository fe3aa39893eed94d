"""Finite posets, their domain-theoretic classification, and the passage
between a finite poset and its associated F-augmented space.

Order relations are stored as down-set masks: ``down[i]`` has bit ``j`` set
exactly when ``j <= i``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Literal, Optional, Sequence

from .closurespace import ClosureSpec, GCSpace, TauSpec
from .errors import CapExceeded, EmptyPoset, InvalidBasis, NotAPartialOrder, SupMissing
from .fgcs import FGCSpace, _regular_fast
from .setcore import DEFAULT_CAP, Report, Subset, SubsetFamily, Universe, bits, check_cap, is_sub, popcount

Mode = Literal["fast", "oracle"]

# directed-subset enumeration is exponential; above this size the finite
# shortcuts are used instead
DIRECTED_CAP = 10


@dataclass(frozen=True)
class FinPoset:
    elements: Universe
    down: tuple[int, ...]

    def __post_init__(self):
        n = self.elements.n
        if len(self.down) != n:
            raise NotAPartialOrder("one down-set per element is required")
        for i in range(n):
            if not self.down[i] >> i & 1:
                raise NotAPartialOrder(f"{self.label(i)} <= {self.label(i)} is missing")
            for j in bits(self.down[i]):
                if not is_sub(self.down[j], self.down[i]):
                    raise NotAPartialOrder(f"order is not transitive at {self.label(j)} <= {self.label(i)}")
                if j != i and self.down[j] >> i & 1:
                    raise NotAPartialOrder(f"{self.label(i)} and {self.label(j)} are mutually below")

    @classmethod
    def from_pairs(cls, labels: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "FinPoset":
        """Reflexive-transitive closure of ``pairs`` (each ``(x, y)`` meaning x <= y)."""
        if not labels:
            raise EmptyPoset("a poset needs at least one element")
        u = Universe(tuple(labels))
        down = [1 << i for i in range(u.n)]
        for x, y in pairs:
            down[u.index(y)] |= 1 << u.index(x)
        changed = True
        while changed:
            changed = False
            for i in range(u.n):
                acc = down[i]
                for j in bits(down[i]):
                    acc |= down[j]
                if acc != down[i]:
                    down[i] = acc
                    changed = True
        return cls(u, tuple(down))

    @classmethod
    def chain(cls, n: int) -> "FinPoset":
        labels = [str(i) for i in range(n)]
        return cls.from_pairs(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])

    # -- basic order structure ---------------------------------------------

    @property
    def n(self) -> int:
        return self.elements.n

    @property
    def full(self) -> int:
        return self.elements.full

    def label(self, i: int) -> str:
        return self.elements.labels[i]

    def index(self, label: str) -> int:
        return self.elements.index(label)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    @cached_property
    def up(self) -> tuple[int, ...]:
        return tuple(sum(1 << j for j in range(self.n) if self.leq(i, j)) for i in range(self.n))

    def down_of(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def upper_bounds(self, mask: int) -> int:
        out = self.full
        for i in bits(mask):
            out &= self.up[i]
        return out

    def least(self, mask: int) -> Optional[int]:
        for i in bits(mask):
            if is_sub(mask, self.up[i]):
                return i
        return None

    def greatest(self, mask: int) -> Optional[int]:
        for i in bits(mask):
            if is_sub(mask, self.down[i]):
                return i
        return None

    def sup(self, mask: int, within: Optional[int] = None) -> Optional[int]:
        """Least upper bound of ``mask``, optionally computed inside a subposet."""
        ub = self.upper_bounds(mask)
        if within is not None:
            ub &= within
        return self.least(ub)

    def is_directed(self, mask: int) -> bool:
        if mask == 0:
            return False
        idx = list(bits(mask))
        for a, i in enumerate(idx):
            for j in idx[a + 1:]:
                if self.upper_bounds((1 << i) | (1 << j)) & mask == 0:
                    return False
        return True

    def directed_subsets(self, cap: int = DIRECTED_CAP) -> list[int]:
        if self.n > cap:
            raise CapExceeded(self.n, cap)
        return [m for m in range(1, 1 << self.n) if self.is_directed(m)]

    def render(self, mask: int) -> str:
        return self.elements.render(mask)

    def to_dict(self) -> dict:
        pairs = [[self.label(i), self.label(j)] for j in range(self.n) for i in bits(self.down[j])
                 if i != j]
        return {"elements": list(self.elements.labels), "leq": pairs}


# -- way-below ----------------------------------------------------------------

def _wb_oracle(p: FinPoset, x: int, y: int, dirs: list[int]) -> bool:
    for d in dirs:
        s = p.sup(d)
        if s is not None and p.leq(y, s) and not any(p.leq(x, e) for e in bits(d)):
            return False
    return True


def way_below_poset(p: FinPoset, x: str, y: str, mode: Mode = "fast", cap: int = DIRECTED_CAP) -> bool:
    """x << y.  oracle: quantify directed subsets; fast: x <= y."""
    i, j = p.index(x), p.index(y)
    if mode == "fast":
        return p.leq(i, j)
    if mode == "oracle":
        return _wb_oracle(p, i, j, p.directed_subsets(cap))
    raise ValueError(f"unknown mode {mode!r}")


def way_below_matrix(p: FinPoset, mode: Mode = "fast", cap: int = DIRECTED_CAP) -> tuple[int, ...]:
    """``wb[y]`` is the mask of elements way below ``y``."""
    if mode == "fast":
        return p.down
    dirs = p.directed_subsets(cap)
    return tuple(sum(1 << x for x in range(p.n) if _wb_oracle(p, x, y, dirs)) for y in range(p.n))


# -- classification -------------------------------------------------------------

@dataclass
class PosetFlags:
    dcpo: bool
    continuous: bool
    algebraic: bool
    complete_lattice: bool
    L_domain: bool
    bounded_complete: bool
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in
                ("dcpo", "continuous", "algebraic", "complete_lattice", "L_domain", "bounded_complete")}


def _has_basis(p: FinPoset, wb: Sequence[int], basis: int, dirs: list[int]) -> bool:
    """Every x is the sup of some directed D inside (way-below x) & basis."""
    for x in range(p.n):
        pool = wb[x] & basis
        if not any(is_sub(d, pool) and p.sup(d) == x for d in dirs):
            return False
    return True


def _all_subsets_have_sup(p: FinPoset, carrier: int, bounded_only: bool = False) -> bool:
    idx = list(bits(carrier))
    for k in range(1 << len(idx)):
        s = 0
        for j, i in enumerate(idx):
            if k >> j & 1:
                s |= 1 << i
        if bounded_only and p.upper_bounds(s) & carrier == 0:
            continue
        if p.sup(s, within=carrier) is None:
            return False
    return True


def classify_poset(p: FinPoset, cap: int = DIRECTED_CAP) -> PosetFlags:
    notes = []
    if p.n <= cap:
        dirs = p.directed_subsets(cap)
        dcpo = all(p.sup(d) is not None for d in dirs)
        wb = way_below_matrix(p, "oracle", cap)
        compact = sum(1 << x for x in range(p.n) if wb[x] >> x & 1)
        continuous = dcpo and _has_basis(p, wb, p.full, dirs)
        algebraic = dcpo and _has_basis(p, wb, compact, dirs)
    else:
        notes.append(f"n = {p.n} > {cap}: finite posets taken as algebraic dcpos without enumeration")
        dcpo = continuous = algebraic = True
    complete_lattice = _all_subsets_have_sup(p, p.full)
    L_domain = continuous and all(_all_subsets_have_sup(p, p.down[x]) for x in range(p.n))
    bounded_complete = continuous and _all_subsets_have_sup(p, p.full, bounded_only=True)
    return PosetFlags(dcpo, continuous, algebraic, complete_lattice, L_domain, bounded_complete, notes)


# -- maps -------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    """A map between finite posets, ``table[i]`` the image index of ``i``.

    Order preservation is not enforced on construction; use
    :meth:`is_monotone` or :func:`is_scott_continuous`.
    """

    source: FinPoset
    target: FinPoset
    table: tuple[int, ...]

    @classmethod
    def from_labels(cls, source: FinPoset, target: FinPoset, assignment: dict) -> "MonotoneMap":
        return cls(source, target, tuple(target.index(assignment[l]) for l in source.elements.labels))

    @classmethod
    def identity(cls, p: FinPoset) -> "MonotoneMap":
        return cls(p, p, tuple(range(p.n)))

    def __call__(self, i: int) -> int:
        return self.table[i]

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.table[i]
        return out

    def is_monotone(self) -> bool:
        s = self.source
        return all(self.target.leq(self.table[i], self.table[j])
                   for j in range(s.n) for i in bits(s.down[j]))

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        return MonotoneMap(self.source, other.target, tuple(other.table[t] for t in self.table))

    def as_labels(self) -> dict[str, str]:
        return {self.source.label(i): self.target.label(t) for i, t in enumerate(self.table)}


def is_scott_continuous(f: MonotoneMap, mode: Mode = "fast", cap: int = DIRECTED_CAP) -> bool:
    if mode == "fast":
        return f.is_monotone()
    if mode != "oracle":
        raise ValueError(f"unknown mode {mode!r}")
    for d in f.source.directed_subsets(cap):
        s = f.source.sup(d)
        if s is None:
            continue
        img_sup = f.target.sup(f.image(d))
        if img_sup is None or img_sup != f(s):
            return False
    return True


def monotone_maps(source: FinPoset, target: FinPoset) -> Iterator[MonotoneMap]:
    """Every order-preserving map, in lexicographic table order."""
    n = source.n
    order = _linear_extension(source)
    table = [0] * n

    def extend(k):
        if k == n:
            yield MonotoneMap(source, target, tuple(table))
            return
        i = order[k]
        for t in range(target.n):
            if all(target.leq(table[j], t) for j in order[:k] if source.leq(j, i)):
                table[i] = t
                yield from extend(k + 1)

    yield from extend(0)


def _linear_extension(p: FinPoset) -> list[int]:
    return sorted(range(p.n), key=lambda i: (popcount(p.down[i]), i))


# -- poset -> space ----------------------------------------------------------------

@dataclass(frozen=True)
class PosetSpace:
    """The space built from a poset, remembering which poset element each
    universe element stands for."""

    poset: FinPoset
    basis: tuple[int, ...]
    space: FGCSpace

    def element_of(self, k: int) -> int:
        return self.basis[k]

    def to_universe(self, pmask: int) -> int:
        out = 0
        for k, i in enumerate(self.basis):
            if pmask >> i & 1:
                out |= 1 << k
        return out

    def to_poset(self, umask: int) -> int:
        out = 0
        for k in bits(umask):
            out |= 1 << self.basis[k]
        return out


def check_basis(p: FinPoset, basis: int, cap: int = DIRECTED_CAP) -> bool:
    """Every element is the sup of a directed subset of its way-below set inside ``basis``."""
    dirs = p.directed_subsets(cap)
    return _has_basis(p, way_below_matrix(p, "oracle", cap), basis, dirs)


def build_poset_space(p: FinPoset, basis: Optional[Iterable[str]] = None) -> PosetSpace:
    if p.n == 0:
        raise EmptyPoset("empty poset")
    if basis is None:
        bmask = p.full
    else:
        bmask = p.elements.mask_of(basis)
        if not check_basis(p, bmask):
            raise InvalidBasis(f"{p.render(bmask)} is not a basis")
    bidx = tuple(bits(bmask))
    u = Universe(tuple(p.label(i) for i in bidx))
    wb = way_below_matrix(p, "fast")

    def to_u(pm):
        return sum(1 << k for k, i in enumerate(bidx) if pm >> i & 1)

    def to_p(um):
        return sum(1 << bidx[k] for k in bits(um))

    closed = sorted({to_u(p.down_of(to_p(a)) & bmask) for a in range(1 << u.n)})
    tau = {}
    for c in closed:
        way = 0
        for i in bits(to_p(c)):
            way |= wb[i]
        tau[c] = to_u(way & bmask)
    gcs = GCSpace(u, ClosureSpec(u, closed_sets=tuple(closed)), TauSpec(u, table=tuple(tau.items())))
    family = tuple(a for a in range(1, 1 << u.n) if p.greatest(to_p(a)) is not None)
    return PosetSpace(p, bidx, FGCSpace(gcs, SubsetFamily(u, family)))


def poset_to_fgcs(p: FinPoset, basis: Optional[Iterable[str]] = None) -> FGCSpace:
    """gamma = down-closure in the basis, tau = way-below closure in the basis,
    family = nonempty finite subsets with a greatest element."""
    return build_poset_space(p, basis).space


def regular_poset(x: FGCSpace) -> tuple[FinPoset, tuple[int, ...]]:
    """R(X) ordered by inclusion, labelled by set rendering."""
    regs = x.regulars
    if not regs:
        raise EmptyPoset("R(X) is empty")
    u = Universe(tuple(x.render(m) for m in regs))
    down = tuple(sum(1 << j for j, b in enumerate(regs) if is_sub(b, a)) for a in regs)
    return FinPoset(u, down), regs


def regular_characterization(p: FinPoset, u: Subset, mode: Literal["R1R2", "direct"] = "R1R2") -> bool:
    if u.universe != p.elements:
        raise ValueError(f"{u} is not a subset of the poset's elements")
    m = u.mask
    if m == 0:
        return False
    if mode == "direct":
        ps = build_poset_space(p)
        return _regular_fast(ps.space.require_valid(), ps.to_universe(m))
    if mode != "R1R2":
        raise ValueError(f"unknown mode {mode!r}")
    wb = way_below_matrix(p, "fast")
    for v in bits(m):
        if not is_sub(wb[v], m):
            return False
    idx = list(bits(m))
    for k in range(1 << len(idx)):
        mm = sum(1 << idx[j] for j in range(len(idx)) if k >> j & 1)
        if not any(is_sub(mm, wb[w]) for w in idx):
            return False
    return True


def roundtrip_iso(p: FinPoset, cap: int = DEFAULT_CAP) -> Report:
    """x -> (way-below x) & B and U -> sup U are mutually inverse monotone maps
    between the poset and R(B).  The report carries both maps in ``data``."""
    check_cap(p.n, cap)
    rep = Report()
    ps = build_poset_space(p)
    x = ps.space
    if not x.validated:
        rep.extend(x.report, "space:")
        return rep
    regs = list(x.regulars)
    regset = set(regs)
    wb = way_below_matrix(p, "fast")
    r = x.render
    f = {}
    for i in range(p.n):
        fi = ps.to_universe(wb[i])
        f[i] = fi
        if fi not in regset:
            rep.fail("f-not-regular", f"f({p.label(i)}) = {r(fi)} is not regular", x=p.label(i))
    g = {}
    for U in regs:
        s = p.sup(ps.to_poset(U))
        if s is None:
            rep.fail("g-sup-missing", f"{r(U)} has no sup", U=r(U))
        else:
            g[U] = s
    for j in range(p.n):
        for i in bits(p.down[j]):
            if not is_sub(f[i], f[j]):
                rep.fail("f-monotone", f"f not monotone at {p.label(i)} <= {p.label(j)}",
                         x=p.label(i), y=p.label(j))
    for a in g:
        for b in g:
            if is_sub(a, b) and not p.leq(g[a], g[b]):
                rep.fail("g-monotone", f"g not monotone at {r(a)} <= {r(b)}", U=r(a), V=r(b))
    for i in range(p.n):
        if f[i] in g and g[f[i]] != i:
            rep.fail("g-after-f", f"g(f({p.label(i)})) = {p.label(g[f[i]])}", x=p.label(i))
    for U, s in g.items():
        if f[s] != U:
            rep.fail("f-after-g", f"f(g({r(U)})) = {r(f[s])}", U=r(U))
    rep.data["f"] = {p.label(i): r(m) for i, m in f.items()}
    rep.data["g"] = {r(U): p.label(s) for U, s in g.items()}
    rep.data["regulars"] = len(regs)
    return rep


# -- generators ---------------------------------------------------------------------

def all_labeled_posets(n: int) -> Iterator[FinPoset]:
    """Every partial order on ``{0..n-1}`` (labeled, not up to isomorphism)."""
    if n == 0:
        return
    u = Universe(tuple(str(i) for i in range(n)))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for choice in product((0, 1), repeat=len(pairs)):
        down = [1 << i for i in range(n)]
        for (i, j), c in zip(pairs, choice):
            if c:
                down[j] |= 1 << i
        ok = True
        for j in range(n):
            for i in bits(down[j]):
                if i != j and (down[i] >> j & 1 or not is_sub(down[i], down[j])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield FinPoset(u, tuple(down))


def random_poset(n: int, rng: random.Random, density: float = 0.4) -> FinPoset:
    """Transitive closure of random edges along a random linear order."""
    labels = [str(i) for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                pairs.append((labels[perm[a]], labels[perm[b]]))
    return FinPoset.from_pairs(labels, pairs)


def require_sup(p: FinPoset, mask: int) -> int:
    s = p.sup(mask)
    if s is None:
        raise SupMissing(f"{p.render(mask)} has no sup")
    return s
