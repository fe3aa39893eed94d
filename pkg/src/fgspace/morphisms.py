"""Approximable mappings between F-augmented spaces.

A relation ``t`` pairs family members of the source with points of the
target.  ``F t M'`` for a set ``M'`` means ``F t x'`` for every ``x'`` in
``M'`` (so it holds vacuously for the empty set).  Internally a relation is
summarised by ``image[F]``, the mask of points related to ``F``; ``F t M'``
is then ``M' <= image[F]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import NoGreatestElement, NotRegular, NotScottContinuous, SpaceMismatch, SupMissing
from .fgcs import FGCSpace
from .finposet import (
    FinPoset,
    MonotoneMap,
    build_poset_space,
    is_scott_continuous,
    regular_poset,
    way_below_matrix,
)
from .setcore import DEFAULT_CAP, Report, Subset, bits, check_cap, is_sub, submasks


@dataclass(frozen=True)
class AMRelation:
    source: FGCSpace
    target: FGCSpace
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_labels(cls, source: FGCSpace, target: FGCSpace, pairs: Iterable) -> "AMRelation":
        """``pairs`` holds ``(member, point)`` with member as labels or ``{a,b}``."""
        out = set()
        for f, x in pairs:
            fm = source.universe.parse(f).mask if isinstance(f, str) else source.universe.mask_of(f)
            out.add((fm, target.universe.index(x)))
        return cls(source, target, frozenset(out))

    @classmethod
    def from_image(cls, source: FGCSpace, target: FGCSpace, image: dict[int, int]) -> "AMRelation":
        return cls(source, target, frozenset((f, i) for f, m in image.items() for i in bits(m)))

    @cached_property
    def image(self) -> dict[int, int]:
        out = {f: 0 for f in self.source.family.masks}
        for f, i in self.pairs:
            out[f] = out.get(f, 0) | 1 << i
        return out

    def relates(self, f: int, mset: int) -> bool:
        return is_sub(mset, self.image.get(f, 0))

    @cached_property
    def report(self) -> Report:
        return validate_am(self)

    @property
    def validated(self) -> bool:
        return self.report.ok

    def labelled_pairs(self) -> list:
        s, t = self.source, self.target
        return [[s.universe.elements(f), t.universe.labels[i]] for f, i in sorted(self.pairs)]


def _same_space(a: FGCSpace, b: FGCSpace) -> bool:
    return a is b or a == b


def validate_am(t: AMRelation, cap: int = DEFAULT_CAP, witnesses: bool = False) -> Report:
    """(AM1) ``F t F'`` implies ``F t <F'>``.
    (AM2) ``F <= <F1>`` and ``F t M'`` imply ``F1 t M'``; since ``F t M'`` is a
    conjunction over ``M'`` the failing ``M'`` reported is a singleton.
    (AM3) ``F t M'`` implies some ``G <= <F>`` and ``G'`` with ``M' <= <G'>``
    and ``G t G'``; ``M'`` ranges over every subset of the image of ``F``.
    """
    src, tgt = t.source.require_valid(), t.target.require_valid()
    check_cap(tgt.universe.n, cap)
    rep = Report()
    rs, rt = src.render, tgt.render
    fam = src.family
    for f, i in sorted(t.pairs):
        if f not in fam or i >= tgt.universe.n:
            rep.fail("pair-domain", f"pair ({rs(f)}, {i}) is outside family x target", F=rs(f))
    img = t.image
    for f in fam.masks:
        for g, hg in tgt.member_hulls:
            if is_sub(g, img[f]) and not is_sub(hg, img[f]):
                rep.fail("AM1", f"{rs(f)} t {rt(g)} but not {rs(f)} t <{rt(g)}> = {rt(hg)}", F=rs(f), Fp=rt(g))
    for f in fam.masks:
        for f1, h1 in src.member_hulls:
            if is_sub(f, h1):
                missing = img[f] & ~img[f1]
                if missing:
                    x = next(bits(missing))
                    rep.fail("AM2", f"{rs(f)} <= <{rs(f1)}> and {rs(f)} t {tgt.universe.labels[x]} "
                             f"but not {rs(f1)} t it", F=rs(f), F1=rs(f1), Mp=rt(1 << x))
    found = {}
    for f, hf in src.member_hulls:
        covers = []
        for g, _ in src.member_hulls:
            if is_sub(g, hf):
                for gp, hgp in tgt.member_hulls:
                    if is_sub(gp, img[g]):
                        covers.append((g, gp, hgp))
        for m in submasks(img[f]):
            w = next(((g, gp) for g, gp, h in covers if is_sub(m, h)), None)
            if w is None:
                rep.fail("AM3", f"{rs(f)} t {rt(m)} has no witnesses G, G'", F=rs(f), Mp=rt(m))
                break
            if witnesses:
                found[f"{rs(f)}|{rt(m)}"] = [rs(w[0]), rt(w[1])]
    if witnesses:
        rep.data["AM3_witnesses"] = found
    return rep


def am_laws(t: AMRelation) -> Report:
    """Consequences of the axioms, checked rather than assumed."""
    src, tgt = t.source, t.target
    rep = Report()
    rs, rt = src.render, tgt.render
    img = t.image
    mh = dict(src.member_hulls)
    for f, hf in src.member_hulls:
        below = [g for g in src.family.masks if is_sub(g, hf)]
        for m in submasks(img[f]):
            if not any(is_sub(m, img[g]) for g in below):
                rep.fail("P1", f"{rs(f)} t {rt(m)} but no G <= <{rs(f)}> relates to it", F=rs(f), Mp=rt(m))
            if not any(is_sub(m, hg) and is_sub(g, img[f]) for g, hg in tgt.member_hulls):
                rep.fail("P2", f"{rs(f)} t {rt(m)} but no G' covers it", F=rs(f), Mp=rt(m))
        for g in below:
            if not is_sub(img[g], img[f]):
                rep.fail("P1-converse", f"{rs(g)} <= <{rs(f)}> yet image not inherited", F=rs(f), G=rs(g))
        for f1 in src.family.masks:
            if is_sub(f1, f) and not is_sub(img[f1], img[f]):
                rep.fail("P3", f"{rs(f1)} <= {rs(f)} but image of {rs(f1)} is larger", F=rs(f), F1=rs(f1))
    for f in src.family.masks:
        v = _apply(t, mh[f]) if mh[f] else 0
        if mh[f] and v != img[f]:
            rep.fail("image-at-hull", f"t(<{rs(f)}>) != t({rs(f)})", F=rs(f))
        if img[f] and img[f] not in set(tgt.regulars):
            rep.fail("image-regular", f"t({rs(f)}) = {rt(img[f])} is not regular", F=rs(f))
    return rep


def am_identity(x: FGCSpace) -> AMRelation:
    return AMRelation.from_image(x, x, {f: h for f, h in x.member_hulls})


def am_compose(t1: AMRelation, t2: AMRelation) -> AMRelation:
    """``t2 after t1``: ``F`` relates to ``x''`` when some middle member ``G``
    has ``F t1 G`` and ``G t2 x''``."""
    if not _same_space(t1.target, t2.source):
        raise SpaceMismatch("t1.target must equal t2.source")
    img1, img2 = t1.image, t2.image
    out = {}
    for f in t1.source.family.masks:
        acc = 0
        for g in t2.source.family.masks:
            if is_sub(g, img1[f]):
                acc |= img2[g]
        out[f] = acc
    return AMRelation.from_image(t1.source, t2.target, out)


def _apply(t: AMRelation, u: int) -> int:
    acc = 0
    for f, m in t.image.items():
        if is_sub(f, u):
            acc |= m
    return acc


def am_apply(t: AMRelation, u: Subset) -> Subset:
    """Image of a regular open set: points related to some member inside ``u``.

    The result may be empty (e.g. for the empty relation), in which case it is
    not a regular open set; callers check with :func:`fgcs.is_regular_open`.
    """
    if u.universe != t.source.universe:
        raise SpaceMismatch(f"{u} is not over the source universe")
    if u.mask not in set(t.source.regulars):
        raise NotRegular(f"{u} is not regular open in the source")
    return Subset(t.target.universe, _apply(t, u.mask))


def phi_table(t: AMRelation) -> dict[int, int]:
    """``U -> t(U)`` on every regular ``U`` of the source, without requiring
    the outputs to be regular."""
    return {u: _apply(t, u) for u in t.source.regulars}


def am_to_scott(t: AMRelation) -> MonotoneMap:
    """The induced map R(source) -> R(target)."""
    p, regs = regular_poset(t.source)
    q, tregs = regular_poset(t.target)
    pos = {m: k for k, m in enumerate(tregs)}
    table = []
    for u in regs:
        v = _apply(t, u)
        if v not in pos:
            raise NotRegular(f"image {t.target.render(v)} of {t.source.render(u)} is not regular")
        table.append(pos[v])
    return MonotoneMap(p, q, tuple(table))


def scott_to_am(phi: MonotoneMap, source: FGCSpace, target: FGCSpace) -> AMRelation:
    """``F`` relates to ``x'`` exactly when ``x'`` lies in ``phi(<F>)``.

    Members with an empty hull get no pairs (their hull is not in R(source)).
    """
    p, regs = regular_poset(source)
    q, tregs = regular_poset(target)
    if phi.source != p or phi.target != q:
        raise SpaceMismatch("phi must map R(source) to R(target)")
    if not is_scott_continuous(phi, "oracle" if p.n <= 10 else "fast"):
        raise NotScottContinuous("phi does not preserve directed sups")
    pos = {m: k for k, m in enumerate(regs)}
    image = {}
    for f, h in source.member_hulls:
        image[f] = tregs[phi(pos[h])] if h in pos else 0
    return AMRelation.from_image(source, target, image)


def poset_fn_to_am(f: MonotoneMap) -> AMRelation:
    """``F`` relates to ``x'`` when ``x'`` is way below ``f(max F)``."""
    src = build_poset_space(f.source)
    tgt = build_poset_space(f.target)
    wb = way_below_matrix(f.target, "fast")
    image = {}
    for fm in src.space.family.masks:
        top = f.source.greatest(src.to_poset(fm))
        if top is None:
            raise NoGreatestElement(src.space.render(fm))
        image[fm] = tgt.to_universe(wb[f(top)])
    return AMRelation.from_image(src.space, tgt.space, image)


def am_to_poset_fn(t: AMRelation, source: FinPoset, target: FinPoset) -> MonotoneMap:
    """``x -> sup I_x`` with ``I_x`` the points related to some member inside
    the way-below set of ``x``."""
    src = build_poset_space(source)
    tgt = build_poset_space(target)
    if not (_same_space(t.source, src.space) and _same_space(t.target, tgt.space)):
        raise SpaceMismatch("relation is not between the spaces of the given posets")
    wb = way_below_matrix(source, "fast")
    table = []
    for x in range(source.n):
        ix = _apply(t, src.to_universe(wb[x]))
        s = target.sup(tgt.to_poset(ix))
        if s is None:
            raise SupMissing(f"I_{source.label(x)} = {t.target.render(ix)} has no sup")
        table.append(s)
    return MonotoneMap(source, target, tuple(table))


def maps_equal(a: MonotoneMap, b: MonotoneMap) -> bool:
    return a.source == b.source and a.target == b.target and a.table == b.table


def category_laws(t1: AMRelation, t2: AMRelation, t3: AMRelation) -> Report:
    """Associativity of composition and two-sided neutrality of the identity."""
    rep = Report()
    left = am_compose(am_compose(t1, t2), t3)
    right = am_compose(t1, am_compose(t2, t3))
    if left.pairs != right.pairs:
        rep.fail("associativity", "(t3 t2) t1 != t3 (t2 t1)")
    for k, t in enumerate((t1, t2, t3), 1):
        if am_compose(am_identity(t.source), t).pairs != t.pairs:
            rep.fail("left-identity", f"t{k} after id != t{k}")
        if am_compose(t, am_identity(t.target)).pairs != t.pairs:
            rep.fail("right-identity", f"id after t{k} != t{k}")
    for k, t in enumerate((am_compose(t1, t2), am_compose(t2, t3)), 1):
        if not validate_am(t).ok:
            rep.fail("composite-valid", f"composite {k} is not approximable")
    return rep


def check_functor_laws(sample: list[tuple[AMRelation, AMRelation]]) -> Report:
    """The regular-open functor preserves identities and composition; the
    map-to-relation conversion inverts it on every sampled relation."""
    rep = Report()
    seen = []
    for k, (t1, t2) in enumerate(sample):
        if not _same_space(t1.target, t2.source):
            raise SpaceMismatch(f"pair {k} is not composable")
        for x in (t1.source, t1.target, t2.target):
            if any(x is y for y in seen):
                continue
            seen.append(x)
            ident = phi_table(am_identity(x))
            if any(v != u for u, v in ident.items()):
                rep.fail("functor-identity", f"identity not preserved on space #{len(seen)}", pair=k)
        p1, p2 = phi_table(t1), phi_table(t2)
        comp = phi_table(am_compose(t1, t2))
        for u, v in comp.items():
            mid = p1[u]
            via = p2[mid] if mid in p2 else _apply(t2, mid)
            if v != via:
                rep.fail("functor-composition", f"G(t2 t1) != G(t2) G(t1) at {t1.source.render(u)}",
                         pair=k, U=t1.source.render(u))
        for j, t in enumerate((t1, t2, am_compose(t1, t2))):
            try:
                phi = am_to_scott(t)
            except NotRegular:
                rep.notes.append(f"pair {k} relation {j}: some image is empty, conversion skipped")
                continue
            back = scott_to_am(phi, t.source, t.target)
            if back.pairs != t.pairs:
                rep.fail("faithful", f"relation {j} of pair {k} is not recovered from its map", pair=k)
            if not maps_equal(am_to_scott(back), phi):
                rep.fail("full", f"map {j} of pair {k} is not recovered from its relation", pair=k)
    return rep


def random_monotone_map(p: FinPoset, q: FinPoset, rng: random.Random) -> MonotoneMap:
    """Uniform-ish random order-preserving map (randomised backtracking)."""
    order = sorted(range(p.n), key=lambda i: (bin(p.down[i]).count("1"), i))
    table = [0] * p.n

    def extend(k):
        if k == p.n:
            return True
        i = order[k]
        below = [table[j] for j in order[:k] if p.leq(j, i)]
        cands = [v for v in range(q.n) if all(q.leq(b, v) for b in below)]
        rng.shuffle(cands)
        for v in cands:
            table[i] = v
            if extend(k + 1):
                return True
        return False

    if not extend(0):
        raise ValueError("no monotone map exists")
    return MonotoneMap(p, q, tuple(table))


def random_am(source: FGCSpace, target: FGCSpace, rng: random.Random) -> AMRelation:
    p, _ = regular_poset(source)
    q, _ = regular_poset(target)
    return scott_to_am(random_monotone_map(p, q, rng), source, target)
