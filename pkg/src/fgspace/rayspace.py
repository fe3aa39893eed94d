"""The rational line with up-closure followed by strict up-closure.

Hulls of finite nonempty sets are open rays ``(min F, inf)``; the regular open
sets are exactly the open rays and the whole line.  Nothing here enumerates
subsets: every question is decided on the grammar ``(a,inf)``, ``[a,inf)``,
``all`` (plus the empty set, which only appears as the hull of no points).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Optional

from .errors import EmptyF, MOutsideHull, NotRegular, ParseError

Kind = Literal["open", "closed", "all", "empty"]


@dataclass(frozen=True)
class Ray:
    kind: Kind
    a: Optional[Fraction] = None

    def __post_init__(self):
        if (self.kind in ("open", "closed")) != (self.a is not None):
            raise ValueError(f"{self.kind} ray needs {'an' if self.a is None else 'no'} endpoint")

    @classmethod
    def open(cls, a) -> "Ray":
        return cls("open", Fraction(a))

    @classmethod
    def closed(cls, a) -> "Ray":
        return cls("closed", Fraction(a))

    @classmethod
    def all(cls) -> "Ray":
        return cls("all")

    @classmethod
    def empty(cls) -> "Ray":
        return cls("empty")

    def contains_point(self, x: Fraction) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "empty":
            return False
        return x > self.a if self.kind == "open" else x >= self.a

    def __le__(self, other: "Ray") -> bool:
        """Set inclusion."""
        if self.kind == "empty" or other.kind == "all":
            return True
        if other.kind == "empty" or self.kind == "all":
            return False
        if self.kind == other.kind or self.kind == "open":
            return self.a >= other.a
        return self.a > other.a  # [a,inf) inside (b,inf)

    def __str__(self):
        if self.kind == "all":
            return "all"
        if self.kind == "empty":
            return "{}"
        return f"{'(' if self.kind == 'open' else '['}{self.a},inf)"


def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"not a rational: {text!r}") from e


def parse_ray(text: str) -> Ray:
    t = text.strip().replace(" ", "").lower()
    if t in ("all", "(-inf,inf)"):
        return Ray.all()
    if t in ("{}", "empty"):
        return Ray.empty()
    if len(t) > 2 and t[0] in "([" and t.endswith(",inf)"):
        a = parse_rat(t[1:-5])
        return Ray.open(a) if t[0] == "(" else Ray.closed(a)
    raise ParseError(f"not a ray: {text!r}; expected (a,inf), [a,inf) or all")


def _points(f: Iterable) -> list[Fraction]:
    return [Fraction(v) for v in f]


def up_closure(a: Iterable) -> Ray:
    """``{x : x >= some a}`` for a finite set."""
    pts = _points(a)
    return Ray.closed(min(pts)) if pts else Ray.empty()


def strict_up(r: Ray) -> Ray:
    """``{x : x > some point of r}`` for a ray."""
    if r.kind in ("all", "empty"):
        return r
    return Ray.open(r.a)


def hull_of(a: Iterable) -> Ray:
    """Composite hull of any finite set, the empty set included."""
    return strict_up(up_closure(a))


def ray_hull(f: Iterable) -> Ray:
    pts = _points(f)
    if not pts:
        raise EmptyF("the family holds only nonempty finite sets")
    return hull_of(pts)


def regular_witness(u: Ray, m: Iterable) -> Optional[list[Fraction]]:
    """A member ``F`` with ``M <= <F> <= u`` for the finite ``m``, if one exists."""
    pts = _points(m)
    if not all(u.contains_point(x) for x in pts):
        return None
    if u.kind == "all":
        return [min(pts) - 1 if pts else Fraction(0)]
    if u.kind == "open":
        return [u.a]
    if u.kind == "closed":
        # any F with <F> <= [a,inf) has min F >= a, and then a itself is missed
        if pts and min(pts) == u.a:
            return None
        return [u.a]
    return None


def ray_is_regular(u: Ray) -> bool:
    if u.kind == "empty":
        return False
    # the one finite set that can defeat a ray is its own endpoint
    return regular_witness(u, [u.a] if u.kind == "closed" else []) is not None


def way_below_witness(u1: Ray, u2: Ray) -> Optional[list[Fraction]]:
    """A member ``F`` inside ``u2`` whose hull contains ``u1``."""
    for u in (u1, u2):
        if not ray_is_regular(u):
            raise NotRegular(f"{u} is not regular open")
    if u1.kind == "all":
        return None
    if u2.kind == "all":
        return [u1.a]
    if u2.a < u1.a:
        return [(u1.a + u2.a) / 2]
    return None


def ray_way_below(u1: Ray, u2: Ray) -> bool:
    return way_below_witness(u1, u2) is not None


def ray_union(rays: Iterable[Ray]) -> Ray:
    out = Ray.empty()
    for r in rays:
        if r.kind == "all" or out.kind == "all":
            out = Ray.all()
        elif out.kind == "empty":
            out = r
        elif r.kind != "empty":
            if r.a < out.a or (r.a == out.a and r.kind == "closed"):
                out = r
    return out


@dataclass(frozen=True)
class RaySigma:
    """The F-sups of ``m`` relative to ``f``: every finite ``G`` whose least
    element is ``inf``; no sets at all when ``inf`` is None."""

    f: tuple[Fraction, ...]
    m: tuple[Fraction, ...]
    inf: Optional[Fraction]

    def __contains__(self, g) -> bool:
        pts = _points(g)
        return self.inf is not None and bool(pts) and min(pts) == self.inf

    def __bool__(self):
        return self.inf is not None

    def __str__(self):
        return "{}" if self.inf is None else f"{{G : min G = {self.inf}}}"


def ray_sigma(f: Iterable, m: Iterable) -> RaySigma:
    fp, mp = _points(f), _points(m)
    h = ray_hull(fp)
    bad = [x for x in mp if not h.contains_point(x)]
    if bad:
        raise MOutsideHull(f"{bad[0]} is not in {h}")
    return RaySigma(tuple(fp), tuple(mp), min(mp) if mp else None)


def is_f_sup(f: Iterable, m: Iterable, g: Iterable) -> bool:
    """Unfold the two F-sup conditions for the candidate ``g``.

    Hulls of members are ``(c,inf)`` for ``c = min``; the second condition
    ranges over all rationals ``c`` with ``<M> <= (c,inf) <= <F>``.  That set
    is an interval ``[min F, top]``; the condition asks ``<G> <= (c,inf)`` for
    each ``c`` in it, i.e. ``min G >= top``, impossible if it is unbounded.
    """
    fp, mp, gp = _points(f), _points(m), _points(g)
    if not fp or not gp:
        return False
    hf, hm, hg = ray_hull(fp), hull_of(mp), ray_hull(gp)
    if not (hm <= hg and all(hf.contains_point(x) for x in gp)):
        return False
    # admissible c: hm <= (c,inf) and (c,inf) <= hf
    lo = hf.a
    top = None if hm.kind == "empty" else hm.a
    if top is None:
        return False
    if top < lo:
        return True
    return hg.a >= top
