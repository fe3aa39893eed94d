"""Finite universes, bit-vector subsets, subset families and reports.

Subsets are stored as integer bitmasks: element ``i`` of the universe is bit
``i``.  The canonical order on subsets is the integer order of their masks,
so the empty set comes first and ``canonical_index`` is the mask itself.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional

from .errors import CapExceeded, UniverseMismatch

DEFAULT_CAP = 16
WARN_ABOVE = 12


def check_cap(n: int, cap: int = DEFAULT_CAP) -> None:
    if n > cap:
        raise CapExceeded(n, cap)


def warn_exponential(n: int, what: str) -> None:
    if n > WARN_ABOVE:
        warnings.warn(f"{what}: exponential check over {n} elements", RuntimeWarning, stacklevel=3)


# -- raw mask helpers -------------------------------------------------------

def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits, lowest first."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing integer order (empty first)."""
    idx = list(bits(mask))
    for k in range(1 << len(idx)):
        sub = 0
        for j, i in enumerate(idx):
            if k >> j & 1:
                sub |= 1 << i
        yield sub


def is_sub(a: int, b: int) -> bool:
    return a & ~b == 0


# -- universes and subsets --------------------------------------------------

@dataclass(frozen=True)
class Universe:
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if not self.labels:
            raise ValueError("a universe needs at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate labels in universe {self.labels}")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of {self}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def subset(self, labels: Iterable[str] = ()) -> "Subset":
        return Subset(self, self.mask_of(labels))

    def parse(self, text: str) -> "Subset":
        """Parse the ``{a,b}`` rendering back into a subset."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"expected a set like {{a,b}}, got {text!r}")
        body = body[1:-1].strip()
        labels = [x.strip() for x in body.split(",")] if body else []
        return self.subset(labels)

    def render(self, mask: int) -> str:
        return "{" + ",".join(self.labels[i] for i in bits(mask)) + "}"

    def elements(self, mask: int) -> list[str]:
        return [self.labels[i] for i in bits(mask)]

    def __str__(self) -> str:
        return self.render(self.full)


@dataclass(frozen=True)
class Subset:
    universe: Universe
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.universe.full:
            raise ValueError(f"mask {self.mask} out of range for {self.universe}")

    def _same(self, other: "Subset") -> None:
        if self.universe != other.universe:
            raise UniverseMismatch(f"{self.universe} vs {other.universe}")

    def __or__(self, other):
        self._same(other)
        return Subset(self.universe, self.mask | other.mask)

    def __and__(self, other):
        self._same(other)
        return Subset(self.universe, self.mask & other.mask)

    def __sub__(self, other):
        self._same(other)
        return Subset(self.universe, self.mask & ~other.mask)

    def complement(self) -> "Subset":
        return Subset(self.universe, self.universe.full & ~self.mask)

    def issubset(self, other: "Subset") -> bool:
        self._same(other)
        return is_sub(self.mask, other.mask)

    __le__ = issubset

    def __contains__(self, label) -> bool:
        return bool(self.mask >> self.universe.index(label) & 1)

    def __iter__(self):
        return iter(self.universe.elements(self.mask))

    def __len__(self):
        return popcount(self.mask)

    def __bool__(self):
        return self.mask != 0

    def __str__(self):
        return self.universe.render(self.mask)

    __repr__ = __str__


def canonical_index(s: Subset, cap: int = DEFAULT_CAP) -> int:
    check_cap(s.universe.n, cap)
    return s.mask


def enumerate_subsets(
    u: Universe,
    filter: Optional[Callable[[Subset], bool]] = None,
    cap: int = DEFAULT_CAP,
) -> Iterator[Subset]:
    check_cap(u.n, cap)
    for m in range(1 << u.n):
        s = Subset(u, m)
        if filter is None or filter(s):
            yield s


@dataclass(frozen=True)
class SubsetFamily:
    """Duplicate-free, canonically sorted family of subsets of one universe."""

    universe: Universe
    masks: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "masks", tuple(sorted(set(self.masks))))
        full = self.universe.full
        for m in self.masks:
            if m < 0 or m > full:
                raise ValueError(f"mask {m} out of range for {self.universe}")

    @classmethod
    def of(cls, universe: Universe, members: Iterable) -> "SubsetFamily":
        """Build from Subsets, label lists, or ``{a,b}`` strings."""
        masks = []
        for m in members:
            if isinstance(m, Subset):
                if m.universe != universe:
                    raise UniverseMismatch(f"{m} is not over {universe}")
                masks.append(m.mask)
            elif isinstance(m, str):
                masks.append(universe.parse(m).mask)
            else:
                masks.append(universe.mask_of(m))
        return cls(universe, tuple(masks))

    def __iter__(self) -> Iterator[Subset]:
        return (Subset(self.universe, m) for m in self.masks)

    def __len__(self):
        return len(self.masks)

    def __contains__(self, s) -> bool:
        m = s.mask if isinstance(s, Subset) else s
        return m in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.masks)

    def render(self) -> list[str]:
        return [self.universe.render(m) for m in self.masks]

    def __str__(self):
        return "{" + ", ".join(self.render()) + "}"


# -- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    witness: dict
    message: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "witness": self.witness, "message": self.message}


@dataclass
class Report:
    """Outcome of a check; ``ok`` is derived from the violation list."""

    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, rule: str, message: str, **witness) -> None:
        self.violations.append(Violation(rule, witness, message))

    def extend(self, other: "Report", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(prefix + v.rule, v.witness, v.message))
        self.notes.extend(other.notes)

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        out = {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}
        if self.notes:
            out["notes"] = list(self.notes)
        if self.data:
            out["data"] = self.data
        return out
