"""Seeded random instances and a counterexample miner.

Instance ``k`` of a run is generated from its own ``random.Random`` seeded
with ``f"{seed}/{k}"``, so any single instance can be replayed without
regenerating the ones before it.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from .closurespace import ClosureSpec, GCSpace, TauSpec
from .errors import CapExceeded, EmptyPoset, FGSpaceError
from .fgcs import ORACLE_FAMILY_CAP, FGCSpace, degenerate_members, mode_agreement, regular_laws
from .finposet import (
    check_basis,
    classify_poset,
    poset_to_fgcs,
    random_poset,
    regular_poset,
    roundtrip_iso,
)
from .morphisms import am_laws, category_laws, check_functor_laws, random_am, validate_am
from .setcore import Report, SubsetFamily, Universe, bits, is_sub, popcount, submasks
from .subclasses import is_consistent, is_locally_consistent, regular_flags

TARGETS = ("gcs-axioms", "fgcs-axiom", "dcpo", "basis", "waybelow-modes", "Lconsistency", "BC",
           "am-laws", "functor-laws", "roundtrip")
MAX_N = 8
FAMILY_CAP = 10


@dataclass(frozen=True)
class MinerConfig:
    seed: int = 42
    count: int = 1000
    max_n: int = 5
    targets: tuple[str, ...] = TARGETS
    include_degenerate: bool = False

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if not 1 <= self.max_n <= MAX_N:
            raise ValueError(f"max_n must be in 1..{MAX_N}")
        bad = set(self.targets) - set(TARGETS)
        if bad:
            raise ValueError(f"unknown targets {sorted(bad)}")


# -- generation ---------------------------------------------------------------------

def random_moore_family(n: int, rng: random.Random, p: float = 0.25) -> list[int]:
    full = (1 << n) - 1
    seeds = [a for a in range(1 << n) if rng.random() < p] + [full]
    closed = set(seeds)
    frontier = list(closed)
    while frontier:
        a = frontier.pop()
        for b in list(closed):
            c = a & b
            if c not in closed:
                closed.add(c)
                frontier.append(c)
    return sorted(closed)


def random_tau_table(closed: list[int], rng: random.Random) -> dict[int, int]:
    """Monotone contraction on closed sets, extended by the identity on
    non-closed images; may still break idempotence, left to the validator."""
    cset = set(closed)
    table: dict[int, int] = {}
    for c in sorted(closed, key=lambda m: (popcount(m), m)):
        base = 0
        for d, v in table.items():
            if d in cset and d != c and is_sub(d, c):
                base |= v
        extra = 0
        for i in bits(c & ~base):
            if rng.random() < 0.6:
                extra |= 1 << i
        table[c] = base | extra
    for c in closed:
        v = table[c]
        if v not in cset:
            table[v] = v
    return table


def random_gcs(n: int, rng: random.Random) -> GCSpace:
    u = Universe(tuple(str(i) for i in range(n)))
    closed = random_moore_family(n, rng)
    gamma = ClosureSpec(u, closed_sets=tuple(closed))
    if rng.random() < 0.5:
        opens = [a for a in range(1 << n) if rng.random() < 0.35] + [0]
        tau = TauSpec(u, open_sets=tuple(sorted(set(opens))))
    else:
        tau = TauSpec(u, table=tuple(random_tau_table(closed, rng).items()))
    return GCSpace(u, gamma, tau)


def _repair_family(g: GCSpace, members: set[int]) -> Optional[set[int]]:
    """Add ``M`` whenever ``(F, M)`` breaks refinement and ``M`` can serve as
    its own witness; give up when that is impossible."""
    fam = set(members)
    changed = True
    while changed:
        changed = False
        for f in sorted(fam):
            hf = g.hull(f)
            for m in submasks(hf):
                if any(is_sub(m, g.hull(f1)) and is_sub(f1, hf) for f1 in fam):
                    continue
                if is_sub(m, g.hull(m)):
                    fam.add(m)
                    changed = True
                else:
                    return None
                if len(fam) > FAMILY_CAP:
                    return None
    return fam


def random_family(g: GCSpace, rng: random.Random) -> Optional[SubsetFamily]:
    """Random members repaired towards refinement, the full powerset, or the
    closure of a few members under taking subsets of hulls (the empty set
    included, as every hull contains it)."""
    n = g.universe.n
    lo = 1
    mode = rng.choice(("random", "random", "full", "bc"))
    if mode == "full" and n <= 3:
        fam = set(range(lo, 1 << n))
    elif mode == "bc":
        fam = {rng.randrange(lo, 1 << n) for _ in range(rng.randint(1, 3))}
        while True:
            grown = set(fam)
            for f in fam:
                grown.update(submasks(g.hull(f)))
            if grown == fam:
                break
            fam = grown
            if len(fam) > FAMILY_CAP:
                return None
    else:
        fam = {rng.randrange(lo, 1 << n) for _ in range(rng.randint(1, min(FAMILY_CAP, 1 << n)))}
        fam = _repair_family(g, fam)
        if fam is None:
            return None
    if not fam or len(fam) > FAMILY_CAP and mode != "full":
        return None
    return SubsetFamily(g.universe, tuple(fam))


def random_instance(rng: random.Random, max_n: int) -> tuple[str, Optional[FGCSpace]]:
    """One candidate; the status is ``ok``, ``gcs-invalid``, ``family-rejected``
    or ``fgcs-invalid``."""
    g = random_gcs(rng.randint(1, max_n), rng)
    if not g.validated:
        return "gcs-invalid", None
    fam = random_family(g, rng)
    if fam is None:
        return "family-rejected", None
    x = FGCSpace(g, fam)
    if not x.validated:
        return "fgcs-invalid", None
    return "ok", x


def random_fgcs(rng: random.Random, max_n: int, max_regulars: int = ORACLE_FAMILY_CAP,
                attempts: int = 500) -> FGCSpace:
    """A valid space whose R(X) is small enough for the way-below oracle."""
    for _ in range(attempts):
        status, x = random_instance(rng, max_n)
        if status == "ok" and 0 < len(x.regulars) <= max_regulars:
            return x
    raise RuntimeError("no valid instance generated")


# -- targets ------------------------------------------------------------------------

def hull_laws(g: GCSpace) -> Report:
    """The hull is idempotent and is the least hull-fixed set above its argument."""
    rep = Report()
    r = g.universe.render
    n = g.universe.n
    fixed = [a for a in range(1 << n) if g.hull(a) == a]
    for a in range(1 << n):
        h = g.hull(a)
        if g.hull(h) != h:
            rep.fail("hull-idempotent", f"<<{r(a)}>> != <{r(a)}>", A=r(a))
        for u in fixed:
            if is_sub(a, u) and not is_sub(h, u):
                rep.fail("hull-below-fixed", f"{r(a)} <= {r(u)} fixed but <{r(a)}> is not inside", A=r(a), U=r(u))
                break
    return rep


def _nondegenerate(x: FGCSpace) -> bool:
    return not degenerate_members(x)


def _t_gcs(x, rng):
    return hull_laws(x.space)


def _t_fgcs(x, rng):
    rep = Report()
    full = regular_laws(x)
    for v in full.violations:
        if v.rule in ("hull-regular", "regular-refine"):
            rep.violations.append(v)
    return rep


def _t_dcpo(x, rng):
    rep = Report()
    flags = regular_flags(x)
    if flags is None:
        rep.notes.append("R(X) is empty")
        return rep
    if not flags.dcpo:
        rep.fail("dcpo", "R(X) is not a dcpo")
    if not flags.continuous:
        rep.fail("continuous", "R(X) is not continuous")
    full = regular_laws(x)
    for v in full.violations:
        if v.rule in ("directed-union", "waybelow-inclusion", "waybelow-transitive", "interpolation"):
            rep.violations.append(v)
    return rep


def _t_basis(x, rng):
    rep = Report()
    try:
        p, regs = regular_poset(x)
    except EmptyPoset:
        return rep
    pos = {m: k for k, m in enumerate(regs)}
    bmask = 0
    for _, h in x.member_hulls:
        if h in pos:
            bmask |= 1 << pos[h]
    if not check_basis(p, bmask):
        rep.fail("basis", "member hulls do not form a basis of R(X)")
    for v in regular_laws(x).violations:
        if v.rule == "basis":
            rep.violations.append(v)
    return rep


def _t_waybelow_modes(x, rng):
    return mode_agreement(x)


def _t_lc(x, rng, include_degenerate=False):
    rep = Report()
    if not (include_degenerate or _nondegenerate(x)):
        rep.notes.append("degenerate-skipped")
        return rep
    if is_locally_consistent(x).ok:
        rep.data["premise"] = True
        flags = regular_flags(x)
        if flags is None:
            rep.fail("empty-R", "R(X) is empty but the space is locally consistent")
        elif not flags.L_domain:
            rep.fail("L-domain", "locally consistent but R(X) is not an L-domain")
    return rep


def _t_bc(x, rng, include_degenerate=False):
    rep = Report()
    if not (include_degenerate or _nondegenerate(x)):
        rep.notes.append("degenerate-skipped")
        return rep
    if is_consistent(x).ok:
        rep.data["premise"] = True
        if not is_locally_consistent(x).ok:
            rep.fail("BC-implies-LC", "consistent but not locally consistent")
        flags = regular_flags(x)
        if flags is None:
            rep.fail("empty-R", "R(X) is empty but the space is consistent")
        elif not flags.bounded_complete:
            rep.fail("bounded-complete", "consistent but R(X) is not bounded complete")
    return rep


def _t_am(x, rng):
    rep = Report()
    if not x.regulars:
        return rep
    t = random_am(x, x, rng)
    rep.extend(validate_am(t), "AM:")
    rep.extend(am_laws(t), "law:")
    return rep


def _t_functor(x, rng):
    rep = Report()
    if not x.regulars:
        return rep
    ts = [random_am(x, x, rng) for _ in range(3)]
    rep.extend(category_laws(*ts))
    rep.extend(check_functor_laws([(ts[0], ts[1]), (ts[1], ts[2])]))
    return rep


def _t_roundtrip(x, rng):
    p = random_poset(rng.randint(1, x.universe.n), rng)
    rep = roundtrip_iso(p)
    if classify_poset(p).L_domain and not is_locally_consistent(poset_to_fgcs(p)).ok:
        rep.fail("L-domain-represented", "L-domain poset gives a space that is not locally consistent")
    if not rep.ok:
        rep.data["poset"] = p.to_dict()
    return rep


CHECKS: dict[str, Callable[[FGCSpace, random.Random], Report]] = {
    "gcs-axioms": _t_gcs, "fgcs-axiom": _t_fgcs, "dcpo": _t_dcpo, "basis": _t_basis,
    "waybelow-modes": _t_waybelow_modes, "Lconsistency": _t_lc, "BC": _t_bc, "am-laws": _t_am,
    "functor-laws": _t_functor, "roundtrip": _t_roundtrip,
}


# -- shrinking ----------------------------------------------------------------------

def restrict(x: FGCSpace, drop: int) -> Optional[FGCSpace]:
    """Remove universe element ``drop``: traces of closed sets, tau cut down
    to the remaining elements, members that avoided ``drop``."""
    u = x.universe
    if u.n == 1:
        return None
    keep = [i for i in range(u.n) if i != drop]

    def squeeze(m):
        return sum(1 << k for k, i in enumerate(keep) if m >> i & 1)

    nu = Universe(tuple(u.labels[i] for i in keep))
    g = x.space.gamma
    closed = sorted({squeeze(c) for c in g.fixed_points()})
    t = x.space.tau
    rows = {}
    for a in range(1 << u.n):
        if not a >> drop & 1 and t.defined_on(a):
            rows[squeeze(a)] = squeeze(t(a))
    try:
        gamma = ClosureSpec(nu, closed_sets=tuple(closed))
        tau = TauSpec(nu, table=tuple(rows.items()))
        fam = SubsetFamily(nu, tuple(squeeze(f) for f in x.family.masks if not f >> drop & 1))
        if not fam.masks:
            return None
        y = FGCSpace(GCSpace(nu, gamma, tau), fam)
    except FGSpaceError:
        return None
    return y if y.space.validated and y.validated else None


def shrink(x: FGCSpace, fails: Callable[[FGCSpace], bool]) -> FGCSpace:
    """Greedy removal of elements, then of members, keeping validity and failure."""
    cur = x
    progress = True
    while progress:
        progress = False
        for i in range(cur.universe.n):
            y = restrict(cur, i)
            if y is not None and _safe(fails, y):
                cur, progress = y, True
                break
        if progress:
            continue
        for f in cur.family.masks:
            rest = tuple(m for m in cur.family.masks if m != f)
            if not rest:
                continue
            y = FGCSpace(cur.space, SubsetFamily(cur.universe, rest))
            if y.validated and _safe(fails, y):
                cur, progress = y, True
                break
    return cur


def _safe(pred, y) -> bool:
    try:
        return pred(y)
    except (FGSpaceError, ValueError, RuntimeError):
        return False


# -- the run ------------------------------------------------------------------------

def _instance_rng(seed: int, k: int, salt: str = "") -> random.Random:
    return random.Random(f"{seed}/{k}{salt}")


def replay_instance(seed: int, k: int, max_n: int):
    return random_instance(_instance_rng(seed, k), max_n)


def _run(check, x, rng, cfg: MinerConfig) -> Report:
    if check in (_t_lc, _t_bc):
        return check(x, rng, cfg.include_degenerate)
    return check(x, rng)


def mine(cfg: MinerConfig) -> dict:
    from .io import space_to_doc

    status_counts: dict[str, int] = {}
    per_target = {t: {"checked": 0, "premise": 0, "violations": 0, "skipped": 0} for t in cfg.targets}
    found = []
    for k in range(cfg.count):
        status, x = replay_instance(cfg.seed, k, cfg.max_n)
        status_counts[status] = status_counts.get(status, 0) + 1
        if x is None:
            continue
        for t in cfg.targets:
            check = CHECKS[t]
            try:
                rep = _run(check, x, _instance_rng(cfg.seed, k, "/" + t), cfg)
            except CapExceeded:
                per_target[t]["skipped"] += 1
                continue
            if "degenerate-skipped" in rep.notes:
                per_target[t]["skipped"] += 1
                continue
            per_target[t]["checked"] += 1
            per_target[t]["premise"] += bool(rep.data.get("premise"))
            if rep.ok:
                continue
            per_target[t]["violations"] += 1
            rules = sorted(rep.rules())
            salt = "/" + t

            def fails(y, check=check, salt=salt, rules=rules):
                return bool(set(rules) & _run(check, y, _instance_rng(cfg.seed, k, salt), cfg).rules())

            small = shrink(x, fails) if t != "roundtrip" else x
            found.append({"instance": k, "target": t, "rules": rules,
                          "violations": [v.to_dict() for v in rep.violations[:5]],
                          "space": space_to_doc(x), "shrunk": space_to_doc(small),
                          "data": rep.data})
    return {
        "config": {**asdict(cfg), "targets": list(cfg.targets)},
        "instances": status_counts,
        "targets": per_target,
        "violations": found,
        "ok": not found,
    }
