"""JSON documents for spaces, posets and mappings.

Space::

    {"universe": ["a", "b"],
     "gamma": "identity" | {"closed_sets": [[...], ...]} | {"table": {"{a}": "{a}", ...}},
     "tau":   "identity" | {"open_sets": [[...], ...]}   | {"table": {"{a}": "{}", ...}},
     "family": [["a"], ["a", "b"]]}

A space may instead be given as ``{"poset": <poset document>}`` (optionally
with ``"basis"``) or ``{"fixture": "FIX-CHAIN2"}``.

Poset::

    {"elements": ["0", "1"], "leq": [["0", "1"]]}

Mapping::

    {"source": <space or path>, "target": <space or path>,
     "pairs": [[["a", "b"], "x"], ...]}
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from . import fixtures
from .closurespace import ClosureSpec, GCSpace, TauSpec
from .errors import FGSpaceError, ParseError
from .fgcs import FGCSpace
from .finposet import FinPoset, poset_to_fgcs
from .morphisms import AMRelation
from .setcore import SubsetFamily, Universe

Source = Union[str, Path, dict]


def parse_json(text: str, name: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{name}: {e.msg}", e.lineno, e.colno) from e


def load_json(path: Union[str, Path]) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    return parse_json(text, str(path))


def _need(doc: dict, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{what} document needs a {key!r} field")
    return doc[key]


def _resolve(src: Source, base: Path | None = None) -> dict:
    if isinstance(src, dict):
        return src
    s = str(src)
    if s.upper().startswith("FIX-"):
        return {"fixture": s}
    p = Path(s)
    if base is not None and not p.is_absolute():
        p = base / p
    return load_json(p)


def kind_of(doc: dict) -> str:
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    if "pairs" in doc:
        return "mapping"
    if "elements" in doc:
        return "poset"
    if {"universe", "poset", "fixture"} & doc.keys():
        return "space"
    raise ParseError("cannot tell whether this is a space, poset or mapping document")


def poset_from_doc(doc: dict) -> FinPoset:
    if "fixture" in doc:
        return fixtures.poset(doc["fixture"])
    elements = _need(doc, "elements", "poset")
    pairs = doc.get("leq", [])
    try:
        return FinPoset.from_pairs([str(e) for e in elements], [(str(x), str(y)) for x, y in pairs])
    except (TypeError, ValueError, KeyError) as e:
        raise ParseError(f"bad poset document: {e}") from e


def _operator(u: Universe, spec, kind: str):
    cls = ClosureSpec if kind == "gamma" else TauSpec
    sets_key = "closed_sets" if kind == "gamma" else "open_sets"
    if spec == "identity":
        return cls.identity(u)
    if isinstance(spec, dict) and sets_key in spec:
        return cls.from_closed_sets(u, spec[sets_key]) if kind == "gamma" else cls.from_open_sets(u, spec[sets_key])
    if isinstance(spec, dict) and "table" in spec:
        return cls.from_table(u, spec["table"])
    raise ParseError(f"{kind} must be 'identity', {{'{sets_key}': ...}} or {{'table': ...}}")


def space_from_doc(doc: dict, base: Path | None = None) -> FGCSpace:
    try:
        if "fixture" in doc:
            return fixtures.space(doc["fixture"])
        if "poset" in doc:
            return poset_to_fgcs(poset_from_doc(_resolve(doc["poset"], base)), doc.get("basis"))
        u = Universe(tuple(str(x) for x in _need(doc, "universe", "space")))
        gamma = _operator(u, _need(doc, "gamma", "space"), "gamma")
        tau = _operator(u, _need(doc, "tau", "space"), "tau")
        fam = SubsetFamily.of(u, _need(doc, "family", "space"))
        return FGCSpace(GCSpace(u, gamma, tau), fam)
    except ParseError:
        raise
    except KeyError as e:
        raise ParseError(f"unknown label or fixture {e}") from e
    except (TypeError, ValueError, AttributeError) as e:
        raise ParseError(f"bad space document: {e}") from e


def mapping_from_doc(doc: dict, base: Path | None = None) -> AMRelation:
    src = space_from_doc(_resolve(_need(doc, "source", "mapping"), base), base)
    tgt = space_from_doc(_resolve(_need(doc, "target", "mapping"), base), base)
    try:
        return AMRelation.from_labels(src, tgt, [(f, str(x)) for f, x in doc["pairs"]])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad mapping pairs: {e}") from e


def load_space(src: Source) -> FGCSpace:
    doc = _resolve(src)
    if kind_of(doc) == "poset":
        return poset_to_fgcs(poset_from_doc(doc))
    return space_from_doc(doc, _base(src))


def load_poset(src: Source) -> FinPoset:
    s = str(src) if not isinstance(src, dict) else ""
    if s.upper().startswith("FIX-"):
        return fixtures.poset(s)
    return poset_from_doc(_resolve(src))


def load_mapping(src: Source) -> AMRelation:
    return mapping_from_doc(_resolve(src), _base(src))


def _base(src: Source) -> Path | None:
    if isinstance(src, dict) or str(src).upper().startswith("FIX-"):
        return None
    return Path(src).parent


def space_to_doc(x: FGCSpace) -> dict:
    u = x.universe
    g, t = x.space.gamma, x.space.tau
    gdoc = {"table": {u.render(a): u.render(g(a)) for a in range(1 << u.n)}}
    tdoc = {"table": {u.render(a): u.render(t(a)) for a in range(1 << u.n) if t.defined_on(a)}}
    return {"universe": list(u.labels), "gamma": gdoc, "tau": tdoc,
            "family": [u.elements(f) for f in x.family.masks]}


def mapping_to_doc(t: AMRelation) -> dict:
    return {"source": space_to_doc(t.source), "target": space_to_doc(t.target),
            "pairs": t.labelled_pairs()}


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


__all__ = [
    "FGSpaceError", "ParseError", "dumps", "kind_of", "load_json", "load_mapping", "load_poset",
    "load_space", "mapping_from_doc", "mapping_to_doc", "parse_json", "poset_from_doc",
    "space_from_doc", "space_to_doc",
]
