"""Reading and writing posets, complexes, relations, covers, and certificates.

Text formats are line-oriented with "#" comments.  JSON formats carry the
same data self-contained.  Parse errors cite the offending line.
"""

from __future__ import annotations

import json
from typing import Optional

from .certificates import ReductionCertificate
from .complexes import RegularCWComplex, SimplicialComplex, cw_from_face_poset
from .cylinder import Relation
from .errors import InputError
from .nerve import ComplexCover, PosetCover
from .poset import Poset


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


# ---------------------------------------------------------------- posets

def parse_poset_text(text: str, where: str = "<input>") -> Poset:
    """One relation per line, "a < b"; a bare identifier declares an
    isolated element."""
    elements: list[str] = []
    relations: list[tuple[str, str]] = []
    for no, line in _lines(text):
        if "<" in line:
            sides = [s.strip() for s in line.split("<")]
            if len(sides) < 2 or not all(sides):
                raise InputError(f"{where}:{no}: expected 'a < b', got {line!r}")
            for a, b in zip(sides, sides[1:]):
                relations.append((a, b))
                elements.extend((a, b))
        else:
            if any(ch.isspace() for ch in line):
                raise InputError(f"{where}:{no}: element identifiers cannot contain spaces: {line!r}")
            elements.append(line)
    return Poset(elements, relations)


def poset_to_text(p: Poset) -> str:
    lines = [f"{a} < {b}" for a, b in sorted(p.cover_pairs)]
    related = {e for pair in p.cover_pairs for e in pair}
    lines.extend(e for e in p.elements if e not in related)
    return "\n".join(lines) + "\n"


def poset_to_json(p: Poset) -> dict:
    return {"elements": list(p.elements), "relations": [list(pair) for pair in sorted(p.cover_pairs)]}


def poset_from_json(data, where: str = "<input>") -> Poset:
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError(f"{where}: poset JSON needs an 'elements' list")
    rels = data.get("relations", [])
    try:
        return Poset(data["elements"], [(a, b) for a, b in rels])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{where}: malformed poset JSON: {exc}") from exc


# -------------------------------------------------------------- complexes

def parse_complex_text(text: str, where: str = "<input>") -> SimplicialComplex:
    """One facet per line, vertices whitespace-separated."""
    facets = []
    for no, line in _lines(text):
        facets.append(tuple(line.split()))
    return SimplicialComplex(facets)


def complex_to_text(k: SimplicialComplex) -> str:
    return "\n".join(" ".join(f) for f in k.facets) + "\n"


def complex_to_json(k: SimplicialComplex) -> dict:
    return {"facets": [list(f) for f in k.facets]}


def complex_from_json(data, where: str = "<input>") -> SimplicialComplex:
    if not isinstance(data, dict) or "facets" not in data:
        raise InputError(f"{where}: complex JSON needs a 'facets' list")
    return SimplicialComplex(tuple(f) for f in data["facets"])


def cw_to_json(c: RegularCWComplex) -> dict:
    return {"poset": poset_to_json(c.poset), "dim": dict(sorted(c.dim.items()))}


def cw_from_json(data, where: str = "<input>") -> RegularCWComplex:
    if not isinstance(data, dict) or "poset" not in data or "dim" not in data:
        raise InputError(f"{where}: CW JSON needs 'poset' and 'dim'")
    return cw_from_face_poset(poset_from_json(data["poset"], where), dict(data["dim"]))


# -------------------------------------------------------------- relations

def parse_relation_pairs_text(text: str, where: str = "<input>") -> list[tuple[str, str]]:
    """Lines "x ~ y"."""
    pairs = []
    for no, line in _lines(text):
        if "~" not in line:
            raise InputError(f"{where}:{no}: expected 'x ~ y', got {line!r}")
        x, _, y = line.partition("~")
        x, y = x.strip(), y.strip()
        if not x or not y:
            raise InputError(f"{where}:{no}: expected 'x ~ y', got {line!r}")
        pairs.append((x, y))
    return pairs


def relation_to_json(r: Relation) -> dict:
    return {
        "source": poset_to_json(r.source),
        "target": poset_to_json(r.target),
        "pairs": [list(pair) for pair in sorted(r.pairs)],
    }


def relation_from_json(data, where: str = "<input>") -> Relation:
    for key in ("source", "target", "pairs"):
        if not isinstance(data, dict) or key not in data:
            raise InputError(f"{where}: relation JSON needs 'source', 'target', 'pairs'")
    return Relation.of(
        poset_from_json(data["source"], where),
        poset_from_json(data["target"], where),
        [(x, y) for x, y in data["pairs"]],
    )


# ----------------------------------------------------------------- covers

def parse_cover_parts_text(text: str, where: str = "<input>") -> dict[str, list[str]]:
    """"part <name>" headers, one member element per following line."""
    parts: dict[str, list[str]] = {}
    current: Optional[str] = None
    for no, line in _lines(text):
        if line.startswith("part ") or line == "part":
            name = line[5:].strip()
            if not name:
                raise InputError(f"{where}:{no}: part header needs a name")
            if name in parts:
                raise InputError(f"{where}:{no}: duplicate part {name!r}")
            parts[name] = []
            current = name
        else:
            if current is None:
                raise InputError(f"{where}:{no}: member line before any 'part <name>' header")
            parts[current].append(line)
    if not parts:
        raise InputError(f"{where}: no parts found")
    return parts


def poset_cover_to_json(c: PosetCover) -> dict:
    return {
        "poset": poset_to_json(c.base),
        "parts": {name: sorted(sub.members) for name, sub in sorted(c.parts.items())},
    }


def poset_cover_from_json(data, where: str = "<input>") -> PosetCover:
    if not isinstance(data, dict) or "poset" not in data or "parts" not in data:
        raise InputError(f"{where}: poset cover JSON needs 'poset' and 'parts'")
    base = poset_from_json(data["poset"], where)
    return PosetCover(base, {str(k): set(v) for k, v in data["parts"].items()}, bool(data.get("open_hulls", False)))


def complex_cover_to_json(c: ComplexCover) -> dict:
    return {
        "complex": complex_to_json(c.base),
        "parts": {name: [list(f) for f in part.facets] for name, part in sorted(c.parts.items())},
    }


def complex_cover_from_json(data, where: str = "<input>") -> ComplexCover:
    if not isinstance(data, dict) or "complex" not in data or "parts" not in data:
        raise InputError(f"{where}: complex cover JSON needs 'complex' and 'parts'")
    base = complex_from_json(data["complex"], where)
    return ComplexCover(base, {str(k): SimplicialComplex(tuple(f) for f in v) for k, v in data["parts"].items()})


# ----------------------------------------------------------- certificates

def certificate_to_json(cert: ReductionCertificate) -> dict:
    return cert.to_json_dict()


def certificate_from_json(data, where: str = "<input>") -> ReductionCertificate:
    try:
        return ReductionCertificate.from_json_dict(data)
    except (TypeError, KeyError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{where}: malformed certificate JSON: {exc}") from exc


# -------------------------------------------------------------------- DOT

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_poset(p: Poset, name: str = "poset") -> str:
    """Hasse diagram as a directed graph, edges pointing upward."""
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=BT;"]
    for e in p.elements:
        lines.append(f"  {_dot_quote(e)};")
    for a, b in sorted(p.cover_pairs):
        lines.append(f"  {_dot_quote(a)} -> {_dot_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_complex(k: SimplicialComplex, name: str = "complex") -> str:
    """1-skeleton as an undirected graph."""
    lines = [f"graph {_dot_quote(name)} {{"]
    for v in k.vertices:
        lines.append(f"  {_dot_quote(v)};")
    by_dim = k.faces_by_dim()
    if len(by_dim) > 1:
        for a, b in by_dim[1]:
            lines.append(f"  {_dot_quote(a)} -- {_dot_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_cw(c: RegularCWComplex, name: str = "cw") -> str:
    """1-skeleton: 0-cells as nodes, each 1-cell joining its two endpoints."""
    lines = [f"graph {_dot_quote(name)} {{"]
    cells = c.cells_by_dim()
    for v in cells[0] if cells else []:
        lines.append(f"  {_dot_quote(v)};")
    if len(cells) > 1:
        for e in cells[1]:
            ends = sorted(x for x in c.poset.punctured_down(e).members)
            lines.append(f"  {_dot_quote(ends[0])} -- {_dot_quote(ends[1])};  // {e}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------- file loading

def load_json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc


def read_text_file(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def read_poset(path: str) -> Poset:
    if path.endswith(".json"):
        return poset_from_json(load_json_file(path), path)
    return parse_poset_text(read_text_file(path), path)


def read_complex(path: str) -> SimplicialComplex:
    if path.endswith(".json"):
        return complex_from_json(load_json_file(path), path)
    return parse_complex_text(read_text_file(path), path)


def read_relation(path: str, source: Optional[str] = None, target: Optional[str] = None) -> Relation:
    """JSON relations are self-contained; text pair lists need the two
    poset files alongside."""
    if path.endswith(".json"):
        return relation_from_json(load_json_file(path), path)
    if source is None or target is None:
        raise InputError("text relation files need --source and --target poset files")
    pairs = parse_relation_pairs_text(read_text_file(path), path)
    return Relation.of(read_poset(source), read_poset(target), pairs)


def read_poset_cover(path: str, base: Optional[str] = None, open_hulls: bool = False) -> PosetCover:
    if path.endswith(".json"):
        return poset_cover_from_json(load_json_file(path), path)
    if base is None:
        raise InputError("text cover files need a --base poset file")
    parts = parse_cover_parts_text(read_text_file(path), path)
    return PosetCover(read_poset(base), {k: set(v) for k, v in parts.items()}, open_hulls)


def read_complex_cover(path: str, base: Optional[str] = None) -> ComplexCover:
    if path.endswith(".json"):
        return complex_cover_from_json(load_json_file(path), path)
    if base is None:
        raise InputError("text cover files need a --base complex file")
    parts = parse_cover_parts_text(read_text_file(path), path)
    base_complex = read_complex(base)
    return ComplexCover(
        base_complex,
        {k: SimplicialComplex(tuple(line.split()) for line in v) for k, v in parts.items()},
    )
