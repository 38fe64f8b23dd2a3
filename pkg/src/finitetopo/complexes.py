"""Simplicial complexes, regular CW data, and the functors linking them to posets.

Identifiers stay strings throughout.  A cell of a face poset is named by
joining its sorted vertices with commas, so "a,b" is the edge on a and b.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import InputError, ValidationError
from .poset import Poset


class SimplicialComplex:
    """An abstract simplicial complex stored by its facets."""

    def __init__(self, simplices: Iterable[Iterable[str]]):
        seen: set[tuple[str, ...]] = set()
        for s in simplices:
            t = tuple(sorted(set(s)))
            if not t:
                raise InputError("simplices must be non-empty")
            for v in t:
                if not isinstance(v, str) or v == "":
                    raise InputError(f"vertex identifiers must be non-empty strings, got {v!r}")
            seen.add(t)
        facets = [t for t in seen if not any(t != u and set(t) <= set(u) for u in seen)]
        self.facets: tuple[tuple[str, ...], ...] = tuple(sorted(facets))
        self._faces: frozenset[tuple[str, ...]] | None = None

    @property
    def faces(self) -> frozenset[tuple[str, ...]]:
        if self._faces is None:
            out: set[tuple[str, ...]] = set()
            for f in self.facets:
                for k in range(1, len(f) + 1):
                    out.update(combinations(f, k))
            self._faces = frozenset(out)
        return self._faces

    def faces_by_dim(self) -> list[list[tuple[str, ...]]]:
        top = self.dim()
        out: list[list[tuple[str, ...]]] = [[] for _ in range(top + 1)]
        for f in self.faces:
            out[len(f) - 1].append(f)
        for row in out:
            row.sort()
        return out

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted({v for f in self.facets for v in f}))

    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.faces_by_dim())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def contains(self, simplex: Iterable[str]) -> bool:
        return tuple(sorted(set(simplex))) in self.faces

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(f in other.faces for f in self.facets)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self.faces & other.faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.facets)} facets, dim {self.dim()})"


EMPTY_COMPLEX = SimplicialComplex(())


@lru_cache(maxsize=4096)
def order_complex(p: Poset) -> SimplicialComplex:
    """The complex of non-empty chains; facets are the maximal chains."""
    chains: list[tuple[str, ...]] = []
    stack = [(e,) for e in p.minimal_elements()]
    while stack:
        chain = stack.pop()
        succs = p.cover_successors(chain[-1])
        if not succs:
            chains.append(chain)
        else:
            for s in succs:
                stack.append(chain + (s,))
    return SimplicialComplex(chains)


_CELL_SEP = ","


def cell_id(simplex: Iterable[str]) -> str:
    return _CELL_SEP.join(sorted(simplex))


def cell_vertices(cid: str) -> tuple[str, ...]:
    return tuple(cid.split(_CELL_SEP))


def face_poset(k: SimplicialComplex) -> Poset:
    """Faces ordered by inclusion, named via cell_id."""
    for v in k.vertices:
        if _CELL_SEP in v:
            raise InputError(f"vertex identifier {v!r} may not contain {_CELL_SEP!r}")
    elements = [cell_id(f) for f in k.faces]
    pairs = []
    for f in k.faces:
        if len(f) > 1:
            for sub in combinations(f, len(f) - 1):
                pairs.append((cell_id(sub), cell_id(f)))
    return Poset(elements, pairs)


def barycentric_poset(p: Poset) -> Poset:
    """Poset of non-empty chains ordered by inclusion.

    Chain names are built from element indices, not element names, so
    elements whose names contain the cell separator stay usable.
    """
    idx = {e: i for i, e in enumerate(p.elements)}

    def name(c: tuple[int, ...]) -> str:
        return "c" + ".".join(str(i) for i in c)

    chains = [tuple(sorted(idx[v] for v in f)) for f in order_complex(p).faces]
    elements = [name(c) for c in sorted(chains, key=lambda c: (len(c), c))]
    pairs = []
    for c in chains:
        if len(c) > 1:
            for k in range(len(c)):
                pairs.append((name(c[:k] + c[k + 1:]), name(c)))
    return Poset(elements, pairs)


def barycentric_complex(k: SimplicialComplex) -> SimplicialComplex:
    return order_complex(face_poset(k))


@dataclass(frozen=True)
class RegularCWComplex:
    """A regular CW complex presented by its face poset and a cell-dimension map."""

    poset: Poset
    dim: dict[str, int]

    def cells_by_dim(self) -> list[list[str]]:
        top = max(self.dim.values(), default=0)
        out: list[list[str]] = [[] for _ in range(top + 1)]
        for c in self.poset.elements:
            out[self.dim[c]].append(c)
        return out

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.cells_by_dim())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def order_complex(self) -> SimplicialComplex:
        return order_complex(self.poset)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegularCWComplex):
            return NotImplemented
        return self.poset == other.poset and self.dim == other.dim

    def __hash__(self) -> int:
        return hash((self.poset, tuple(sorted(self.dim.items()))))


def cw_from_face_poset(p: Poset, dim: dict[str, int]) -> RegularCWComplex:
    """Validate that (p, dim) presents a regular CW complex whose cells are simplices.

    Each cell's down-set must be a boolean lattice with binomial rank counts,
    and cover edges must raise dimension by exactly one.
    """
    if set(dim) != set(p.elements):
        raise ValidationError("dimension map must cover exactly the cells of the poset")
    for c, d in dim.items():
        if d < 0:
            raise ValidationError(f"cell {c!r} has negative dimension")
    for a, b in p.cover_pairs:
        if dim[b] != dim[a] + 1:
            raise ValidationError(f"cover pair {a!r} < {b!r} does not raise dimension by one")
    for c in p.elements:
        d = dim[c]
        below = p.down_set(c)
        verts = {e: frozenset(x for x in below.members if dim[x] == 0 and p.le(x, e)) for e in below}
        if len(verts[c]) != d + 1:
            raise ValidationError(f"cell {c!r} of dimension {d} has {len(verts[c])} vertices below it")
        by_rank: dict[int, int] = {}
        for e in below:
            by_rank[dim[e]] = by_rank.get(dim[e], 0) + 1
        for k in range(d + 1):
            if by_rank.get(k, 0) != comb(d + 1, k + 1):
                raise ValidationError(
                    f"cell {c!r}: {by_rank.get(k, 0)} faces of dimension {k}, expected {comb(d + 1, k + 1)}"
                )
        if len(set(verts.values())) != len(below):
            raise ValidationError(f"cell {c!r}: two faces share the same vertex set")
        for e in below:
            for f in below:
                if (verts[e] <= verts[f]) != p.le(e, f):
                    raise ValidationError(f"cell {c!r}: face order disagrees with vertex inclusion")
    return RegularCWComplex(p, dict(dim))


def complex_as_cw(k: SimplicialComplex) -> RegularCWComplex:
    p = face_poset(k)
    return RegularCWComplex(p, {cell_id(f): len(f) - 1 for f in k.faces})


@dataclass(frozen=True)
class ChainComplexPresentation:
    """Integer boundary matrices of a simplicial complex, lex vertex orientation."""

    bases: tuple[tuple[tuple[str, ...], ...], ...]
    boundaries: tuple["IntegerMatrix", ...]  # boundaries[k-1] maps degree k to k-1


def chain_complex(k: SimplicialComplex) -> ChainComplexPresentation:
    from .homology import IntegerMatrix

    rows = k.faces_by_dim()
    bases = tuple(tuple(r) for r in rows)
    index = [{f: i for i, f in enumerate(r)} for r in rows]
    boundaries = []
    for d in range(1, len(bases)):
        entries: dict[tuple[int, int], int] = {}
        for j, f in enumerate(bases[d]):
            for omit in range(len(f)):
                sub = f[:omit] + f[omit + 1 :]
                entries[(index[d - 1][sub], j)] = (-1) ** omit
        boundaries.append(IntegerMatrix(len(bases[d - 1]), len(bases[d]), entries))
    for a, b in zip(boundaries, boundaries[1:]):
        if not a.compose(b).is_zero():
            raise ValidationError("boundary composition is non-zero")
    return ChainComplexPresentation(bases, tuple(boundaries))
