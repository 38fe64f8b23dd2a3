"""Finite posets over opaque string identifiers.

A finite poset doubles as a finite topological space: the open sets are
exactly the down-sets, so the smallest open set containing an element is
its down-set and the closure of a subset is the up-set it generates.

Construction is forgiving: any relation pairs are accepted, the
transitive closure is taken, and the stored cover ("Hasse") edges are the
transitive reduction.  Cycles are rejected.  Reachability is kept as one
bitmask per element, built when the poset is created.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InputError


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    def __init__(self, elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()):
        elems = sorted(set(elements))
        for e in elems:
            if not isinstance(e, str) or e == "":
                raise InputError(f"element identifiers must be non-empty strings, got {e!r}")
        self.elements: tuple[str, ...] = tuple(elems)
        self._index: dict[str, int] = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)

        succ: list[set[int]] = [set() for _ in range(n)]
        for a, b in relations:
            ia, ib = self._lookup(a), self._lookup(b)
            if ia != ib:
                succ[ia].add(ib)

        order = self._topological_order(succ)
        up = [0] * n
        for i in reversed(order):
            m = 1 << i
            for j in succ[i]:
                m |= up[j]
            up[i] = m
        down = [1 << i for i in range(n)]
        for i in range(n):
            for j in _iter_bits(up[i] & ~(1 << i)):
                down[j] |= 1 << i
        self._up = up
        self._down = down

        hasse = []
        self._succ_masks = []
        for i in range(n):
            strict = up[i] & ~(1 << i)
            implied = 0
            for k in _iter_bits(strict):
                implied |= up[k] & ~(1 << k)
            covers = strict & ~implied
            self._succ_masks.append(covers)
            for j in _iter_bits(covers):
                hasse.append((self.elements[i], self.elements[j]))
        self.cover_pairs: frozenset[tuple[str, str]] = frozenset(hasse)
        self._pred_masks = [0] * n
        for i in range(n):
            for j in _iter_bits(self._succ_masks[i]):
                self._pred_masks[j] |= 1 << i

    def _lookup(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise InputError(f"unknown element {e!r}") from None

    def _topological_order(self, succ: list[set[int]]) -> list[int]:
        n = len(self.elements)
        indeg = [0] * n
        for i in range(n):
            for j in succ[i]:
                indeg[j] += 1
        ready = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            i = heapq.heappop(ready)
            order.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(ready, j)
        if len(order) < n:
            raise InputError("relations contain a cycle: " + " <= ".join(self._find_cycle(succ, indeg)))
        return order

    def _find_cycle(self, succ: list[set[int]], indeg: list[int]) -> list[str]:
        stuck = {i for i in range(len(self.elements)) if indeg[i] > 0}
        start = min(stuck)
        seen: dict[int, int] = {}
        path = []
        i = start
        while i not in seen:
            seen[i] = len(path)
            path.append(i)
            i = min(j for j in succ[i] if j in stuck)
        cycle = path[seen[i] :] + [i]
        return [self.elements[j] for j in cycle]

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, e: str) -> bool:
        return e in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.cover_pairs == other.cover_pairs

    def __hash__(self) -> int:
        return hash((self.elements, self.cover_pairs))

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.cover_pairs)} cover pairs)"

    def le(self, a: str, b: str) -> bool:
        return bool(self._up[self._lookup(a)] & (1 << self._lookup(b)))

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.le(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.le(a, b) or self.le(b, a)

    def covers(self, lower: str, upper: str) -> bool:
        return (lower, upper) in self.cover_pairs

    def cover_successors(self, e: str) -> tuple[str, ...]:
        return self._names(self._succ_masks[self._lookup(e)])

    def cover_predecessors(self, e: str) -> tuple[str, ...]:
        return self._names(self._pred_masks[self._lookup(e)])

    def _names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in _iter_bits(mask))

    def _mask_of(self, members: Iterable[str]) -> int:
        m = 0
        for e in members:
            m |= 1 << self._lookup(e)
        return m

    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    # -- subsets ----------------------------------------------------------

    def subset(self, members: Iterable[str]) -> "ElementSet":
        return ElementSet(self, frozenset(members))

    def _subset_from_mask(self, mask: int) -> "ElementSet":
        return ElementSet(self, frozenset(self._names(mask)), _mask=mask)

    def down_set(self, e: str) -> "ElementSet":
        return self._subset_from_mask(self._down[self._lookup(e)])

    def up_set(self, e: str) -> "ElementSet":
        return self._subset_from_mask(self._up[self._lookup(e)])

    def punctured_down(self, e: str) -> "ElementSet":
        i = self._lookup(e)
        return self._subset_from_mask(self._down[i] & ~(1 << i))

    def punctured_up(self, e: str) -> "ElementSet":
        i = self._lookup(e)
        return self._subset_from_mask(self._up[i] & ~(1 << i))

    def closure(self, members: Iterable[str]) -> "ElementSet":
        m = 0
        for e in members:
            m |= self._up[self._lookup(e)]
        return self._subset_from_mask(m)

    def open_hull(self, members: Iterable[str]) -> "ElementSet":
        m = 0
        for e in members:
            m |= self._down[self._lookup(e)]
        return self._subset_from_mask(m)

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if self._succ_masks[i] == 0)

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if self._pred_masks[i] == 0)

    # -- derived posets ---------------------------------------------------

    def opposite(self) -> "Poset":
        return Poset(self.elements, [(b, a) for a, b in self.cover_pairs])

    def induced(self, members: Iterable[str]) -> "Poset":
        mask = self._mask_of(members)
        pairs = []
        for i in _iter_bits(mask):
            strict = self._up[i] & ~(1 << i) & mask
            implied = 0
            for k in _iter_bits(strict):
                implied |= self._up[k] & ~(1 << k) & mask
            for j in _iter_bits(strict & ~implied):
                pairs.append((self.elements[i], self.elements[j]))
        return Poset(self._names(mask), pairs)

    def linear_extension(self) -> tuple[str, ...]:
        """Topological order; ties are broken by identifier (codepoint) order."""
        n = len(self.elements)
        indeg = [bin(self._pred_masks[i]).count("1") for i in range(n)]
        ready = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(ready)
        out = []
        while ready:
            i = heapq.heappop(ready)
            out.append(self.elements[i])
            for j in _iter_bits(self._succ_masks[i]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(ready, j)
        return tuple(out)

    def connected_components(self, members: Iterable[str] | None = None) -> list["ElementSet"]:
        """Components of the comparability graph restricted to the given subset.

        Sorted by their smallest member identifier.
        """
        mask = self.full_mask() if members is None else self._mask_of(members)
        comps = []
        remaining = mask
        while remaining:
            seed = remaining & -remaining
            comp = 0
            frontier = seed
            while frontier:
                i = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                comp |= 1 << i
                nbrs = (self._up[i] | self._down[i]) & mask & ~comp
                frontier |= nbrs
                comp |= nbrs
            comps.append(self._subset_from_mask(comp))
            remaining &= ~comp
        return comps

    def is_connected(self) -> bool:
        return len(self) > 0 and len(self.connected_components()) == 1


@dataclass(frozen=True)
class ElementSet:
    """A subset of a poset's elements, remembering its parent poset."""

    poset: Poset
    members: frozenset[str]

    _mask: int | None = None

    def __post_init__(self):
        if self._mask is None:
            object.__setattr__(self, "_mask", self.poset._mask_of(self.members))

    @property
    def mask(self) -> int:
        return self._mask  # type: ignore[return-value]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.members))

    def __contains__(self, e: str) -> bool:
        return e in self.members

    def __eq__(self, other) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.poset == other.poset and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def _wrap(self, mask: int) -> "ElementSet":
        return self.poset._subset_from_mask(mask)

    def union(self, other: "ElementSet") -> "ElementSet":
        self._check_same(other)
        return self._wrap(self.mask | other.mask)

    def intersection(self, other: "ElementSet") -> "ElementSet":
        self._check_same(other)
        return self._wrap(self.mask & other.mask)

    def difference(self, other: "ElementSet") -> "ElementSet":
        self._check_same(other)
        return self._wrap(self.mask & ~other.mask)

    def _check_same(self, other: "ElementSet") -> None:
        if self.poset is not other.poset and self.poset != other.poset:
            raise InputError("element sets belong to different posets")

    def closure(self) -> "ElementSet":
        return self.poset.closure(self.members)

    def open_hull(self) -> "ElementSet":
        return self.poset.open_hull(self.members)

    def is_down_set(self) -> bool:
        return self.open_hull().mask == self.mask

    def is_up_set(self) -> bool:
        return self.closure().mask == self.mask

    def components(self) -> list["ElementSet"]:
        return self.poset.connected_components(self.members)

    def induced(self) -> Poset:
        return self.poset.induced(self.members)

    def maximum(self) -> str | None:
        """The greatest member, if the subset has one under the induced order."""
        p = self.poset
        for e in self.members:
            if self.mask & ~p._down[p._lookup(e)] == 0:
                return e
        return None

    def minimum(self) -> str | None:
        p = self.poset
        for e in self.members:
            if self.mask & ~p._up[p._lookup(e)] == 0:
                return e
        return None
