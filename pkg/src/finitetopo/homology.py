"""Integer simplicial homology via Smith normal form.

Everything is exact: Python integers, no floating point, no field
shortcuts on the main path.  Ranks are re-derived by fraction-free
elimination as an independent cross-check (always on small matrices,
on demand otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class IntegerMatrix:
    """Sparse integer matrix; entries maps (row, col) to a non-zero value."""

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v != 0}
        for (r, c), _ in self.entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry {(r, c)} outside a {rows}x{cols} matrix")

    @classmethod
    def from_dense(cls, data: list[list[int]]) -> "IntegerMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {(r, c): v for r, row in enumerate(data) for c, v in enumerate(row) if v != 0}
        return cls(rows, cols, entries)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def compose(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in composition")
        by_row: dict[int, dict[int, int]] = {}
        for (r, c), v in self.entries.items():
            by_row.setdefault(r, {})[c] = v
        by_col: dict[int, dict[int, int]] = {}
        for (r, c), v in other.entries.items():
            by_col.setdefault(c, {})[r] = v
        entries: dict[tuple[int, int], int] = {}
        for r, row in by_row.items():
            for c, col in by_col.items():
                s = sum(row[k] * col[k] for k in row.keys() & col.keys())
                if s:
                    entries[(r, c)] = s
        return IntegerMatrix(self.rows, other.cols, entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, {len(self.entries)} non-zero)"


_VERIFY_LIMIT = 50


def smith_normal_form(m: IntegerMatrix) -> tuple[tuple[int, ...], int]:
    """Invariant factors (d1 | d2 | ...) and the rank.

    Pivots are chosen with minimal absolute value, ties broken by position.
    On matrices up to 50x50 the rank is re-derived independently.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in m.entries.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, set()).add(r)

    def set_entry(r: int, c: int, v: int) -> None:
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
        else:
            row = rows.get(r)
            if row and c in row:
                del row[c]
                if not row:
                    del rows[r]
                cols[c].discard(r)
                if not cols[c]:
                    del cols[c]

    def add_multiple_of_row(target: int, source: int, q: int) -> None:
        # row[target] += q * row[source]
        for c, v in list(rows.get(source, {}).items()):
            set_entry(target, c, rows.get(target, {}).get(c, 0) + q * v)

    def add_multiple_of_col(target: int, source: int, q: int) -> None:
        for r in list(cols.get(source, set())):
            v = rows[r][source]
            set_entry(r, target, rows.get(r, {}).get(target, 0) + q * v)

    def min_entry() -> tuple[int, int] | None:
        best = None
        best_key = None
        for r, row in rows.items():
            for c, v in row.items():
                key = (abs(v), r, c)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (r, c)
        return best

    factors: list[int] = []
    while rows:
        while True:
            pos = min_entry()
            if pos is None:
                break
            r, c = pos
            pivot = rows[r][c]
            dirty = False
            for r2 in list(cols.get(c, set())):
                if r2 == r:
                    continue
                q = rows[r2][c] // pivot
                if q:
                    add_multiple_of_row(r2, r, -q)
                if rows.get(r2, {}).get(c):
                    dirty = True  # remainder left, pivot will move there
            for c2 in list(rows.get(r, {})):
                if c2 == c:
                    continue
                q = rows[r][c2] // pivot
                if q:
                    add_multiple_of_col(c2, c, -q)
                if rows.get(r, {}).get(c2):
                    dirty = True
            if not dirty and cols.get(c) == {r} and set(rows.get(r, {})) == {c}:
                # pivot isolated; pull in any entry it does not divide yet
                bad = None
                for r2, row in rows.items():
                    if r2 == r:
                        continue
                    for c2, v in row.items():
                        if v % pivot:
                            bad = r2
                            break
                    if bad is not None:
                        break
                if bad is None:
                    factors.append(abs(pivot))
                    set_entry(r, c, 0)
                    break
                add_multiple_of_row(r, bad, 1)

    if m.rows <= _VERIFY_LIMIT and m.cols <= _VERIFY_LIMIT:
        if len(factors) != fraction_free_rank(m):
            raise AssertionError("Smith rank disagrees with fraction-free elimination")
    return tuple(factors), len(factors)


def fraction_free_rank(m: IntegerMatrix) -> int:
    """Rank over the rationals by Bareiss elimination; exact, division-free result."""
    a = m.to_dense()
    rows, cols = m.rows, m.cols
    rank = 0
    prev = 1
    for col in range(cols):
        pivot_row = None
        for r in range(rank, rows):
            if a[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        pivot = a[rank][col]
        for r in range(rank + 1, rows):
            for c in range(col + 1, cols):
                a[r][c] = (a[r][c] * pivot - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = pivot
        rank += 1
        if rank == rows:
            break
    return rank


def rank_mod_p(m: IntegerMatrix, p: int) -> int:
    """Rank over the prime field GF(p); used only as an extra cross-check."""
    a = [[v % p for v in row] for row in m.to_dense()]
    rows, cols = m.rows, m.cols
    rank = 0
    for col in range(cols):
        pivot_row = next((r for r in range(rank, rows) if a[r][col]), None)
        if pivot_row is None:
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(v * inv) % p for v in a[rank]]
        for r in range(rows):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [(v - f * w) % p for v, w in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class HomologyProfile:
    """Betti numbers and torsion coefficients per degree."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    reduced: bool = False

    def degree(self, k: int) -> tuple[int, tuple[int, ...]]:
        b = self.betti[k] if 0 <= k < len(self.betti) else 0
        t = self.torsion[k] if 0 <= k < len(self.torsion) else ()
        return b, t

    def top_degree(self) -> int:
        return max(len(self.betti), len(self.torsion)) - 1

    def is_zero(self) -> bool:
        return not any(self.betti) and not any(self.torsion)

    def nonzero_degrees(self) -> tuple[int, ...]:
        out = []
        for k in range(self.top_degree() + 1):
            b, t = self.degree(k)
            if b or t:
                out.append(k)
        return tuple(out)

    def describe(self) -> str:
        parts = []
        for k in range(self.top_degree() + 1):
            b, t = self.degree(k)
            gens = ["Z"] * b + [f"Z/{d}" for d in t]
            parts.append(f"H{k}=" + ("+".join(gens) if gens else "0"))
        return " ".join(parts) if parts else "(empty)"


def profile_from_chain_complex(chain, reduced: bool = False) -> HomologyProfile:
    sizes = [len(b) for b in chain.bases]
    if not sizes:
        return HomologyProfile((), (), reduced)
    factor_lists = [smith_normal_form(b)[0] for b in chain.boundaries]
    ranks = [0] + [len(f) for f in factor_lists] + [0]
    betti = []
    torsion = []
    for k in range(len(sizes)):
        betti.append(sizes[k] - ranks[k] - ranks[k + 1])
        nxt = factor_lists[k] if k < len(factor_lists) else ()
        torsion.append(tuple(d for d in nxt if d > 1))
    if reduced:
        betti[0] -= 1
    return HomologyProfile(tuple(betti), tuple(torsion), reduced)


@lru_cache(maxsize=8192)
def _poset_homology(p, reduced: bool) -> HomologyProfile:
    from .complexes import chain_complex, order_complex

    return profile_from_chain_complex(chain_complex(order_complex(p)), reduced)


def homology(obj, reduced: bool = False) -> HomologyProfile:
    """Homology of a poset, simplicial complex, or regular CW complex.

    Posets and CW complexes go through the order complex of their
    (face) poset, so no incidence numbers are ever needed.
    """
    from .complexes import RegularCWComplex, SimplicialComplex, chain_complex
    from .poset import Poset

    if isinstance(obj, Poset):
        return _poset_homology(obj, reduced)
    if isinstance(obj, SimplicialComplex):
        return profile_from_chain_complex(chain_complex(obj), reduced)
    if isinstance(obj, RegularCWComplex):
        return _poset_homology(obj.poset, reduced)
    if hasattr(obj, "poset"):
        return _poset_homology(obj.poset, reduced)
    raise TypeError(f"cannot compute homology of {type(obj).__name__}")


def euler_characteristic(obj) -> int:
    from .complexes import RegularCWComplex, SimplicialComplex, order_complex
    from .poset import Poset

    if isinstance(obj, Poset):
        return order_complex(obj).euler_characteristic()
    if isinstance(obj, (SimplicialComplex, RegularCWComplex)):
        return obj.euler_characteristic()
    if hasattr(obj, "poset"):
        return order_complex(obj.poset).euler_characteristic()
    raise TypeError(f"cannot compute the Euler characteristic of {type(obj).__name__}")


def same_homology(a: HomologyProfile, b: HomologyProfile, through_degree: int | None = None) -> tuple[bool, list[str]]:
    """Degree-wise comparison; returns (equal, mismatch descriptions)."""
    if a.reduced != b.reduced:
        raise ValueError("cannot compare a reduced profile with an unreduced one")
    top = max(a.top_degree(), b.top_degree())
    if through_degree is not None:
        top = min(top, through_degree)
    diffs = []
    for k in range(top + 1):
        if a.degree(k) != b.degree(k):
            diffs.append(f"degree {k}: {a.degree(k)} vs {b.degree(k)}")
    return not diffs, diffs
