"""Point-cloud pipeline: pull back an interval cover along a filter, split
parts into metric components, and take the completion of the nerve.

The classic output keeps one vertex per component and a simplex for each
family of components with common points (the component nerve).  The
completion instead keeps one cell per component of each intersection of
parts, which can separate features the component nerve glues together.

Components of a finite sample are defined by the epsilon-neighborhood
graph at a single user-supplied scale; no clustering heuristics.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable

from .complexes import EMPTY_COMPLEX, RegularCWComplex, SimplicialComplex
from .errors import InputError
from .homology import HomologyProfile, homology
from .nerve import CompletionPoset, PosetCover, completion_poset
from .poset import Poset


class PointCloud:
    ids: tuple[str, ...]
    coords: tuple[tuple[float, ...], ...]

    def __init__(self, ids: Iterable[str], coords: Iterable[Iterable[float]]):
        self.ids = tuple(str(i) for i in ids)
        self.coords = tuple(tuple(float(v) for v in row) for row in coords)
        if len(self.ids) != len(self.coords):
            raise InputError("point cloud needs one identifier per coordinate row")
        if len(set(self.ids)) != len(self.ids):
            raise InputError("point identifiers must be unique")
        dims = {len(row) for row in self.coords}
        if len(dims) > 1:
            raise InputError(f"points have mixed dimensions: {sorted(dims)}")
        if self.coords and not min(dims):
            raise InputError("points need at least one coordinate")
        self._index = {i: k for k, i in enumerate(self.ids)}

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dimension(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    def coord(self, point_id: str) -> tuple[float, ...]:
        if point_id not in self._index:
            raise InputError(f"unknown point {point_id!r}")
        return self.coords[self._index[point_id]]

    def distance(self, a: str, b: str) -> float:
        return math.dist(self.coord(a), self.coord(b))

    @classmethod
    def from_csv(cls, path: str) -> "PointCloud":
        """One point per row; a leading non-numeric field is the identifier."""
        ids: list[str] = []
        coords: list[list[float]] = []
        with open(path, newline="") as fh:
            for row_no, row in enumerate(csv.reader(fh)):
                cells = [c.strip() for c in row if c.strip()]
                if not cells or cells[0].startswith("#"):
                    continue
                try:
                    float(cells[0])
                    ident = f"p{len(ids):04d}"
                    values = cells
                except ValueError:
                    ident = cells[0]
                    values = cells[1:]
                try:
                    coords.append([float(v) for v in values])
                except ValueError as exc:
                    raise InputError(f"{path}:{row_no + 1}: bad coordinate in {row!r}") from exc
                ids.append(ident)
        return cls(ids, coords)


@dataclass(frozen=True)
class FilterSpec:
    """One real value per point: a coordinate projection or eccentricity
    (greatest distance to any other point)."""

    kind: str
    axis: int = 0

    def __post_init__(self):
        if self.kind not in ("coordinate", "eccentricity"):
            raise InputError(f"unknown filter kind {self.kind!r}")
        if self.kind == "coordinate" and self.axis < 0:
            raise InputError("coordinate axis must be non-negative")

    def values(self, pc: PointCloud) -> tuple[float, ...]:
        if not len(pc):
            raise InputError("empty point cloud")
        if self.kind == "coordinate":
            if self.axis >= pc.dimension:
                raise InputError(f"axis {self.axis} out of range for {pc.dimension}-dimensional points")
            return tuple(row[self.axis] for row in pc.coords)
        return tuple(
            max(math.dist(row, other) for other in pc.coords) for row in pc.coords
        )


_AXIS_SHORTHAND = {"x": 0, "y": 1, "z": 2}


def parse_filter(text: str) -> FilterSpec:
    t = text.strip().lower()
    if t in _AXIS_SHORTHAND:
        return FilterSpec("coordinate", _AXIS_SHORTHAND[t])
    if t in ("ecc", "eccentricity"):
        return FilterSpec("eccentricity")
    if t.startswith("coord:") or t.startswith("coordinate:"):
        try:
            return FilterSpec("coordinate", int(t.split(":", 1)[1]))
        except ValueError:
            raise InputError(f"bad filter axis in {text!r}")
    raise InputError(f"unknown filter {text!r}; expected x|y|z, coord:<axis>, or eccentricity")


@dataclass(frozen=True)
class IntervalCover:
    """Uniform cover of the filter range by n closed intervals, each
    overlapping the next in the given fraction of its length."""

    intervals: int
    overlap: float

    def __post_init__(self):
        if self.intervals < 1:
            raise InputError("interval count must be at least 1")
        if not 0.0 <= self.overlap < 1.0:
            raise InputError("overlap fraction must lie in [0, 1)")

    def of_range(self, lo: float, hi: float) -> list[tuple[float, float]]:
        if hi < lo:
            raise InputError("empty filter range")
        if hi == lo:
            warnings.warn("degenerate filter range; using a single interval")
            return [(lo, hi)]
        n, g = self.intervals, self.overlap
        length = (hi - lo) / (n - g * (n - 1))
        step = length * (1.0 - g)
        spans = [(lo + k * step, lo + k * step + length) for k in range(n)]
        # the last span ends at hi exactly; rounding must not drop the max
        spans[-1] = (spans[-1][0], hi)
        return spans


def _part_name(k: int, n: int) -> str:
    return f"i{k:0{len(str(n - 1))}d}"


def pullback_cover(pc: PointCloud, f: FilterSpec, ic: IntervalCover) -> dict[str, frozenset[str]]:
    """Points grouped by which interval their filter value lands in."""
    values = f.values(pc)
    spans = ic.of_range(min(values), max(values))
    parts: dict[str, frozenset[str]] = {}
    for k, (a, b) in enumerate(spans):
        parts[_part_name(k, len(spans))] = frozenset(
            pid for pid, v in zip(pc.ids, values) if a <= v <= b
        )
    return parts


def epsilon_components(pc: PointCloud, ids: Iterable[str], epsilon: float) -> list[frozenset[str]]:
    """Components of the epsilon-neighborhood graph on the given points,
    sorted by least member."""
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    pool = sorted(set(ids))
    for pid in pool:
        pc.coord(pid)
    unseen = set(pool)
    out: list[frozenset[str]] = []
    for start in pool:
        if start not in unseen:
            continue
        queue = [start]
        unseen.discard(start)
        comp = {start}
        while queue:
            cur = queue.pop()
            near = [q for q in unseen if pc.distance(cur, q) <= epsilon]
            for q in near:
                unseen.discard(q)
                comp.add(q)
                queue.append(q)
        out.append(frozenset(comp))
    return sorted(out, key=min)


def component_split(
    pc: PointCloud, parts: dict[str, frozenset[str]], epsilon: float
) -> dict[str, list[frozenset[str]]]:
    """Component lists for each part and each 2- or 3-fold intersection."""
    out: dict[str, list[frozenset[str]]] = {}
    names = sorted(parts)
    singles = [(name,) for name in names]
    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1 :]]
    triples = [
        (a, b, c)
        for i, a in enumerate(names)
        for j, b in enumerate(names[i + 1 :], i + 1)
        for c in names[j + 1 :]
    ]
    for group in singles + pairs + triples:
        common = frozenset.intersection(*(parts[name] for name in group))
        if common:
            out[",".join(group)] = epsilon_components(pc, common, epsilon)
    return out


def _nerve_of_sets(named: dict[str, frozenset[str]]) -> SimplicialComplex:
    names = sorted(n for n, s in named.items() if s)
    if not names:
        return EMPTY_COMPLEX
    simplices: list[tuple[str, ...]] = []
    layer = [((n,), named[n]) for n in names]
    position = {n: i for i, n in enumerate(names)}
    while layer:
        grown = []
        for tup, common in layer:
            simplices.append(tup)
            for n2 in names[position[tup[-1]] + 1 :]:
                c2 = common & named[n2]
                if c2:
                    grown.append((tup + (n2,), c2))
        layer = grown
    return SimplicialComplex(simplices)


@dataclass(eq=False)
class MapperResult:
    cloud: PointCloud
    filter_values: tuple[float, ...]
    intervals: list[tuple[float, float]]
    parts: dict[str, frozenset[str]]
    epsilon: float
    completion: CompletionPoset
    complex: RegularCWComplex
    completion_homology: HomologyProfile
    nerve: SimplicialComplex
    nerve_homology: HomologyProfile
    component_nerve: SimplicialComplex
    component_nerve_homology: HomologyProfile

    def to_json_dict(self) -> dict:
        return {
            "points": len(self.cloud),
            "epsilon": self.epsilon,
            "intervals": [list(span) for span in self.intervals],
            "parts": {k: sorted(v) for k, v in sorted(self.parts.items())},
            "completion_f_vector": list(self.complex.f_vector()),
            "completion_homology": self.completion_homology.describe(),
            "nerve_facets": [list(f) for f in self.nerve.facets],
            "nerve_homology": self.nerve_homology.describe(),
            "component_nerve_facets": [list(f) for f in self.component_nerve.facets],
            "component_nerve_homology": self.component_nerve_homology.describe(),
        }


def mapper_completion(
    pc: PointCloud, f: FilterSpec, ic: IntervalCover, epsilon: float
) -> MapperResult:
    """Run the pipeline and return the completion next to both classic nerves.

    The sample is treated as a discrete poset, so every part is open and
    the nerve machinery applies unchanged, with metric components standing
    in for order components.
    """
    values = f.values(pc)
    spans = ic.of_range(min(values), max(values))
    parts = pullback_cover(pc, f, ic)
    discrete = Poset(pc.ids, ())
    cover = PosetCover(discrete, {name: set(members) for name, members in parts.items()})

    def split(sub):
        return [discrete.subset(comp) for comp in epsilon_components(pc, sub.members, epsilon)]

    comp = completion_poset(cover, split)
    cw = comp.as_cw()
    plain = cover.nerve()
    all_components = {
        f"{name}|{min(piece)}": piece
        for name in sorted(parts)
        for piece in epsilon_components(pc, parts[name], epsilon)
        if parts[name]
    }
    comp_nerve = _nerve_of_sets(all_components)
    return MapperResult(
        pc,
        values,
        spans,
        parts,
        epsilon,
        comp,
        cw,
        homology(cw),
        plain,
        homology(plain),
        comp_nerve,
        homology(comp_nerve),
    )


def circle_sample(n: int = 60, seed: int = 7, radius: float = 1.0) -> PointCloud:
    """Jittered points around a circle; adjacent spacing stays below 0.15
    for the default 60 points, so epsilon = 0.15 links neighbors only."""
    import random

    rng = random.Random(seed)
    ids = []
    coords = []
    for k in range(n):
        angle = 2.0 * math.pi * k / n + rng.uniform(-0.01, 0.01)
        r = radius + rng.uniform(-0.02, 0.02)
        ids.append(f"p{k:02d}")
        coords.append((r * math.cos(angle), r * math.sin(angle)))
    return PointCloud(ids, coords)


def figure_eight_sample(n: int = 80, seed: int = 11) -> PointCloud:
    """Jittered points along two unit circles meeting at the origin."""
    import random

    rng = random.Random(seed)
    ids = []
    coords = []
    half = n // 2
    for k in range(half):
        angle = 2.0 * math.pi * k / half + rng.uniform(-0.008, 0.008)
        coords.append((-1.0 + math.cos(angle), math.sin(angle)))
        ids.append(f"l{k:02d}")
    for k in range(n - half):
        angle = math.pi + 2.0 * math.pi * k / (n - half) + rng.uniform(-0.008, 0.008)
        coords.append((1.0 + math.cos(angle), math.sin(angle)))
        ids.append(f"r{k:02d}")
    return PointCloud(ids, coords)
