"""Covers, nerves, and completions of nerves.

A cover of a poset is an indexed family of down-sets whose union is the
whole poset.  The nerve records which subfamilies intersect; the completion
refines it with one cell per connected component of each intersection, and
is always the face poset of a regular CW complex whose cells are simplices.

Theorem verification goes through the relation cylinder: each nerve
statement names a relation between the covered poset and a nerve-derived
poset, and the generalized equivalence checker does the rest.

Part names may not contain "," or "|"; those separators build the derived
identifiers (",".join for an index set J, and "J|c" for the component of
W_J whose least element is c).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .certificates import TrivialityVerdict
from .complexes import (
    EMPTY_COMPLEX,
    RegularCWComplex,
    SimplicialComplex,
    cell_id,
    cw_from_face_poset,
    face_poset,
)
from .cylinder import EquivalenceReport, Relation, verify_equivalence
from .errors import InputError, ValidationError
from .homology import HomologyProfile, homology, same_homology
from .poset import ElementSet, Poset
from .reduction import DEFAULT_BUDGET, triviality_oracle

RESERVED_NAME_CHARS = (",", "|")

ComponentSplitter = Callable[[ElementSet], list[ElementSet]]


def intersection_label(names: Iterable[str]) -> str:
    return ",".join(sorted(names))


def label_parts(label: str) -> frozenset[str]:
    return frozenset(label.split(","))


def component_label(jid: str, comp: ElementSet) -> str:
    return jid + "|" + min(comp.members)


class PosetCover:
    """Named down-sets covering a poset, with cached subfamily intersections.

    Parts given as arbitrary subsets are rejected unless open_hulls=True,
    which replaces each part by its open hull instead.
    """

    def __init__(self, base: Poset, parts: dict, open_hulls: bool = False):
        self.base = base
        named: dict[str, ElementSet] = {}
        for name in sorted(parts):
            if not name or any(ch in name for ch in RESERVED_NAME_CHARS):
                raise InputError(
                    f"cover part name {name!r} is empty or contains a reserved character (one of ',' '|')"
                )
            sub = parts[name] if isinstance(parts[name], ElementSet) else base.subset(parts[name])
            if sub.poset is not base and sub.poset != base:
                raise InputError(f"cover part {name!r} belongs to a different poset")
            if open_hulls:
                sub = sub.open_hull()
            elif not sub.is_down_set():
                raise InputError(
                    f"cover part {name!r} is not a down-set; pass open_hulls=True to take hulls"
                )
            named[name] = sub
        covered: set[str] = set()
        for sub in named.values():
            covered |= sub.members
        if covered != set(base.elements):
            missing = sorted(set(base.elements) - covered)
            raise InputError(f"cover misses elements: {', '.join(missing[:6])}")
        self.parts = named
        self._masks: Optional[dict[frozenset[str], int]] = None
        self._nerve: Optional[SimplicialComplex] = None
        self._nerve_poset: Optional[Poset] = None

    @property
    def part_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.parts))

    def part(self, name: str) -> ElementSet:
        if name not in self.parts:
            raise InputError(f"unknown cover part {name!r}")
        return self.parts[name]

    def _intersection_masks(self) -> dict[frozenset[str], int]:
        # incremental expansion: a subfamily is considered only when the
        # subfamily missing its largest name already intersects
        if self._masks is None:
            names = self.part_names
            found: dict[frozenset[str], int] = {}
            layer: list[tuple[tuple[str, ...], int]] = []
            for pos, n in enumerate(names):
                m = self.parts[n].mask
                if m:
                    found[frozenset((n,))] = m
                    layer.append(((n,), m))
            position = {n: i for i, n in enumerate(names)}
            while layer:
                grown: list[tuple[tuple[str, ...], int]] = []
                for tup, m in layer:
                    for n2 in names[position[tup[-1]] + 1 :]:
                        m2 = m & self.parts[n2].mask
                        if m2:
                            t2 = tup + (n2,)
                            found[frozenset(t2)] = m2
                            grown.append((t2, m2))
                layer = grown
            self._masks = found
        return self._masks

    def simplices(self) -> list[frozenset[str]]:
        """Subfamilies with non-empty intersection, smallest first."""
        return sorted(self._intersection_masks(), key=lambda J: (len(J), sorted(J)))

    def intersection(self, names: Iterable[str]) -> ElementSet:
        J = set(names)
        if not J:
            raise InputError("intersection needs at least one part name")
        mask = self.base.full_mask()
        for n in J:
            mask &= self.part(n).mask
        return self.base._subset_from_mask(mask)

    def intersection_of_label(self, label: str) -> ElementSet:
        return self.intersection(label_parts(label))

    def nerve(self) -> SimplicialComplex:
        if self._nerve is None:
            sims = self._intersection_masks()
            self._nerve = SimplicialComplex(tuple(sorted(J)) for J in sims) if sims else EMPTY_COMPLEX
        return self._nerve

    def nerve_poset(self) -> Poset:
        if self._nerve_poset is None:
            self._nerve_poset = face_poset(self.nerve())
        return self._nerve_poset


class ComplexCover:
    """Subcomplexes covering a simplicial complex."""

    def __init__(self, base: SimplicialComplex, parts: dict):
        self.base = base
        named: dict[str, SimplicialComplex] = {}
        for name in sorted(parts):
            if not name or any(ch in name for ch in RESERVED_NAME_CHARS):
                raise InputError(
                    f"cover part name {name!r} is empty or contains a reserved character (one of ',' '|')"
                )
            part = parts[name]
            if not isinstance(part, SimplicialComplex):
                part = SimplicialComplex(part)
            if not part.is_subcomplex_of(base):
                raise InputError(f"cover part {name!r} is not a subcomplex of the base")
            named[name] = part
        union: set[tuple[str, ...]] = set()
        for part in named.values():
            union |= part.faces
        if union != set(base.faces):
            missing = sorted(set(base.faces) - union)
            raise InputError(f"cover misses simplices: {missing[:4]}")
        self.parts = named
        self._poset_cover: Optional[PosetCover] = None

    @property
    def part_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.parts))

    def poset_cover(self) -> PosetCover:
        """The induced cover of the base's face poset by the parts' cell sets."""
        if self._poset_cover is None:
            fp = face_poset(self.base)
            self._poset_cover = PosetCover(
                fp, {name: {cell_id(s) for s in part.faces} for name, part in self.parts.items()}
            )
        return self._poset_cover

    def nerve(self) -> SimplicialComplex:
        return self.poset_cover().nerve()

    def nerve_poset(self) -> Poset:
        return self.poset_cover().nerve_poset()


AnyCover = Union[PosetCover, ComplexCover]


def _as_poset_cover(c: AnyCover) -> PosetCover:
    return c.poset_cover() if isinstance(c, ComplexCover) else c


def nerve(c: AnyCover) -> SimplicialComplex:
    return c.nerve()


def nerve_poset(c: AnyCover) -> Poset:
    return c.nerve_poset()


@dataclass(eq=False)
class CoverClassification:
    """Triviality verdicts for every non-empty intersection and its components.

    status: "good" when every intersection is trivial, "quasi-good" when
    every component of every intersection is trivial, "neither" when some
    component is certified non-trivial, "unknown" otherwise.
    """

    status: str
    whole: dict[str, TrivialityVerdict]
    components: dict[str, TrivialityVerdict]

    @property
    def is_good(self) -> bool:
        return self.status == "good"

    @property
    def is_quasi_good(self) -> bool:
        return self.status in ("good", "quasi-good")

    @property
    def failing(self) -> list[str]:
        return sorted(k for k, v in self.components.items() if v.is_nontrivial)

    @property
    def undecided(self) -> list[str]:
        return sorted(k for k, v in self.components.items() if v.is_unknown)

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "intersections": {k: v.to_json_dict() for k, v in sorted(self.whole.items())},
            "components": {k: v.to_json_dict() for k, v in sorted(self.components.items())},
        }


def classify_cover(c: AnyCover, budget: int = DEFAULT_BUDGET) -> CoverClassification:
    c = _as_poset_cover(c)
    whole: dict[str, TrivialityVerdict] = {}
    comps: dict[str, TrivialityVerdict] = {}
    all_connected = True
    for J in c.simplices():
        jid = intersection_label(J)
        w = c.intersection(J)
        pieces = w.components()
        verdicts = []
        for piece in pieces:
            v = triviality_oracle(piece.induced(), budget)
            comps[component_label(jid, piece)] = v
            verdicts.append(v)
        if len(pieces) == 1:
            whole[jid] = verdicts[0]
        else:
            all_connected = False
            whole[jid] = TrivialityVerdict(
                "nontrivial", "disconnected", detail={"components": len(pieces)}
            )
    if any(v.is_nontrivial for v in comps.values()):
        status = "neither"
    elif any(v.is_unknown for v in comps.values()):
        status = "unknown"
    elif all_connected:
        status = "good"
    else:
        status = "quasi-good"
    return CoverClassification(status, whole, comps)


@dataclass(eq=False)
class TrivialSubnerve:
    """The subposet of the nerve spanned by index sets with trivial intersection."""

    cover: PosetCover
    poset: Poset
    verdicts: dict[str, TrivialityVerdict]
    undecided: tuple[str, ...]

    @property
    def decided(self) -> bool:
        return not self.undecided


def trivial_subnerve(
    c: AnyCover, budget: int = DEFAULT_BUDGET, classification: Optional[CoverClassification] = None
) -> TrivialSubnerve:
    c = _as_poset_cover(c)
    if classification is None:
        classification = classify_cover(c, budget)
    np = c.nerve_poset()
    keep = [jid for jid, v in classification.whole.items() if v.is_trivial]
    undecided = tuple(sorted(jid for jid, v in classification.whole.items() if v.is_unknown))
    return TrivialSubnerve(c, np.induced(keep), dict(classification.whole), undecided)


def point_subnerve(sub: TrivialSubnerve, x: str) -> ElementSet:
    """Index sets in the trivial subnerve whose intersection contains x."""
    if x not in sub.cover.base:
        raise InputError(f"unknown element {x!r}")
    bit = 1 << sub.cover.base._lookup(x)
    members = {jid for jid in sub.poset.elements if sub.cover.intersection_of_label(jid).mask & bit}
    out = sub.poset.subset(members)
    if not out.is_down_set():
        raise ValidationError(f"membership family of {x!r} is not open in the trivial subnerve")
    return out


@dataclass(eq=False)
class CompletionPoset:
    """Poset of pairs (index set J, component of W_J), inclusion both ways.

    Identifiers are "J|c" with J the sorted comma-joined part names and c
    the least element of the component.  Grading by |J|-1 presents a
    regular CW complex whose cells are simplices.
    """

    cover: PosetCover
    poset: Poset
    dim: dict[str, int]
    cells: dict[str, ElementSet]

    def as_cw(self) -> RegularCWComplex:
        return cw_from_face_poset(self.poset, self.dim)


def completion_poset(c: AnyCover, components: Optional[ComponentSplitter] = None) -> CompletionPoset:
    """Refine the nerve by splitting every intersection into components.

    The components callable defaults to order-connectivity; the point-cloud
    pipeline substitutes metric components.  Construction re-checks, for
    every cell and every subfamily of its index set, that exactly one
    component one level up contains it.
    """
    c = _as_poset_cover(c)
    if components is None:
        components = lambda s: s.components()
    split: dict[frozenset[str], list[ElementSet]] = {}
    for J in c.simplices():
        split[J] = components(c.intersection(J))
    labels: dict[str, tuple[frozenset[str], ElementSet]] = {}
    dim: dict[str, int] = {}
    for J, pieces in split.items():
        jid = intersection_label(J)
        for piece in pieces:
            lab = component_label(jid, piece)
            labels[lab] = (J, piece)
            dim[lab] = len(J) - 1
    relations: list[tuple[str, str]] = []
    for lab, (J, piece) in labels.items():
        for drop in sorted(J):
            if len(J) == 1:
                continue
            J2 = J - {drop}
            containers = [
                p2 for p2 in split[J2] if piece.mask & ~p2.mask == 0
            ]
            if len(containers) != 1:
                raise ValidationError(
                    f"component {lab!r} lies in {len(containers)} components of {intersection_label(J2)!r}"
                )
            relations.append((component_label(intersection_label(J2), containers[0]), lab))
        # the one-level containment above generates the order; the full
        # subfamily claim is re-checked directly
        for J2 in _proper_subfamilies(J):
            count = sum(1 for p2 in split[J2] if piece.mask & ~p2.mask == 0)
            if count != 1:
                raise ValidationError(
                    f"component {lab!r} lies in {count} components of {intersection_label(J2)!r}"
                )
    poset = Poset(labels.keys(), relations)
    return CompletionPoset(c, poset, dim, {lab: piece for lab, (J, piece) in labels.items()})


def _proper_subfamilies(J: frozenset[str]) -> list[frozenset[str]]:
    out: list[frozenset[str]] = []
    items = sorted(J)
    for bits in range(1, (1 << len(items)) - 1):
        out.append(frozenset(items[i] for i in range(len(items)) if bits >> i & 1))
    return out


def completion_cw(c: ComplexCover, components: Optional[ComponentSplitter] = None) -> RegularCWComplex:
    return completion_poset(c.poset_cover(), components).as_cw()


NERVE_VARIANTS = ("good-poset", "x-zero", "quasi-good")


@dataclass(eq=False)
class NerveTheoremReport:
    variant: str
    status: str
    classification: CoverClassification
    detail: dict = field(default_factory=dict)
    equivalence: Optional[EquivalenceReport] = None
    base_homology: Optional[HomologyProfile] = None
    nerve_homology: Optional[HomologyProfile] = None
    homology_equal: Optional[bool] = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "variant": self.variant,
            "status": self.status,
            "classification": self.classification.to_json_dict(),
        }
        if self.detail:
            out["detail"] = dict(self.detail)
        if self.equivalence is not None:
            out["equivalence"] = self.equivalence.to_json_dict()
        if self.base_homology is not None:
            out["base_homology"] = self.base_homology.describe()
        if self.nerve_homology is not None:
            out["nerve_homology"] = self.nerve_homology.describe()
        if self.homology_equal is not None:
            out["homology_equal"] = self.homology_equal
        return out


def _membership_relation(c: PosetCover, target: Poset, member_of: dict[str, ElementSet]) -> Relation:
    pairs = [(x, lab) for lab, sub in member_of.items() for x in sub.members]
    return Relation.of(c.base, target.opposite(), pairs)


def verify_nerve_theorem(c: AnyCover, variant: str, budget: int = DEFAULT_BUDGET) -> NerveTheoremReport:
    """Check one nerve statement by building its relation into the nerve side.

    good-poset: a good cover's nerve poset.  x-zero: the trivial subnerve,
    additionally requiring every element's membership family to be trivial.
    quasi-good: the completion.  Refuted means some hypothesis is certified
    non-trivial; unknown means some verdict ran out of budget.
    """
    if variant not in NERVE_VARIANTS:
        raise InputError(f"unknown nerve theorem variant {variant!r}; expected one of {NERVE_VARIANTS}")
    c = _as_poset_cover(c)
    classification = classify_cover(c, budget)

    if variant == "good-poset":
        if not classification.is_good:
            bad = sorted(k for k, v in classification.whole.items() if v.is_nontrivial)
            status = "refuted" if bad else "unknown"
            return NerveTheoremReport(variant, status, classification, {"failing": bad})
        target = c.nerve_poset()
        member_of = {jid: c.intersection_of_label(jid) for jid in target.elements}
    elif variant == "x-zero":
        sub = trivial_subnerve(c, budget, classification)
        if not sub.decided:
            return NerveTheoremReport(variant, "unknown", classification, {"undecided": list(sub.undecided)})
        membership_verdicts: dict[str, TrivialityVerdict] = {}
        for x in c.base.elements:
            membership_verdicts[x] = triviality_oracle(point_subnerve(sub, x).induced(), budget)
        bad = sorted(x for x, v in membership_verdicts.items() if v.is_nontrivial)
        open_q = sorted(x for x, v in membership_verdicts.items() if v.is_unknown)
        if bad or open_q:
            status = "refuted" if bad else "unknown"
            return NerveTheoremReport(
                variant, status, classification, {"failing": bad, "undecided": open_q}
            )
        target = sub.poset
        member_of = {jid: c.intersection_of_label(jid) for jid in target.elements}
    else:
        if not classification.is_quasi_good:
            status = "refuted" if classification.status == "neither" else "unknown"
            return NerveTheoremReport(variant, status, classification, {"failing": classification.failing})
        comp = completion_poset(c)
        target = comp.poset
        member_of = comp.cells

    r = _membership_relation(c, target, member_of)
    eq = verify_equivalence(r, budget)
    base_h = homology(c.base)
    nerve_h = homology(target)
    equal: Optional[bool] = None
    if eq.status == "certified":
        equal, diffs = same_homology(base_h, nerve_h)
        if not equal:
            raise AssertionError(f"nerve theorem certified with unequal homology: {diffs}")
    return NerveTheoremReport(variant, eq.status, classification, {}, eq, base_h, nerve_h, equal)


@dataclass(eq=False)
class CompletionCorollaryReport:
    status: str
    nerve_report: NerveTheoremReport
    completion: Optional[RegularCWComplex] = None
    base_homology: Optional[HomologyProfile] = None
    completion_homology: Optional[HomologyProfile] = None
    homology_equal: Optional[bool] = None

    def to_json_dict(self) -> dict:
        out: dict = {"status": self.status, "nerve_theorem": self.nerve_report.to_json_dict()}
        if self.completion is not None:
            out["completion_f_vector"] = list(self.completion.f_vector())
        if self.base_homology is not None:
            out["base_homology"] = self.base_homology.describe()
        if self.completion_homology is not None:
            out["completion_homology"] = self.completion_homology.describe()
        if self.homology_equal is not None:
            out["homology_equal"] = self.homology_equal
        return out


def verify_corollary_completion(c: ComplexCover, budget: int = DEFAULT_BUDGET) -> CompletionCorollaryReport:
    """Quasi-good cover of a complex: the completion CW complex matches the base.

    Delegates the homotopy content to the quasi-good nerve check over the
    face poset, then compares homology of the original complex with the
    validated completion complex.
    """
    if not isinstance(c, ComplexCover):
        raise InputError("completion corollary expects a cover of a simplicial complex")
    inner = verify_nerve_theorem(c.poset_cover(), "quasi-good", budget)
    cw = completion_cw(c)
    base_h = homology(c.base)
    comp_h = homology(cw)
    equal: Optional[bool] = None
    if inner.status == "certified":
        equal, diffs = same_homology(base_h, comp_h)
        if not equal:
            raise AssertionError(f"completion corollary certified with unequal homology: {diffs}")
    return CompletionCorollaryReport(inner.status, inner, cw, base_h, comp_h, equal)
