"""The cylinder of a relation between two finite posets.

For a relation R from X to Y, the cylinder is X disjoint-union Y with both
orders kept and x < y whenever some x' above x is related to some y' below
y.  Identifiers are namespaced "X:" and "Y:".  A monotone map gives the
non-Hausdorff mapping cylinder, which retracts onto its target by up-beat
deletions.

The two hypothesis checkers certify the local data that lets the cylinder
collapse onto either factor through gamma steps; when both sides certify,
the factors have the same weak homotopy type and equal homology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .certificates import ReductionCertificate, ReductionStep, TrivialityVerdict
from .errors import InputError, NotCertified, ValidationError
from .homology import HomologyProfile, homology, same_homology
from .poset import ElementSet, Poset
from .reduction import DEFAULT_BUDGET, triviality_oracle

SOURCE_PREFIX = "X:"
TARGET_PREFIX = "Y:"


@dataclass(frozen=True)
class Relation:
    source: Poset
    target: Poset
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        for x, y in self.pairs:
            if x not in self.source:
                raise InputError(f"relation pair mentions unknown source element {x!r}")
            if y not in self.target:
                raise InputError(f"relation pair mentions unknown target element {y!r}")

    @classmethod
    def of(cls, source: Poset, target: Poset, pairs) -> "Relation":
        return cls(source, target, frozenset((x, y) for x, y in pairs))

    @classmethod
    def from_monotone_map(cls, source: Poset, target: Poset, f: dict[str, str]) -> "Relation":
        if set(f) != set(source.elements):
            raise InputError("map must be defined on exactly the source elements")
        for a, b in source.cover_pairs:
            if not target.le(f[a], f[b]):
                raise InputError(f"map is not monotone: {a!r} < {b!r} but f({a!r}) is not below f({b!r})")
        return cls(source, target, frozenset((x, f[x]) for x in source.elements))

    def image(self, members) -> ElementSet:
        ms = set(members)
        return self.target.subset({y for x, y in self.pairs if x in ms})

    def preimage(self, members) -> ElementSet:
        ms = set(members)
        return self.source.subset({x for x, y in self.pairs if y in ms})

    def opposite(self) -> "Relation":
        return Relation(self.target.opposite(), self.source.opposite(), frozenset((y, x) for x, y in self.pairs))


def source_name(x: str) -> str:
    return SOURCE_PREFIX + x


def target_name(y: str) -> str:
    return TARGET_PREFIX + y


@dataclass(frozen=True)
class CylinderPoset:
    poset: Poset
    relation: Relation
    retraction_certificate: Optional[ReductionCertificate] = None

    @property
    def source_part(self) -> ElementSet:
        return self.poset.subset({source_name(x) for x in self.relation.source.elements})

    @property
    def target_part(self) -> ElementSet:
        return self.poset.subset({target_name(y) for y in self.relation.target.elements})


def build_cylinder(r: Relation) -> CylinderPoset:
    elements = [source_name(x) for x in r.source.elements] + [target_name(y) for y in r.target.elements]
    relations = (
        [(source_name(a), source_name(b)) for a, b in r.source.cover_pairs]
        + [(target_name(a), target_name(b)) for a, b in r.target.cover_pairs]
        + [(source_name(x), target_name(y)) for x, y in r.pairs]
    )
    return CylinderPoset(Poset(elements, relations), r)


def mapping_cylinder(source: Poset, target: Poset, f: dict[str, str]) -> CylinderPoset:
    """Cylinder of a monotone map, with its up-beat retraction onto the target.

    The certificate deletes source elements in decreasing linear-extension
    order; each one is an up-beat point witnessed by its image.
    """
    r = Relation.from_monotone_map(source, target, f)
    cyl = build_cylinder(r)
    steps = [
        ReductionStep("up-beat", (source_name(x),), witness=target_name(f[x]))
        for x in reversed(source.linear_extension())
    ]
    return CylinderPoset(cyl.poset, r, ReductionCertificate(tuple(steps)))


@dataclass(frozen=True)
class HypothesisReport:
    """Per-element triviality verdicts for one side's local data."""

    side: str  # "source" or "target"
    verdicts: dict[str, TrivialityVerdict]

    @property
    def status(self) -> str:
        if any(v.is_nontrivial for v in self.verdicts.values()):
            return "refuted"
        if any(v.is_unknown for v in self.verdicts.values()):
            return "unknown"
        return "certified"

    @property
    def failing(self) -> list[str]:
        return sorted(e for e, v in self.verdicts.items() if v.is_nontrivial)

    def to_json_dict(self) -> dict:
        return {
            "side": self.side,
            "status": self.status,
            "verdicts": {e: v.to_json_dict() for e, v in sorted(self.verdicts.items())},
        }


def source_local_data(r: Relation, y: str) -> ElementSet:
    """Open hull in the source of the preimage of the target element's down-set."""
    return r.preimage(r.target.down_set(y).members).open_hull()


def target_local_data(r: Relation, x: str) -> ElementSet:
    """Closure in the target of the image of the source element's up-set."""
    return r.image(r.source.up_set(x).members).closure()


def check_source_retraction(r: Relation, budget: int = DEFAULT_BUDGET) -> HypothesisReport:
    """Certify that every target element's local source data is homotopy trivial.

    When certified, the cylinder collapses onto its source part.
    """
    verdicts = {}
    for y in r.target.elements:
        hull = source_local_data(r, y)
        verdicts[y] = triviality_oracle(hull.induced(), budget)
    return HypothesisReport("source", verdicts)


def check_target_retraction(r: Relation, budget: int = DEFAULT_BUDGET) -> HypothesisReport:
    verdicts = {}
    for x in r.source.elements:
        closed = target_local_data(r, x)
        verdicts[x] = triviality_oracle(closed.induced(), budget)
    return HypothesisReport("target", verdicts)


def _strip(prefix: str, name: str) -> str:
    return name[len(prefix) :]


def collapse_cylinder_to_source(
    c: CylinderPoset, budget: int = DEFAULT_BUDGET, report: Optional[HypothesisReport] = None
) -> ReductionCertificate:
    """Gamma-delete the target part in linear-extension order.

    Each removed element's punctured down-set must coincide with its local
    source data; both are computed and compared at every step.
    """
    if report is None:
        report = check_source_retraction(c.relation, budget)
    if report.status != "certified":
        raise NotCertified(
            f"source retraction is {report.status}", failing=report.failing or None
        )
    p = c.poset
    removed: set[str] = set()
    steps = []
    for y in c.relation.target.linear_extension():
        yname = target_name(y)
        punct = {e for e in p.punctured_down(yname).members if e not in removed}
        hull = source_local_data(c.relation, y)
        expected = {source_name(x) for x in hull.members}
        if punct != expected:
            raise ValidationError(
                f"punctured down-set of {yname!r} does not match its local source data"
            )
        verdict = report.verdicts[y]
        assert verdict.certificate is not None
        evidence = verdict.certificate.rename(source_name)
        steps.append(ReductionStep("gamma-down", (yname,), evidence=evidence))
        removed.add(yname)
    return ReductionCertificate(tuple(steps))


def collapse_cylinder_to_target(
    c: CylinderPoset, budget: int = DEFAULT_BUDGET, report: Optional[HypothesisReport] = None
) -> ReductionCertificate:
    """Gamma-delete the source part in reverse linear-extension order."""
    if report is None:
        report = check_target_retraction(c.relation, budget)
    if report.status != "certified":
        raise NotCertified(
            f"target retraction is {report.status}", failing=report.failing or None
        )
    p = c.poset
    removed: set[str] = set()
    steps = []
    for x in reversed(c.relation.source.linear_extension()):
        xname = source_name(x)
        punct = {e for e in p.punctured_up(xname).members if e not in removed}
        closed = target_local_data(c.relation, x)
        expected = {target_name(y) for y in closed.members}
        if punct != expected:
            raise ValidationError(
                f"punctured up-set of {xname!r} does not match its local target data"
            )
        verdict = report.verdicts[x]
        assert verdict.certificate is not None
        evidence = verdict.certificate.rename(target_name)
        steps.append(ReductionStep("gamma-up", (xname,), evidence=evidence))
        removed.add(xname)
    return ReductionCertificate(tuple(steps))


@dataclass(frozen=True)
class EquivalenceReport:
    status: str  # "certified" | "refuted" | "unknown"
    source_report: HypothesisReport
    target_report: HypothesisReport
    to_source: Optional[ReductionCertificate] = None
    to_target: Optional[ReductionCertificate] = None
    source_homology: Optional[HomologyProfile] = None
    target_homology: Optional[HomologyProfile] = None
    homology_equal: Optional[bool] = None
    # kept so callers can rebuild the cylinder the certificates act on
    relation: Optional[Relation] = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "status": self.status,
            "source": self.source_report.to_json_dict(),
            "target": self.target_report.to_json_dict(),
        }
        if self.to_source is not None:
            out["to_source"] = self.to_source.to_json_dict()
        if self.to_target is not None:
            out["to_target"] = self.to_target.to_json_dict()
        if self.source_homology is not None:
            out["source_homology"] = self.source_homology.describe()
        if self.target_homology is not None:
            out["target_homology"] = self.target_homology.describe()
        if self.homology_equal is not None:
            out["homology_equal"] = self.homology_equal
        return out


def verify_equivalence(r: Relation, budget: int = DEFAULT_BUDGET) -> EquivalenceReport:
    """Certify both retractions; a certified relation forces equal homology.

    A certified report carries both gamma certificates, and the homology
    comparison is asserted: a certified instance with differing homology is
    a soundness failure, not a report entry.
    """
    src = check_source_retraction(r, budget)
    tgt = check_target_retraction(r, budget)
    if src.status == "refuted" or tgt.status == "refuted":
        return EquivalenceReport("refuted", src, tgt, relation=r)
    if src.status == "unknown" or tgt.status == "unknown":
        return EquivalenceReport("unknown", src, tgt, relation=r)
    cyl = build_cylinder(r)
    to_source = collapse_cylinder_to_source(cyl, budget, src)
    to_target = collapse_cylinder_to_target(cyl, budget, tgt)
    hx = homology(r.source)
    hy = homology(r.target)
    equal, diffs = same_homology(hx, hy)
    if not equal:
        raise AssertionError(f"certified relation with unequal homology: {diffs}")
    return EquivalenceReport("certified", src, tgt, to_source, to_target, hx, hy, equal, relation=r)


@dataclass(frozen=True)
class HomologyEquivalenceReport:
    status: str  # "certified" | "refuted"
    through_degree: int
    failing: dict[str, list[str]] = field(default_factory=dict)
    source_homology: Optional[HomologyProfile] = None
    target_homology: Optional[HomologyProfile] = None
    homology_equal: Optional[bool] = None

    def to_json_dict(self) -> dict:
        out: dict = {"status": self.status, "through_degree": self.through_degree}
        if self.failing:
            out["failing"] = {k: list(v) for k, v in sorted(self.failing.items())}
        if self.source_homology is not None:
            out["source_homology"] = self.source_homology.describe()
        if self.target_homology is not None:
            out["target_homology"] = self.target_homology.describe()
        if self.homology_equal is not None:
            out["homology_equal"] = self.homology_equal
        return out


def _reduced_vanishes_through(members: ElementSet, n: int) -> bool:
    """Non-empty with zero reduced homology in degrees 0..n."""
    if len(members) == 0:
        return False
    prof = homology(members.induced(), reduced=True)
    return all(prof.degree(k) == (0, ()) for k in range(n + 1))


def verify_homology_equivalence(r: Relation, n: int, budget: int = DEFAULT_BUDGET) -> HomologyEquivalenceReport:
    """Homology-only version: local data need only vanish through degree n.

    This check is exact (no Unknown): reduced homology through degree n of
    every local piece either vanishes or it does not.  Empty local data
    fails, matching the connectivity reading of the hypothesis.
    """
    failing: dict[str, list[str]] = {"source": [], "target": []}
    for y in r.target.elements:
        if not _reduced_vanishes_through(source_local_data(r, y), n):
            failing["source"].append(y)
    for x in r.source.elements:
        if not _reduced_vanishes_through(target_local_data(r, x), n):
            failing["target"].append(x)
    failing = {k: v for k, v in failing.items() if v}
    if failing:
        return HomologyEquivalenceReport("refuted", n, failing)
    hx = homology(r.source)
    hy = homology(r.target)
    equal, diffs = same_homology(hx, hy, through_degree=n)
    if not equal:
        raise AssertionError(f"certified homology hypothesis with unequal homology: {diffs}")
    return HomologyEquivalenceReport("certified", n, {}, hx, hy, equal)
