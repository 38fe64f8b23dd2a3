"""Reduction machinery for finite posets.

Beat points and cores, weak points and collapse searches, gamma points
backed by the three-valued triviality oracle, plus certificate replay.
Replay is pure verification: every side condition is re-checked from the
witness data, and no search is ever invoked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .certificates import (
    BEAT_KINDS,
    GAMMA_KINDS,
    WEAK_KINDS,
    ReductionCertificate,
    ReductionStep,
    TrivialityVerdict,
)
from .complexes import (
    SimplicialComplex,
    barycentric_complex,
    barycentric_poset,
    face_poset,
    order_complex,
)
from .errors import InputError, ReplayError
from .homology import homology, same_homology
from .poset import Poset, _iter_bits

DEFAULT_BUDGET = 100_000


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _min_index_of(p: Poset, subset: int) -> Optional[int]:
    for j in _iter_bits(subset):
        if subset & ~p._up[j] == 0:
            return j
    return None

def _max_index_of(p: Poset, subset: int) -> Optional[int]:
    for j in _iter_bits(subset):
        if subset & ~p._down[j] == 0:
            return j
    return None


def _beat_move(p: Poset, mask: int, i: int) -> Optional[tuple[str, int]]:
    """(kind, witness index) if element i is a beat point within mask; up first."""
    up = p._up[i] & ~(1 << i) & mask
    if up:
        m = _min_index_of(p, up)
        if m is not None:
            return ("up-beat", m)
    down = p._down[i] & ~(1 << i) & mask
    if down:
        m = _max_index_of(p, down)
        if m is not None:
            return ("down-beat", m)
    return None


def _greedy_core(p: Poset, mask: int) -> tuple[int, list[ReductionStep]]:
    """Remove the first beat point in identifier order until none remain."""
    steps: list[ReductionStep] = []
    changed = True
    while changed:
        changed = False
        for i in _iter_bits(mask):
            move = _beat_move(p, mask, i)
            if move is not None:
                kind, w = move
                steps.append(ReductionStep(kind, (p.elements[i],), witness=p.elements[w]))
                mask ^= 1 << i
                changed = True
                break
    return mask, steps


def _dismantling_cert(p: Poset, mask: int) -> Optional[ReductionCertificate]:
    final, steps = _greedy_core(p, mask)
    if _popcount(final) == 1:
        return ReductionCertificate(tuple(steps))
    return None


def find_beat_points(p: Poset) -> list[tuple[str, str, str]]:
    """All (element, kind, witness) triples; an element may appear for both kinds."""
    out = []
    mask = p.full_mask()
    for i, e in enumerate(p.elements):
        up = p._up[i] & ~(1 << i) & mask
        if up:
            m = _min_index_of(p, up)
            if m is not None:
                out.append((e, "up-beat", p.elements[m]))
        down = p._down[i] & ~(1 << i) & mask
        if down:
            m = _max_index_of(p, down)
            if m is not None:
                out.append((e, "down-beat", p.elements[m]))
    return out


def core(p: Poset) -> tuple[Poset, ReductionCertificate]:
    mask, steps = _greedy_core(p, p.full_mask())
    return p.induced(p._names(mask)), ReductionCertificate(tuple(steps))


def is_dismantlable(p: Poset) -> TrivialityVerdict:
    """Trivial iff the core is a point; otherwise Unknown, reporting the core."""
    if len(p) == 0:
        return TrivialityVerdict("nontrivial", "empty")
    mask, steps = _greedy_core(p, p.full_mask())
    if _popcount(mask) == 1:
        return TrivialityVerdict("trivial", "dismantling", ReductionCertificate(tuple(steps)))
    return TrivialityVerdict("unknown", "core", detail={"core_size": _popcount(mask), "core": list(p._names(mask))})


def _weak_move(p: Poset, mask: int, i: int) -> Optional[tuple[str, ReductionCertificate]]:
    """(kind, dismantling evidence) if i is a weak point within mask; up side first."""
    up = p._up[i] & ~(1 << i) & mask
    if up:
        cert = _dismantling_cert(p, up)
        if cert is not None:
            return ("up-weak", cert)
    down = p._down[i] & ~(1 << i) & mask
    if down:
        cert = _dismantling_cert(p, down)
        if cert is not None:
            return ("down-weak", cert)
    return None


def find_weak_points(p: Poset, contractible: Optional[Callable[[Poset], bool]] = None) -> list[tuple[str, str]]:
    """(element, kind) pairs whose punctured up/down set is contractible.

    Contractibility of the punctured set is the dismantlability check unless
    a custom predicate is supplied.
    """
    out = []
    mask = p.full_mask()
    for i, e in enumerate(p.elements):
        for kind, puncture in (("up-weak", p._up[i]), ("down-weak", p._down[i])):
            sub = puncture & ~(1 << i) & mask
            if not sub:
                continue
            if contractible is None:
                ok = _dismantling_cert(p, sub) is not None
            else:
                ok = contractible(p.induced(p._names(sub)))
            if ok:
                out.append((e, kind))
    return out


def _collapse_moves(p: Poset, mask: int, keep: int):
    """Yield (step, new mask) moves: beat removals first, weak-only after."""
    weak_only = []
    for i in _iter_bits(mask & ~keep):
        move = _beat_move(p, mask, i)
        if move is not None:
            kind, w = move
            step = ReductionStep(kind, (p.elements[i],), witness=p.elements[w])
            yield step, mask ^ (1 << i)
        else:
            weak_only.append(i)
    for i in weak_only:
        move = _weak_move(p, mask, i)
        if move is not None:
            kind, cert = move
            step = ReductionStep(kind, (p.elements[i],), evidence=cert)
            yield step, mask ^ (1 << i)


def _collapse_dfs(p: Poset, start: int, target: Optional[int], budget: int):
    """DFS over weak-point deletions.  Returns (steps or None, nodes, complete)."""
    failed: set[int] = set()
    counter = [0]
    keep = target if target is not None else 0

    def done(mask: int) -> bool:
        return mask == target if target is not None else _popcount(mask) == 1

    def dfs(mask: int):
        if done(mask):
            return [], True
        if mask in failed:
            return None, True
        counter[0] += 1
        if counter[0] > budget:
            return None, False
        complete = True
        for step, nm in _collapse_moves(p, mask, keep):
            sub, sub_complete = dfs(nm)
            if sub is not None:
                return [step] + sub, True
            complete = complete and sub_complete
        if complete:
            failed.add(mask)
        return None, complete

    steps, complete = dfs(start)
    return steps, counter[0], complete


def is_collapsible(p: Poset, budget: int = DEFAULT_BUDGET) -> TrivialityVerdict:
    """Trivial iff a weak-point deletion sequence to a point is found within budget."""
    if len(p) == 0:
        return TrivialityVerdict("nontrivial", "empty")
    steps, nodes, complete = _collapse_dfs(p, p.full_mask(), None, budget)
    if steps is not None:
        return TrivialityVerdict("trivial", "collapse", ReductionCertificate(tuple(steps)), detail={"nodes": nodes})
    reason = "no-collapse" if complete else "budget"
    return TrivialityVerdict("unknown", reason, detail={"nodes": nodes})


def collapse_search(p: Poset, target, budget: int = DEFAULT_BUDGET) -> tuple[Optional[ReductionCertificate], dict]:
    """Search for a weak-point deletion sequence from p onto the target subposet."""
    if isinstance(target, Poset):
        members = set(target.elements)
    else:
        members = set(target)
    for e in members:
        if e not in p:
            raise InputError(f"target element {e!r} is not in the poset")
    if isinstance(target, Poset) and p.induced(members) != target:
        raise InputError("target order disagrees with the induced order")
    tmask = p._mask_of(members)
    steps, nodes, complete = _collapse_dfs(p, p.full_mask(), tmask, budget)
    report = {"nodes": nodes, "complete": complete}
    if steps is None:
        return None, report
    return ReductionCertificate(tuple(steps)), report


def triviality_oracle(p: Poset, budget: int = DEFAULT_BUDGET) -> TrivialityVerdict:
    """Three-valued homotopy-triviality decision ladder.

    Empty or disconnected posets are NonTrivial; a non-zero reduced homology
    group is NonTrivial; a dismantling or a collapse within budget is Trivial
    with a replayable certificate; anything else is Unknown.  The homology
    screen runs before any Trivial answer, so a Trivial verdict can never
    contradict homology.
    """
    if len(p) == 0:
        return TrivialityVerdict("nontrivial", "empty")
    comps = p.connected_components()
    if len(comps) > 1:
        return TrivialityVerdict("nontrivial", "disconnected", detail={"components": len(comps)})
    prof = homology(p, reduced=True)
    degrees = prof.nonzero_degrees()
    if degrees:
        return TrivialityVerdict(
            "nontrivial", "homology", detail={"degree": degrees[0], "homology": prof.describe()}
        )
    cert = _dismantling_cert(p, p.full_mask())
    if cert is not None:
        return TrivialityVerdict("trivial", "dismantling", cert)
    steps, nodes, complete = _collapse_dfs(p, p.full_mask(), None, budget)
    if steps is not None:
        return TrivialityVerdict("trivial", "collapse", ReductionCertificate(tuple(steps)), detail={"nodes": nodes})
    reason = "no-collapse" if complete else "budget"
    return TrivialityVerdict("unknown", reason, detail={"nodes": nodes})


def find_gamma_points(
    p: Poset,
    budget: int = DEFAULT_BUDGET,
    oracle: Optional[Callable[[Poset, int], TrivialityVerdict]] = None,
) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """(element, kind) pairs whose punctured set is homotopy trivial.

    Sides whose verdict is Unknown are reported separately, never classified.
    """
    oracle = oracle or triviality_oracle
    gammas = []
    unknowns = []
    for i, e in enumerate(p.elements):
        for kind, puncture in (("gamma-up", p._up[i]), ("gamma-down", p._down[i])):
            sub = puncture & ~(1 << i)
            if not sub:
                continue
            verdict = oracle(p.induced(p._names(sub)), budget)
            if verdict.is_trivial:
                gammas.append((e, kind))
            elif verdict.is_unknown:
                unknowns.append((e, kind))
    return gammas, unknowns


# -- certificate replay -------------------------------------------------------


def _replay_on_mask(p: Poset, mask: int, cert: ReductionCertificate) -> int:
    for step in cert.steps:
        x = step.removed[0]
        if x not in p._index:
            raise ReplayError(f"certificate removes unknown element {x!r}")
        i = p._index[x]
        if not mask & (1 << i):
            raise ReplayError(f"certificate removes {x!r} which is not present")
        if step.kind in BEAT_KINDS:
            if step.witness not in p._index:
                raise ReplayError(f"witness {step.witness!r} is not an element")
            w = p._index[step.witness]
            if step.kind == "up-beat":
                sub = p._up[i] & ~(1 << i) & mask
                ok = bool(sub & (1 << w)) and sub & ~p._up[w] == 0
            else:
                sub = p._down[i] & ~(1 << i) & mask
                ok = bool(sub & (1 << w)) and sub & ~p._down[w] == 0
            if not ok:
                raise ReplayError(f"{step.kind} witness {step.witness!r} fails for {x!r}")
        elif step.kind in WEAK_KINDS + GAMMA_KINDS:
            if step.kind in ("up-weak", "gamma-up"):
                sub = p._up[i] & ~(1 << i) & mask
            else:
                sub = p._down[i] & ~(1 << i) & mask
            if not sub:
                raise ReplayError(f"{step.kind} step on {x!r} has an empty punctured set")
            ev = step.evidence
            assert ev is not None
            if step.kind in WEAK_KINDS and not ev.is_dismantling():
                raise ReplayError(f"{step.kind} evidence for {x!r} must be a dismantling")
            if step.kind in GAMMA_KINDS and not ev.is_collapse():
                raise ReplayError(f"{step.kind} evidence for {x!r} must be a collapse certificate")
            ev_mask = 0
            for e in ev.removed_elements():
                if e not in p._index:
                    raise ReplayError(f"evidence element {e!r} is not in the poset")
                ev_mask |= 1 << p._index[e]
            if ev_mask & ~sub:
                raise ReplayError(f"evidence for {x!r} strays outside the punctured set")
            final = _replay_on_mask(p, sub, ev)
            if _popcount(final) != 1:
                raise ReplayError(f"evidence for {x!r} does not reach a single point")
        else:
            raise ReplayError(f"step kind {step.kind!r} is not a poset step")
        mask ^= 1 << i
    return mask


def replay_poset_certificate(p: Poset, cert: ReductionCertificate) -> Poset:
    """Re-verify every step's side condition and return the final subposet."""
    mask = _replay_on_mask(p, p.full_mask(), cert)
    return p.induced(p._names(mask))


# -- simplicial collapses -----------------------------------------------------


def _proper_cofaces(faces: set[tuple[str, ...]], s: tuple[str, ...]) -> list[tuple[str, ...]]:
    ss = set(s)
    return [t for t in faces if len(t) > len(s) and ss.issubset(t)]


def free_pairs(faces: Iterable[tuple[str, ...]]) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    fs = set(faces)
    out = []
    for s in sorted(fs):
        cof = _proper_cofaces(fs, s)
        if len(cof) == 1:
            out.append((s, cof[0]))
    return out


def simplex_token(simplex: Iterable[str]) -> str:
    import json

    return json.dumps(sorted(simplex), separators=(",", ":"))


def token_simplex(token: str) -> tuple[str, ...]:
    import json

    data = json.loads(token)
    return tuple(data)


def simplicial_collapse_search(
    k: SimplicialComplex, target: Optional[SimplicialComplex] = None, budget: int = DEFAULT_BUDGET
) -> tuple[Optional[ReductionCertificate], dict]:
    """DFS over free-face removals from k to the target (a point if omitted)."""
    start = frozenset(k.faces)
    keep: frozenset[tuple[str, ...]] = frozenset()
    if target is not None:
        keep = frozenset(target.faces)
        if not keep <= start:
            raise InputError("target is not a subcomplex")
    failed: set[frozenset] = set()
    counter = [0]

    def done(faces: frozenset) -> bool:
        if target is not None:
            return faces == keep
        return len(faces) == 1 and len(next(iter(faces))) == 1

    def dfs(faces: frozenset):
        if done(faces):
            return [], True
        if faces in failed:
            return None, True
        counter[0] += 1
        if counter[0] > budget:
            return None, False
        complete = True
        for s, t in free_pairs(faces):
            if s in keep or t in keep:
                continue
            nf = faces - {s, t}
            sub, sub_complete = dfs(nf)
            if sub is not None:
                step = ReductionStep("simplicial-collapse", (simplex_token(s), simplex_token(t)))
                return [step] + sub, True
            complete = complete and sub_complete
        if complete:
            failed.add(faces)
        return None, complete

    steps, complete = dfs(start)
    report = {"nodes": counter[0], "complete": complete}
    if steps is None:
        return None, report
    return ReductionCertificate(tuple(steps)), report


def replay_simplicial_certificate(k: SimplicialComplex, cert: ReductionCertificate) -> frozenset:
    """Re-verify freeness of every removed pair; returns the remaining faces."""
    faces = set(k.faces)
    for step in cert.steps:
        if step.kind != "simplicial-collapse":
            raise ReplayError(f"step kind {step.kind!r} is not a simplicial step")
        s = token_simplex(step.removed[0])
        t = token_simplex(step.removed[1])
        if s not in faces or t not in faces:
            raise ReplayError(f"pair ({s}, {t}) is not present")
        cof = _proper_cofaces(faces, s)
        if cof != [t]:
            raise ReplayError(f"face {s} is not free with coface {t}")
        faces.discard(s)
        faces.discard(t)
    return frozenset(faces)


# -- poset collapses as simplicial collapses ----------------------------------


def _chains_in(p: Poset, mask: int) -> list[frozenset[int]]:
    """All non-empty chains (as index sets) inside the masked subposet."""
    out: list[frozenset[int]] = []
    idxs = list(_iter_bits(mask))

    def extend(chain: list[int], above: int) -> None:
        for j in _iter_bits(above):
            chain.append(j)
            out.append(frozenset(chain))
            extend(chain, above & p._up[j] & ~(1 << j))
            chain.pop()

    for i in idxs:
        out.append(frozenset([i]))
        extend([i], mask & p._up[i] & ~(1 << i))
    return out


def _desc(chains: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    return sorted(chains, key=lambda s: (-len(s), sorted(s)))


def collapse_to_simplicial(p: Poset, cert: ReductionCertificate) -> ReductionCertificate:
    """Translate a beat/weak deletion sequence into simplicial collapses of the order complex.

    Each poset step expands into the explicit free-face pairs that collapse
    the star of the removed element; freeness is asserted while building.
    Gamma steps carry no collapse data and are rejected.
    """
    faces: set[tuple[str, ...]] = set(order_complex(p).faces)
    out: list[ReductionStep] = []

    def name(chain: frozenset[int]) -> tuple[str, ...]:
        return tuple(sorted(p.elements[j] for j in chain))

    def emit(sigma: frozenset[int], tau: frozenset[int]) -> None:
        s, t = name(sigma), name(tau)
        if s not in faces or t not in faces:
            raise ReplayError(f"translation produced a missing face {s} or {t}")
        cof = _proper_cofaces(faces, s)
        if cof != [t]:
            raise ReplayError(f"translation broke freeness at {s}")
        faces.discard(s)
        faces.discard(t)
        out.append(ReductionStep("simplicial-collapse", (simplex_token(s), simplex_token(t))))

    def beat_pairs(i: int, w: int, rest: int) -> None:
        # collapse every chain through i onto its w-extension
        compatible = [s for s in _chains_in(p, rest)]
        for s in _desc(compatible) + [frozenset()]:
            emit(s | {i}, s | {i, w})

    mask = p.full_mask()
    for step in cert.steps:
        x = step.removed[0]
        i = p._index[x]
        if not mask & (1 << i):
            raise ReplayError(f"certificate removes {x!r} which is not present")
        up = p._up[i] & ~(1 << i) & mask
        down = p._down[i] & ~(1 << i) & mask
        if step.kind in BEAT_KINDS:
            w = p._index[step.witness]  # type: ignore[arg-type]
            beat_pairs(i, w, (up | down) & ~(1 << w))
        elif step.kind in WEAK_KINDS:
            side = up if step.kind == "up-weak" else down
            other = down if step.kind == "up-weak" else up
            ev = step.evidence
            assert ev is not None
            if not ev.is_dismantling():
                raise InputError("weak step evidence must be a dismantling certificate")
            other_chains = _desc(_chains_in(p, other)) + [frozenset()]
            lk_pairs: list[tuple[frozenset[int], frozenset[int]]] = []
            side_cur = side
            for bstep in ev.steps:
                b = p._index[bstep.removed[0]]
                wb = p._index[bstep.witness]  # type: ignore[arg-type]
                rest = side_cur & ~(1 << b) & ~(1 << wb)
                compat = [s for s in _chains_in(p, rest) if all((p._up[b] | p._down[b]) & (1 << j) for j in s)]
                for s in _desc(compat) + [frozenset()]:
                    alpha = s | {b}
                    beta = s | {b, wb}
                    for u in other_chains:
                        lk_pairs.append((alpha | u, beta | u))
                side_cur ^= 1 << b
            if _popcount(side_cur) != 1:
                raise ReplayError(f"weak evidence for {x!r} does not dismantle to a point")
            q = side_cur.bit_length() - 1
            for u in _desc(_chains_in(p, other)):
                lk_pairs.append((u, u | {q}))
            for alpha, beta in lk_pairs:
                emit(alpha | {i}, beta | {i})
            emit(frozenset([i]), frozenset([i, q]))
        else:
            raise InputError(f"{step.kind} steps do not translate to simplicial collapses")
        mask ^= 1 << i
    expected = set(order_complex(p.induced(p._names(mask))).faces)
    if faces != expected:
        raise ReplayError("translated collapse does not end at the order complex of the final poset")
    return ReductionCertificate(tuple(out))


@dataclass(frozen=True)
class DictionaryReport:
    """Outcome of the poset/complex correspondence checks on one object."""

    subject: str
    checks: dict
    status: str
    detail: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "subject": self.subject,
            "checks": dict(sorted(self.checks.items())),
            "status": self.status,
            "detail": self.detail,
        }


def verify_dictionary(obj, budget: int = DEFAULT_BUDGET) -> DictionaryReport:
    """Check the order-complex/face-poset correspondence laws on one object.

    For a poset: homology is invariant under barycentric subdivision, the
    order complex of the opposite poset is the same complex, and the core's
    dismantling certificate translates into a simplicial collapse of the
    order complex that replays.  For a simplicial complex: barycentric
    invariance and agreement with the face poset's homology.
    """
    checks: dict[str, bool] = {}
    detail: dict = {}

    def agree(a, b) -> bool:
        equal, _ = same_homology(homology(a), homology(b))
        return equal

    if isinstance(obj, Poset):
        checks["barycentric-homology"] = agree(obj, barycentric_poset(obj))
        same_chains = order_complex(obj).faces == order_complex(obj.opposite()).faces
        checks["opposite-order-complex"] = same_chains
        q, cert = core(obj)
        simplicial = collapse_to_simplicial(obj, cert)
        remaining = replay_simplicial_certificate(order_complex(obj), simplicial)
        checks["core-collapse-translation"] = remaining == frozenset(order_complex(q).faces)
        detail["core_size"] = len(q)
        detail["translated_steps"] = len(simplicial.steps)
        subject = "poset"
    elif isinstance(obj, SimplicialComplex):
        checks["barycentric-homology"] = agree(obj, barycentric_complex(obj))
        checks["face-poset-homology"] = agree(obj, face_poset(obj))
        subject = "complex"
    else:
        raise InputError(f"no correspondence checks for {type(obj).__name__}")
    status = "Certified" if all(checks.values()) else "Refuted"
    return DictionaryReport(subject, checks, status, detail)
