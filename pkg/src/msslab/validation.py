"""Clustering validation: deficits, validity grades, traceability, compatibility.

The quality of a cluster is measured against the approximation operators
rather than against a numeric index: the deficits collect what a cluster
lacks towards its lower approximation and what its upper approximation
has in excess, and the grades record fixpoint/preimage/image conditions.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .delta import DeltaPredicate
from .errors import MsslabError, UniverseMismatchError
from .granules import OperatorSuite
from .sets import PartialResult, Subset, Universe, partial_difference
from .verdicts import FAILS, HOLDS, VACUOUS, Verdict

BRUTE_FORCE_LIMIT = 20

COMPATIBILITY_MODES = ("overlap-closer", "clue-singleton", "gclue")


class Clustering:
    """Distinct nonempty clusters over one universe; overlap is allowed."""

    __slots__ = ("universe", "clusters")

    def __init__(self, universe: Universe, clusters: Iterable[Subset]):
        clusters = tuple(clusters)
        if not clusters:
            raise MsslabError("a clustering needs at least one cluster")
        seen = set()
        for c in clusters:
            if c.universe != universe:
                raise UniverseMismatchError("cluster drawn from a different universe")
            if not c:
                raise MsslabError("clusters must be nonempty")
            if c.mask in seen:
                raise MsslabError(f"duplicate cluster {c!r}")
            seen.add(c.mask)
        self.universe = universe
        self.clusters = clusters

    def __iter__(self):
        return iter(self.clusters)

    def __len__(self):
        return len(self.clusters)

    def __repr__(self):
        return f"Clustering({list(self.clusters)!r})"


def lower_deficit(c: Subset, ops: OperatorSuite, policy: str = "subset") -> PartialResult:
    """u(C - l(C)) when the difference is defined; undefined propagates."""
    diff = partial_difference(c, ops.lower(c), policy)
    if not diff.defined:
        return PartialResult.undefined()
    return PartialResult.of(ops.upper(diff.value))


def upper_deficit(c: Subset, ops: OperatorSuite, policy: str = "subset") -> PartialResult:
    """u(u(C) - C) when the difference is defined; undefined propagates."""
    diff = partial_difference(ops.upper(c), c, policy)
    if not diff.defined:
        return PartialResult.undefined()
    return PartialResult.of(ops.upper(diff.value))


@dataclass(frozen=True)
class ClusterGrades:
    lu_valid: bool
    l_pre_valid: bool
    u_pre_valid: bool
    l_traceable: bool
    u_traceable: bool
    mode: str = "exhaustive"


def validity_grades(
    c: Subset,
    ops: OperatorSuite,
    universe: Universe,
    *,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
) -> ClusterGrades:
    """Fixpoint, preimage, and image grades of one cluster.

    The lower preimage grade is computed twice, by searching for a witness
    and by the fixpoint shortcut l(C) = C; a disagreement would mean the
    lower operator lost idempotence, so it is treated as an internal error.
    Universes beyond the brute-force limit must pass a sample budget.
    """
    lc = ops.lower(c)
    uc = ops.upper(c)
    lu_valid = lc == c and uc == c

    closed_form = lc == c
    if universe.size <= BRUTE_FORCE_LIMIT:
        candidates = universe.all_subsets()
        mode = "exhaustive"
    else:
        if sample is None:
            raise MsslabError(
                f"brute-force grade search refused for |H| > {BRUTE_FORCE_LIMIT}; pass a sample budget"
            )
        rng = random.Random(seed)
        top = 1 << universe.size
        candidates = (universe.from_mask(rng.randrange(top)) for _ in range(sample))
        mode = "sampled"

    l_pre_valid = False
    u_pre_valid = False
    for v in candidates:
        if not l_pre_valid and ops.lower(v) == c:
            l_pre_valid = True
        if not u_pre_valid and ops.upper(v) == c:
            u_pre_valid = True
        if l_pre_valid and u_pre_valid:
            break

    if mode == "exhaustive" and l_pre_valid != closed_form:
        raise AssertionError(
            "preimage search and fixpoint shortcut disagree; lower operator is not idempotent"
        )

    return ClusterGrades(
        lu_valid,
        l_pre_valid,
        u_pre_valid,
        _traceable(lc, universe),
        _traceable(uc, universe),
        mode,
    )


def _traceable(approximation: Subset, universe: Universe) -> bool:
    # The existential asks for some subset equal to the approximation;
    # a total operator hands over its own witness, so this only rules out
    # values that escaped the powerset.
    return approximation.universe == universe and 0 <= approximation.mask < (
        1 << universe.size
    )


@dataclass(frozen=True)
class ClusterReport:
    cluster: Subset
    lower_deficit: PartialResult
    upper_deficit: PartialResult
    grades: ClusterGrades
    proposition: Verdict


@dataclass(frozen=True)
class ValidityReport:
    per_cluster: tuple[ClusterReport, ...]
    lu_valid: bool
    l_pre_valid: bool
    u_pre_valid: bool
    l_traceable: bool
    u_traceable: bool
    note: str = (
        "lu-validity is the two-sided fixpoint lower(C) = upper(C) = C; "
        "traceability grades hold trivially while the operators are total"
    )


def check_proposition(c: Subset, ops: OperatorSuite, policy: str = "subset") -> Verdict:
    """Deficit computability forces traceability, instance-wise for one cluster."""
    universe = c.universe
    substantive = 0
    for side, deficit, approximation in (
        ("l", lower_deficit(c, ops, policy), ops.lower(c)),
        ("u", upper_deficit(c, ops, policy), ops.upper(c)),
    ):
        if not deficit.defined:
            continue
        substantive += 1
        if not _traceable(approximation, universe):
            return Verdict(
                "deficit-traceability",
                FAILS,
                witnesses=((c,),),
                instances_checked=2,
                note=f"{side}-deficit defined but cluster is not {side}-traceable",
            )
    status = HOLDS if substantive else VACUOUS
    return Verdict("deficit-traceability", status, instances_checked=2)


def validate_clustering(
    cl: Clustering,
    ops: OperatorSuite,
    *,
    policy: str = "subset",
    jobs: int = 1,
) -> ValidityReport:
    """Per-cluster deficits, grades, and proposition checks, then aggregates."""

    def one(c: Subset) -> ClusterReport:
        return ClusterReport(
            cluster=c,
            lower_deficit=lower_deficit(c, ops, policy),
            upper_deficit=upper_deficit(c, ops, policy),
            grades=validity_grades(c, ops, cl.universe),
            proposition=check_proposition(c, ops, policy),
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = tuple(pool.map(one, cl.clusters))
    else:
        reports = tuple(one(c) for c in cl.clusters)

    return ValidityReport(
        per_cluster=reports,
        lu_valid=all(r.grades.lu_valid for r in reports),
        l_pre_valid=all(r.grades.l_pre_valid for r in reports),
        u_pre_valid=all(r.grades.u_pre_valid for r in reports),
        l_traceable=all(r.grades.l_traceable for r in reports),
        u_traceable=all(r.grades.u_traceable for r in reports),
    )


@dataclass(frozen=True)
class CompatibilityMode:
    """How cluster membership is tested against the nearness predicate.

    ``overlap-closer`` quantifies over cluster triples: every cluster must
    be closer to each overlapping cluster than to each disjoint one.
    ``clue-singleton`` quantifies inside each cluster: members, as
    singletons, must be closer to each other than to any outsider.
    ``gclue`` takes two rules deriving the comparison sets from a cluster.
    """

    mode: str
    b_rule: Optional[Callable[[Subset], Subset]] = None
    e_rule: Optional[Callable[[Subset], Subset]] = None

    def __post_init__(self):
        if self.mode not in COMPATIBILITY_MODES:
            raise MsslabError(f"unknown compatibility mode {self.mode!r}")
        if self.mode == "gclue" and (self.b_rule is None or self.e_rule is None):
            raise MsslabError("gclue needs both derivation rules")


OVERLAP_CLOSER = CompatibilityMode("overlap-closer")
CLUE_SINGLETON = CompatibilityMode("clue-singleton")


def _compat_instances(cl: Clustering, mode: CompatibilityMode):
    universe = cl.universe
    if mode.mode == "overlap-closer":
        for a in cl.clusters:
            for b in cl.clusters:
                if b == a:
                    continue
                if not (a & b):
                    continue
                for c in cl.clusters:
                    if c == a or c == b:
                        continue
                    if a & c:
                        continue
                    yield (a, b, c)
    elif mode.mode == "clue-singleton":
        for cluster in cl.clusters:
            inside = cluster.members()
            outside = [x for x in universe.elements if x not in cluster]
            for a in inside:
                for b in inside:
                    for c in outside:
                        yield (
                            universe.singleton(a),
                            universe.singleton(b),
                            universe.singleton(c),
                        )
    else:
        for cluster in cl.clusters:
            b_set = mode.b_rule(cluster)
            e_set = mode.e_rule(cluster)
            for a in cluster.members():
                for b in b_set.members():
                    for c in e_set.members():
                        yield (
                            universe.singleton(a),
                            universe.singleton(b),
                            universe.singleton(c),
                        )


def check_compatibility(
    cl: Clustering, d: DeltaPredicate, mode: CompatibilityMode = OVERLAP_CLOSER
) -> Verdict:
    """Whether the clustering is compatible with the predicate under a mode.

    The verdict fails on the first violating triple (in cluster-list
    order); a clustering with no applicable triple is vacuously compatible.
    """
    if cl.universe != d.universe:
        raise UniverseMismatchError("clustering and predicate universes differ")
    checked = 0
    for a, b, c in _compat_instances(cl, mode):
        checked += 1
        if not d(a, b, c):
            return Verdict(
                f"compatibility:{mode.mode}",
                FAILS,
                witnesses=((a, b, c),),
                instances_checked=checked,
            )
    status = HOLDS if checked else VACUOUS
    return Verdict(f"compatibility:{mode.mode}", status, instances_checked=checked)
