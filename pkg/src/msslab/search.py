"""Finite model search: enumerate small structures, hunt for axiom combinations.

Relations on up to three elements are enumerated exhaustively; extensional
predicate tables are always sampled (their count is doubly exponential),
with the seed fixing the stream.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Iterator, Optional

from . import oracles
from .delta import DeltaPredicate
from .errors import BudgetError, MsslabError
from .granules import BinaryRelation, Granulation, OperatorSuite, predecessor_granulation
from .oracles import StructureDescription
from .sets import Universe
from .structure import MssStructure, assemble, verify

FAMILIES = ("relations", "extensional-deltas", "granulations")
RELATION_EXHAUSTIVE_LIMIT = 3


@dataclass(frozen=True)
class SearchSpec:
    n: int
    family: str = "relations"
    delta: str = "E0"
    required: tuple[str, ...] = ()
    forbidden: tuple[str, ...] = ()
    budget: int = 10_000
    seed: int = 0
    density: float = 0.5
    exhaustive: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise MsslabError(f"unknown structure family {self.family!r}")
        if self.budget <= 0:
            raise MsslabError("budget must be positive")
        if self.n < 1:
            raise MsslabError("universe size must be at least 1")


def _universe(n: int) -> Universe:
    return Universe([f"x{i + 1}" for i in range(n)])


def _structure_from_granulation(universe, granulation, spec, rng) -> MssStructure:
    if spec.delta == "extensional":
        top = 1 << universe.size
        triples = [
            (a, b, c)
            for a in range(top)
            for b in range(top)
            for c in range(top)
            if rng.random() < spec.density
        ]
        delta = DeltaPredicate.extensional_from_masks(universe, triples)
    else:
        ops = (
            OperatorSuite.from_granulation(granulation)
            if granulation is not None
            else None
        )
        needs_ops = spec.delta in ("E2", "uE1")
        delta = DeltaPredicate.builtin(
            spec.delta, universe, ops=ops if needs_ops else None
        )
    return assemble(universe, granulation=granulation, delta=delta)


def enumerate_structures(spec: SearchSpec) -> Iterator[MssStructure]:
    """Yield fully assembled structures in a deterministic, seeded order."""
    universe = _universe(spec.n)
    rng = random.Random(spec.seed)

    if spec.family == "relations":
        total = 1 << (spec.n * spec.n)
        if spec.exhaustive:
            if spec.n > RELATION_EXHAUSTIVE_LIMIT or total > spec.budget:
                raise BudgetError(
                    f"exhaustive relation search needs {total} structures "
                    f"(limit n <= {RELATION_EXHAUSTIVE_LIMIT}, budget {spec.budget})",
                    required=total,
                )
            bit_streams = range(total)
        else:
            bit_streams = (rng.randrange(total) for _ in range(spec.budget))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for bits in bit_streams:
                pairs = [
                    (i, j)
                    for i in range(spec.n)
                    for j in range(spec.n)
                    if bits >> (i * spec.n + j) & 1
                ]
                relation = BinaryRelation.from_indices(universe, pairs)
                granulation = predecessor_granulation(relation)
                yield _structure_from_granulation(universe, granulation, spec, rng)
        return

    if spec.family == "granulations":
        candidates = [universe.from_mask(m) for m in range(1, 1 << spec.n)]
        total = 1 << len(candidates)
        if spec.exhaustive and total > spec.budget:
            raise BudgetError(
                f"exhaustive granulation search needs {total} structures",
                required=total,
            )
        picks = (
            range(total)
            if spec.exhaustive
            else (rng.randrange(total) for _ in range(spec.budget))
        )
        for bits in picks:
            granules = [g for k, g in enumerate(candidates) if bits >> k & 1]
            granulation = Granulation(universe, granules)
            yield _structure_from_granulation(universe, granulation, spec, rng)
        return

    # extensional-deltas: sampled tables over the diagonal granulation
    diagonal = BinaryRelation.from_indices(universe, [(i, i) for i in range(spec.n)])
    granulation = predecessor_granulation(diagonal)
    table_spec = SearchSpec(
        n=spec.n,
        family=spec.family,
        delta="extensional",
        budget=spec.budget,
        seed=spec.seed,
        density=spec.density,
    )
    for _ in range(spec.budget):
        yield _structure_from_granulation(universe, granulation, table_spec, rng)


def find_witness(spec: SearchSpec) -> Optional[MssStructure]:
    """First enumerated structure meeting every required axiom and breaking
    every forbidden one, or None when the stream runs out."""
    axioms = list(spec.required) + list(spec.forbidden)
    for s in enumerate_structures(spec):
        verdicts = {v.axiom: v for v in verify(s, axioms)}
        if not all(verdicts[a].passed for a in spec.required):
            continue
        if not all(verdicts[a].failed for a in spec.forbidden):
            continue
        return s
    return None


def oracle_check(s: MssStructure, claim: str) -> bool:
    """Evaluate a registered claim by direct exhaustive recomputation."""
    desc = StructureDescription.from_structure(s)
    return oracles.o_claim(desc, claim)
