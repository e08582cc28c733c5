"""Verdicts for axiom checks, plus the shared quantifier sweep.

A check walks a quantification space of subset tuples and classifies each
instance as substantively satisfied, vacuously satisfied, or violated.
Exhaustive walks run in canonical order, so the first violation found is
the lexicographic minimum; large spaces fall back to seeded sampling with
the seed recorded on the verdict.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .sets import Subset, Universe

HOLDS = "holds"
FAILS = "fails"
VACUOUS = "vacuous"
DEFERRED = "deferred"
UNSPECIFIED = "unspecified"

# Universes above this size are checked by seeded uniform sampling.
EXHAUSTIVE_UNIVERSE_LIMIT = 4
DEFAULT_SAMPLE_BUDGET = 1_000_000


@dataclass(frozen=True)
class Verdict:
    axiom: str
    status: str
    witnesses: tuple[tuple[Subset, ...], ...] = ()
    instances_checked: int = 0
    mode: str = "exhaustive"
    seed: Optional[int] = None
    note: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def failed(self) -> bool:
        return self.status == FAILS

    @property
    def passed(self) -> bool:
        """No counterexample: holds or vacuous."""
        return self.status in (HOLDS, VACUOUS)

    def __repr__(self):
        extra = f", witness={self.witnesses[0]!r}" if self.witnesses else ""
        return f"Verdict({self.axiom}: {self.status}{extra})"


def deferred(axiom: str, note: str = "required interpretation is unbound") -> Verdict:
    return Verdict(axiom, DEFERRED, mode="none", note=note)


def unspecified(axiom: str, note: str) -> Verdict:
    return Verdict(axiom, UNSPECIFIED, mode="none", note=note)


def sweep(
    axiom: str,
    universe: Universe,
    arity: int,
    instance: Callable[..., Optional[bool]],
    *,
    seed: Optional[int] = None,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> Verdict:
    """Quantify ``instance`` over all ``arity``-tuples of subsets.

    ``instance`` returns True (satisfied), None (vacuously satisfied), or
    False (violated). The verdict is ``fails`` with the first violating
    tuple as witness, ``vacuous`` when every instance passed vacuously,
    and ``holds`` otherwise. Spaces that outgrow the budget are sampled
    instead of enumerated; a full enumeration that happens to fit the
    budget stays exhaustive even on a large universe.
    """
    top = 1 << universe.size
    total = top**arity if arity else 1
    exhaustive = universe.size <= EXHAUSTIVE_UNIVERSE_LIMIT or total <= budget

    if exhaustive:
        if universe.size <= EXHAUSTIVE_UNIVERSE_LIMIT:
            domain = tuple(universe.all_subsets())
            tuples = itertools.product(domain, repeat=arity)
        else:
            tuples = (
                tuple(universe.from_mask(m) for m in masks)
                for masks in itertools.product(range(top), repeat=arity)
            )
        mode = "exhaustive"
        count = total
    else:
        rng = random.Random(seed)
        tuples = (
            tuple(universe.from_mask(rng.randrange(top)) for _ in range(arity))
            for _ in range(budget)
        )
        mode = "sampled"
        count = budget

    checked = 0
    substantive = 0
    for args in tuples:
        checked += 1
        result = instance(*args)
        if result is False:
            return Verdict(
                axiom,
                FAILS,
                witnesses=(args,),
                instances_checked=checked,
                mode=mode,
                seed=seed if mode == "sampled" else None,
            )
        if result is True:
            substantive += 1

    status = HOLDS if substantive else VACUOUS
    return Verdict(
        axiom,
        status,
        instances_checked=count,
        mode=mode,
        seed=seed if mode == "sampled" else None,
    )
