"""The ternary nearness predicate, the partial sum, and their axiom checks.

A nearness predicate reads "a is closer to b than to c". Built-in
definitions compare unions or approximations of unions under inclusion;
extensional predicates are given by an explicit triple table.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Optional

from .errors import ConfigurationError, MsslabError
from .granules import Granulation, OperatorSuite, lower as granular_lower
from .sets import PartialResult, Subset, Universe, omega_equal, omega_star_equal
from .verdicts import DEFAULT_SAMPLE_BUDGET, Verdict, deferred, sweep

BUILTIN_DELTAS = ("E0", "E1", "E2", "uE1")
COHERENCE_AXIOMS = ("i-coh", "n-coh", "i-coh-2", "strict-n-coh", "trans-1")
SUM_AXIOMS = (
    "omega-star-com",
    "omega-id",
    "omega-asso",
    "delta-sum1",
    "delta-sum2",
    "delta-sum3",
)

EXTENSIONAL_TABLE_LIMIT = 6


class NearnessMap:
    """Total map f from subset pairs to subsets, used to induce a predicate."""

    __slots__ = ("universe", "_fn", "name")

    def __init__(self, universe: Universe, fn: Callable[[Subset, Subset], Subset], name="f"):
        self.universe = universe
        self._fn = fn
        self.name = name

    @classmethod
    def union(cls, universe: Universe) -> "NearnessMap":
        return cls(universe, lambda a, b: a | b, name="union")

    @classmethod
    def from_table(
        cls, universe: Universe, table: Mapping[tuple[int, int], int], name="table"
    ) -> "NearnessMap":
        size = 1 << universe.size
        if len(table) != size * size:
            raise ConfigurationError(
                f"nearness table must be total: expected {size * size} pairs, got {len(table)}"
            )

        def fn(a: Subset, b: Subset) -> Subset:
            return universe.from_mask(table[(a.mask, b.mask)])

        return cls(universe, fn, name=name)

    def __call__(self, a: Subset, b: Subset) -> Subset:
        return self._fn(a, b)


class DeltaPredicate:
    """Ternary predicate over subsets; total on the powerset cube."""

    __slots__ = ("universe", "kind", "ops", "nearness", "table")

    def __init__(self, universe, kind, ops=None, nearness=None, table=None):
        self.universe = universe
        self.kind = kind
        self.ops = ops
        self.nearness = nearness
        self.table = table

    @classmethod
    def builtin(
        cls, name: str, universe: Universe, ops: Optional[OperatorSuite] = None
    ) -> "DeltaPredicate":
        if name not in BUILTIN_DELTAS:
            raise ConfigurationError(f"unknown builtin delta {name!r}; expected one of {BUILTIN_DELTAS}")
        if name in ("E2", "uE1") and ops is None:
            raise ConfigurationError(f"delta {name} needs an operator suite")
        return cls(universe, name, ops=ops)

    @classmethod
    def extensional(
        cls, universe: Universe, triples: Iterable[tuple[Subset, Subset, Subset]]
    ) -> "DeltaPredicate":
        if universe.size > EXTENSIONAL_TABLE_LIMIT:
            raise ConfigurationError(
                f"extensional tables admitted only for universes of size <= {EXTENSIONAL_TABLE_LIMIT}"
            )
        table = frozenset((a.mask, b.mask, c.mask) for a, b, c in triples)
        return cls(universe, "extensional", table=table)

    @classmethod
    def extensional_from_masks(cls, universe: Universe, mask_triples) -> "DeltaPredicate":
        if universe.size > EXTENSIONAL_TABLE_LIMIT:
            raise ConfigurationError(
                f"extensional tables admitted only for universes of size <= {EXTENSIONAL_TABLE_LIMIT}"
            )
        return cls(universe, "extensional", table=frozenset(mask_triples))

    @classmethod
    def from_nearness(cls, f: NearnessMap) -> "DeltaPredicate":
        """The def0-style predicate: delta(a,b,c) iff f(a,b) is part of f(a,c)."""
        return cls(f.universe, "def0", nearness=f)

    def sorted_table(self) -> tuple[tuple[int, int, int], ...]:
        """Canonical serialization order for extensional tables."""
        if self.table is None:
            raise ConfigurationError("predicate has no extensional table")
        return tuple(sorted(self.table))

    def __call__(self, a: Subset, b: Subset, c: Subset) -> bool:
        kind = self.kind
        if kind == "E0":
            return (a | b) <= (a | c)
        if kind == "E1":
            return (a | b) < (a | c)
        if kind == "E2":
            lo = self.ops.lower
            return lo(a & c) < lo(a & b)
        if kind == "uE1":
            up = self.ops.upper
            return up(a | b) <= up(a | c)
        if kind == "def0":
            f = self.nearness
            return f(a, b) <= f(a, c)
        if kind == "extensional":
            return (a.mask, b.mask, c.mask) in self.table
        raise ConfigurationError(f"unknown delta kind {self.kind!r}")

    def __repr__(self):
        return f"DeltaPredicate({self.kind})"


def eval_delta(d: DeltaPredicate, a: Subset, b: Subset, c: Subset) -> bool:
    return d(a, b, c)


class SumOperation:
    """Partial aggregation of subsets.

    Modes: ``total-union`` is always defined; ``granular-sum`` is defined
    exactly when the union is itself a union of granules; an
    ``extensional-partial`` table lists the defined pairs.
    """

    __slots__ = ("universe", "mode", "granulation", "table")

    def __init__(self, universe, mode, granulation=None, table=None):
        self.universe = universe
        self.mode = mode
        self.granulation = granulation
        self.table = table

    @classmethod
    def total_union(cls, universe: Universe) -> "SumOperation":
        return cls(universe, "total-union")

    @classmethod
    def granular(cls, g: Granulation) -> "SumOperation":
        return cls(g.universe, "granular-sum", granulation=g)

    @classmethod
    def extensional(
        cls, universe: Universe, table: Mapping[tuple[int, int], int]
    ) -> "SumOperation":
        return cls(universe, "extensional-partial", table=dict(table))

    def __call__(self, a: Subset, b: Subset) -> PartialResult:
        if a.universe != self.universe or b.universe != self.universe:
            raise MsslabError("sum operands drawn from a different universe")
        if self.mode == "total-union":
            return PartialResult.of(a | b)
        if self.mode == "granular-sum":
            u = a | b
            if granular_lower(u, self.granulation) == u:
                return PartialResult.of(u)
            return PartialResult.undefined()
        if self.mode == "extensional-partial":
            value = self.table.get((a.mask, b.mask))
            if value is None:
                return PartialResult.undefined()
            return PartialResult.of(self.universe.from_mask(value))
        raise ConfigurationError(f"unknown sum mode {self.mode!r}")

    def __repr__(self):
        return f"SumOperation({self.mode})"


def eval_sum(s: SumOperation, a: Subset, b: Subset) -> PartialResult:
    return s(a, b)


def coherence_instance(d: DeltaPredicate, axiom: str, args) -> Optional[bool]:
    """Evaluate one quantifier instance; None means vacuously satisfied."""
    if axiom == "i-coh":
        a, b = args
        return d(b, b, a)
    if axiom == "n-coh":
        a, b, c = args
        if not d(a, b, c):
            return None
        return d(b, a, c)
    if axiom == "i-coh-2":
        a, b = args
        return not d(a, b, b)
    if axiom == "strict-n-coh":
        a, b, c = args
        if not d(a, b, c):
            return None
        return not d(a, c, b)
    if axiom == "trans-1":
        a, b, c, e = args
        if not (d(a, b, c) and d(a, e, b)):
            return None
        return not d(a, e, c)
    raise MsslabError(f"unknown coherence axiom {axiom!r}")


_COHERENCE_ARITY = {"i-coh": 2, "n-coh": 3, "i-coh-2": 2, "strict-n-coh": 3, "trans-1": 4}


def check_coherence(
    d: DeltaPredicate,
    axiom: str,
    *,
    seed: Optional[int] = None,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> Verdict:
    """Quantify one coherence axiom over the powerset; witness on failure."""
    if axiom not in _COHERENCE_ARITY:
        raise MsslabError(f"unknown coherence axiom {axiom!r}")
    arity = _COHERENCE_ARITY[axiom]
    return sweep(
        axiom,
        d.universe,
        arity,
        lambda *args: coherence_instance(d, axiom, args),
        seed=seed,
        budget=budget,
    )


def sum_instance(
    d: Optional[DeltaPredicate], s: SumOperation, axiom: str, args
) -> Optional[bool]:
    """One instance of a sum law; delta-sum laws pass vacuously when the
    antecedent fails or the squared sum is undefined."""
    if axiom == "omega-star-com":
        a, b = args
        return omega_star_equal(s(a, b), s(b, a))
    if axiom == "omega-id":
        (a,) = args
        return omega_equal(s(a, a), PartialResult.of(a))
    if axiom == "omega-asso":
        a, b, c = args
        bc = s(b, c)
        left = s(a, bc.value) if bc.defined else PartialResult.undefined()
        ab = s(a, b)
        right = s(ab.value, c) if ab.defined else PartialResult.undefined()
        return omega_equal(left, right)
    if axiom in ("delta-sum1", "delta-sum2", "delta-sum3"):
        a, b, c = args
        if not d(a, b, c):
            return None
        position = int(axiom[-1]) - 1
        doubled = s(args[position], args[position])
        if not doubled.defined:
            return None
        replaced = list(args)
        replaced[position] = doubled.value
        return d(*replaced)
    raise MsslabError(f"unknown sum axiom {axiom!r}")


def check_sum_axioms(
    d: Optional[DeltaPredicate],
    s: SumOperation,
    *,
    seed: Optional[int] = None,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> list[Verdict]:
    """All six sum laws; the delta-sum trio needs a predicate bound."""
    arities = {
        "omega-star-com": 2,
        "omega-id": 1,
        "omega-asso": 3,
        "delta-sum1": 3,
        "delta-sum2": 3,
        "delta-sum3": 3,
    }
    out = []
    for axiom in SUM_AXIOMS:
        if axiom.startswith("delta-sum") and d is None:
            out.append(deferred(axiom, "no nearness predicate bound"))
            continue
        out.append(
            sweep(
                axiom,
                s.universe,
                arities[axiom],
                lambda *args, ax=axiom: sum_instance(d, s, ax, args),
                seed=seed,
                budget=budget,
            )
        )
    return out


def def_compat_instance(
    d: DeltaPredicate, f: NearnessMap, mode: str, args
) -> Optional[bool]:
    a, b, c = args
    linked = f(a, b) <= f(a, c)
    if mode == "def1":
        if not d(a, b, c):
            return None
        return linked
    if mode == "def2":
        if not linked:
            return None
        return d(a, b, c)
    if mode == "def0":
        return d(a, b, c) == linked
    raise MsslabError(f"unknown def-compatibility mode {mode!r}")


def check_def_compat(
    d: DeltaPredicate,
    f: NearnessMap,
    mode: str,
    *,
    seed: Optional[int] = None,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> Verdict:
    """Check how the predicate relates to the map-induced comparison.

    def1: delta implies the comparison; def2: the converse; def0: both.
    """
    return sweep(
        f"def-compat:{mode}",
        d.universe,
        3,
        lambda *args: def_compat_instance(d, f, mode, args),
        seed=seed,
        budget=budget,
    )
