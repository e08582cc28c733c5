"""Binary relations, neighborhood granulations, and rough approximation operators.

The lower approximation of A is the union of granules included in A; the
upper approximation is the union of granules meeting A. A refined upper
operator can be plugged in; it must stay between the two.
"""

from __future__ import annotations

import warnings
from typing import Callable, Iterable, Optional

from .errors import MsslabError, RegistrationError, UniverseMismatchError
from .sets import Subset, Universe
from .verdicts import HOLDS, FAILS, Verdict

# Plugged upper operators are validated exhaustively up to this size,
# by seeded sampling above it.
PLUGIN_EXHAUSTIVE_LIMIT = 12
PLUGIN_SAMPLE_SIZE = 10_000


class BinaryRelation:
    """Set of ordered pairs over a universe, held as index pairs."""

    __slots__ = ("universe", "pairs")

    def __init__(self, universe: Universe, pairs: Iterable[tuple[str, str]] = ()):
        idx = set()
        for a, b in pairs:
            idx.add((universe.index(a), universe.index(b)))
        self.universe = universe
        self.pairs = frozenset(idx)

    @classmethod
    def from_indices(cls, universe: Universe, pairs: Iterable[tuple[int, int]]):
        pairs = frozenset(pairs)
        n = universe.size
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise MsslabError(f"pair index ({i},{j}) outside universe of size {n}")
        rel = cls(universe)
        rel.pairs = pairs
        return rel

    def named_pairs(self) -> tuple[tuple[str, str], ...]:
        names = self.universe.elements
        return tuple(sorted((names[i], names[j]) for i, j in self.pairs))

    def has(self, a: str, b: str) -> bool:
        return (self.universe.index(a), self.universe.index(b)) in self.pairs

    @property
    def is_reflexive(self) -> bool:
        return all((i, i) in self.pairs for i in range(self.universe.size))

    @property
    def is_symmetric(self) -> bool:
        return all((j, i) in self.pairs for i, j in self.pairs)

    @property
    def is_transitive(self) -> bool:
        by_first = {}
        for i, j in self.pairs:
            by_first.setdefault(i, set()).add(j)
        for i, j in self.pairs:
            for k in by_first.get(j, ()):
                if (i, k) not in self.pairs:
                    return False
        return True

    @property
    def is_tolerance(self) -> bool:
        return self.is_reflexive and self.is_symmetric

    def __eq__(self, other):
        return (
            isinstance(other, BinaryRelation)
            and self.universe == other.universe
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash((self.universe.elements, self.pairs))

    def __repr__(self):
        return f"BinaryRelation({self.named_pairs()!r})"


def close_relation(
    r: BinaryRelation,
    *,
    reflexive: bool = False,
    symmetric: bool = False,
    transitive: bool = False,
) -> BinaryRelation:
    """Smallest superset of ``r`` closed under the requested properties."""
    pairs = set(r.pairs)
    n = r.universe.size
    changed = True
    while changed:
        changed = False
        if reflexive:
            for i in range(n):
                if (i, i) not in pairs:
                    pairs.add((i, i))
                    changed = True
        if symmetric:
            for i, j in list(pairs):
                if (j, i) not in pairs:
                    pairs.add((j, i))
                    changed = True
        if transitive:
            by_first = {}
            for i, j in pairs:
                by_first.setdefault(i, set()).add(j)
            for i, j in list(pairs):
                for k in by_first.get(j, ()):
                    if (i, k) not in pairs:
                        pairs.add((i, k))
                        changed = True
    return BinaryRelation.from_indices(r.universe, pairs)


class Granulation:
    """Ordered collection of nonempty granules; duplicates collapse to one."""

    __slots__ = ("universe", "granules", "notes")

    def __init__(self, universe: Universe, granules: Iterable[Subset], notes=()):
        kept: list[Subset] = []
        seen: set[int] = set()
        collapsed = 0
        for g in granules:
            if g.universe != universe:
                raise UniverseMismatchError("granule drawn from a different universe")
            if not g:
                raise MsslabError("granules must be nonempty")
            if g.mask in seen:
                collapsed += 1
                continue
            seen.add(g.mask)
            kept.append(g)
        notes = list(notes)
        if collapsed:
            notes.append(f"collapsed {collapsed} duplicate granule(s)")
        self.universe = universe
        self.granules = tuple(kept)
        self.notes = tuple(notes)

    def masks(self) -> tuple[int, ...]:
        return tuple(g.mask for g in self.granules)

    def __len__(self):
        return len(self.granules)

    def __iter__(self):
        return iter(self.granules)

    def __eq__(self, other):
        return (
            isinstance(other, Granulation)
            and self.universe == other.universe
            and self.masks() == other.masks()
        )

    def __hash__(self):
        return hash((self.universe.elements, self.masks()))

    def __repr__(self):
        return f"Granulation({list(self.granules)!r})"


def predecessor_granulation(r: BinaryRelation) -> Granulation:
    """Granules n(x) = {y : (y, x) in r}, listed in generator order.

    Empty neighborhoods are skipped with a note; a non-reflexive input
    gets a warning since generators then need not belong to their granule.
    """
    if not r.is_reflexive:
        warnings.warn("relation is not reflexive; predecessor granules may miss their generators")
    universe = r.universe
    notes = []
    granules = []
    for x in range(universe.size):
        mask = 0
        for y, x2 in r.pairs:
            if x2 == x:
                mask |= 1 << y
        if mask == 0:
            notes.append(f"empty neighborhood of {universe.elements[x]} skipped")
            continue
        granules.append(Subset(universe, mask))
    return Granulation(universe, granules, notes)


def lower(a: Subset, g: Granulation) -> Subset:
    """Union of the granules included in ``a``."""
    if a.universe != g.universe:
        raise UniverseMismatchError("subset and granulation universes differ")
    out = 0
    am = a.mask
    for gm in g.masks():
        if gm & ~am == 0:
            out |= gm
    return Subset(a.universe, out)


def upper(a: Subset, g: Granulation) -> Subset:
    """Union of the granules meeting ``a``."""
    if a.universe != g.universe:
        raise UniverseMismatchError("subset and granulation universes differ")
    out = 0
    am = a.mask
    for gm in g.masks():
        if gm & am:
            out |= gm
    return Subset(a.universe, out)


class OperatorSuite:
    """The three approximation operators l, u, u_b as total maps on the powerset."""

    __slots__ = ("universe", "lower", "upper", "bited_upper", "granulation")

    def __init__(
        self,
        universe: Universe,
        lower_op: Callable[[Subset], Subset],
        upper_op: Callable[[Subset], Subset],
        bited_op: Optional[Callable[[Subset], Subset]] = None,
        granulation: Optional[Granulation] = None,
    ):
        self.universe = universe
        self.lower = lower_op
        self.upper = upper_op
        self.bited_upper = bited_op if bited_op is not None else upper_op
        self.granulation = granulation

    @classmethod
    def from_granulation(
        cls,
        g: Granulation,
        bited_plugin: Optional[Callable[[Subset], Subset]] = None,
        *,
        plugin_seed: int = 0,
    ) -> "OperatorSuite":
        """Derive l and u from the granulation; optionally register u_b.

        A plugin is admitted only if l(A) <= plugin(A) <= u(A); the bound is
        checked over the whole powerset for small universes, on a seeded
        sample otherwise.
        """
        masks = g.masks()
        universe = g.universe

        def lower_op(a: Subset, _masks=masks) -> Subset:
            out = 0
            am = a.mask
            for gm in _masks:
                if gm & ~am == 0:
                    out |= gm
            return Subset(a.universe, out)

        def upper_op(a: Subset, _masks=masks) -> Subset:
            out = 0
            am = a.mask
            for gm in _masks:
                if gm & am:
                    out |= gm
            return Subset(a.universe, out)

        if bited_plugin is not None:
            _validate_plugin(universe, lower_op, upper_op, bited_plugin, plugin_seed)
        return cls(universe, lower_op, upper_op, bited_plugin, granulation=g)

    def is_union_of_granules(self, a: Subset) -> bool:
        """True when ``a`` equals some union of granules (the empty union for ∅)."""
        return self.lower(a) == a


def _validate_plugin(universe, lower_op, upper_op, plugin, seed):
    import random

    if universe.size <= PLUGIN_EXHAUSTIVE_LIMIT:
        candidates = universe.all_subsets()
    else:
        rng = random.Random(seed)
        top = 1 << universe.size
        candidates = (
            universe.from_mask(rng.randrange(top)) for _ in range(PLUGIN_SAMPLE_SIZE)
        )
    for a in candidates:
        value = plugin(a)
        if not (lower_op(a) <= value and value <= upper_op(a)):
            raise RegistrationError(
                f"bited-upper plugin leaves the sandwich l(A) <= u_b(A) <= u(A) at A={a!r}"
            )


def bited_upper(
    a: Subset, g: Granulation, plugin: Optional[Callable[[Subset], Subset]] = None
) -> Subset:
    """Value of the pluggable refined upper operator; defaults to u."""
    if plugin is None:
        return upper(a, g)
    suite = OperatorSuite.from_granulation(g, plugin)
    return suite.bited_upper(a)


def is_definite(a: Subset, ops: OperatorSuite) -> bool:
    """A set equal to both of its approximations."""
    return ops.lower(a) == a and ops.upper(a) == a


def rough_equal(a: Subset, b: Subset, ops: OperatorSuite) -> bool:
    """Same lower approximation and same refined upper approximation."""
    if a.universe != b.universe:
        raise UniverseMismatchError("rough equality needs one universe")
    return ops.lower(a) == ops.lower(b) and ops.bited_upper(a) == ops.bited_upper(b)


def check_admissibility(g: Granulation, ops: OperatorSuite) -> list[Verdict]:
    """The three granulation admissibility conditions, each with witnesses.

    (i) every lower and upper approximation is a union of granules;
    (ii) every granule is its own lower approximation;
    (iii) every pair of distinct granules sits inside some definite set.
    Failures carry the offending subset or pair; for (iii) each pair also
    records the least definite superset found, as evidence.
    """
    universe = g.universe
    verdicts = []

    checked = 0
    witness = None
    for a in universe.all_subsets():
        checked += 1
        for value in (ops.lower(a), ops.upper(a)):
            if lower(value, g) != value:
                witness = (a, value)
                break
        if witness:
            break
    verdicts.append(
        Verdict(
            "admissible-representable",
            FAILS if witness else HOLDS,
            witnesses=(witness,) if witness else (),
            instances_checked=checked,
        )
    )

    bad = tuple((gr,) for gr in g.granules if ops.lower(gr) != gr)
    verdicts.append(
        Verdict(
            "admissible-granules-lower-definite",
            FAILS if bad else HOLDS,
            witnesses=bad[:1],
            instances_checked=len(g.granules),
        )
    )

    definite = [d for d in universe.all_subsets() if is_definite(d, ops)]
    pair_witnesses = []
    failure = None
    pairs = 0
    for i, g1 in enumerate(g.granules):
        for g2 in g.granules[i + 1 :]:
            pairs += 1
            both = g1 | g2
            cover = next((d for d in definite if both <= d), None)
            if cover is None:
                failure = (g1, g2)
                break
            pair_witnesses.append((g1, g2, cover))
        if failure:
            break
    verdicts.append(
        Verdict(
            "admissible-pairs-in-definite",
            FAILS if failure else HOLDS,
            witnesses=(failure,) if failure else tuple(pair_witnesses),
            instances_checked=pairs,
        )
    )
    return verdicts
