"""Finite universes, characteristic-vector subsets, and partial-term semantics.

Subsets are immutable value objects backed by bitmasks; the canonical
enumeration order of the powerset is ascending mask rank, with element 0
in the least significant bit.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import BudgetError, MsslabError, UniverseMismatchError

# Powerset enumeration is refused above this size; callers must sample.
EXHAUSTIVE_CAP = 24

DIFFERENCE_POLICIES = ("subset", "proper", "total")


class Universe:
    """Ordered finite collection of distinct element names."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[str]):
        names = tuple(elements)
        if not names:
            raise MsslabError("universe must contain at least one element")
        seen = set()
        for name in names:
            if not isinstance(name, str) or not name:
                raise MsslabError(f"element names must be nonempty strings, got {name!r}")
            if name in seen:
                raise MsslabError(f"duplicate element name {name!r}")
            seen.add(name)
        self.elements = names
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MsslabError(f"element {name!r} is not in the universe") from None

    def subset(self, names: Iterable[str] = ()) -> "Subset":
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return Subset(self, mask)

    def singleton(self, name: str) -> "Subset":
        return Subset(self, 1 << self.index(name))

    def from_mask(self, mask: int) -> "Subset":
        return Subset(self, mask)

    @property
    def empty(self) -> "Subset":
        return Subset(self, 0)

    @property
    def full(self) -> "Subset":
        return Subset(self, (1 << self.size) - 1)

    def all_subsets(self) -> Iterator["Subset"]:
        """Yield the full powerset in canonical (mask-ascending) order."""
        if self.size > EXHAUSTIVE_CAP:
            raise BudgetError(
                f"powerset enumeration refused for universe size {self.size} "
                f"(> {EXHAUSTIVE_CAP}); use sampling",
                required=1 << self.size,
            )
        for mask in range(1 << self.size):
            yield Subset(self, mask)

    def __eq__(self, other):
        return isinstance(other, Universe) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Universe({list(self.elements)!r})"


class Subset:
    """Immutable subset of a Universe, compared by value."""

    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: int):
        if mask < 0 or mask >> universe.size:
            raise MsslabError(f"mask {mask:#x} has members outside the universe")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("Subset is immutable")

    def members(self) -> tuple[str, ...]:
        return tuple(
            name for i, name in enumerate(self.universe.elements) if self.mask >> i & 1
        )

    def __contains__(self, name: str) -> bool:
        return bool(self.mask >> self.universe.index(name) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other):
        return (
            isinstance(other, Subset)
            and self.mask == other.mask
            and self.universe == other.universe
        )

    def __hash__(self):
        return hash((self.universe.elements, self.mask))

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.universe, self.mask | _co_mask(self, other))

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.universe, self.mask & _co_mask(self, other))

    def __sub__(self, other: "Subset") -> "Subset":
        return Subset(self.universe, self.mask & ~_co_mask(self, other))

    def __le__(self, other: "Subset") -> bool:
        return self.mask & ~_co_mask(self, other) == 0

    def __lt__(self, other: "Subset") -> bool:
        return self <= other and self.mask != other.mask

    def complement(self) -> "Subset":
        return self.universe.full - self

    def __repr__(self):
        return "{" + ",".join(self.members()) + "}"


def _co_mask(a: Subset, b: Subset) -> int:
    if not isinstance(b, Subset):
        raise TypeError(f"expected Subset, got {type(b).__name__}")
    if a.universe != b.universe:
        raise UniverseMismatchError(
            f"operands live in different universes: "
            f"{a.universe.elements} vs {b.universe.elements}"
        )
    return b.mask


class PartialResult:
    """Outcome of a partial operation: a Subset, or undefined."""

    __slots__ = ("value",)

    def __init__(self, value: Subset | None = None):
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, _value):
        raise AttributeError("PartialResult is immutable")

    @classmethod
    def of(cls, value: Subset) -> "PartialResult":
        return cls(value)

    @classmethod
    def undefined(cls) -> "PartialResult":
        return _UNDEFINED

    @property
    def defined(self) -> bool:
        return self.value is not None

    def __eq__(self, other):
        return isinstance(other, PartialResult) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"defined {self.value!r}" if self.defined else "undefined"


_UNDEFINED = PartialResult(None)


def part_of(a: Subset, b: Subset) -> bool:
    """Inclusion-instantiated parthood: every member of ``a`` is in ``b``."""
    return a <= b


def join(a: Subset, b: Subset) -> Subset:
    return a | b


def meet(a: Subset, b: Subset) -> Subset:
    return a & b


def partial_difference(a: Subset, b: Subset, policy: str = "subset") -> PartialResult:
    """Set difference ``a - b`` as a partial operation.

    Policies control when the result is defined:
      subset  -- defined iff b is included in a (default)
      proper  -- defined iff b is properly included in a
      total   -- always defined
    """
    _co_mask(a, b)
    if policy == "subset":
        ok = b <= a
    elif policy == "proper":
        ok = b < a
    elif policy == "total":
        ok = True
    else:
        raise MsslabError(
            f"unknown difference policy {policy!r}; expected one of {DIFFERENCE_POLICIES}"
        )
    return PartialResult.of(a - b) if ok else PartialResult.undefined()


def omega_equal(t1: PartialResult, t2: PartialResult) -> bool:
    """Conditional equality: holds unless both sides are defined and differ."""
    if t1.defined and t2.defined:
        return t1.value == t2.value
    return True


def omega_star_equal(t1: PartialResult, t2: PartialResult) -> bool:
    """Strong equality: both undefined, or both defined with equal values."""
    if t1.defined != t2.defined:
        return False
    return t1.value == t2.value
