"""Finitely generated abelian groups, their finite windows and subgroups."""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Deque, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from algebra.core import Translation, Universe
from algebra.errors import BudgetExceeded, ValueEscapesWindow

log = logging.getLogger(__name__)

Element = Tuple[int, ...]
ElementLike = Union[int, Sequence[int]]

DEFAULT_SEMIGROUP_BUDGET = 10_000
DEFAULT_BOX_RADIUS = 64


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Z_{m_1} + ... + Z_{m_t} + Z^r.

    Elements are integer vectors: the torsion coordinates first (reduced
    modulo their moduli), then the ``rank`` free coordinates.
    """

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        if any(modulus < 1 for modulus in self.torsion):
            raise ValueError(f"torsion moduli must be positive, got {self.torsion!r}")
        if self.rank == 0 and not self.torsion:
            raise ValueError("the trivial presentation needs at least one coordinate")

    @classmethod
    def integers(cls) -> "AbelianGroupPresentation":
        return cls(rank=1)

    @classmethod
    def cyclic(cls, modulus: int) -> "AbelianGroupPresentation":
        return cls(rank=0, torsion=(modulus,))

    @property
    def dimension(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        order = 1
        for modulus in self.torsion:
            order *= modulus
        return order

    @property
    def zero(self) -> Element:
        return (0,) * self.dimension

    def element(self, value: ElementLike) -> Element:
        coords = (value,) if isinstance(value, int) else tuple(value)
        if len(coords) != self.dimension:
            raise ValueError(f"element {value!r} needs {self.dimension} coordinates")
        torsion = tuple(int(c) % m for c, m in zip(coords, self.torsion))
        return torsion + tuple(int(c) for c in coords[len(self.torsion):])

    def add(self, a: ElementLike, b: ElementLike) -> Element:
        left, right = self.element(a), self.element(b)
        return self.element(tuple(x + y for x, y in zip(left, right)))

    def neg(self, a: ElementLike) -> Element:
        return self.element(tuple(-x for x in self.element(a)))

    def sub(self, a: ElementLike, b: ElementLike) -> Element:
        return self.add(a, self.neg(b))

    def elements(self) -> List[Element]:
        if not self.is_finite:
            raise ValueError("an infinite group has no element list; use a window")
        return [tuple(coords) for coords in itertools.product(*(range(m) for m in self.torsion))]

    def window(self, free_bound: Optional[int] = None) -> "GroupWindow":
        if self.rank and free_bound is None:
            raise ValueError("groups with free rank need a free_bound for their window")
        return GroupWindow(self, free_bound or 1)

    def describe(self) -> str:
        parts = [f"Z{m}" for m in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts)


@dataclass(frozen=True)
class GroupWindow:
    """Finite window of a group encoded as the integers 0..size-1.

    Codes are mixed radix over the coordinates: torsion moduli first, then
    ``free_bound`` for every free coordinate (free coordinates range over
    [0, free_bound)).
    """

    group: AbelianGroupPresentation
    free_bound: int = 1

    @property
    def radices(self) -> Tuple[int, ...]:
        return tuple(self.group.torsion) + (self.free_bound,) * self.group.rank

    @property
    def size(self) -> int:
        size = 1
        for radix in self.radices:
            size *= radix
        return size

    @property
    def universe(self) -> Universe:
        return Universe(self.size)

    def encode(self, value: ElementLike) -> Optional[int]:
        element = self.group.element(value)
        code = 0
        for coordinate, radix in zip(element, self.radices):
            if not 0 <= coordinate < radix:
                return None
            code = code * radix + coordinate
        return code

    def decode(self, code: int) -> Element:
        if not 0 <= code < self.size:
            raise ValueEscapesWindow((code,), code, f"code {code} is not in a window of size {self.size}")
        coords: List[int] = []
        for radix in reversed(self.radices):
            code, digit = divmod(code, radix)
            coords.append(digit)
        return tuple(reversed(coords))

    def shift(self, amount: object, code: int) -> int:
        moved = self.group.add(self.decode(code), amount)  # type: ignore[arg-type]
        encoded = self.encode(moved)
        if encoded is None:
            raise ValueEscapesWindow((code,), moved, f"{moved!r} leaves the window of {self.group.describe()}")
        return encoded

    def describe(self, amount: object) -> str:
        element = self.group.element(amount)  # type: ignore[arg-type]
        return str(element[0]) if len(element) == 1 else str(element)


def translation_op(a: ElementLike, window: Optional[GroupWindow] = None) -> Translation:
    """f_a(x) = a + x."""
    if window is None:
        if not isinstance(a, int):
            raise ValueError("plain integer translations need an integer shift")
        return Translation(a)
    return Translation(window.group.element(a), window)


# ----------------------------------------------------------------------
# Semigroups and subgroups
# ----------------------------------------------------------------------
def subsemigroup(
    group: AbelianGroupPresentation,
    generators: Iterable[ElementLike],
    budget: int = DEFAULT_SEMIGROUP_BUDGET,
) -> FrozenSet[Element]:
    """Closure of ``generators`` under + in BFS order.

    Raises BudgetExceeded carrying the elements found so far when the closure
    does not stabilise within ``budget`` elements.
    """
    start = [group.element(g) for g in generators]
    if not start:
        raise ValueError("a subsemigroup needs at least one generator")
    found: List[Element] = []
    seen = set()
    queue: Deque[Element] = deque()
    for element in start:
        if element not in seen:
            seen.add(element)
            found.append(element)
            queue.append(element)
    while queue:
        current = queue.popleft()
        for generator in start:
            candidate = group.add(current, generator)
            if candidate in seen:
                continue
            seen.add(candidate)
            found.append(candidate)
            if len(found) > budget:
                raise BudgetExceeded(budget, len(found), "subsemigroup", partial=frozenset(found))
            queue.append(candidate)
    return frozenset(found)


@dataclass(frozen=True)
class SubgroupHandle:
    """Subgroup generated by ``generators``.

    For finite groups membership is exact. With free rank the closure is
    enumerated inside the box |free coordinate| <= box_radius.
    """

    group: AbelianGroupPresentation
    generators: Tuple[Element, ...]
    box_radius: int = DEFAULT_BOX_RADIUS
    label: str = field(default="", compare=False)

    @classmethod
    def generated(
        cls,
        group: AbelianGroupPresentation,
        generators: Iterable[ElementLike],
        label: str = "",
        box_radius: int = DEFAULT_BOX_RADIUS,
    ) -> "SubgroupHandle":
        return cls(group, tuple(sorted({group.element(g) for g in generators})), box_radius, label)

    def _inside_box(self, element: Element) -> bool:
        free = element[len(self.group.torsion):]
        return all(abs(c) <= self.box_radius for c in free)

    def elements(self) -> FrozenSet[Element]:
        return self._members

    @cached_property
    def _members(self) -> FrozenSet[Element]:
        group = self.group
        steps = [g for g in self.generators] + [group.neg(g) for g in self.generators]
        seen = {group.zero}
        queue: Deque[Element] = deque([group.zero])
        while queue:
            current = queue.popleft()
            for step in steps:
                candidate = group.add(current, step)
                if candidate in seen or not self._inside_box(candidate):
                    continue
                seen.add(candidate)
                queue.append(candidate)
        return frozenset(seen)

    def contains(self, value: ElementLike) -> bool:
        element = self.group.element(value)
        if not self._inside_box(element):
            log.warning("Element %s liegt ausserhalb der Box (Radius %d)", element, self.box_radius)
            return False
        return element in self.elements()

    def issubset(self, other: "SubgroupHandle") -> bool:
        return all(other.contains(g) for g in self.generators)

    def meet(self, other: "SubgroupHandle") -> "SubgroupHandle":
        common = self.elements() & other.elements()
        return SubgroupHandle.generated(self.group, common, f"{self.name} ∧ {other.name}", self.box_radius)

    def join(self, other: "SubgroupHandle") -> "SubgroupHandle":
        return SubgroupHandle.generated(
            self.group, self.generators + other.generators, f"{self.name} ∨ {other.name}", self.box_radius
        )

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        gens = ",".join(str(g[0]) if len(g) == 1 else str(g) for g in self.generators)
        return f"<{gens}>"


def all_subgroups(group: AbelianGroupPresentation) -> List[SubgroupHandle]:
    """Every subgroup of a finite group, smallest first.

    Starts from the trivial subgroup and closes under joining with single
    elements; subgroups are identified by their element sets.
    """
    if not group.is_finite:
        raise ValueError("subgroup enumeration needs a finite group")
    trivial = SubgroupHandle.generated(group, [group.zero])
    found = {trivial.elements(): trivial}
    queue: Deque[SubgroupHandle] = deque([trivial])
    elements = group.elements()
    while queue:
        current = queue.popleft()
        members = current.elements()
        for element in elements:
            if element in members:
                continue
            bigger = SubgroupHandle.generated(group, current.generators + (element,))
            key = bigger.elements()
            if key not in found:
                canonical = SubgroupHandle.generated(group, _small_generating_set(group, key))
                found[key] = canonical
                queue.append(canonical)
    return sorted(found.values(), key=lambda h: (len(h.elements()), sorted(h.elements())))


def _small_generating_set(group: AbelianGroupPresentation, members: FrozenSet[Element]) -> List[Element]:
    chosen: List[Element] = []
    reached = frozenset([group.zero])
    for element in sorted(members):
        if element in reached:
            continue
        chosen.append(element)
        reached = SubgroupHandle.generated(group, chosen).elements()
        if reached == members:
            break
    return chosen or [group.zero]


__all__ = [
    "Element",
    "AbelianGroupPresentation",
    "GroupWindow",
    "translation_op",
    "subsemigroup",
    "SubgroupHandle",
    "all_subgroups",
    "DEFAULT_SEMIGROUP_BUDGET",
    "DEFAULT_BOX_RADIUS",
]
