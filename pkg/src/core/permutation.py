from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from src.errors import DimensionMismatchError, ValidationError


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1, …, n}; ``images[i - 1] = π(i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValidationError(f"not a permutation of 1..{len(images)}: {list(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        result = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            result[image - 1] = i
        return Permutation(tuple(result))

    def power(self, m: int) -> "Permutation":
        if m < 0:
            return self.inverse().power(-m)
        result = list(range(1, self.n + 1))
        for i in range(1, self.n + 1):
            j = i
            for _ in range(m % self.order()):
                j = self(j)
            result[i - 1] = j
        return Permutation(tuple(result))

    def order(self) -> int:
        return reduce(math.lcm, cycle_decomposition(self).lengths, 1)

    def cycles(self) -> "CycleDecomposition":
        return cycle_decomposition(self)

    def is_identity(self) -> bool:
        return all(image == i for i, image in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return cycle_decomposition(self).notation()


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles, each starting at its smallest element, ordered by it.

    Fixed points appear as length-1 cycles.
    """

    cycles: tuple[tuple[int, ...], ...]

    @property
    def q(self) -> int:
        return len(self.cycles)

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]

    def cycle_index(self, i: int) -> int:
        """0-based index of the cycle containing ``i``."""
        for p, cycle in enumerate(self.cycles):
            if i in cycle:
                return p
        raise KeyError(i)

    def notation(self) -> str:
        return "".join("(" + " ".join(str(v) for v in c) + ")" for c in self.cycles)

    def to_record(self) -> list[list[int]]:
        return [list(c) for c in self.cycles]


def cycle_decomposition(pi: Permutation) -> CycleDecomposition:
    seen: set[int] = set()
    cycles = []
    for start in range(1, pi.n + 1):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        j = pi(start)
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = pi(j)
        cycles.append(tuple(cycle))
    return CycleDecomposition(tuple(cycles))


def compose(tau: Permutation, pi: Permutation) -> Permutation:
    """τπ as a map: i ↦ τ(π(i))."""
    if tau.n != pi.n:
        raise DimensionMismatchError(pi.n, tau.n, what="permutation")
    return Permutation(tuple(tau(pi(i)) for i in range(1, pi.n + 1)))


def from_cycles(cycles: Sequence[Sequence[int]], n: int) -> Permutation:
    """Build a permutation from cycle notation; unlisted points are fixed."""
    images = list(range(1, n + 1))
    for cycle in cycles:
        for k, v in enumerate(cycle):
            images[v - 1] = cycle[(k + 1) % len(cycle)]
    return Permutation(tuple(images))
