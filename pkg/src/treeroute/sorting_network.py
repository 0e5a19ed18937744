"""Parallel comparison networks: simulation, verification and builders.

Registers are 0-indexed here.  A comparator ``(j1, j2)`` with ``j1 < j2``
swaps the two register values when the value in ``j1`` is larger, so a
sorting network leaves value ``j + 1`` in register ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Comparator = tuple[int, int]

ZERO_ONE_MAX = 24
PERMS_MAX = 8


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class ComparisonNetwork:
    n: int
    levels: tuple[tuple[Comparator, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise NetworkError("register count must be non-negative")
        for i, level in enumerate(self.levels):
            used: set[int] = set()
            for j1, j2 in level:
                if not (0 <= j1 < j2 < self.n):
                    raise NetworkError(f"level {i}: bad comparator ({j1}, {j2})")
                if j1 in used or j2 in used:
                    raise NetworkError(f"level {i}: register reused by ({j1}, {j2})")
                used.update((j1, j2))

    @classmethod
    def from_levels(cls, n: int, levels: Sequence[Sequence[Sequence[int]]]) -> "ComparisonNetwork":
        return cls(
            n,
            tuple(tuple(sorted((int(a), int(b)) for a, b in level)) for level in levels),
        )

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def size(self) -> int:
        return sum(len(level) for level in self.levels)

    def without_last_level(self) -> "ComparisonNetwork":
        return ComparisonNetwork(self.n, self.levels[:-1])

    def to_dict(self) -> dict:
        return {"n": self.n, "levels": [[list(c) for c in level] for level in self.levels]}

    @classmethod
    def from_dict(cls, data: dict) -> "ComparisonNetwork":
        return cls.from_levels(int(data["n"]), data["levels"])


def _check_assignment(net: ComparisonNetwork, rho0: Sequence[int]) -> list[int]:
    rho = [int(x) for x in rho0]
    if len(rho) != net.n or sorted(rho) != list(range(1, net.n + 1)):
        raise NetworkError(f"initial assignment {list(rho0)} is not a bijection onto 1..{net.n}")
    return rho


def apply_network(
    net: ComparisonNetwork, rho0: Sequence[int]
) -> tuple[list[int], list[list[bool]]]:
    """Run the comparator recurrence on ``rho0`` (values ``1..n`` by register).

    Returns the final assignment and, per level, one swap flag per comparator
    in the level's stored order.
    """
    rho = _check_assignment(net, rho0)
    trace: list[list[bool]] = []
    for level in net.levels:
        flags = []
        for j1, j2 in level:
            swap = rho[j1] > rho[j2]
            if swap:
                rho[j1], rho[j2] = rho[j2], rho[j1]
            flags.append(swap)
        trace.append(flags)
    return rho, trace


def _zero_one_sorts(net: ComparisonNetwork) -> bool:
    n = net.n
    if n <= 1:
        return True
    total = 1 << n
    nwords = max(1, total // 64)
    words = np.arange(nwords, dtype=np.uint64)
    regs = []
    for j in range(n):
        if j < 6:
            # periodic pattern inside each 64-bit word: bit b set iff bit j of b is set
            pattern = 0
            for b in range(64):
                if (b >> j) & 1:
                    pattern |= 1 << b
            reg = np.full(nwords, pattern, dtype=np.uint64)
        else:
            sel = (words >> np.uint64(j - 6)) & np.uint64(1)
            reg = np.where(sel == 1, np.uint64(0xFFFFFFFFFFFFFFFF), np.uint64(0))
        regs.append(reg)
    if total < 64:
        valid = np.uint64((1 << total) - 1)
        regs = [r & valid for r in regs]
    for level in net.levels:
        for j1, j2 in level:
            a, b = regs[j1], regs[j2]
            regs[j1], regs[j2] = a & b, a | b
    for j in range(n - 1):
        if np.any(regs[j] & ~regs[j + 1]):
            return False
    return True


def _perms_sort(net: ComparisonNetwork) -> bool:
    n = net.n
    if n <= 1:
        return True
    data = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int16)
    for level in net.levels:
        for j1, j2 in level:
            a = data[:, j1].copy()
            b = data[:, j2]
            data[:, j1] = np.minimum(a, b)
            data[:, j2] = np.maximum(a, b)
    return bool(np.all(data == np.arange(1, n + 1, dtype=np.int16)))


def is_sorting_network(net: ComparisonNetwork, mode: str = "zero-one") -> bool:
    """Decide whether ``net`` sorts every input.

    ``zero-one`` checks all ``2**n`` binary inputs with bit-sliced words
    (``n <= 24``); ``perms`` runs all ``n!`` permutations (``n <= 8``).
    """
    if mode == "zero-one":
        if net.n > ZERO_ONE_MAX:
            raise NetworkError(f"zero-one mode supports n <= {ZERO_ONE_MAX}, got {net.n}")
        return _zero_one_sorts(net)
    if mode == "perms":
        if net.n > PERMS_MAX:
            raise NetworkError(f"perms mode supports n <= {PERMS_MAX}, got {net.n}")
        return _perms_sort(net)
    raise NetworkError(f"unknown verification mode {mode!r}")


def _compact(n: int, comparators: Sequence[Comparator]) -> ComparisonNetwork:
    """Schedule comparators as early as register order allows."""
    ready = [0] * n
    levels: list[list[Comparator]] = []
    for j1, j2 in comparators:
        slot = max(ready[j1], ready[j2])
        if slot == len(levels):
            levels.append([])
        levels[slot].append((j1, j2))
        ready[j1] = ready[j2] = slot + 1
    return ComparisonNetwork(n, tuple(tuple(sorted(level)) for level in levels))


def build_odd_even_mergesort(n: int) -> ComparisonNetwork:
    """Batcher's odd-even mergesort, pruned to ``n`` registers.

    Built for the next power of two; comparators touching a phantom register
    (which would hold +inf and never move) are dropped.
    """
    if n < 1:
        raise NetworkError("need at least one register")
    size = 1
    while size < n:
        size *= 2
    comparators: list[Comparator] = []
    p = 1
    while p < size:
        k = p
        while k >= 1:
            for j in range(k % p, size - k, 2 * k):
                for i in range(min(k, size - j - k)):
                    if (i + j) // (2 * p) == (i + j + k) // (2 * p):
                        a, b = i + j, i + j + k
                        if b < n:
                            comparators.append((a, b))
            k //= 2
        p *= 2
    return _compact(n, comparators)


def build_brickwall(n: int) -> ComparisonNetwork:
    """Odd-even transposition sort: ``n`` alternating layers of neighbour comparators."""
    if n < 1:
        raise NetworkError("need at least one register")
    levels = []
    for i in range(n):
        level = tuple((j, j + 1) for j in range(i % 2, n - 1, 2))
        if level:
            levels.append(level)
    return ComparisonNetwork(n, tuple(levels))


def figure1_network() -> ComparisonNetwork:
    """Four registers, depth four.

    After three levels the minimum sits in the first register and the maximum
    in the last; the fourth level orders the middle pair.
    """
    return ComparisonNetwork(4, (((0, 1), (2, 3)), ((0, 2),), ((1, 3),), ((1, 2),)))


def random_network(n: int, depth: int, rng: np.random.Generator) -> ComparisonNetwork:
    """A random comparison network (not necessarily sorting)."""
    levels = []
    for _ in range(depth):
        order = rng.permutation(n)
        pairs = rng.integers(0, n // 2 + 1)
        level = []
        for t in range(pairs):
            a, b = int(order[2 * t]), int(order[2 * t + 1])
            level.append((min(a, b), max(a, b)))
        levels.append(tuple(sorted(level)))
    return ComparisonNetwork(n, tuple(levels))


NetworkProvider = Callable[[int], ComparisonNetwork]

PROVIDERS: dict[str, NetworkProvider] = {
    "odd-even": build_odd_even_mergesort,
    "brickwall": build_brickwall,
}


def get_provider(name: str) -> NetworkProvider:
    try:
        return PROVIDERS[name]
    except KeyError:
        raise NetworkError(
            f"unknown network builder {name!r}; choose from {sorted(PROVIDERS)}"
        ) from None
