"""Tower-of-cubes constructions.

A tower is built from an ordered partition of the ground set into blocks
X_1, ..., X_k.  Its member sets are those sandwiched between consecutive
block prefixes:

    X_1 + ... + X_s  subset-of  A  subset-of  X_1 + ... + X_{s+1}

for some stage s.  Geometrically it is a stack of subcubes of dimensions
|X_1|, ..., |X_k| glued corner to corner.  Consecutive subcubes share
exactly one set (the corner), which gives the size formula

    |T| = sum over blocks of (2^{t_i} - 1) + 1

and, since a maximal chain must cross each subcube independently,

    c(T) = product over blocks of t_i!   (equal blocks of size t: (t!)^(n/t)).

Both formulas are verified against the generic chain counter in the test
suite.  Chain counts are invariant under relabeling the ground set, so
blocks are laid out as consecutive integer intervals in the given order;
that canonical layout is also fixed under every left compression.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .lattice import SetSystem, elements_of, full_mask


@dataclass(frozen=True)
class TowerSpec:
    """An ordered partition of {1, ..., n} into nonempty blocks."""

    block_masks: tuple[int, ...]

    def __post_init__(self):
        if not self.block_masks:
            raise ValueError("tower needs at least one block")
        union = 0
        for mask in self.block_masks:
            if mask == 0:
                raise ValueError("tower blocks must be nonempty")
            if mask & union:
                raise ValueError("tower blocks must be pairwise disjoint")
            union |= mask
        if union != full_mask(union.bit_length()):
            raise ValueError("tower blocks must partition a full ground set")

    @property
    def n(self) -> int:
        mask = 0
        for b in self.block_masks:
            mask |= b
        return mask.bit_length()

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(mask.bit_count() for mask in self.block_masks)

    @classmethod
    def consecutive(cls, block_sizes) -> "TowerSpec":
        """Canonical layout: blocks are consecutive integer intervals."""
        sizes = list(block_sizes)
        if not sizes or any(t < 1 for t in sizes):
            raise ValueError("block sizes must be positive")
        masks = []
        start = 0
        for t in sizes:
            masks.append(((1 << t) - 1) << start)
            start += t
        return cls(tuple(masks))

    def build(self) -> SetSystem:
        """Materialise the tower as a set system."""
        n = self.n
        members = set()
        prefix = 0
        for block in self.block_masks:
            sub = block
            while True:
                members.add(prefix | sub)
                if sub == 0:
                    break
                sub = (sub - 1) & block
            prefix |= block
        members.add(prefix)
        return SetSystem(n, members)

    def describe(self) -> str:
        parts = ["{" + ",".join(map(str, elements_of(m))) + "}" for m in self.block_masks]
        return " | ".join(parts)


def generalized_tower(block_sizes) -> SetSystem:
    """Tower with arbitrary block sizes, consecutive canonical layout."""
    return TowerSpec.consecutive(block_sizes).build()


def tower_of_cubes(n: int, t: int) -> SetSystem:
    """Uniform tower of n/t cubes of dimension t; requires t | n."""
    if not 1 <= t <= n:
        raise ValueError(f"block size {t} out of range 1..{n}")
    if n % t:
        raise ValueError(f"block size {t} does not divide ground size {n}")
    return generalized_tower([t] * (n // t))


def tower_size(block_sizes) -> int:
    """Closed-form size: sum of (2^{t_i} - 1) plus the final corner."""
    sizes = list(block_sizes)
    if not sizes or any(t < 1 for t in sizes):
        raise ValueError("block sizes must be positive")
    return sum((1 << t) - 1 for t in sizes) + 1


def tower_chain_count(block_sizes) -> int:
    """Closed-form chain count: product of block factorials."""
    sizes = list(block_sizes)
    if not sizes or any(t < 1 for t in sizes):
        raise ValueError("block sizes must be positive")
    out = 1
    for t in sizes:
        out *= factorial(t)
    return out


@dataclass(frozen=True)
class SmallBlockTower:
    """Best tower using only 2- and 3-blocks within a size budget."""

    block_sizes: tuple[int, ...]
    size: int
    chains: int
    size_matches_budget: bool


def best_small_block_tower(n: int, max_size: int) -> SmallBlockTower | None:
    """Most chain-rich tower of 2- and 3-blocks on n elements with size
    at most max_size.

    With b blocks of size 3 and a = (n - 3b) / 2 blocks of size 2 the
    tower has size 3a + 7b + 1 and chain count 2^a * 6^b; both grow with
    b, so the best choice is the largest feasible b.  Returns None when
    n has no 2/3-block partition under the budget (n = 1, or a budget
    below the all-2 tower).
    """
    if n < 2:
        return None
    best = None
    for b in range(n // 3 + 1):
        rem = n - 3 * b
        if rem % 2:
            continue
        a = rem // 2
        size = 3 * a + 7 * b + 1
        if size > max_size:
            continue
        chains = (1 << a) * 6**b
        if best is None or chains > best.chains:
            best = SmallBlockTower(
                block_sizes=(2,) * a + (3,) * b,
                size=size,
                chains=chains,
                size_matches_budget=(size == max_size),
            )
    return best
