"""Seeded random generators for set systems, posets, and grid subsets.

Shared by the verification suites and the tests so that every randomized
check is reproducible from an explicit seed.  Density-based sampling
keeps densities away from 1 by default: near-full systems make the
permutation-enumeration oracle needlessly slow without adding coverage.
"""

from __future__ import annotations

from random import Random

from .lattice import SetSystem, full_mask


def random_system(
    n: int,
    rng: Random,
    density: float | None = None,
    ensure_endpoints: bool = False,
) -> SetSystem:
    """Sample each subset independently with the given density.

    When density is None a fresh density is drawn uniformly from
    (0, 0.75) per system, giving a mix of sparse and moderately dense
    families.
    """
    if density is None:
        density = rng.uniform(0.0, 0.75)
    members = [m for m in range(1 << n) if rng.random() < density]
    if ensure_endpoints:
        members.append(0)
        members.append(full_mask(n))
    return SetSystem(n, members)


def random_chain_system(n: int, rng: Random, extra: int | None = None) -> SetSystem:
    """A random maximal chain plus `extra` random further sets.

    Guarantees at least one maximal chain, which density sampling rarely
    produces at larger n.
    """
    word = list(range(1, n + 1))
    rng.shuffle(word)
    members = set()
    mask = 0
    members.add(0)
    for a in word:
        mask |= 1 << (a - 1)
        members.add(mask)
    if extra is None:
        extra = rng.randrange(0, 1 << n)
        extra = extra.bit_count()  # small bias toward few extras
    limit = 1 << n
    for _ in range(extra):
        members.add(rng.randrange(limit))
    return SetSystem(n, members)


def random_mixed_system(n: int, rng: Random) -> SetSystem:
    """Mix of density-sampled and chain-seeded systems."""
    if rng.random() < 0.5:
        return random_system(n, rng)
    return random_chain_system(n, rng)


def random_poset_relations(n: int, rng: Random, edge_prob: float = 0.3) -> list[tuple[int, int]]:
    """Random strict-order generators: a shuffled base order with each
    compatible pair related independently.

    Transitive closure of the result is always a valid (cycle-free)
    strict order because all relations point the same way along the base
    order.
    """
    base = list(range(1, n + 1))
    rng.shuffle(base)
    pairs = []
    for idx_a in range(n):
        for idx_b in range(idx_a + 1, n):
            if rng.random() < edge_prob:
                pairs.append((base[idx_a], base[idx_b]))
    return pairs


def random_grid_cells(k: int, rng: Random, density: float | None = None) -> list[int]:
    """Random subset of the k-by-k grid's cell indices."""
    if density is None:
        density = rng.uniform(0.2, 1.0)
    return [c for c in range(k * k) if rng.random() < density]
