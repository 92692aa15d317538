"""Exact counting of maximal chains inside a set system.

c(A) is the number of maximal chains of the subset lattice that lie
entirely inside the family A, equivalently the number of permutations
whose full prefix chain stays inside A.  A single upward sweep over the
membership table computes it: a member set S is reached by

    paths(S) = sum over x in S of paths(S minus x)

with paths(empty) = 1 when the empty set is a member, paths(S) = 0 for
non-members, and c(A) = paths(full set).  Every subset of S is a
numerically smaller mask, so ascending mask order is a valid evaluation
order and the whole table is filled in O(n * 2^n) int additions.

All arithmetic is plain Python int, exact at any magnitude, so no
overflow guard is needed at any ground size this package supports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from .lattice import SetSystem, layer_profile

ORACLE_MAX_GROUND = 9  # direct enumeration of n! permutations


def count_maximal_chains(family: SetSystem) -> int:
    """Exact number of maximal chains contained in the family."""
    flags = family._flags
    n = family.n
    if not flags[0]:
        return 0
    limit = 1 << n
    paths = [0] * limit
    paths[0] = 1
    for mask in range(1, limit):
        if flags[mask]:
            rest = mask
            total = 0
            while rest:
                low = rest & -rest
                total += paths[mask ^ low]
                rest ^= low
            paths[mask] = total
    return paths[limit - 1]


def count_maximal_chains_oracle(family: SetSystem) -> int:
    """Count maximal chains by checking every permutation's prefix chain.

    Independent of the table-sweep counter; requires n <= 9 since it
    enumerates all n! permutations.
    """
    n = family.n
    if n > ORACLE_MAX_GROUND:
        raise ValueError(f"oracle enumeration limited to n <= {ORACLE_MAX_GROUND}")
    flags = family._flags
    # Every prefix chain starts at the empty set and ends at the full set.
    if not flags[0] or not flags[(1 << n) - 1]:
        return 0
    bits = [1 << i for i in range(n)]
    count = 0
    for perm in permutations(range(n)):
        mask = 0
        for p in perm:
            mask |= bits[p]
            if not flags[mask]:
                break
        else:
            count += 1
    return count


def layer_bound(family: SetSystem) -> int:
    """Upper bound on c(A): min over set sizes r of |A at size r| * r! * (n-r)!.

    Each maximal chain passes through exactly one set of every size, and
    exactly r! * (n-r)! chains of the full lattice pass through a given
    r-set, so any one layer bounds the total.  An empty layer gives 0.
    """
    n = family.n
    profile = layer_profile(family)
    return min(profile[r] * factorial(r) * factorial(n - r) for r in range(n + 1))


@dataclass(frozen=True)
class DensityBoundReport:
    """Outcome of the density bound check c(A) <= (|A| / 2^n) * n!."""

    holds: bool
    density: Fraction  # |A| / 2^n
    chains: int
    budget: Fraction  # density * n!
    slack: Fraction  # budget - chains, nonnegative when the bound holds


def check_density_bound(family: SetSystem) -> DensityBoundReport:
    """Check, in exact rational arithmetic, that a family containing a
    fraction alpha of all sets contains at most alpha * n! maximal chains.

    The bound follows from averaging over layers: some size r has at most
    alpha * C(n, r) member sets, and layer_bound at that r is alpha * n!.
    """
    n = family.n
    density = Fraction(family.size, 1 << n)
    chains = count_maximal_chains(family)
    budget = density * factorial(n)
    return DensityBoundReport(
        holds=chains <= budget,
        density=density,
        chains=chains,
        budget=budget,
        slack=budget - chains,
    )
