"""Large families with many chains: the probe-set construction.

A family containing a fraction alpha of all subsets has at most
alpha * n! maximal chains (the density bound).  That is asymptotically
sharp, and the witness construction works as follows.  Fix a small probe
ground [k] = {1, ..., k} and an up-set U inside its power set.  Select
the permutations whose first m positions contain, among probe elements,
exactly a member of U (the "trace" of the prefix); the union of the
selected permutations' prefix chains is the family.

Everything here is exact:

* ``upset_probability`` evaluates sum over members Y of U of
  p^|Y| (1-p)^{k-|Y|}, the chance a p-biased random subset of [k] lands
  in U.  It is nondecreasing in p for an up-set and equals |U| / 2^k at
  p = 1/2.
* ``solve_threshold`` bisects that polynomial in exact rationals to find
  the bias p below 1/2 at which the selected fraction hits a target.
* ``exact_membership_probability`` computes, for finite n and prefix
  length m, the exact fraction of permutations selected, via the
  hypergeometric distribution of the prefix trace.
* ``union_size`` counts exactly how many subsets the selected chains
  cover, and checks the cover never exceeds
  |U| * 2^{n-k} + sum_{i <= m} C(n, i).

Membership of a subset S in the chain cover depends only on |S| and on
the probe trace S intersect [k]:  for |S| > m the first m positions of a
selecting permutation can be filled so that the trace is exactly
S intersect [k], so S is covered iff that trace is in U (this needs
k <= m); for |S| = r <= m the prefix can be padded beyond S, so S is
covered iff some member Y of U contains the trace, needs at most m - r
further probe elements, and leaves enough room for non-probe padding.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import NamedTuple

from .lattice import ClaimViolation, SetSystem, full_mask, is_upset

UNION_MAX_GROUND = 20  # union_size sweeps all 2^n subsets
ORACLE_MAX_GROUND = 8  # permutation-enumeration oracles

DEFAULT_TOLERANCE = Fraction(1, 10**12)


def build_upset(k: int, target_size: int) -> SetSystem:
    """Deterministic up-set in the power set of [k] of exactly the given
    size: full top layers plus a partial layer filled smallest mask first.

    Within one layer ascending mask order is ascending colex order, so
    the partial layer is the colex-least prefix.  Any partial choice at
    the boundary layer yields an up-set, since every proper superset of a
    boundary set lies in a full layer above.
    """
    if not 0 <= target_size <= (1 << k):
        raise ValueError(f"target size {target_size} out of range 0..2^{k}")
    by_size: dict[int, list[int]] = {r: [] for r in range(k + 1)}
    for mask in range(1 << k):
        by_size[mask.bit_count()].append(mask)
    members: list[int] = []
    remaining = target_size
    for r in range(k, -1, -1):
        layer = by_size[r]
        if remaining >= len(layer):
            members.extend(layer)
            remaining -= len(layer)
        else:
            members.extend(layer[:remaining])
            remaining = 0
            break
    return SetSystem(k, members)


def upset_probability(upset: SetSystem, p):
    """Probability that a p-biased random subset of the probe ground lies
    in the family: sum over members Y of p^|Y| (1-p)^{k-|Y|}.

    Exact when p is a Fraction; float in, float out.  At p = 1/2 this is
    the density |U| / 2^k for any family.
    """
    k = upset.n
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    q = one - p
    by_size = Counter(mask.bit_count() for mask in upset.masks())
    total = one - one  # zero of the right kind
    for r, cnt in by_size.items():
        total += cnt * p**r * q ** (k - r)
    return total


class ThresholdRoot(NamedTuple):
    """Bisection outcome: bias with value at most the target, bracketing
    interval of width at most the tolerance, and the exact value there."""

    bias: Fraction
    low: Fraction
    high: Fraction
    value: Fraction


def solve_threshold(
    upset: SetSystem, alpha: Fraction, tol: Fraction = DEFAULT_TOLERANCE
) -> ThresholdRoot:
    """Find a bias p below 1/2 where the up-set probability reaches alpha.

    Bisects on [0, 1/2] with exact rational evaluation at every midpoint;
    the tolerance applies to the bracketing interval width.  Returns the
    lower endpoint, so the value there is at most alpha and strictly
    below the density at bias 1/2.
    """
    if not is_upset(upset):
        raise ValueError("threshold solving needs an up-set (monotone probability)")
    if 0 in upset:
        raise ValueError("up-set containing the empty set selects everything; no threshold below 1/2")
    alpha = Fraction(alpha)
    beta = Fraction(upset.size, 1 << upset.n)
    if not 0 < alpha < beta:
        raise ValueError(f"target {alpha} must lie strictly between 0 and the density {beta}")
    lo, hi = Fraction(0), Fraction(1, 2)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if upset_probability(upset, mid) <= alpha:
            lo = mid
        else:
            hi = mid
    return ThresholdRoot(bias=lo, low=lo, high=hi, value=upset_probability(upset, lo))


def exact_membership_probability(n: int, k: int, upset: SetSystem, prefix_len: int) -> Fraction:
    """Exact probability that a uniform random permutation of {1, ..., n}
    is selected: its prefix trace (probe elements among the first
    prefix_len positions) lies in the up-set.

    The trace of a uniform permutation prefix is hypergeometric: a fixed
    probe subset Y of size y is the trace with probability
    C(m, y) C(n-m, k-y) / (C(n, k) C(k, y)), depending only on y.
    """
    if upset.n != k:
        raise ValueError(f"probe family lives on ground {upset.n}, expected {k}")
    if not 0 < k <= n:
        raise ValueError(f"probe size {k} out of range 1..{n}")
    m = prefix_len
    if not 0 <= m <= n:
        raise ValueError(f"prefix length {m} out of range 0..{n}")
    by_size = Counter(mask.bit_count() for mask in upset.masks())
    total = Fraction(0)
    for y, cnt in by_size.items():
        numer = comb(m, y) * comb(n - m, k - y)
        if numer:
            total += Fraction(cnt * numer, comb(n, k) * comb(k, y))
    return total


def family_size(n: int, k: int, upset: SetSystem, prefix_len: int) -> int:
    """Exact number of selected permutations; always an integer since the
    membership probability's denominator divides n!."""
    prob = exact_membership_probability(n, k, upset, prefix_len)
    count = prob * factorial(n)
    if count.denominator != 1:
        raise ClaimViolation(f"selected-permutation count {count} is not an integer")
    return count.numerator


class UnionSize(NamedTuple):
    exact: int
    upper_bound: int  # |U| * 2^(n-k) + sum_{i <= m} C(n, i)


def union_size(n: int, k: int, upset: SetSystem, prefix_len: int) -> UnionSize:
    """Exact number of subsets covered by the selected permutations'
    prefix chains, by testing every subset of the ground set.

    Requires k <= prefix_len (so a large set's trace can be realised
    entirely inside the prefix) and n <= 20 for the 2^n sweep.  Also
    returns, and checks against, the closed-form upper bound
    |U| * 2^{n-k} + sum_{i <= m} C(n, i).
    """
    if upset.n != k:
        raise ValueError(f"probe family lives on ground {upset.n}, expected {k}")
    m = prefix_len
    if not 0 < k <= m <= n:
        raise ValueError(f"need probe size <= prefix length <= n, got k={k}, m={m}, n={n}")
    if n > UNION_MAX_GROUND:
        raise ValueError(f"union sweep limited to n <= {UNION_MAX_GROUND}")

    kmask = full_mask(k)
    members = upset.masks()
    in_upset = bytearray(1 << k)
    for y in members:
        in_upset[y] = 1

    # Covered iff some member Y contains the trace T, needs at most
    # m - r further probe elements, and (m - r) - |Y \ T| non-probe slots
    # can be filled outside S: the predicate depends only on (T, r).
    small = [bytearray(1 << k) for _ in range(m + 1)]
    for trace in range(1 << k):
        for r in range(trace.bit_count(), m + 1):
            off_probe = r - trace.bit_count()  # |S \ [k]|
            if off_probe > n - k:
                continue
            ok = False
            for y in members:
                if y & trace != trace:
                    continue
                need = (y ^ trace).bit_count()  # probe elements still to add
                if need > m - r:
                    continue
                if (m - r) - need <= (n - k) - off_probe:
                    ok = True
                    break
            small[r][trace] = ok

    count = 0
    for mask in range(1 << n):
        r = mask.bit_count()
        trace = mask & kmask
        if r > m:
            count += in_upset[trace]
        else:
            count += small[r][trace]

    bound = upset.size * (1 << (n - k)) + sum(comb(n, i) for i in range(m + 1))
    if count > bound:
        raise ClaimViolation(
            f"chain cover size {count} exceeds its upper bound {bound} (n={n}, k={k}, m={m})"
        )
    return UnionSize(exact=count, upper_bound=bound)


# -- permutation-enumeration oracles (independent of everything above) ----


def selected_permutations(n: int, k: int, upset: SetSystem, prefix_len: int):
    """Yield the selected permutations directly; n <= 8."""
    if n > ORACLE_MAX_GROUND:
        raise ValueError(f"permutation enumeration limited to n <= {ORACLE_MAX_GROUND}")
    if upset.n != k:
        raise ValueError(f"probe family lives on ground {upset.n}, expected {k}")
    kmask = full_mask(k)
    for perm in permutations(range(1, n + 1)):
        trace = 0
        for a in perm[:prefix_len]:
            trace |= 1 << (a - 1)
        if (trace & kmask) in upset:
            yield perm


def family_size_oracle(n: int, k: int, upset: SetSystem, prefix_len: int) -> int:
    return sum(1 for _ in selected_permutations(n, k, upset, prefix_len))


def union_size_oracle(n: int, k: int, upset: SetSystem, prefix_len: int) -> int:
    """Chain-cover size by brute force: enumerate selected permutations
    and collect every prefix set."""
    covered: set[int] = set()
    for perm in selected_permutations(n, k, upset, prefix_len):
        mask = 0
        covered.add(0)
        for a in perm:
            mask |= 1 << (a - 1)
            covered.add(mask)
    return len(covered)


def covered_sets_oracle(n: int, k: int, upset: SetSystem, prefix_len: int) -> set[int]:
    covered: set[int] = set()
    for perm in selected_permutations(n, k, upset, prefix_len):
        mask = 0
        covered.add(0)
        for a in perm:
            mask |= 1 << (a - 1)
            covered.add(mask)
    return covered


# -- plan construction -----------------------------------------------------


def choose_probe_size(epsilon) -> int:
    """Smallest probe ground size k with 2^{-k} < epsilon / 2."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    k = 1
    while Fraction(1, 1 << k) >= epsilon / 2:
        k += 1
    return k


@dataclass(frozen=True)
class RealizedPlan:
    """Exact values of a plan at one finite ground size."""

    n: int
    prefix_len: int
    membership_probability: Fraction
    family_size: int
    union_size: int | None  # None when prefix_len < k (cover predicate unavailable)
    union_bound: int | None
    budget: Fraction  # (alpha + epsilon) * 2^n
    within_budget: bool | None

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "prefix_len": self.prefix_len,
            "membership_probability": _frac_str(self.membership_probability),
            "family_size": str(self.family_size),
            "union_size": None if self.union_size is None else str(self.union_size),
            "union_bound": None if self.union_bound is None else str(self.union_bound),
            "budget": _frac_str(self.budget),
            "within_budget": self.within_budget,
        }


@dataclass(frozen=True)
class ThresholdPlan:
    """Recipe for a family with chain fraction alpha and size fraction at
    most alpha + epsilon: probe size, up-set, and solved bias."""

    alpha: Fraction
    epsilon: Fraction
    k: int
    upset: SetSystem
    density: Fraction  # |U| / 2^k, strictly between alpha and alpha + epsilon/2
    bias: Fraction
    margin: Fraction  # 1/2 - bias, strictly positive

    def prefix_len(self, n: int) -> int:
        """Prefix length at ground size n: floor(bias * n)."""
        scaled = self.bias * n
        return scaled.numerator // scaled.denominator

    def realize(self, n: int) -> RealizedPlan:
        m = self.prefix_len(n)
        prob = exact_membership_probability(n, self.k, self.upset, m)
        fam = family_size(n, self.k, self.upset, m)
        budget = (self.alpha + self.epsilon) * (1 << n)
        if self.k <= m and n <= UNION_MAX_GROUND:
            cover = union_size(n, self.k, self.upset, m)
            return RealizedPlan(
                n=n,
                prefix_len=m,
                membership_probability=prob,
                family_size=fam,
                union_size=cover.exact,
                union_bound=cover.upper_bound,
                budget=budget,
                within_budget=cover.exact <= budget,
            )
        return RealizedPlan(
            n=n,
            prefix_len=m,
            membership_probability=prob,
            family_size=fam,
            union_size=None,
            union_bound=None,
            budget=budget,
            within_budget=None,
        )

    def to_json_obj(self) -> dict:
        return {
            "alpha": _frac_str(self.alpha),
            "epsilon": _frac_str(self.epsilon),
            "k": self.k,
            "upset_sets": list(self.upset.masks()),
            "upset_size": self.upset.size,
            "density": _frac_str(self.density),
            "bias": _frac_str(self.bias),
            "margin": _frac_str(self.margin),
        }


def chain_fraction_plan(alpha, epsilon, tol: Fraction = DEFAULT_TOLERANCE) -> ThresholdPlan:
    """Build the full plan for a target chain fraction alpha at size
    budget alpha + epsilon.

    Chooses the smallest probe ground with 2^{-k} < epsilon/2, the
    smallest up-set with density above alpha (its density then stays
    within epsilon/2 of alpha), and solves for the bias.
    """
    alpha = Fraction(alpha)
    epsilon = Fraction(epsilon)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if alpha + epsilon > 1:
        raise ValueError("alpha + epsilon must not exceed 1")
    k = choose_probe_size(epsilon)
    scaled = alpha * (1 << k)
    target = scaled.numerator // scaled.denominator + 1  # least size with density > alpha
    upset = build_upset(k, target)
    density = Fraction(upset.size, 1 << k)
    if not alpha < density <= alpha + epsilon / 2:
        raise ClaimViolation(
            f"density window failed: alpha={alpha}, density={density}, epsilon={epsilon}"
        )
    root = solve_threshold(upset, alpha, tol)
    return ThresholdPlan(
        alpha=alpha,
        epsilon=epsilon,
        k=k,
        upset=upset,
        density=density,
        bias=root.bias,
        margin=Fraction(1, 2) - root.bias,
    )


def _frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"
