"""Boolean-lattice fundamentals: bitmask subsets, set-system containers,
and the bijection between permutations and maximal chains.

Conventions shared by every module in this package:

* The ground set is {1, ..., n} and a subset is an n-bit mask with bit
  i - 1 set exactly when element i is present ({1, 3} is 0b101 = 5).
  All file formats and cross-module contracts use this encoding.
* Counts are plain Python ints, exact at any magnitude; densities and
  probabilities are fractions.Fraction. No float enters an asserted
  equality anywhere in the package.

A maximal chain of the subset lattice is a nested sequence of n + 1
subsets starting at the empty set and gaining one element per step.
Reading off the added elements gives a permutation of {1, ..., n}; the
correspondence is a bijection, realised by chain_of_permutation and
permutation_of_chain below.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator

MAX_GROUND = 24  # dense 2^n membership table; 24 keeps one system under 17 MiB


class FormatError(ValueError):
    """Raised when a serialized set system, poset, or grid is malformed."""


class ClaimViolation(RuntimeError):
    """Raised when a mathematical claim the toolkit re-checks fails.

    The command-line front end turns this into exit status 1: it means a
    verified inequality or identity did not hold, which is significant.
    """


def full_mask(n: int) -> int:
    """Mask of the whole ground set {1, ..., n}."""
    return (1 << n) - 1


def mask_from(elements: Iterable[int]) -> int:
    """Mask of a subset given as an iterable of 1-based elements."""
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"element {e} out of range (elements are 1-based)")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    """1-based elements of a subset mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def chain_of_permutation(word: Iterable[int]) -> list[int]:
    """Prefix chain of a permutation of {1, ..., n}.

    Returns the n + 1 nested subsets (as masks) formed by the empty set
    followed by the prefixes {a1}, {a1, a2}, ..., the full set.  Raises
    ValueError if ``word`` repeats an element or uses one outside
    {1, ..., n}.
    """
    word = list(word)
    n = len(word)
    chain = [0]
    seen = 0
    for a in word:
        if not 1 <= a <= n:
            raise ValueError(f"element {a} out of range for a permutation of 1..{n}")
        bit = 1 << (a - 1)
        if seen & bit:
            raise ValueError(f"duplicate element {a} in permutation")
        seen |= bit
        chain.append(seen)
    return chain


def permutation_of_chain(chain: Iterable[int]) -> tuple[int, ...]:
    """Inverse of chain_of_permutation.

    The input must be a full maximal chain: n + 1 masks starting at 0,
    each gaining exactly one bit, ending at the full set.
    """
    chain = list(chain)
    if not chain or chain[0] != 0:
        raise ValueError("maximal chain must start at the empty set")
    n = len(chain) - 1
    word = []
    for prev, cur in zip(chain, chain[1:]):
        added = cur ^ prev
        if cur & prev != prev or added == 0 or added & (added - 1):
            raise ValueError("chain must gain exactly one element per step")
        word.append(added.bit_length())
    if chain[-1] != full_mask(n):
        raise ValueError("maximal chain must end at the full set")
    return tuple(word)


class SetSystem:
    """A family of subsets of {1, ..., n} with O(1) membership tests.

    Membership is stored densely, one flag per subset of the ground set,
    which keeps the chain-counting recurrence a flat table walk.  The
    sorted tuple of member masks is kept alongside for iteration.
    Instances are immutable after construction and safe to share across
    worker processes.
    """

    __slots__ = ("n", "_flags", "_masks")

    def __init__(self, n: int, members: Iterable[int] = ()):
        if not 1 <= n <= MAX_GROUND:
            raise ValueError(f"ground size {n} outside supported range 1..{MAX_GROUND}")
        limit = 1 << n
        flags = bytearray(limit)
        for mask in members:
            if not 0 <= mask < limit:
                raise ValueError(f"mask {mask:#x} out of range for n={n}")
            flags[mask] = 1
        self.n = n
        self._flags = flags
        self._masks = tuple(m for m in range(limit) if flags[m])

    @classmethod
    def power_set(cls, n: int) -> "SetSystem":
        return cls(n, range(1 << n))

    @classmethod
    def empty_family(cls, n: int) -> "SetSystem":
        return cls(n, ())

    @property
    def size(self) -> int:
        return len(self._masks)

    def masks(self) -> tuple[int, ...]:
        """Member subsets as masks, ascending."""
        return self._masks

    def __contains__(self, mask: int) -> bool:
        return 0 <= mask < (1 << self.n) and bool(self._flags[mask])

    def __iter__(self) -> Iterator[int]:
        return iter(self._masks)

    def __len__(self) -> int:
        return len(self._masks)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SetSystem)
            and self.n == other.n
            and self._masks == other._masks
        )

    def __hash__(self) -> int:
        return hash((self.n, self._masks))

    def __repr__(self) -> str:
        return f"SetSystem(n={self.n}, size={self.size})"

    def with_sets(self, *masks: int) -> "SetSystem":
        return SetSystem(self.n, self._masks + masks)

    def without_sets(self, *masks: int) -> "SetSystem":
        drop = set(masks)
        return SetSystem(self.n, (m for m in self._masks if m not in drop))

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        """Standard text format: ground size, then one lowercase hex mask
        per line, ascending."""
        lines = [str(self.n)]
        lines.extend(format(m, "x") for m in self._masks)
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {"n": self.n, "sets": list(self._masks)}


def parse_set_system(text: str) -> SetSystem:
    """Parse the standard text format (see SetSystem.to_text).

    Duplicate subset lines are rejected rather than silently merged.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty set-system input")
    try:
        n = int(lines[0])
    except ValueError:
        raise FormatError(f"first line must be the ground size, got {lines[0]!r}") from None
    if not 1 <= n <= MAX_GROUND:
        raise FormatError(f"ground size {n} outside supported range 1..{MAX_GROUND}")
    seen = set()
    masks = []
    for ln in lines[1:]:
        try:
            mask = int(ln, 16)
        except ValueError:
            raise FormatError(f"bad subset mask line {ln!r} (want lowercase hex)") from None
        if mask >= (1 << n) or mask < 0:
            raise FormatError(f"mask {ln!r} out of range for n={n}")
        if mask in seen:
            raise FormatError(f"duplicate subset mask {ln!r}")
        seen.add(mask)
        masks.append(mask)
    return SetSystem(n, masks)


def set_system_from_json(obj) -> SetSystem:
    """Parse the JSON alternative form {"n": int, "sets": [int, ...]}."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad set-system JSON: {exc}") from None
    if not isinstance(obj, dict) or "n" not in obj or "sets" not in obj:
        raise FormatError('set-system JSON must be {"n": int, "sets": [int, ...]}')
    n = obj["n"]
    sets = obj["sets"]
    if not isinstance(n, int) or not isinstance(sets, list):
        raise FormatError('set-system JSON must be {"n": int, "sets": [int, ...]}')
    if not 1 <= n <= MAX_GROUND:
        raise FormatError(f"ground size {n} outside supported range 1..{MAX_GROUND}")
    seen = set()
    for mask in sets:
        if not isinstance(mask, int) or not 0 <= mask < (1 << n):
            raise FormatError(f"mask {mask!r} out of range for n={n}")
        if mask in seen:
            raise FormatError(f"duplicate subset mask {mask}")
        seen.add(mask)
    return SetSystem(n, sets)


def is_upset(family: SetSystem) -> bool:
    """True when the family is closed under taking supersets.

    Checking one-element extensions suffices: any superset is reached by
    adding elements one at a time.
    """
    n = family.n
    flags = family._flags
    for mask in family.masks():
        absent = full_mask(n) ^ mask
        while absent:
            low = absent & -absent
            if not flags[mask | low]:
                return False
            absent ^= low
    return True


def layer_profile(family: SetSystem) -> list[int]:
    """Number of member sets of each size, as a list indexed 0..n."""
    counts = [0] * (family.n + 1)
    for mask in family.masks():
        counts[mask.bit_count()] += 1
    return counts
