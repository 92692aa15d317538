"""Strict partial orders on {1, ..., n} and their chain-counting bridge.

The down-sets of a poset form a set system that contains exactly the
maximal chains corresponding to linear extensions of the poset, and
down-sets are in bijection with antichains (map a down-set to its
maximal elements).  Both correspondences turn poset questions into
set-system questions:

    linear extensions of P  =  maximal chains of downset_family(P)
    antichains of P         =  |downset_family(P)|

``poset_search`` maximises the number of linear extensions over all
posets with a bounded number of antichains, iterating over one canonical
representative per isomorphism class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

from .lattice import FormatError, SetSystem, full_mask
from .counting import count_maximal_chains

SEARCH_MAX_GROUND = 6  # exhaustive isomorphism-class generation
EXTENSION_ORACLE_MAX = 8
ANTICHAIN_ORACLE_MAX = 15


class Poset:
    """Immutable strict partial order, stored transitively closed.

    ``below(x)`` is the mask of elements strictly less than x.  The
    constructor closes the given relation and rejects cycles.
    """

    __slots__ = ("n", "_below")

    def __init__(self, n: int, below: tuple[int, ...], _closed: bool = False):
        if n < 1:
            raise ValueError("poset needs at least one element")
        if len(below) != n:
            raise ValueError("one predecessor mask per element required")
        if not _closed:
            below = _transitive_closure(n, list(below))
        for x in range(n):
            if below[x] >> x & 1:
                raise ValueError(f"relation has a cycle through element {x + 1}")
            if below[x] >> n:
                raise ValueError(f"predecessor mask of element {x + 1} out of range")
        self.n = n
        self._below = tuple(below)

    @classmethod
    def from_relations(cls, n: int, pairs) -> "Poset":
        """Build from strict relations a < b given as 1-based pairs."""
        below = [0] * n
        for a, b in pairs:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"relation {a} < {b} out of range 1..{n}")
            if a == b:
                raise ValueError(f"relation {a} < {a} is reflexive")
            below[b - 1] |= 1 << (a - 1)
        return cls(n, tuple(below))

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(n, (0,) * n, _closed=True)

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls(n, tuple((1 << x) - 1 for x in range(n)), _closed=True)

    @classmethod
    def ordinal_sum_of_antichains(cls, block_sizes) -> "Poset":
        """Stacked antichains: every element of an earlier block lies
        below every element of a later block.  The down-set family of
        this poset is exactly the tower with the same block sizes."""
        sizes = list(block_sizes)
        if not sizes or any(t < 1 for t in sizes):
            raise ValueError("block sizes must be positive")
        below = []
        prefix = 0
        for t in sizes:
            below.extend([prefix] * t)
            prefix |= ((1 << t) - 1) << (prefix.bit_count())
        return cls(len(below), tuple(below), _closed=True)

    def below(self, x: int) -> int:
        """Mask of elements strictly below x (1-based)."""
        return self._below[x - 1]

    def above(self, x: int) -> int:
        """Mask of elements strictly above x (1-based)."""
        bit = 1 << (x - 1)
        mask = 0
        for y in range(self.n):
            if self._below[y] & bit:
                mask |= 1 << y
        return mask

    def less(self, a: int, b: int) -> bool:
        return bool(self._below[b - 1] >> (a - 1) & 1)

    def relation_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        for b in range(self.n):
            rest = self._below[b]
            while rest:
                low = rest & -rest
                pairs.append((low.bit_length(), b + 1))
                rest ^= low
        return pairs

    def relabel(self, new_index: list[int]) -> "Poset":
        """Relabel element x as new_index[x-1] + 1 (0-based targets)."""
        below = [0] * self.n
        for x in range(self.n):
            mask = 0
            rest = self._below[x]
            while rest:
                low = rest & -rest
                mask |= 1 << new_index[low.bit_length() - 1]
                rest ^= low
            below[new_index[x]] = mask
        return Poset(self.n, tuple(below), _closed=True)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.n == other.n and self._below == other._below

    def __hash__(self) -> int:
        return hash((self.n, self._below))

    def __repr__(self) -> str:
        rels = ", ".join(f"{a}<{b}" for a, b in self.relation_pairs())
        return f"Poset(n={self.n}, {{{rels}}})"

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines.extend(f"{a} < {b}" for a, b in self.relation_pairs())
        return "\n".join(lines) + "\n"


def _transitive_closure(n: int, below: list[int]) -> list[int]:
    changed = True
    while changed:
        changed = False
        for x in range(n):
            acc = below[x]
            rest = below[x]
            while rest:
                low = rest & -rest
                acc |= below[low.bit_length() - 1]
                rest ^= low
            if acc != below[x]:
                below[x] = acc
                changed = True
    return below


def parse_poset(text: str) -> Poset:
    """Parse the poset text format: ground size, then lines "a < b"."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty poset input")
    try:
        n = int(lines[0])
    except ValueError:
        raise FormatError(f"first line must be the ground size, got {lines[0]!r}") from None
    pairs = []
    for ln in lines[1:]:
        parts = ln.split("<")
        if len(parts) != 2:
            raise FormatError(f"bad relation line {ln!r} (want 'a < b')")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"bad relation line {ln!r} (want 'a < b')") from None
        pairs.append((a, b))
    try:
        return Poset.from_relations(n, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def downset_family(poset: Poset) -> SetSystem:
    """All down-sets of the poset: subsets closed under going down.

    Always contains the empty set and the full set.  The required lower
    closure of a subset is built by dynamic programming on its lowest
    element.
    """
    n = poset.n
    below = poset._below
    limit = 1 << n
    need = [0] * limit
    members = [0]
    for mask in range(1, limit):
        low = mask & -mask
        need[mask] = need[mask ^ low] | below[low.bit_length() - 1]
        if need[mask] & ~mask == 0:
            members.append(mask)
    return SetSystem(n, members)


def count_linear_extensions(poset: Poset) -> int:
    """Number of order-preserving bijections onto 1 < 2 < ... < n,
    counted as maximal chains of the down-set family."""
    return count_maximal_chains(downset_family(poset))


def count_linear_extensions_oracle(poset: Poset) -> int:
    """Direct check of every permutation; n <= 8."""
    n = poset.n
    if n > EXTENSION_ORACLE_MAX:
        raise ValueError(f"extension oracle limited to n <= {EXTENSION_ORACLE_MAX}")
    below = poset._below
    count = 0
    for perm in permutations(range(n)):
        seen = 0
        for x in perm:
            if below[x] & ~seen:
                break
            seen |= 1 << x
        else:
            count += 1
    return count


def count_antichains(poset: Poset) -> int:
    """Number of antichains, via the bijection with down-sets."""
    return downset_family(poset).size


def count_antichains_oracle(poset: Poset) -> int:
    """Direct enumeration of pairwise-incomparable subsets; n <= 15."""
    n = poset.n
    if n > ANTICHAIN_ORACLE_MAX:
        raise ValueError(f"antichain oracle limited to n <= {ANTICHAIN_ORACLE_MAX}")
    comparable = [poset._below[x] | poset.above(x + 1) for x in range(n)]
    count = 0
    for mask in range(1 << n):
        rest = mask
        ok = True
        while rest:
            low = rest & -rest
            if comparable[low.bit_length() - 1] & mask:
                ok = False
                break
            rest ^= low
        if ok:
            count += 1
    return count


def is_union_intersection_closed(family: SetSystem) -> bool:
    """Utility membership test: closed under pairwise union and
    intersection.  Every down-set family passes; the converse is not
    asserted anywhere."""
    masks = family.masks()
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            if (a | b) not in family or (a & b) not in family:
                return False
    return True


# -- enumeration and canonical forms ---------------------------------------


def natural_posets(n: int):
    """Yield every poset on {1, ..., n} for which the identity order is a
    linear extension, each exactly once.

    Element t's predecessor set may be any down-set of the poset built so
    far; every isomorphism class appears (relabel along any linear
    extension), so this is the iteration base for the class search.
    """
    below = [0] * n

    def rec(t: int):
        if t == n:
            yield Poset(n, tuple(below), _closed=True)
            return
        for cand in range(1 << t):
            ok = True
            rest = cand
            while rest:
                low = rest & -rest
                if below[low.bit_length() - 1] & ~cand:
                    ok = False
                    break
                rest ^= low
            if ok:
                below[t] = cand
                yield from rec(t + 1)
        below[t] = 0

    yield from rec(0)


def all_labeled_posets(n: int):
    """Yield every labeled poset on {1, ..., n} (exhaustive; n <= 4).

    Iterates over all predecessor-mask assignments and keeps the
    transitively closed acyclic ones.
    """
    if n > 4:
        raise ValueError("labeled enumeration limited to n <= 4")
    limit = 1 << n
    for assignment in product(range(limit), repeat=n):
        ok = True
        for x in range(n):
            if assignment[x] >> x & 1:
                ok = False
                break
            rest = assignment[x]
            while rest:
                low = rest & -rest
                if assignment[low.bit_length() - 1] & ~assignment[x]:
                    ok = False
                    break
                rest ^= low
            if not ok:
                break
        if ok:
            yield Poset(n, assignment, _closed=True)


def canonical_key(poset: Poset) -> tuple[int, ...]:
    """Isomorphism-invariant key: the lexicographically least relation
    encoding over relabelings that respect the (in-degree, out-degree)
    classes.

    Any isomorphism preserves those degrees, so minimising over
    degree-respecting relabelings equals minimising over all of them.
    """
    n = poset.n
    degrees = [
        (poset._below[x].bit_count(), poset.above(x + 1).bit_count()) for x in range(n)
    ]
    order = sorted(range(n), key=lambda x: degrees[x])
    classes: list[list[int]] = []
    for x in order:
        if classes and degrees[classes[-1][0]] == degrees[x]:
            classes[-1].append(x)
        else:
            classes.append([x])

    best: tuple[int, ...] | None = None
    below = poset._below
    for perms_choice in product(*(permutations(cls) for cls in classes)):
        new_index = [0] * n
        pos = 0
        for cls_perm in perms_choice:
            for x in cls_perm:
                new_index[x] = pos
                pos += 1
        encoded = [0] * n
        for x in range(n):
            mask = 0
            rest = below[x]
            while rest:
                low = rest & -rest
                mask |= 1 << new_index[low.bit_length() - 1]
                rest ^= low
            encoded[new_index[x]] = mask
        key = tuple(encoded)
        if best is None or key < best:
            best = key
    assert best is not None
    return best


def canonical_form(poset: Poset) -> Poset:
    return Poset(poset.n, canonical_key(poset), _closed=True)


@dataclass
class PosetSearchReport:
    """Exact maximum of linear extensions under an antichain budget."""

    n: int
    m: int
    max_extensions: int
    witnesses: list[Poset] = field(default_factory=list)
    witness_count: int = 0
    classes_total: int = 0
    classes_within_budget: int = 0

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "max_extensions": str(self.max_extensions),
            "witnesses": [
                {"n": w.n, "relations": w.relation_pairs()} for w in self.witnesses
            ],
            "witness_count": self.witness_count,
            "classes_total": self.classes_total,
            "classes_within_budget": self.classes_within_budget,
        }


def poset_classes(n: int) -> dict[tuple[int, ...], Poset]:
    """One canonical representative per isomorphism class."""
    classes: dict[tuple[int, ...], Poset] = {}
    for poset in natural_posets(n):
        key = canonical_key(poset)
        if key not in classes:
            classes[key] = Poset(n, key, _closed=True)
    return classes


def poset_search(n: int, m: int, witness_cap: int = 100, workers: int = 1) -> PosetSearchReport:
    """Maximise linear extensions over posets with at most m antichains.

    Iterates one canonical representative per isomorphism class (both
    counts are isomorphism invariants).  When no poset fits the budget
    (every poset on n elements has at least n + 1 antichains) the report
    carries max 0 and no witnesses.
    """
    if n > SEARCH_MAX_GROUND:
        raise ValueError(f"poset search limited to n <= {SEARCH_MAX_GROUND}")
    if workers > 1:
        results = _poset_counts_parallel(n, workers)
    else:
        results = [
            (key, count_antichains(p), count_linear_extensions(p))
            for key, p in sorted(poset_classes(n).items())
        ]
    report = PosetSearchReport(n=n, m=m, max_extensions=0)
    report.classes_total = len(results)
    for key, antichains, extensions in results:
        if antichains > m:
            continue
        report.classes_within_budget += 1
        if extensions > report.max_extensions:
            report.max_extensions = extensions
            report.witnesses = [Poset(n, key, _closed=True)]
            report.witness_count = 1
        elif extensions == report.max_extensions and extensions > 0:
            report.witness_count += 1
            if len(report.witnesses) < witness_cap:
                report.witnesses.append(Poset(n, key, _closed=True))
    return report


def _poset_chunk_worker(args: tuple[int, int, int]):
    n, stride, offset = args
    out = []
    for idx, poset in enumerate(natural_posets(n)):
        if idx % stride != offset:
            continue
        key = canonical_key(poset)
        out.append((key, count_antichains(poset), count_linear_extensions(poset)))
    return out


def _poset_counts_parallel(n: int, workers: int):
    import multiprocessing as mp

    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        chunks = pool.map(_poset_chunk_worker, [(n, workers, w) for w in range(workers)])
    merged: dict[tuple[int, ...], tuple[int, int]] = {}
    for chunk in chunks:
        for key, antichains, extensions in chunk:
            merged[key] = (antichains, extensions)
    return [(key, a, e) for key, (a, e) in sorted(merged.items())]
