"""Exact maximisation of the chain count over set systems of a given size.

The search enumerates size-m families in a canonical order (candidate
sets sorted by (size, mask), each partial family extended only with
candidates after its last member) so that every family is generated once.
By default it restricts to left-compressed families containing the empty
and the full set: compressing preserves size and never loses chains, and
no family without the endpoints has a chain, so the restriction is
value-preserving whenever the maximum is positive.  Left-compression is
enforced incrementally: all strict compression images of a set are
numerically smaller sets of the same size, hence earlier in the
canonical order, so a candidate is admissible exactly when its images
are already chosen.

Pruning uses the layer bound applied to the best conceivable completion:
each layer is topped up greedily with the remaining budget.  Subtrees are
pruned only when that optimistic bound is strictly below the incumbent
(or below 1), so every optimal family survives and the witness list is
exhaustive up to its cap.

Determinism: the search splits into top-level branches (the first chosen
candidate), each explored with an isolated incumbent, and merges branch
results in canonical order.  Values, witnesses, witness counts, and node
counts are therefore identical for any worker count, and a checkpoint of
completed branches can resume without changing anything.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

from .compression import compression_partners
from .counting import count_maximal_chains
from .lattice import SetSystem, full_mask
from .towers import best_small_block_tower, tower_chain_count, tower_of_cubes

SEARCH_MAX_GROUND = 7
CHECKPOINT_KIND = "chainmax-search-checkpoint"


@dataclass(frozen=True)
class SearchOptions:
    restrict_compressed: bool = True  # left-compressed + endpoints normal form
    witness_cap: int = 100
    workers: int = 1
    allow_large: bool = False
    checkpoint_path: str | None = None
    checkpoint_interval: float = 0.0  # min seconds between writes; 0 = every branch
    stop_after_branches: int | None = None  # partial run; resume via checkpoint


@dataclass
class SearchReport:
    n: int
    m: int
    max_chains: int
    witnesses: list[tuple[int, ...]] = field(default_factory=list)  # mask tuples
    witness_count: int = 0
    nodes_explored: int = 0
    restricted_compressed: bool = True
    endpoints_required: bool = True
    two_per_layer: bool = False
    complete: bool = True

    def witness_systems(self) -> list[SetSystem]:
        return [SetSystem(self.n, masks) for masks in self.witnesses]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "max_chains": str(self.max_chains),
            "witnesses": [list(masks) for masks in self.witnesses],
            "witness_count": str(self.witness_count),
            "nodes_explored": self.nodes_explored,
            "restricted_compressed": self.restricted_compressed,
            "endpoints_required": self.endpoints_required,
            "two_per_layer": self.two_per_layer,
            "complete": self.complete,
        }


# -- shared per-(n, mode) context ------------------------------------------


@lru_cache(maxsize=32)
def _search_context(n: int, restricted: bool):
    """Candidate pool in canonical (size, mask) order, per-candidate
    compression images as pool-membership masks, and per-position suffix
    layer counts for the pruning bound."""
    if restricted:
        pool = [m for m in range(1, full_mask(n))]
        forced = (0, full_mask(n))
    else:
        pool = list(range(1 << n))
        forced = ()
    pool.sort(key=lambda m: (m.bit_count(), m))
    position = {m: i for i, m in enumerate(pool)}
    partners: list[tuple[int, ...]] = []
    if restricted:
        for m in pool:
            partners.append(tuple(position[p] for p in compression_partners(m, n)))
    else:
        partners = [()] * len(pool)
    # suffix[i][r]: candidates of size r at positions >= i
    suffix = [[0] * (n + 1) for _ in range(len(pool) + 1)]
    for i in range(len(pool) - 1, -1, -1):
        row = suffix[i]
        nxt = suffix[i + 1]
        for r in range(n + 1):
            row[r] = nxt[r]
        row[pool[i].bit_count()] += 1
    facts = [factorial(r) * factorial(n - r) for r in range(n + 1)]
    return pool, forced, tuple(partners), suffix, facts


class _Accumulator:
    __slots__ = ("best", "witnesses", "count", "nodes", "cap")

    def __init__(self, cap: int):
        self.best = 0
        self.witnesses: list[tuple[int, ...]] = []
        self.count = 0
        self.nodes = 0
        self.cap = cap


def _count_masked(n: int, flags: bytearray) -> int:
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


def _explore_branch(n: int, m: int, restricted: bool, witness_cap: int, branch_pos: int) -> dict:
    """DFS below one fixed first candidate, with an isolated incumbent."""
    pool, forced, partners, suffix, facts = _search_context(n, restricted)
    budget_total = m - len(forced)
    acc = _Accumulator(witness_cap)

    flags = bytearray(1 << n)
    layer = [0] * (n + 1)
    for mask in forced:
        flags[mask] = 1
        layer[mask.bit_count()] += 1
    chosen: list[int] = []
    chosen_pos: set[int] = set()

    def upper_bound(start: int, budget: int) -> int:
        row = suffix[start]
        best = None
        for r in range(n + 1):
            avail = layer[r] + min(budget, row[r])
            v = avail * facts[r]
            if best is None or v < best:
                best = v
                if best == 0:
                    break
        return best

    def evaluate():
        acc.nodes += 1
        chains = _count_masked(n, flags)
        if chains < 1:
            return
        if chains > acc.best:
            acc.best = chains
            acc.witnesses = [tuple(sorted(forced + tuple(chosen)))]
            acc.count = 1
        elif chains == acc.best:
            acc.count += 1
            if len(acc.witnesses) < acc.cap:
                acc.witnesses.append(tuple(sorted(forced + tuple(chosen))))

    def admit(pos: int) -> bool:
        for p in partners[pos]:
            if p not in chosen_pos:
                return False
        return True

    def extend(start: int, budget: int):
        if budget == 0:
            evaluate()
            return
        for pos in range(start, len(pool) - budget + 1):
            if restricted and not admit(pos):
                continue
            mask = pool[pos]
            acc.nodes += 1
            flags[mask] = 1
            layer[mask.bit_count()] += 1
            chosen.append(mask)
            chosen_pos.add(pos)
            if upper_bound(pos + 1, budget - 1) >= max(acc.best, 1):
                extend(pos + 1, budget - 1)
            chosen_pos.discard(pos)
            chosen.pop()
            layer[mask.bit_count()] -= 1
            flags[mask] = 0

    if budget_total == 0:
        evaluate()
    else:
        pos = branch_pos
        if not (restricted and not admit(pos)):
            mask = pool[pos]
            acc.nodes += 1
            flags[mask] = 1
            layer[mask.bit_count()] += 1
            chosen.append(mask)
            chosen_pos.add(pos)
            if upper_bound(pos + 1, budget_total - 1) >= 1:
                extend(pos + 1, budget_total - 1)
            chosen_pos.discard(pos)
            chosen.pop()
            layer[mask.bit_count()] -= 1
            flags[mask] = 0

    return {
        "best": acc.best,
        "witnesses": [list(w) for w in acc.witnesses],
        "count": acc.count,
        "nodes": acc.nodes,
    }


def _branch_worker(args: tuple[int, int, bool, int, int]) -> dict:
    n, m, restricted, witness_cap, branch_pos = args
    return _explore_branch(n, m, restricted, witness_cap, branch_pos)


# -- checkpointing ----------------------------------------------------------


def _checkpoint_payload(n: int, m: int, restricted: bool, witness_cap: int) -> dict:
    return {
        "kind": CHECKPOINT_KIND,
        "version": 1,
        "n": n,
        "m": m,
        "restricted": restricted,
        "witness_cap": witness_cap,
    }


def _load_checkpoint(path: str, expect: dict) -> list[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    for key, value in expect.items():
        if data.get(key) != value:
            raise ValueError(
                f"checkpoint {path} was written for different parameters "
                f"({key}={data.get(key)!r}, expected {value!r})"
            )
    return data["branches"]


def _write_checkpoint(path: str, expect: dict, branches: list[dict]) -> None:
    data = dict(expect)
    data["branches"] = branches
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


# -- top-level search --------------------------------------------------------


def max_chains(n: int, m: int, options: SearchOptions | None = None) -> SearchReport:
    """Exact maximum of the chain count over families of size m, with all
    optimal families collected up to the witness cap.

    With the default restriction the enumeration covers left-compressed
    families containing both endpoints; the reported value equals the
    unrestricted maximum whenever that maximum is positive.  Families too
    small to hold a chain (m < n + 1) report maximum 0 with no witnesses.
    """
    opts = options or SearchOptions()
    if not 0 <= m <= (1 << n):
        raise ValueError(f"family size {m} out of range 0..2^{n}")
    if n > SEARCH_MAX_GROUND and not opts.allow_large:
        raise ValueError(
            f"search limited to n <= {SEARCH_MAX_GROUND} (pass allow_large to override)"
        )
    restricted = opts.restrict_compressed
    report = SearchReport(
        n=n,
        m=m,
        max_chains=0,
        restricted_compressed=restricted,
        endpoints_required=restricted,
    )
    if m < n + 1:
        return report

    pool, forced, _, _, _ = _search_context(n, restricted)
    budget = m - len(forced)
    if budget < 0 or budget > len(pool):
        return report
    if budget == 0:
        branches = [0]
    else:
        branches = list(range(0, len(pool) - budget + 1))

    expect = _checkpoint_payload(n, m, restricted, opts.witness_cap)
    done: list[dict] = []
    if opts.checkpoint_path and os.path.exists(opts.checkpoint_path):
        done = _load_checkpoint(opts.checkpoint_path, expect)
    remaining = branches[len(done) :]
    if opts.stop_after_branches is not None:
        remaining = remaining[: opts.stop_after_branches]

    if opts.workers > 1 and remaining:
        import multiprocessing as mp

        ctx = mp.get_context("fork")
        with ctx.Pool(opts.workers) as pool_proc:
            fresh = pool_proc.map(
                _branch_worker,
                [(n, m, restricted, opts.witness_cap, b) for b in remaining],
            )
        done = done + list(fresh)
        if opts.checkpoint_path:
            _write_checkpoint(opts.checkpoint_path, expect, done)
    else:
        last_write = 0.0
        for b in remaining:
            done.append(_explore_branch(n, m, restricted, opts.witness_cap, b))
            if opts.checkpoint_path:
                now = time.monotonic()
                if now - last_write >= opts.checkpoint_interval:
                    _write_checkpoint(opts.checkpoint_path, expect, done)
                    last_write = now
        if opts.checkpoint_path:
            _write_checkpoint(opts.checkpoint_path, expect, done)

    report.complete = len(done) == len(branches)
    report.nodes_explored = sum(r["nodes"] for r in done)
    best = max((r["best"] for r in done), default=0)
    if best < 1:
        return report
    report.max_chains = best
    for r in done:
        if r["best"] == best:
            report.witness_count += r["count"]
            for w in r["witnesses"]:
                if len(report.witnesses) < opts.witness_cap:
                    report.witnesses.append(tuple(w))
    return report


# -- derived verifications ----------------------------------------------------


@dataclass
class DoublingBoundReport:
    """Spot check of c(A) <= 2^(|A| - (n+1)) for families with a chain."""

    n: int
    samples: int
    checked: int
    nonzero: int
    violations: list[tuple[int, ...]] = field(default_factory=list)
    tight: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_t2_bound(n: int, samples: int, seed: int = 0) -> DoublingBoundReport:
    """Sample families and check c(A) * 2^(n+1) <= 2^|A| exactly whenever
    c(A) >= 1 (families without a chain satisfy the bound trivially).

    Fixing one chain of a family, any further chain is determined by the
    set of its members outside the fixed chain, so there are at most
    2^(|A| - (n+1)) chains in total.  Tight cases (single chains, towers
    of 2-blocks) are collected for the report.
    """
    from random import Random

    if n > 8:
        raise ValueError("sampling verification limited to n <= 8")
    from .sampling import random_mixed_system

    rng = Random(seed)
    report = DoublingBoundReport(n=n, samples=samples, checked=0, nonzero=0)
    for _ in range(samples):
        system = random_mixed_system(n, rng)
        chains = count_maximal_chains(system)
        report.checked += 1
        if chains < 1:
            continue
        report.nonzero += 1
        lhs = chains << (n + 1)
        rhs = 1 << system.size
        if lhs > rhs:
            report.violations.append(system.masks())
        elif lhs == rhs and len(report.tight) < 10:
            report.tight.append(system.masks())
    return report


@dataclass
class TowerConjectureReport:
    n: int
    t: int
    tower_size: int
    tower_chains: int
    method: str  # "doubling-bound" or "search"
    max_found: int
    confirmed: bool
    search: SearchReport | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "n": self.n,
            "t": self.t,
            "tower_size": self.tower_size,
            "tower_chains": str(self.tower_chains),
            "method": self.method,
            "max_found": str(self.max_found),
            "confirmed": self.confirmed,
        }
        if self.search is not None:
            obj["search"] = self.search.to_json_obj()
        return obj


def verify_tower_conjecture(n: int, t: int, options: SearchOptions | None = None) -> TowerConjectureReport:
    """Is the uniform tower of t-blocks chain-maximal among families of
    its size?  For t = 2 the doubling bound already pins the maximum
    (c(T) = 2^(n/2) = 2^(|T| - (n+1)) exactly); otherwise run the search.
    """
    if n % t:
        raise ValueError(f"block size {t} does not divide {n}")
    tower = tower_of_cubes(n, t)
    chains = count_maximal_chains(tower)
    expected = tower_chain_count([t] * (n // t))
    if chains != expected:
        raise AssertionError(f"tower chain count {chains} != closed form {expected}")
    size = tower.size
    if t == 2:
        bound = 1 << (size - (n + 1))
        return TowerConjectureReport(
            n=n,
            t=t,
            tower_size=size,
            tower_chains=chains,
            method="doubling-bound",
            max_found=bound,
            confirmed=chains == bound,
        )
    search = max_chains(n, size, options)
    return TowerConjectureReport(
        n=n,
        t=t,
        tower_size=size,
        tower_chains=chains,
        method="search",
        max_found=search.max_chains,
        confirmed=search.max_chains == chains,
        search=search,
    )


@dataclass
class TwoPerLayerReport:
    """Best left-compressed family with exactly two sets per inner layer,
    compared against the closest 2/3-block tower of at most the same size."""

    n: int
    size: int
    max_chains: int
    witnesses: list[tuple[int, ...]] = field(default_factory=list)
    witness_count: int = 0
    candidates_examined: int = 0
    tower_blocks: tuple[int, ...] | None = None
    tower_size: int | None = None
    tower_chains: int | None = None
    tower_size_matches: bool = False

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "max_chains": str(self.max_chains),
            "witnesses": [list(w) for w in self.witnesses],
            "witness_count": str(self.witness_count),
            "candidates_examined": self.candidates_examined,
            "tower_blocks": list(self.tower_blocks) if self.tower_blocks else None,
            "tower_size": self.tower_size,
            "tower_chains": None if self.tower_chains is None else str(self.tower_chains),
            "tower_size_matches": self.tower_size_matches,
        }


def two_per_layer_search(n: int, witness_cap: int = 100) -> TwoPerLayerReport:
    """Exact maximum over left-compressed families with both endpoints and
    exactly two sets in every layer 1..n-1 (total size 2n).

    Compression images stay within their layer, so the layer choices are
    independent: each layer contributes an unordered pair closed under
    left compression, and the search takes the product of the per-layer
    pair choices.  The report compares against the most chain-rich tower
    of 2- and 3-blocks of at most the same size (an exact size match
    exists only when n = 2 mod 5, so the comparison carries the realised
    tower size).
    """
    if n < 2:
        raise ValueError("two-per-layer search needs n >= 2")
    report = TwoPerLayerReport(n=n, size=2 * n, max_chains=0)

    by_layer: list[list[tuple[int, int]]] = []
    for r in range(1, n):
        layer_masks = [m for m in range(1 << n) if m.bit_count() == r]
        pairs = []
        for i, a in enumerate(layer_masks):
            for b in layer_masks[i + 1 :]:
                pair = {a, b}
                if all(
                    img in pair
                    for s in pair
                    for img in compression_partners(s, n)
                ):
                    pairs.append((a, b))
        if not pairs:
            return report  # no left-compressed pair at this layer; nothing to search
        by_layer.append(pairs)

    flags_template = [0, full_mask(n)]

    def evaluate(choice: list[tuple[int, int]]):
        members = list(flags_template)
        for a, b in choice:
            members.append(a)
            members.append(b)
        system = SetSystem(n, members)
        chains = count_maximal_chains(system)
        report.candidates_examined += 1
        if chains < 1:
            return
        if chains > report.max_chains:
            report.max_chains = chains
            report.witnesses = [system.masks()]
            report.witness_count = 1
        elif chains == report.max_chains:
            report.witness_count += 1
            if len(report.witnesses) < witness_cap:
                report.witnesses.append(system.masks())

    def product_layers(idx: int, choice: list[tuple[int, int]]):
        if idx == len(by_layer):
            evaluate(choice)
            return
        for pair in by_layer[idx]:
            choice.append(pair)
            product_layers(idx + 1, choice)
            choice.pop()

    product_layers(0, [])

    tower = best_small_block_tower(n, 2 * n)
    if tower is not None:
        report.tower_blocks = tower.block_sizes
        report.tower_size = tower.size
        report.tower_chains = tower.chains
        report.tower_size_matches = tower.size_matches_budget
    return report
