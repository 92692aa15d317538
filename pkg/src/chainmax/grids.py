"""Monotone chains in the grid {1, ..., k}^n.

A maximal chain is a walk of n(k-1) + 1 points from (1, ..., 1) to
(k, ..., k) that raises one coordinate by one per step, i.e. a shortest
path in the directed grid graph.  For k = 2 the grid is the Boolean cube
and the count coincides with the subset-lattice chain count.

Counting restricted to a cell subset is the same one-pass recurrence as
in the lattice: paths(v) = sum over coordinates of paths(v - e_i), taken
in ascending index order (cells are indexed mixed-radix, coordinate 1
least significant, so predecessors always have smaller indices).

The anti-diagonal bound transplants the layer bound: every maximal chain
meets each coordinate-sum level exactly once, and the number of full-grid
chains through a point is a product of two multinomial coefficients, so
each level bounds the restricted count.  It is validated against exact
counts in the tests before the search trusts it for pruning.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterable, Iterator

from .lattice import FormatError

GRID_SEARCH_MAX_SIDE = 5
PATH_ORACLE_MAX_SIDE = 10


class GridSystem:
    """A subset of the grid {1, ..., k}^n with dense membership flags."""

    __slots__ = ("k", "n", "_flags", "_cells")

    def __init__(self, k: int, n: int, cells: Iterable[int] = ()):
        if k < 1 or n < 1:
            raise ValueError("grid needs side >= 1 and dimension >= 1")
        limit = k**n
        if limit > (1 << 24):
            raise ValueError(f"grid with {limit} cells exceeds the memory guard")
        flags = bytearray(limit)
        for c in cells:
            if not 0 <= c < limit:
                raise ValueError(f"cell index {c} out of range for {k}^{n}")
            flags[c] = 1
        self.k = k
        self.n = n
        self._flags = flags
        self._cells = tuple(c for c in range(limit) if flags[c])

    @classmethod
    def full(cls, k: int, n: int) -> "GridSystem":
        return cls(k, n, range(k**n))

    @classmethod
    def from_points(cls, k: int, n: int, points: Iterable[tuple[int, ...]]) -> "GridSystem":
        return cls(k, n, (cell_index(p, k) for p in points))

    @property
    def size(self) -> int:
        return len(self._cells)

    def cells(self) -> tuple[int, ...]:
        return self._cells

    def points(self) -> list[tuple[int, ...]]:
        return [cell_point(c, self.k, self.n) for c in self._cells]

    def __contains__(self, cell: int) -> bool:
        return 0 <= cell < self.k**self.n and bool(self._flags[cell])

    def __iter__(self) -> Iterator[int]:
        return iter(self._cells)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GridSystem)
            and (self.k, self.n) == (other.k, other.n)
            and self._cells == other._cells
        )

    def __hash__(self) -> int:
        return hash((self.k, self.n, self._cells))

    def __repr__(self) -> str:
        return f"GridSystem(k={self.k}, n={self.n}, size={self.size})"

    def to_text(self) -> str:
        lines = [f"{self.k} {self.n}"]
        lines.extend(" ".join(map(str, p)) for p in self.points())
        return "\n".join(lines) + "\n"


def cell_index(point: tuple[int, ...], k: int) -> int:
    """Mixed-radix index of a point, coordinate 1 least significant."""
    idx = 0
    for coord in reversed(point):
        if not 1 <= coord <= k:
            raise ValueError(f"coordinate {coord} out of range 1..{k}")
        idx = idx * k + (coord - 1)
    return idx


def cell_point(index: int, k: int, n: int) -> tuple[int, ...]:
    coords = []
    for _ in range(n):
        coords.append(index % k + 1)
        index //= k
    return tuple(coords)


def parse_grid(text: str) -> GridSystem:
    """Parse the grid text format: "k n", then one point per line."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty grid input")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"first line must be 'k n', got {lines[0]!r}")
    try:
        k, n = int(head[0]), int(head[1])
    except ValueError:
        raise FormatError(f"first line must be 'k n', got {lines[0]!r}") from None
    points = []
    for ln in lines[1:]:
        try:
            coords = tuple(int(tok) for tok in ln.split())
        except ValueError:
            raise FormatError(f"bad point line {ln!r}") from None
        if len(coords) != n:
            raise FormatError(f"point {ln!r} has {len(coords)} coordinates, expected {n}")
        points.append(coords)
    try:
        return GridSystem.from_points(k, n, points)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def count_grid_chains(grid: GridSystem) -> int:
    """Exact number of maximal chains using only cells of the grid subset."""
    k, n = grid.k, grid.n
    flags = grid._flags
    if not flags[0]:
        return 0
    limit = k**n
    strides = [k**i for i in range(n)]
    paths = [0] * limit
    paths[0] = 1
    for idx in range(1, limit):
        if not flags[idx]:
            continue
        total = 0
        rem = idx
        for i in range(n):
            digit = rem % k
            rem //= k
            if digit:
                total += paths[idx - strides[i]]
        paths[idx] = total
    return paths[limit - 1]


def count_grid_chains_oracle(grid: GridSystem) -> int:
    """For two-dimensional grids: enumerate every monotone path of the
    full grid and test cell containment.  Independent of the recurrence.
    """
    if grid.n != 2:
        raise ValueError("path-enumeration oracle is two-dimensional only")
    k = grid.k
    if k > PATH_ORACLE_MAX_SIDE:
        raise ValueError(f"path oracle limited to k <= {PATH_ORACLE_MAX_SIDE}")
    flags = grid._flags
    steps = 2 * (k - 1)
    count = 0
    for rights in itertools.combinations(range(steps), k - 1):
        rights = set(rights)
        x, y = 1, 1
        if not flags[cell_index((x, y), k)]:
            continue
        ok = True
        for s in range(steps):
            if s in rights:
                x += 1
            else:
                y += 1
            if not flags[cell_index((x, y), k)]:
                ok = False
                break
        if ok:
            count += 1
    return count


def chains_through(point: tuple[int, ...], k: int) -> int:
    """Number of full-grid maximal chains through a point: monotone paths
    into it times monotone paths out of it (multinomial coefficients)."""
    down = [c - 1 for c in point]
    up = [k - c for c in point]
    return _multinomial(down) * _multinomial(up)


def _multinomial(parts: list[int]) -> int:
    total = sum(parts)
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def antidiagonal_bound(grid: GridSystem) -> int:
    """Upper bound on the chain count: min over coordinate-sum levels of
    the full-grid chains through the subset's cells at that level."""
    k, n = grid.k, grid.n
    level_sum: dict[int, int] = {s: 0 for s in range(n, n * k + 1)}
    for idx in grid.cells():
        point = cell_point(idx, k, n)
        level_sum[sum(point)] += chains_through(point, k)
    return min(level_sum.values())


@dataclass
class GridSearchReport:
    """Exact maximum of the chain count over m-cell subsets of [k]^2."""

    k: int
    m: int
    max_chains: int
    witnesses: list[tuple[int, ...]] = field(default_factory=list)  # sorted cell tuples
    witness_count: int = 0
    nodes_explored: int = 0
    complete: bool = True

    def witness_points(self) -> list[list[tuple[int, int]]]:
        return [[cell_point(c, self.k, 2) for c in cells] for cells in self.witnesses]

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "max_chains": str(self.max_chains),
            "witnesses": [
                [list(cell_point(c, self.k, 2)) for c in cells] for cells in self.witnesses
            ],
            "witness_count": str(self.witness_count),
            "nodes_explored": self.nodes_explored,
            "complete": self.complete,
        }


def _transpose_cells(cells: Iterable[int], k: int) -> tuple[int, ...]:
    out = []
    for c in cells:
        x, y = cell_point(c, k, 2)
        out.append(cell_index((y, x), k))
    return tuple(sorted(out))


class _GridAccumulator:
    __slots__ = ("best", "witnesses", "count", "nodes", "cap")

    def __init__(self, cap: int):
        self.best = 0
        self.witnesses: list[tuple[int, ...]] = []
        self.count = 0
        self.nodes = 0
        self.cap = cap


def _grid_count_masked(k: int, flags: bytearray) -> int:
    limit = k * k
    if not flags[0]:
        return 0
    paths = [0] * limit
    paths[0] = 1
    for idx in range(1, limit):
        if not flags[idx]:
            continue
        total = 0
        if idx % k:
            total += paths[idx - 1]
        if idx >= k:
            total += paths[idx - k]
        paths[idx] = total
    return paths[limit - 1]


def _grid_upper_bound(
    k: int,
    chosen_level: list[int],
    pool: list[int],
    through: list[int],
    start: int,
    budget: int,
) -> int:
    """Budget-aware anti-diagonal bound: chosen cells plus the best
    conceivable placement of the remaining budget on each level."""
    per_level: dict[int, list[int]] = {}
    for pos in range(start, len(pool)):
        idx = pool[pos]
        s = idx % k + idx // k
        per_level.setdefault(s, []).append(through[idx])
    best = None
    for s in range(2 * k - 1):
        total = chosen_level[s]
        extra = per_level.get(s)
        if extra and budget:
            extra.sort(reverse=True)
            total += sum(extra[:budget])
        if best is None or total < best:
            best = total
        if best == 0:
            break
    return best if best is not None else 0


def _grid_branch(k: int, m: int, witness_cap: int, branch_pos: int) -> dict:
    """Explore one top-level branch (first free cell fixed); returns the
    branch-local optimum.  Branches are isolated so that results do not
    depend on execution order or worker count."""
    limit = k * k
    corner_a, corner_b = 0, limit - 1
    pool = [c for c in range(limit) if c not in (corner_a, corner_b)]
    through = [chains_through(cell_point(c, k, 2), k) for c in range(limit)]

    acc = _GridAccumulator(witness_cap)
    flags = bytearray(limit)
    flags[corner_a] = 1
    flags[corner_b] = 1
    chosen: list[int] = []
    chosen_level = [0] * (2 * k - 1)
    for c in (corner_a, corner_b):
        chosen_level[c % k + c // k] += through[c]

    def evaluate():
        acc.nodes += 1
        cells = tuple(sorted([corner_a, corner_b] + chosen))
        mirrored = _transpose_cells(cells, k)
        if mirrored < cells:
            return  # the mirrored twin's branch reports this pair
        chains = _grid_count_masked(k, flags)
        if chains < 1:
            return
        found = [cells] if mirrored == cells else [cells, mirrored]
        if chains > acc.best:
            acc.best = chains
            acc.witnesses = list(found[: acc.cap])
            acc.count = len(found)
        elif chains == acc.best:
            acc.count += len(found)
            for w in found:
                if len(acc.witnesses) < acc.cap:
                    acc.witnesses.append(w)

    def extend(start: int, budget: int):
        if budget == 0:
            evaluate()
            return
        for pos in range(start, len(pool) - budget + 1):
            idx = pool[pos]
            acc.nodes += 1
            flags[idx] = 1
            chosen.append(idx)
            level = idx % k + idx // k
            chosen_level[level] += through[idx]
            bound = _grid_upper_bound(k, chosen_level, pool, through, pos + 1, budget - 1)
            if bound >= max(acc.best, 1):
                extend(pos + 1, budget - 1)
            chosen_level[level] -= through[idx]
            chosen.pop()
            flags[idx] = 0

    budget = m - 2
    if budget == 0:
        evaluate()
    else:
        idx = pool[branch_pos]
        acc.nodes += 1
        flags[idx] = 1
        chosen.append(idx)
        level = idx % k + idx // k
        chosen_level[level] += through[idx]
        bound = _grid_upper_bound(k, chosen_level, pool, through, branch_pos + 1, budget - 1)
        if bound >= 1:
            extend(branch_pos + 1, budget - 1)
        chosen_level[level] -= through[idx]
        chosen.pop()
        flags[idx] = 0

    return {
        "best": acc.best,
        "witnesses": acc.witnesses,
        "count": acc.count,
        "nodes": acc.nodes,
    }


def _grid_branch_worker(args: tuple[int, int, int, int]) -> dict:
    k, m, witness_cap, branch_pos = args
    return _grid_branch(k, m, witness_cap, branch_pos)


def grid_max_chains(
    k: int,
    m: int,
    witness_cap: int = 100,
    workers: int = 1,
    allow_large: bool = False,
) -> GridSearchReport:
    """Exact maximum of the chain count over all m-cell subsets of the
    k-by-k grid, with every optimal subset collected (up to the cap).

    Any subset with at least one chain contains both corners, so they
    are forced and the search branches over the remaining cells in index
    order.  The transpose is the only chain-preserving symmetry of the
    directed grid; each unordered {subset, transpose} pair is evaluated
    once and both members are reported.
    """
    if k > GRID_SEARCH_MAX_SIDE and not allow_large:
        raise ValueError(
            f"grid search limited to k <= {GRID_SEARCH_MAX_SIDE} (pass allow_large to override)"
        )
    limit = k * k
    if not 0 <= m <= limit:
        raise ValueError(f"subset size {m} out of range 0..{limit}")
    report = GridSearchReport(k=k, m=m, max_chains=0)
    if m < 2 * k - 1 and not (k == 1 and m == 1):
        return report  # no room for a full chain; maximum is 0
    if k == 1:
        report.max_chains = 1
        report.witnesses = [(0,)]
        report.witness_count = 1
        report.nodes_explored = 1
        return report

    budget = m - 2
    if budget == 0:
        branches = [0]
    else:
        branches = list(range(0, (limit - 2) - budget + 1))

    if workers > 1 and budget > 0:
        import multiprocessing as mp

        ctx = mp.get_context("fork")
        with ctx.Pool(workers) as pool_proc:
            results = pool_proc.map(
                _grid_branch_worker, [(k, m, witness_cap, b) for b in branches]
            )
    else:
        results = [_grid_branch(k, m, witness_cap, b) for b in branches]

    best = max((r["best"] for r in results), default=0)
    report.nodes_explored = sum(r["nodes"] for r in results)
    if best < 1:
        return report
    report.max_chains = best
    witnesses: list[tuple[int, ...]] = []
    count = 0
    for r in results:
        if r["best"] == best:
            witnesses.extend(r["witnesses"])
            count += r["count"]
    witnesses.sort()
    report.witnesses = witnesses[:witness_cap]
    report.witness_count = count
    return report


def full_grid_chain_count(k: int, n: int = 2) -> int:
    """Closed form for the full grid; for n = 2 this is C(2k-2, k-1)."""
    if n == 2:
        return comb(2 * k - 2, k - 1)
    return _multinomial([k - 1] * n)
