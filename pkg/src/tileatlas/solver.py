"""Backtracking search for valid patches and torus tilings.

Cells are filled in scan order.  Every facet-sharing pair of cells (including
torus wrap pairs) is checked exactly once, when the later cell of the pair is
placed, so a complete assignment needs no further facet checks — found
patches are still re-verified independently before being returned.

Two search targets:

* facet mode (`solve`): placements of a coloured tile set under its facet
  rule;
* atlas mode (`solve_atlas`): placements of a reduced set's representatives.
  Candidates are the encoding's (representative, orientation) image pairs,
  constrained by the decoded source tiles' facet rule; found patches are
  additionally checked corona-by-corona against a materialized atlas when
  one is supplied.

With a seed, each cell's candidate order is shuffled up front, so the first
solution found is a reproducible pseudo-random patch.  `parallel` splits the
first cell's candidates over worker threads; results are deterministic only
at width 1.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass

from .atlas import Atlas, corona_in_atlas, corona_of
from .geometry import (
    FACET_COUNT,
    cell_kind,
    facet_neighbor,
    image_kind,
    origin_cell,
)
from .reduction import ReducedSet, decode_patch
from .tileset import (
    Patch,
    Placement,
    RegionSpec,
    TileSet,
    effective_facets,
    identity_code,
    patch_valid,
    placement_orientations,
    region_cells,
    rule_eval,
    wrap_cell,
)

FOUND = "found"
EXHAUSTED = "exhausted"
LIMIT = "limit"


@dataclass(frozen=True)
class SolveConfig:
    node_limit: int | None = None
    seed: int | None = None
    parallel: int = 1


@dataclass
class SolveResult:
    status: str  # found | exhausted | limit
    patch: Patch | None
    nodes: int
    count: int = 0  # solutions seen (only counting searches set this > 1)


def _facet_candidates(ts: TileSet, kinds):
    """Per cell kind: (tile label, code, effective facet colours)."""
    out = {}
    for kind in kinds:
        if kind in out:
            continue
        lst = []
        for p in ts.prototiles:
            for code in placement_orientations(ts.allowed, p.kind, kind):
                eff = effective_facets(
                    ts, Placement(origin_cell(kind), p.id, code))
                lst.append((p.id, code, eff))
        out[kind] = lst
    return out


def _atlas_candidates(rs: ReducedSet, kinds):
    """Per cell kind: (rep label, code, decoded source tile's colours)."""
    rep_kind = {r.id: r.kind for r in rs.reps}
    out = {kind: [] for kind in kinds}
    for p in rs.source.prototiles:  # deterministic input order
        rep_id, code = rs.forward[p.id]
        kind = image_kind(rep_kind[rep_id], code)
        if kind in out:
            out[kind].append((rep_id, code, p.colours))
    return out


def _schedule(region: RegionSpec, cells):
    """checks[i] = (facet, neighbour facet, earlier cell index) triples."""
    space = region.space
    index = {c: i for i, c in enumerate(cells)}
    checks = [[] for _ in cells]
    for c in cells:
        kind = cell_kind(space, c)
        for f in range(FACET_COUNT[kind]):
            n, nf = facet_neighbor(space, c, f)
            if region.torus:
                n = wrap_cell(region, n)
            j = index.get(n)
            if j is None:
                continue
            i = index[c]
            if j < i or (j == i and nf > f):
                checks[i].append((f, nf, j))
    return checks


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.nodes = 0

    def spend(self) -> bool:
        self.nodes += 1
        return self.limit is not None and self.nodes > self.limit


def _run(cells, per_cell, checks, rule, budget, stop, on_solution, start=0,
         first_slice=None):
    """Depth-first search; returns True when a solution asked to stop."""
    n = len(cells)
    eff = [None] * n
    labels = [None] * n

    def bt(i):
        if stop is not None and stop.is_set():
            return True
        if i == n:
            return on_solution(list(labels))
        options = first_slice if (i == start and first_slice is not None) \
            else per_cell[i]
        for (label_tile, label_code, cand_eff) in options:
            if budget.spend():
                raise _OutOfBudget
            ok = True
            for (f, nf, j) in checks[i]:
                # j == i is an extent-1 wrap: the candidate meets itself
                theirs = cand_eff[nf] if j == i else eff[j][nf]
                if not rule_eval(rule, cand_eff[f], theirs):
                    ok = False
                    break
            if ok:
                eff[i] = cand_eff
                labels[i] = (label_tile, label_code)
                if bt(i + 1):
                    return True
                eff[i] = None
                labels[i] = None
        return False

    return bt(start)


class _OutOfBudget(Exception):
    pass


def _search(region, per_cell, checks, rule, config, collect_all=False):
    """Run the search, possibly across threads on the first cell's options."""
    cells = region_cells(region)
    results = []
    count = [0]
    lock = threading.Lock()

    def on_solution(labels):
        with lock:
            count[0] += 1
            if not results:
                results.append(labels)
        return not collect_all

    width = max(1, config.parallel)
    if width == 1 or collect_all:
        budget = _Budget(config.node_limit)
        try:
            _run(cells, per_cell, checks, rule, budget, None, on_solution)
            status = FOUND if results else EXHAUSTED
        except _OutOfBudget:
            status = FOUND if results else LIMIT
        return status, results, budget.nodes, count[0]

    stop = threading.Event()
    slices = [per_cell[0][k::width] for k in range(width)]
    budgets = [
        _Budget(None if config.node_limit is None else
                max(1, config.node_limit // width))
        for _ in range(width)
    ]
    statuses = [EXHAUSTED] * width

    def worker(k):
        def stopping_solution(labels):
            took = on_solution(labels)
            if took:
                stop.set()
            return took
        try:
            if _run(cells, per_cell, checks, rule, budgets[k], stop,
                    stopping_solution, first_slice=slices[k]):
                statuses[k] = FOUND
        except _OutOfBudget:
            statuses[k] = LIMIT

    threads = [threading.Thread(target=worker, args=(k,)) for k in range(width)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    nodes = sum(b.nodes for b in budgets)
    if results:
        return FOUND, results, nodes, count[0]
    if LIMIT in statuses:
        return LIMIT, results, nodes, count[0]
    return EXHAUSTED, results, nodes, count[0]


def _prepare(per_kind, cells, space, seed):
    rng = random.Random(seed) if seed is not None else None
    per_cell = []
    for c in cells:
        lst = list(per_kind[cell_kind(space, c)])
        if rng is not None:
            rng.shuffle(lst)
        per_cell.append(lst)
    return per_cell


def _labels_to_patch(name, region, labels):
    cells = region_cells(region)
    placements = {}
    for cell, (tid, code) in zip(cells, labels):
        placements[cell] = Placement(cell, tid, code)
    return Patch(name, region, placements)


def solve(ts: TileSet, region: RegionSpec, config: SolveConfig | None = None
          ) -> SolveResult:
    """Find one valid full placement of the region, or prove none exists."""
    config = config or SolveConfig()
    cells = region_cells(region)
    kinds = {cell_kind(region.space, c) for c in cells}
    per_kind = _facet_candidates(ts, kinds)
    per_cell = _prepare(per_kind, cells, region.space, config.seed)
    checks = _schedule(region, cells)
    status, results, nodes, _ = _search(region, per_cell, checks, ts.rule, config)
    patch = None
    if results:
        patch = _labels_to_patch(ts.name, region, results[0])
        ok, report = patch_valid(ts, patch)
        if not ok:
            raise RuntimeError(f"solver produced an invalid patch: {report}")
    return SolveResult(status, patch, nodes)


def count_solutions(ts: TileSet, region: RegionSpec,
                    config: SolveConfig | None = None) -> SolveResult:
    """Count all valid full placements (single-threaded)."""
    config = config or SolveConfig()
    cells = region_cells(region)
    kinds = {cell_kind(region.space, c) for c in cells}
    per_kind = _facet_candidates(ts, kinds)
    per_cell = _prepare(per_kind, cells, region.space, config.seed)
    checks = _schedule(region, cells)
    status, results, nodes, count = _search(region, per_cell, checks, ts.rule,
                                            config, collect_all=True)
    patch = _labels_to_patch(ts.name, region, results[0]) if results else None
    return SolveResult(status, patch, nodes, count)


def solve_atlas(rs: ReducedSet, region: RegionSpec,
                config: SolveConfig | None = None,
                atlas: Atlas | None = None) -> SolveResult:
    """Find one valid placement of the representatives over the region.

    The found patch decodes to a valid source patch (re-checked), and when a
    materialized atlas is supplied every complete corona of the found patch
    is confirmed to be an atlas member.
    """
    config = config or SolveConfig()
    cells = region_cells(region)
    kinds = {cell_kind(region.space, c) for c in cells}
    per_kind = _atlas_candidates(rs, kinds)
    per_cell = _prepare(per_kind, cells, region.space, config.seed)
    checks = _schedule(region, cells)
    status, results, nodes, _ = _search(region, per_cell, checks,
                                        rs.source.rule, config)
    patch = None
    if results:
        patch = _labels_to_patch(rs.name, region, results[0])
        decoded = decode_patch(rs, patch)
        ok, report = patch_valid(rs.source, decoded)
        if not ok:
            raise RuntimeError(f"solver produced an invalid patch: {report}")
        if atlas is not None:
            for cell in patch.placements:
                corona = corona_of(patch.placements, region, cell)
                if corona is not None and not corona_in_atlas(atlas, corona):
                    raise RuntimeError(
                        f"corona at {cell} missing from the atlas")
    return SolveResult(status, patch, nodes)


def exhaust_torus(ts: TileSet, extents, config: SolveConfig | None = None
                  ) -> SolveResult:
    """Search the torus with the given extents exhaustively."""
    return solve(ts, RegionSpec(ts.space, tuple(extents), True), config)


def random_patch(ts: TileSet, extents, seed: int, torus: bool = False,
                 config: SolveConfig | None = None) -> SolveResult:
    """A reproducible pseudo-random valid patch (first hit of a seeded search)."""
    base = config or SolveConfig()
    cfg = SolveConfig(node_limit=base.node_limit, seed=seed,
                      parallel=base.parallel)
    return solve(ts, RegionSpec(ts.space, tuple(extents), torus), cfg)
