"""Coronas and corona atlases.

The corona of a placed tile is the tile together with the placements on all
cells touching it (8 on the square lattice, 26 on the cubic lattice, 12 on
the triangular lattice), read in canonical touching-offset order with the
centre translated to the origin cell of its kind.  Corona membership is
checked up to translation only.

An atlas for a reduced set is the set of encodings of every locally valid
source corona: an assignment of source tiles to the corona window in which
all facet-sharing pairs satisfy the facet rule.  Membership can be tested
against the materialized atlas, or implicitly by decoding the corona back to
source tiles and checking the facet rule directly; the two routes agree.

Atlas text format:

    atlas <name>
    <center-tile> <center-code> : <tile> <code> <tile> <code> ...

with ring entries in touching-offset order and lines sorted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    FACET_COUNT,
    KIND_SPACE,
    ShapeKind,
    cell_kind,
    facet_neighbor,
    origin_cell,
    touching_cell,
    touching_offsets,
)
from .tileset import (
    FormatError,
    Patch,
    Placement,
    RegionSpec,
    TileSet,
    effective_facets,
    identity_code,
    patch_valid,
    rule_eval,
    wrap_cell,
)
from .reduction import ReducedSet


class BudgetExceeded(RuntimeError):
    """Enumeration exceeded its node budget."""


@dataclass(frozen=True)
class Corona:
    """Centre placement plus ring placements, both as (tile, code) pairs.

    The ring is aligned with touching_offsets of the centre's cell kind.
    """

    center: tuple
    ring: tuple

    def sort_key(self):
        return (self.center, self.ring)


@dataclass(frozen=True)
class Atlas:
    name: str
    coronas: frozenset

    def __contains__(self, corona: Corona) -> bool:
        return corona in self.coronas


def corona_of(placements: dict, region: RegionSpec, cell) -> Corona | None:
    """The corona at `cell`, or None when a touching cell is unfilled.

    On torus regions touching cells wrap, so every filled cell of a fully
    placed torus patch has a corona.

    The ring order follows the cell's kind, which matches the atlas
    convention (ring order of the centre's decoded kind) only when the
    placement at `cell` actually fits the cell.  Callers working from
    untrusted patch text must therefore establish decodability and facet
    validity before asking for atlas membership, which is the order the
    solver and the verifier use.
    """
    pl = placements.get(cell)
    if pl is None:
        return None
    kind = cell_kind(region.space, cell)
    ring = []
    for off in touching_offsets(kind):
        ncell = touching_cell(kind, cell, off)
        if region.torus:
            ncell = wrap_cell(region, ncell)
        npl = placements.get(ncell)
        if npl is None:
            return None
        ring.append((npl.tile, npl.orientation))
    return Corona((pl.tile, pl.orientation), tuple(ring))


# ---------------------------------------------------------------------------
# Locally valid source coronas
# ---------------------------------------------------------------------------

def _corona_window(kind: ShapeKind):
    """The corona's cells, an assignment order (most-constrained first), and
    the facet-adjacent pairs internal to the window.

    Cells are shifted so the window fits a small free region with
    non-negative coordinates; the centre sits at the lattice point (1,1[,1]).
    """
    space = KIND_SPACE[kind]
    shift = (1, 1, 1) if space == "cube3d" else (1, 1)

    def shifted(c):
        if space == "tri2d":
            return (c[0] + 1, c[1] + 1, c[2])
        return tuple(x + s for x, s in zip(c, shift))

    center = shifted(origin_cell(kind))
    cells = [center]
    for off in touching_offsets(kind):
        cells.append(shifted(touching_cell(kind, origin_cell(kind), off)))
    cell_set = set(cells)
    adj = {c: [] for c in cells}
    pairs = []
    for c in cells:
        ck = cell_kind(space, c)
        for f in range(FACET_COUNT[ck]):
            n, nf = facet_neighbor(space, c, f)
            if n in cell_set and (n, nf) > (c, f):
                pairs.append((c, f, n, nf))
                adj[c].append(n)
                adj[n].append(c)
    # assignment order: centre first, then repeatedly the cell with the most
    # already-ordered facet neighbours (ties: scan order) so constraints bind
    # as early as possible
    order = [center]
    placed = {center}
    rest = [c for c in cells if c != center]
    while rest:
        best = max(rest, key=lambda c: (sum(n in placed for n in adj[c]),
                                        [-x for x in _cell_key(c)]))
        order.append(best)
        placed.add(best)
        rest.remove(best)
    return center, cells, order, pairs


def _cell_key(c):
    return tuple(c)


def enumerate_source_coronas(ts: TileSet, node_cap: int = 10 ** 7) -> set:
    """All locally valid coronas of a translation-placed source set.

    Backtracking over the corona window with incremental facet checks; every
    complete assignment is re-verified independently with patch_valid before
    being admitted.
    """
    if ts.allowed != "translations":
        raise FormatError("corona enumeration expects a translation-placed set")
    space = ts.space
    if space is None:
        raise FormatError("mixed-kind sets have no corona atlas")
    ident = identity_code(space)
    eff = {p.id: effective_facets(ts, Placement(origin_cell(p.kind), p.id, ident))
           for p in ts.prototiles}
    by_kind = {}
    for p in ts.prototiles:
        by_kind.setdefault(p.kind, []).append(p.id)

    out = set()
    nodes = 0
    extent = (3, 3, 3) if space == "cube3d" else (3, 3)
    region = RegionSpec(space, extent, False)

    for center_tile in ts.prototiles:
        center, cells, order, pairs = _corona_window(center_tile.kind)
        # facet constraints indexed by the later-ordered cell of each pair
        pos = {c: i for i, c in enumerate(order)}
        checks = {c: [] for c in order}
        for (c, f, n, nf) in pairs:
            late, lf, early, ef = (c, f, n, nf) if pos[c] > pos[n] else (n, nf, c, f)
            checks[late].append((lf, early, ef))
        assign = {center: center_tile.id}

        def backtrack(i):
            nonlocal nodes
            if i == len(order):
                placements = {c: Placement(c, assign[c], ident) for c in order}
                ok, report = patch_valid(ts, Patch(ts.name, region, placements))
                if not ok:
                    raise RuntimeError(
                        f"incremental checks admitted an invalid corona: {report}")
                ring = []
                for off in touching_offsets(center_tile.kind):
                    ncell = _shift_like(space, touching_cell(
                        center_tile.kind, origin_cell(center_tile.kind), off))
                    ring.append((assign[ncell], ident))
                out.add(Corona((center_tile.id, ident), tuple(ring)))
                return
            cell = order[i]
            kind = cell_kind(space, cell)
            for tid in by_kind.get(kind, ()):
                nodes += 1
                if nodes > node_cap:
                    raise BudgetExceeded(
                        f"corona enumeration exceeded {node_cap} nodes")
                good = True
                for (lf, early, ef) in checks[cell]:
                    if not rule_eval(ts.rule, eff[tid][lf], eff[assign[early]][ef]):
                        good = False
                        break
                if good:
                    assign[cell] = tid
                    backtrack(i + 1)
                    del assign[cell]

        backtrack(1)
    return out


def _shift_like(space, c):
    if space == "tri2d":
        return (c[0] + 1, c[1] + 1, c[2])
    return tuple(x + 1 for x in c)


def derive_atlas(rs: ReducedSet, node_cap: int = 10 ** 7) -> Atlas:
    """The reduced set's atlas: encodings of all locally valid source coronas."""
    coronas = set()
    for sc in enumerate_source_coronas(rs.source, node_cap):
        center = rs.forward[sc.center[0]]
        ring = tuple(rs.forward[t] for (t, _) in sc.ring)
        coronas.add(Corona(center, ring))
    return Atlas(rs.name, frozenset(coronas))


# ---------------------------------------------------------------------------
# Membership, two routes
# ---------------------------------------------------------------------------

def corona_in_atlas(atlas: Atlas, corona: Corona) -> bool:
    return corona in atlas.coronas


def corona_in_atlas_implicit(rs: ReducedSet, corona: Corona) -> bool:
    """Decide membership without the materialized atlas: decode every
    placement and check the source facet rule over the corona window."""
    key = corona.center
    if key not in rs.inverse:
        return False
    center_tile = rs.inverse[key]
    kind = rs.source.by_id[center_tile].kind
    offs = touching_offsets(kind)
    if len(corona.ring) != len(offs):
        return False
    space = rs.source.space
    ident = identity_code(space)
    placements = {}
    ccell = _shift_like(space, origin_cell(kind))
    placements[ccell] = Placement(ccell, center_tile, ident)
    for off, entry in zip(offs, corona.ring):
        if entry not in rs.inverse:
            return False
        ncell = _shift_like(space, touching_cell(kind, origin_cell(kind), off))
        placements[ncell] = Placement(ncell, rs.inverse[entry], ident)
    extent = (3, 3, 3) if space == "cube3d" else (3, 3)
    ok, _ = patch_valid(rs.source, Patch(rs.source.name, RegionSpec(
        space, extent, False), placements))
    return ok


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def serialize_atlas(atlas: Atlas) -> str:
    out = [f"atlas {atlas.name}"]
    for c in sorted(atlas.coronas, key=Corona.sort_key):
        ring = " ".join(f"{t} {code}" for (t, code) in c.ring)
        out.append(f"{c.center[0]} {c.center[1]} : {ring}")
    return "\n".join(out) + "\n"


def parse_atlas(text: str) -> Atlas:
    name = None
    coronas = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if name is None:
            if toks[0] != "atlas" or len(toks) != 2:
                raise FormatError(f"line {ln}: expected atlas header")
            name = toks[1]
            continue
        if ":" not in toks or len(toks) < 3:
            raise FormatError(f"line {ln}: bad corona line")
        sep = toks.index(":")
        if sep != 2 or (len(toks) - 3) % 2 != 0:
            raise FormatError(f"line {ln}: bad corona line")
        center = (toks[0], toks[1])
        rest = toks[3:]
        ring = tuple((rest[i], rest[i + 1]) for i in range(0, len(rest), 2))
        coronas.add(Corona(center, ring))
    if name is None:
        raise FormatError("missing atlas header")
    return Atlas(name, frozenset(coronas))
