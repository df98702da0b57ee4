"""Coloured prototile sets, facet matching rules, placements and patches.

Tileset text format (line oriented, '#' starts a comment, blank lines ok):

    tileset <name>
    space square2d|cube3d|tri2d
    isometries translations|all
    rule identical|table
    pair <a> <b>                      # table rule entries, symmetric
    tile <id> <c0> ... <ck-1>         # square2d: 4 colours, cube3d: 6
    tile <id> up|down <c0> <c1> <c2>  # tri2d

Colours are non-negative integers in canonical facet order; 0 is the
uncoloured value and every rule accepts the pair (0, 0).

Patch text format:

    patch <set-name> <W> <H> [<D>] free|torus
    <x> <y> <id> <code>               # square2d
    <x> <y> <z> <id> <code>           # cube3d
    <a> <b> u|d <id> <code>           # tri2d

Orientation codes are the geometry module's canonical element codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .geometry import (
    FACET_COUNT,
    KIND_SPACE,
    SPACE_KINDS,
    Cell,
    ShapeKind,
    cell_kind,
    facet_action_code,
    facet_neighbor,
    image_kind,
    space_codes,
    space_dim,
)

Colour = int


class FormatError(ValueError):
    """Raised on malformed tileset/patch/reduction/atlas text."""


@dataclass(frozen=True)
class FacetRule:
    """Symmetric predicate on colour pairs; "identical" accepts equal colours,
    "table" accepts an explicit pair set.  (0, 0) is always accepted."""

    kind: str
    pairs: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("identical", "table"):
            raise FormatError(f"unknown rule kind {self.kind!r}")
        if self.kind == "table":
            closed = set()
            for a, b in self.pairs:
                closed.add((a, b))
                closed.add((b, a))
            closed.add((0, 0))
            object.__setattr__(self, "pairs", frozenset(closed))


def rule_eval(rule: FacetRule, a: Colour, b: Colour) -> bool:
    if rule.kind == "identical":
        return a == b
    return (a, b) in rule.pairs


@dataclass(frozen=True)
class Prototile:
    id: str
    kind: ShapeKind
    colours: tuple[Colour, ...]

    def __post_init__(self):
        if len(self.colours) != FACET_COUNT[self.kind]:
            raise FormatError(
                f"tile {self.id}: expected {FACET_COUNT[self.kind]} colours, "
                f"got {len(self.colours)}"
            )
        if any(c < 0 for c in self.colours):
            raise FormatError(f"tile {self.id}: negative colour")


@dataclass(frozen=True)
class TileSet:
    name: str
    prototiles: tuple[Prototile, ...]
    rule: FacetRule
    allowed: str  # "translations" | "all"
    by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.allowed not in ("translations", "all"):
            raise FormatError(f"unknown isometry group {self.allowed!r}")
        ids = [p.id for p in self.prototiles]
        if len(set(ids)) != len(ids):
            raise FormatError("duplicate prototile ids")
        dims = {space_dim(KIND_SPACE[p.kind]) for p in self.prototiles}
        if len(dims) > 1:
            raise FormatError("prototiles mix ambient dimensions")
        object.__setattr__(self, "by_id", {p.id: p for p in self.prototiles})

    @property
    def space(self) -> str | None:
        """The common lattice, or None for mixed-kind sets (which support
        reduction but not placement)."""
        kinds = {p.kind for p in self.prototiles}
        for space, sk in SPACE_KINDS.items():
            if kinds <= set(sk):
                return space
        return None


@dataclass(frozen=True)
class Placement:
    """One tile instance: `tile` is a prototile (or representative) id and
    `orientation` an element code of the lattice's point group quotient."""

    cell: Cell
    tile: str
    orientation: str


@dataclass(frozen=True)
class RegionSpec:
    space: str
    extents: tuple[int, ...]
    torus: bool

    def __post_init__(self):
        if len(self.extents) != space_dim(self.space):
            raise FormatError("region extents do not match the lattice dimension")
        if any(e < 1 for e in self.extents):
            raise FormatError("region extents must be positive")


@dataclass(frozen=True)
class Patch:
    set_name: str
    region: RegionSpec
    placements: dict  # Cell -> Placement

    def __post_init__(self):
        for cell, pl in self.placements.items():
            if cell != pl.cell:
                raise FormatError(f"placement keyed by {cell} but placed at {pl.cell}")


def region_cells(region: RegionSpec) -> list[Cell]:
    """All cells of the region in scan order (last axis slowest; for tri2d the
    up cell precedes the down cell of the same rhombus)."""
    if region.space == "square2d":
        w, h = region.extents
        return [(x, y) for y in range(h) for x in range(w)]
    if region.space == "cube3d":
        w, h, d = region.extents
        return [(x, y, z) for z in range(d) for y in range(h) for x in range(w)]
    w, h = region.extents
    return [(a, b, o) for b in range(h) for a in range(w) for o in (0, 1)]


def wrap_cell(region: RegionSpec, cell: Cell) -> Cell:
    w = region.extents
    if region.space == "tri2d":
        return (cell[0] % w[0], cell[1] % w[1], cell[2])
    return tuple(c % e for c, e in zip(cell, w))


def cell_in_region(region: RegionSpec, cell: Cell) -> bool:
    return all(0 <= c < e for c, e in zip(cell, region.extents))


def effective_facets(ts: TileSet, pl: Placement) -> tuple[Colour, ...]:
    """The placement's facet colours read in the facet order of its cell."""
    proto = ts.by_id[pl.tile]
    perm = facet_action_code(proto.kind, pl.orientation)
    out = [0] * len(perm)
    for i, c in enumerate(proto.colours):
        out[perm[i]] = c
    return tuple(out)


def placement_orientations(allowed: str, kind: ShapeKind, target: ShapeKind):
    """Orientation codes legal for a prototile of `kind` on a `target` cell."""
    space = KIND_SPACE[kind]
    if allowed == "translations":
        codes = (space_codes(space)[0],)
        return codes if kind is target else ()
    return tuple(
        c for c in space_codes(space) if image_kind(kind, c) is target
    )


def placement_ok(ts: TileSet, region: RegionSpec, pl: Placement) -> str | None:
    """None if the placement is internally legal, else a violation message."""
    proto = ts.by_id.get(pl.tile)
    if proto is None:
        return f"unknown tile id {pl.tile!r} at {pl.cell}"
    space = region.space
    if KIND_SPACE[proto.kind] != space:
        return f"tile {pl.tile} does not live on the {space} lattice"
    if not cell_in_region(region, pl.cell):
        return f"cell {pl.cell} outside region {region.extents}"
    if pl.orientation not in placement_orientations(
        ts.allowed, proto.kind, cell_kind(space, pl.cell)
    ):
        return (
            f"orientation {pl.orientation!r} not allowed for tile {pl.tile} "
            f"at {pl.cell}"
        )
    return None


def patch_valid(ts: TileSet, patch: Patch) -> tuple[bool, tuple[str, ...]]:
    """Check every placement and every facet-sharing pair of placements.

    Returns (ok, violations).  Boundary facets of free patches and absent
    neighbours are unconstrained; corner/edge point contacts are always legal
    (lower-dimensional boundary points are uncoloured).
    """
    region = patch.region
    space = region.space
    violations = []
    eff = {}
    for cell, pl in patch.placements.items():
        msg = placement_ok(ts, region, pl)
        if msg is not None:
            violations.append(msg)
            continue
        eff[cell] = effective_facets(ts, pl)
    for cell in sorted(eff):
        kind = cell_kind(space, cell)
        for facet in range(FACET_COUNT[kind]):
            nbr, nfacet = facet_neighbor(space, cell, facet)
            if region.torus:
                nbr = wrap_cell(region, nbr)
            if nbr not in eff:
                continue
            if (nbr, nfacet) < (cell, facet):
                continue  # each pair once
            if nbr == cell and nfacet == facet:
                continue  # degenerate wrap (extent 1): a facet meets itself
            a = eff[cell][facet]
            b = eff[nbr][nfacet]
            if not rule_eval(ts.rule, a, b):
                violations.append(
                    f"facet rule fails between {cell} facet {facet} (colour {a}) "
                    f"and {nbr} facet {nfacet} (colour {b})"
                )
    return (not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def _content_lines(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield ln, line.split()


def parse_tileset(text: str) -> TileSet:
    name = None
    space = None
    allowed = None
    rule_kind = None
    pairs = set()
    tiles = []
    for ln, toks in _content_lines(text):
        key = toks[0]
        try:
            if key == "tileset":
                (name,) = toks[1:]
            elif key == "space":
                (space,) = toks[1:]
                if space not in SPACE_KINDS:
                    raise FormatError(f"line {ln}: unknown space {space!r}")
            elif key == "isometries":
                (allowed,) = toks[1:]
            elif key == "rule":
                (rule_kind,) = toks[1:]
            elif key == "pair":
                a, b = toks[1:]
                pairs.add((int(a), int(b)))
            elif key == "tile":
                if space is None:
                    raise FormatError(f"line {ln}: tile before space")
                if space == "tri2d":
                    tid, orient, *cols = toks[1:]
                    if orient not in ("up", "down"):
                        raise FormatError(f"line {ln}: expected up|down")
                    kind = ShapeKind.TRI_UP if orient == "up" else ShapeKind.TRI_DOWN
                else:
                    tid, *cols = toks[1:]
                    kind = SPACE_KINDS[space][0]
                tiles.append(Prototile(tid, kind, tuple(int(c) for c in cols)))
            else:
                raise FormatError(f"line {ln}: unknown directive {key!r}")
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"line {ln}: {e}") from None
    if name is None or space is None or allowed is None or rule_kind is None:
        raise FormatError("tileset header incomplete (name/space/isometries/rule)")
    if rule_kind == "identical" and pairs:
        raise FormatError("pair lines are only valid with rule table")
    if not tiles:
        raise FormatError("tileset has no tiles")
    return TileSet(name, tuple(tiles), FacetRule(rule_kind, frozenset(pairs)), allowed)


def serialize_tileset(ts: TileSet) -> str:
    if ts.space is None:
        raise FormatError("mixed-kind tilesets have no file form")
    out = [f"tileset {ts.name}", f"space {ts.space}", f"isometries {ts.allowed}",
           f"rule {ts.rule.kind}"]
    if ts.rule.kind == "table":
        for a, b in sorted(p for p in ts.rule.pairs if p[0] <= p[1]):
            out.append(f"pair {a} {b}")
    for p in ts.prototiles:
        cols = " ".join(str(c) for c in p.colours)
        if ts.space == "tri2d":
            out.append(f"tile {p.id} {p.kind.value} {cols}")
        else:
            out.append(f"tile {p.id} {cols}")
    return "\n".join(out) + "\n"


def parse_patch(text: str, space: str, ids: set[str] | None = None) -> Patch:
    header = None
    placements = {}
    region = None
    for ln, toks in _content_lines(text):
        if header is None:
            if toks[0] != "patch":
                raise FormatError(f"line {ln}: expected patch header")
            dims = space_dim(space)
            if len(toks) != 3 + dims:
                raise FormatError(f"line {ln}: bad patch header for {space}")
            header = toks[1]
            extents = tuple(int(t) for t in toks[2:2 + dims])
            boundary = toks[2 + dims]
            if boundary not in ("free", "torus"):
                raise FormatError(f"line {ln}: expected free|torus")
            region = RegionSpec(space, extents, boundary == "torus")
            continue
        try:
            if space == "square2d":
                x, y, tid, code = toks
                cell: Cell = (int(x), int(y))
            elif space == "cube3d":
                x, y, z, tid, code = toks
                cell = (int(x), int(y), int(z))
            else:
                a, b, o, tid, code = toks
                if o not in ("u", "d"):
                    raise FormatError(f"line {ln}: expected u|d")
                cell = (int(a), int(b), 0 if o == "u" else 1)
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"line {ln}: {e}") from None
        if ids is not None and tid not in ids:
            raise FormatError(f"line {ln}: unknown tile id {tid!r}")
        if code not in space_codes(space) and not (space == "tri2d" and code == "u"):
            raise FormatError(f"line {ln}: unknown orientation code {code!r}")
        if code == "u":
            code = "ut0"
        if cell in placements:
            raise FormatError(f"line {ln}: duplicate placement at {cell}")
        placements[cell] = Placement(cell, tid, code)
    if region is None:
        raise FormatError("missing patch header")
    return Patch(header, region, placements)


def serialize_patch(patch: Patch) -> str:
    region = patch.region
    boundary = "torus" if region.torus else "free"
    ext = " ".join(str(e) for e in region.extents)
    out = [f"patch {patch.set_name} {ext} {boundary}"]
    for cell in sorted(patch.placements):
        pl = patch.placements[cell]
        if region.space == "tri2d":
            a, b, o = cell
            out.append(f"{a} {b} {'u' if o == 0 else 'd'} {pl.tile} {pl.orientation}")
        else:
            coords = " ".join(str(c) for c in cell)
            out.append(f"{coords} {pl.tile} {pl.orientation}")
    return "\n".join(out) + "\n"


@lru_cache(maxsize=None)
def identity_code(space: str) -> str:
    return space_codes(space)[0]


BUNDLED = ("wang13", "cubes21", "triangles6")


def load_bundled(name: str) -> TileSet:
    """Load one of the tile sets shipped with the package."""
    if name not in BUNDLED:
        raise FormatError(f"no bundled tileset {name!r}; have {', '.join(BUNDLED)}")
    from importlib import resources
    text = (resources.files("tileatlas") / "data" / f"{name}.tiles").read_text()
    return parse_tileset(text)
