"""Command line interface.

Subcommands:

    counts     class/stabilizer sizes and reduced cardinalities of a set
    reduce     write the reduced (representative + encoding) description
    tile       search for a valid patch (facet mode, or atlas mode with
               --reduced), write it as patch text
    exhaust    exhaustively search torus tilings (one region, or a k-sweep)
    verify     check a patch file; with --reduced also decode and check
               coronas
    roundtrip  seeded random patches, encoded and decoded back, compared
    render     write an SVG picture of a patch

Exit codes: 0 success/found, 1 exhausted/invalid input, 2 node-limit
reached, 3 usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .atlas import (
    BudgetExceeded,
    corona_in_atlas,
    corona_of,
    derive_atlas,
)
from .reduction import (
    DecodeError,
    class_group,
    decode_patch,
    encode_patch,
    parse_reduced,
    partition_translation,
    reduce_set,
    reduced_cardinality,
    serialize_reduced,
)
from .render import render_reduced_patch, render_source_patch
from .solver import (
    EXHAUSTED,
    FOUND,
    LIMIT,
    SolveConfig,
    exhaust_torus,
    random_patch,
    solve,
    solve_atlas,
)
from .tileset import (
    FormatError,
    RegionSpec,
    load_bundled,
    parse_patch,
    parse_tileset,
    patch_valid,
    serialize_patch,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_LIMIT = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


class UsageError(Exception):
    """Flag combinations argparse cannot express."""


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_set(source: str):
    """A tileset from a file path, or a bundled set named `@name`."""
    if source.startswith("@"):
        return load_bundled(source[1:])
    return parse_tileset(_read(source))


def _region_extents(args, space: str):
    if space == "cube3d":
        if args.depth is None:
            raise UsageError("cube3d regions need --depth")
        return (args.width, args.height, args.depth)
    if args.depth is not None:
        raise UsageError(f"--depth does not apply to {space}")
    return (args.width, args.height)


def _config(args) -> SolveConfig:
    return SolveConfig(
        node_limit=args.node_limit,
        seed=getattr(args, "seed", None),
        parallel=args.parallel,
    )


def _status_exit(status: str) -> int:
    return {FOUND: EXIT_OK, EXHAUSTED: EXIT_NEGATIVE, LIMIT: EXIT_LIMIT}[status]


def cmd_counts(args) -> int:
    ts = _load_set(args.inp)
    classes = partition_translation(ts)
    sizes = [len(c) for c in classes]
    orders = [len(class_group(ts.by_id[c[0]].kind)) for c in classes]
    c1 = reduced_cardinality(ts, "c1")
    c2 = reduced_cardinality(ts, "c2")
    print(f"|P|={len(ts.prototiles)}, classes: {sizes}, |G_s|: {orders}, "
          f"C1={c1}, C2={c2}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    ts = _load_set(args.inp)
    rs = reduce_set(ts, args.mode)
    _write(args.out, serialize_reduced(rs))
    return EXIT_OK


def cmd_tile(args) -> int:
    ts = _load_set(args.inp)
    if ts.space is None:
        raise FormatError("set has no single lattice")
    region = RegionSpec(ts.space, _region_extents(args, ts.space), args.torus)
    cfg = _config(args)
    if args.reduced:
        rs = parse_reduced(_read(args.reduced), ts)
        result = solve_atlas(rs, region, cfg)
    else:
        result = solve(ts, region, cfg)
    print(f"{result.status} nodes={result.nodes}", file=sys.stderr)
    if result.patch is not None:
        _write(args.out, serialize_patch(result.patch))
    return _status_exit(result.status)


def cmd_exhaust(args) -> int:
    ts = _load_set(args.inp)
    if ts.space is None:
        raise FormatError("set has no single lattice")
    cfg = _config(args)
    if args.kmax is not None:
        dims = 3 if ts.space == "cube3d" else 2
        worst = EXHAUSTED
        for k in range(1, args.kmax + 1):
            result = exhaust_torus(ts, (k,) * dims, cfg)
            print(f"k={k}: {result.status} nodes={result.nodes}")
            if result.status == FOUND:
                if args.out is not None:
                    _write(args.out, serialize_patch(result.patch))
                return EXIT_OK
            if result.status == LIMIT:
                worst = LIMIT
        return _status_exit(worst)
    if args.width is None or args.height is None:
        raise UsageError("exhaust needs --kmax or --width/--height")
    region_extents = _region_extents(args, ts.space)
    result = exhaust_torus(ts, region_extents, cfg)
    print(f"{result.status} nodes={result.nodes}")
    if result.patch is not None and args.out is not None:
        _write(args.out, serialize_patch(result.patch))
    return _status_exit(result.status)


def cmd_verify(args) -> int:
    ts = _load_set(args.inp)
    if ts.space is None:
        raise FormatError("set has no single lattice")
    if args.reduced:
        rs = parse_reduced(_read(args.reduced), ts)
        patch = parse_patch(_read(args.patch), ts.space, rs.rep_ids)
        try:
            decoded = decode_patch(rs, patch)
        except DecodeError as e:
            print(f"invalid: {e}")
            return EXIT_NEGATIVE
        ok, violations = patch_valid(ts, decoded)
        for v in violations:
            print(f"invalid: {v}")
        if not ok:
            return EXIT_NEGATIVE
        if args.with_atlas:
            atlas = derive_atlas(rs, node_cap=args.atlas_budget)
            bad = 0
            complete = 0
            for cell in sorted(patch.placements):
                corona = corona_of(patch.placements, patch.region, cell)
                if corona is None:
                    continue
                complete += 1
                if not corona_in_atlas(atlas, corona):
                    print(f"invalid: corona at {cell} not in atlas")
                    bad += 1
            if bad:
                return EXIT_NEGATIVE
            print(f"ok (decoded facets valid; {complete} coronas in atlas)")
        else:
            print("ok (decoded facets valid)")
        return EXIT_OK
    patch = parse_patch(_read(args.patch), ts.space, set(ts.by_id))
    ok, violations = patch_valid(ts, patch)
    for v in violations:
        print(f"invalid: {v}")
    if ok:
        print("ok")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_roundtrip(args) -> int:
    ts = _load_set(args.inp)
    if ts.space is None:
        raise FormatError("set has no single lattice")
    rs = reduce_set(ts, args.mode)
    extents = _region_extents(args, ts.space)
    failures = 0
    produced = 0
    for i in range(args.count):
        seed = args.seed + i
        result = random_patch(ts, extents, seed=seed, torus=args.torus,
                              config=SolveConfig(node_limit=args.node_limit))
        if result.status != FOUND:
            print(f"seed {seed}: {result.status}")
            if result.status == LIMIT:
                failures += 1
            continue
        produced += 1
        enc = encode_patch(rs, result.patch)
        dec = decode_patch(rs, enc)
        text_ok = serialize_patch(dec) == serialize_patch(result.patch)
        same = dec.placements == result.patch.placements and text_ok
        print(f"seed {seed}: {'ok' if same else 'MISMATCH'}")
        if not same:
            failures += 1
    print(f"{produced}/{args.count} patches round-tripped, "
          f"{failures} failures")
    return EXIT_OK if failures == 0 and produced > 0 else EXIT_NEGATIVE


def cmd_render(args) -> int:
    ts = _load_set(args.inp)
    if ts.space is None:
        raise FormatError("set has no single lattice")
    if args.reduced:
        rs = parse_reduced(_read(args.reduced), ts)
        patch = parse_patch(_read(args.patch), ts.space, rs.rep_ids)
        svg = render_reduced_patch(rs, patch)
    else:
        patch = parse_patch(_read(args.patch), ts.space, set(ts.by_id))
        svg = render_source_patch(ts, patch)
    _write(args.svg, svg)
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="tileatlas", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(sp, out=False, solveflags=False, extents=False):
        sp.add_argument("--in", dest="inp", required=True,
                        help="tileset file, or @name for a bundled set")
        if out:
            sp.add_argument("--out", default=None,
                            help="output path ('-' or omit for stdout)")
        if extents:
            sp.add_argument("--width", type=int, required=True)
            sp.add_argument("--height", type=int, required=True)
            sp.add_argument("--depth", type=int, default=None)
            sp.add_argument("--torus", action="store_true")
        if solveflags:
            sp.add_argument("--node-limit", type=int, default=None)
            sp.add_argument("--parallel", type=int, default=1)

    sp = sub.add_parser("counts", help="set statistics and reduced sizes")
    add_common(sp)
    sp.set_defaults(func=cmd_counts)

    sp = sub.add_parser("reduce", help="write the reduced set description")
    add_common(sp, out=True)
    sp.add_argument("--mode", choices=("c1", "c2"), required=True)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("tile", help="search for a valid patch")
    add_common(sp, out=True, solveflags=True, extents=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--reduced", default=None,
                    help="reduced description file: solve in atlas mode")
    sp.set_defaults(func=cmd_tile)

    sp = sub.add_parser("exhaust", help="exhaustive torus search")
    add_common(sp, out=True, solveflags=True)
    sp.add_argument("--width", type=int, default=None)
    sp.add_argument("--height", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--kmax", type=int, default=None,
                    help="sweep square/cubic tori with k = 1..kmax")
    sp.set_defaults(func=cmd_exhaust)

    sp = sub.add_parser("verify", help="validate a patch file")
    add_common(sp)
    sp.add_argument("--patch", required=True)
    sp.add_argument("--reduced", default=None)
    sp.add_argument("--with-atlas", action="store_true",
                    help="also check every complete corona against the atlas")
    sp.add_argument("--atlas-budget", type=int, default=10 ** 7)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("roundtrip", help="encode/decode seeded random patches")
    add_common(sp, solveflags=True, extents=True)
    sp.add_argument("--mode", choices=("c1", "c2"), required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("render", help="draw a patch as SVG")
    add_common(sp)
    sp.add_argument("--patch", required=True)
    sp.add_argument("--reduced", default=None)
    sp.add_argument("--svg", required=True)
    sp.set_defaults(func=cmd_render)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, DecodeError, BudgetExceeded, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
