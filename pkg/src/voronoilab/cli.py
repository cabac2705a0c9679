"""Command-line frontend: perfect forms, Voronoi homology, building
computations, and the truncated frame-graph census, with JSON output and a
per-discriminant cache."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .buildings import (
    alpha_map_image_rank,
    steinberg_rank,
    tits_building,
    truncated_b2_components,
)
from .homology import FPGroup
from .posets import (
    CoefficientFunctor,
    PosetData,
    poset_homology_with_functor,
    reduced_homology,
    single_support_decomposition,
)
from .voronoi import SCHEMA_VERSION, InternalConsistencyError, voronoi_pipeline

DEFAULT_CACHE_ENV = "VORONOILAB_CACHE_DIR"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cache_dir(args) -> Path | None:
    if args.cache_dir is not None:
        return Path(args.cache_dir)
    env = os.environ.get(DEFAULT_CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "voronoilab"


def cmd_perfect_forms(args) -> int:
    report = voronoi_pipeline(args.d, cache_dir=_cache_dir(args), threads=args.threads)
    summaries = report.form_summaries()
    if args.format == "json":
        sys.stdout.write(_dump(report.to_dict()))
        return 0
    shapes = [s["shape"] for s in summaries]
    print(f"d = {args.d}: {len(summaries)} perfect form classes")
    for s in summaries:
        print(f"  {s['label']}: {s['num_min_vectors']} minimal vectors, {s['shape']}")
    counts = {}
    for sh in shapes:
        counts[sh] = counts.get(sh, 0) + 1
    print("shapes: " + ", ".join(f"{v} x {k}" for k, v in sorted(counts.items())))
    c3, c2, c1 = report.cell_type_counts()
    print(f"cell types: {c3} three-cells, {c2} two-faces, {c1} edges")
    return 0


def cmd_voronoi_homology(args) -> int:
    report = voronoi_pipeline(args.d, cache_dir=_cache_dir(args), threads=args.threads)
    h = report.homology[args.degree]
    if args.format == "json":
        sys.stdout.write(
            _dump(
                {
                    "schema_version": SCHEMA_VERSION,
                    "d": args.d,
                    "degree": args.degree,
                    "homology": {"free_rank": h.free_rank, "torsion": list(h.torsion)},
                    "rendered": str(h),
                }
            )
        )
        return 0
    print(f"H_{args.degree}(Voronoi complex, d = {args.d}) = {h}")
    return 0


def _lemma_oracle(trials: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    agree = 0
    for _ in range(trials):
        n = rng.randint(3, 12)
        pairs = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35
        ]
        poset = PosetData(list(range(n)), pairs)
        m = rng.choice(sorted(set(poset.heights)))
        groups = {}
        for i in range(n):
            if poset.heights[i] == m:
                free = rng.randint(0, 2)
                torsion = rng.sample([2, 3, 4, 6], rng.randint(0, 2))
                groups[i] = FPGroup.of_orders(free, torsion)
        functor = CoefficientFunctor.height_supported(poset, m, groups)
        match = all(
            poset_homology_with_functor(poset, functor, k)
            == single_support_decomposition(poset, functor, m, k)
            for k in range(0, poset.dim() + 2)
        )
        agree += match
    return {"trials": trials, "agree": agree}


def cmd_building(args) -> int:
    if args.what == "lemma-oracle":
        result = _lemma_oracle(args.trials)
        if args.format == "json":
            sys.stdout.write(_dump({"schema_version": SCHEMA_VERSION, **result}))
        else:
            print(f"{result['agree']}/{result['trials']} agree")
        return 0 if result["agree"] == result["trials"] else 1
    if args.n is None or args.q is None:
        print("building: --n and --q are required for this query", file=sys.stderr)
        return 2
    if args.what == "steinberg-rank":
        value = steinberg_rank(args.n, args.q)
        if args.format == "json":
            sys.stdout.write(
                _dump(
                    {
                        "schema_version": SCHEMA_VERSION,
                        "n": args.n,
                        "q": args.q,
                        "steinberg_rank": value,
                    }
                )
            )
        else:
            print(value)
        return 0
    if args.what == "alpha-rank":
        value = alpha_map_image_rank(args.n, args.q)
        if args.format == "json":
            sys.stdout.write(
                _dump(
                    {
                        "schema_version": SCHEMA_VERSION,
                        "n": args.n,
                        "q": args.q,
                        "alpha_rank": value,
                    }
                )
            )
        else:
            print(value)
        return 0
    # homology table
    building = tits_building(args.n, args.q)
    complex_data = building.order_complex()
    table = {
        k: reduced_homology(complex_data, k) for k in range(-1, args.n)
    }
    if args.format == "json":
        sys.stdout.write(
            _dump(
                {
                    "schema_version": SCHEMA_VERSION,
                    "n": args.n,
                    "q": args.q,
                    "reduced_homology": {
                        str(k): {"free_rank": h.free_rank, "torsion": list(h.torsion)}
                        for k, h in table.items()
                    },
                }
            )
        )
    else:
        for k, h in table.items():
            print(f"H~_{k} = {h}")
    return 0


def cmd_explore_b2(args) -> int:
    census = truncated_b2_components(args.d, args.radius)
    if args.format == "json":
        sys.stdout.write(
            _dump(
                {
                    "schema_version": SCHEMA_VERSION,
                    "d": census.d,
                    "radius": census.radius,
                    "vertex_count": census.vertex_count,
                    "edge_count": census.edge_count,
                    "component_count": census.component_count,
                    "component_sizes": census.component_sizes,
                    "caveat": census.caveat,
                }
            )
        )
        return 0
    print(
        f"d = {census.d}, radius {census.radius}: "
        f"{census.vertex_count} vertices, {census.edge_count} edges, "
        f"{census.component_count} components {census.component_sizes}"
    )
    print(f"note: {census.caveat}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voronoilab",
        description="Voronoi homology over imaginary quadratic rings and a "
        "desk-scale buildings lab",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--threads", type=int, default=os.cpu_count())

    p1 = sub.add_parser("perfect-forms", help="enumerate perfect form classes")
    p1.add_argument("--d", type=int, required=True)
    common(p1)
    p1.set_defaults(func=cmd_perfect_forms)

    p2 = sub.add_parser("voronoi-homology", help="homology of the Voronoi complex")
    p2.add_argument("--d", type=int, required=True)
    p2.add_argument("--degree", type=int, required=True, choices=(1, 2, 3))
    common(p2)
    p2.set_defaults(func=cmd_voronoi_homology)

    p3 = sub.add_parser("building", help="Tits building queries over GF(q)")
    p3.add_argument("--n", type=int, default=None)
    p3.add_argument("--q", type=int, default=None)
    p3.add_argument(
        "--what",
        choices=("homology", "steinberg-rank", "alpha-rank", "lemma-oracle"),
        default="homology",
    )
    p3.add_argument("--trials", type=int, default=50)
    common(p3)
    p3.set_defaults(func=cmd_building)

    p4 = sub.add_parser("explore-b2", help="truncated frame-graph census over O_d")
    p4.add_argument("--d", type=int, required=True)
    p4.add_argument("--radius", type=int, required=True)
    common(p4)
    p4.set_defaults(func=cmd_explore_b2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
