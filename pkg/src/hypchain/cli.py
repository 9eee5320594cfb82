"""Command-line front end.  Every command prints canonical JSON.

Exit codes: 0 success, 1 certification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .approx import build_correspondence
from .chains import l1_norm
from .corpus import admissible, generate_corpus, random_walk
from .errors import HypChainError, OutOfBall
from .group import build_context, estimate_delta, sorted_elements
from .homology import homology, metric_from_points, rips_basis
from .io import (
    chain_to_json,
    format_rational,
    load_corpus,
    load_presentation,
    manifest,
    parse_rational,
    presentation_to_dict,
    simplex_from_json,
    write_json,
)
from .subdivision import SubdivisionMap, certify_corpus

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, **witness):
        super().__init__(message)
        self.payload = {"error": "input_error", "message": message, "witness": witness}


def _context(args):
    p, digest = load_presentation(args.group, getattr(args, "radius", None))
    return build_context(p), digest


def _json_arg(text: str, flag: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{flag} is not valid JSON: {exc.msg}", flag=flag, value=text) from None


def cmd_group(args) -> int:
    ctx, digest = _context(args)
    out = {
        "presentation": presentation_to_dict(ctx.presentation),
        "group_sha256": digest,
        "size": ctx.size,
        "sphere_sizes": ctx.sphere_sizes(),
    }
    if args.estimate_delta is not None:
        out["delta_estimate"] = format_rational(estimate_delta(ctx, args.estimate_delta))
        out["delta_estimate_sample_radius"] = args.estimate_delta
    write_json(args.out, out)
    return EXIT_OK


def cmd_geodesic(args) -> int:
    ctx, _ = _context(args)
    x, y = ctx.normal_form(args.source), ctx.normal_form(args.target)
    path = ctx.geodesic(x, y)
    write_json(args.out, {"from": x, "to": y, "distance": len(path) - 1, "geodesic": path})
    return EXIT_OK


def cmd_hull(args) -> int:
    ctx, _ = _context(args)
    ys = tuple(ctx.normal_form(w) for w in simplex_from_json(_json_arg(args.tuple, "--tuple"), "tuple"))
    hull = sorted_elements(ctx, ctx.geodesic_hull(ys))
    write_json(args.out, {"tuple": list(ys), "hull": hull, "size": len(hull)})
    return EXIT_OK


def cmd_tree(args) -> int:
    ctx, _ = _context(args)
    ys = tuple(ctx.normal_form(w) for w in simplex_from_json(_json_arg(args.tuple, "--tuple"), "tuple"))
    delta = ctx.delta if args.delta is None else parse_rational(args.delta, "delta")
    corr = build_correspondence(ctx, ys, delta)
    data = corr.to_json()
    data["c0"] = format_rational(corr.approx.c0)
    data["parts"] = {k: format_rational(v) for k, v in corr.parts.items()}
    data["diagnostics"] = corr.approx.diagnostics
    write_json(args.out, data)
    return EXIT_OK


def cmd_subdivide(args) -> int:
    ctx, _ = _context(args)
    s = simplex_from_json(_json_arg(args.simplex, "--simplex"))
    s = tuple(ctx.normal_form(w) for w in s)
    if args.dim is not None and args.dim != len(s) - 1:
        raise InputError("--dim does not match the simplex", dim=args.dim, simplex=list(s))
    smap = SubdivisionMap(ctx, max(args.max_dim, len(s) - 1))
    chain = smap.f(s)
    data = chain_to_json(chain)
    data["l1"] = l1_norm(chain)
    data["schedule"] = smap.params.to_json()
    write_json(args.out, data)
    return EXIT_OK


def cmd_certify(args) -> int:
    ctx, digest = _context(args)
    if args.corpus:
        simplices, meta = load_corpus(args.corpus)
        simplices = [tuple(ctx.normal_form(w) for w in s) for s in simplices]
        bad = [list(s) for s in simplices if not admissible(ctx, s)]
        if bad:
            raise InputError("corpus simplex leaves the ball", simplex=bad[0], count=len(bad))
        seed = meta.get("seed")
        desc = {"source": Path(args.corpus).name, "count": len(simplices)}
    else:
        corpus = generate_corpus(
            ctx, args.seed, args.count, tuple(range(1, args.max_dim + 1)), args.max_shift, args.max_step
        )
        simplices, seed, desc = corpus.simplices, args.seed, corpus.describe()
    too_big = [list(s) for s in simplices if len(s) - 1 > args.max_dim]
    if too_big:
        raise InputError("simplex dimension exceeds --max-dim", simplex=too_big[0], max_dim=args.max_dim)
    try:
        run = certify_corpus(ctx, simplices, args.max_dim)
    except HypChainError as exc:
        write_json(args.report, {"passed": False, "failure": exc.to_json()})
        return EXIT_FAIL
    report = {
        "manifest": manifest(digest, run.smap.params, seed, desc, run.max_ratios()),
        "certificates": [c.to_json() for c in run.certificates],
        "passed": run.passed,
        "failures": [c.to_json() for c in run.certificates if not c.passed],
    }
    write_json(args.report, report)
    return EXIT_OK if run.passed else EXIT_FAIL


def cmd_homology(args) -> int:
    try:
        data = json.loads(Path(args.metric_space).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"metric space file is not JSON: {exc.msg}", file=args.metric_space) from None
    rows = data["distances"] if isinstance(data, dict) else data
    try:
        dist = metric_from_points([[parse_rational(v, "distances") for v in row] for row in rows])
    except ValueError as exc:
        raise InputError(str(exc), file=args.metric_space) from None
    r = parse_rational(args.r, "r")
    basis = rips_basis(dist, r, args.max_dim + 1, ordered=args.ordered)
    groups = homology(basis, args.max_dim, args.augmented)
    write_json(args.out, {
        "points": len(dist),
        "r": format_rational(r),
        "augmented": args.augmented,
        "ordered": args.ordered,
        "label": "empirical, finite net",
        "ranks": [basis.size(d) for d in range(args.max_dim + 2)],
        "homology": [g.to_json() for g in groups],
        "acyclic": all(g.is_zero() for g in groups),
    })
    return EXIT_OK


def _bench_samples(ctx, rng, dim, diam, samples, tries):
    out, seen = [], set()
    for _ in range(tries):
        if len(out) >= samples:
            break
        pts = [ctx.identity, random_walk(ctx, rng, diam)]
        if len(pts[1]) != diam:
            continue
        while len(pts) < dim + 1:
            pts.append(random_walk(ctx, rng, rng.randint(0, diam)))
        s = tuple(pts)
        try:
            if s in seen or ctx.diameter(s) != diam or not admissible(ctx, s):
                continue
        except OutOfBall:
            continue
        seen.add(s)
        out.append(s)
    return out


def cmd_bench_norm(args) -> int:
    ctx, digest = _context(args)
    rng = random.Random(args.seed)
    smap = SubdivisionMap(ctx, max(args.dim, 1))
    rows = []
    for d in range(args.min_diameter, args.max_diameter + 1):
        batch = _bench_samples(ctx, rng, args.dim, d, args.samples, 50 * args.samples)
        if not batch:
            continue
        norms = [l1_norm(smap.f(s)) for s in batch]
        sob = 1 + d
        rows.append({
            "dimension": args.dim,
            "diameter": d,
            "count": len(batch),
            "mean_l1": format_rational(Fraction(sum(norms), len(norms))),
            "max_l1": max(norms),
            "max_ratio": format_rational(Fraction(max(norms), sob)),
        })
    write_json(args.out, {
        "group_sha256": digest,
        "seed": args.seed,
        "schedule": smap.params.to_json(),
        "rows": rows,
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypchain", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def grouped(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--group", required=True, help="presentation file (.json or .toml)")
        p.add_argument("--radius", type=int, help="override ball_radius")
        p.add_argument("--out", default="-")
        return p

    p = grouped("group", "build the ball and print its summary")
    p.add_argument("--estimate-delta", type=int, metavar="SAMPLE_RADIUS")
    p.set_defaults(func=cmd_group)

    p = grouped("geodesic", "canonical geodesic between two elements")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.set_defaults(func=cmd_geodesic)

    p = grouped("hull", "geodesic hull of a tuple")
    p.add_argument("--tuple", required=True, help='JSON list of words, e.g. \'["","a","b"]\'')
    p.set_defaults(func=cmd_hull)

    p = grouped("tree", "approximating tree, net and correspondence of a tuple")
    p.add_argument("--tuple", required=True)
    p.add_argument("--delta")
    p.set_defaults(func=cmd_tree)

    p = grouped("subdivide", "evaluate f_i on one simplex")
    p.add_argument("--simplex", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--max-dim", type=int, default=3)
    p.set_defaults(func=cmd_subdivide)

    p = grouped("certify", "subdivide and certify a corpus")
    p.add_argument("--corpus", help="corpus JSON; generated from --seed when omitted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50, help="generated simplices per dimension")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--max-shift", type=int, default=2)
    p.add_argument("--max-step", type=int)
    p.add_argument("--report", default="-")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("homology", help="integral homology of a finite Rips complex")
    p.add_argument("--metric-space", required=True, help="JSON distance matrix")
    p.add_argument("--r", required=True)
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--augmented", action="store_true")
    p.add_argument("--ordered", action="store_true", help="use all ordered tuples")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_homology)

    p = grouped("bench-norm", "l1 norm of f_i against diameter")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--min-diameter", type=int, default=1)
    p.add_argument("--max-diameter", type=int, default=10)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench_norm)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        payload = exc.payload
    except HypChainError as exc:
        payload = exc.to_json()
    except (OSError, KeyError, TypeError) as exc:
        payload = {"error": "input_error", "message": str(exc), "witness": {"type": type(exc).__name__}}
    sys.stderr.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
    return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
