r"""
Command-line interface.

Subcommands: surface info; curves enum|i; graph dist|geodesic|gromov|scanL;
track adapted|split|vcycles|decompose; seq run|full|verify; verify all;
fixture emit.  Tabular output is CSV with exact integers and rationals as
p/q strings; structured output is JSON.  `verify all --out DIR` writes
report.csv, constants.json and PNG figures under DIR.
"""

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import chart as chartmod
from . import cones, experiments, sequences
from .chart import (NormalCurve, MultiCurve, get_chart, pants_curves,
                    enumerate_curves, intersection_number)
from .curvegraph import CurveGraphIndex, Unreachable, scan_L
from .report import rat, render_figures
from .track import TrainTrack, adapted_track, decompose_at_adapted


def _parse_coords(chart, text):
    if os.path.exists(text):
        with open(text) as f:
            data = json.load(f)
        return NormalCurve(get_chart(data["chart"]), data["coords"])
    return NormalCurve(chart, [int(x) for x in text.split(",")])


def _load_track(args):
    if args.track == "adapted":
        return adapted_track(args.surface).track
    with open(args.track) as f:
        return TrainTrack.from_json(json.load(f))


def _writer(args):
    if getattr(args, "out", None):
        return open(args.out, "w", newline="")
    return sys.stdout


def cmd_surface_info(args):
    chart = get_chart(args.surface)
    info = {
        "chart": chart.to_json(),
        "pants": [c.to_json() for c in pants_curves(chart)],
        "complexity": chart.sig.complexity,
    }
    json.dump(info, sys.stdout, indent=2)
    print()


def cmd_curves_enum(args):
    chart = get_chart(args.surface)
    curves = enumerate_curves(chart, args.bound)
    w = csv.writer(_writer(args))
    w.writerow(["coords"])
    for c in curves:
        w.writerow([" ".join(map(str, c.coords))])
    print(f"# {len(curves)} curves with coordinates <= {args.bound}",
          file=sys.stderr)


def cmd_curves_i(args):
    chart = get_chart(args.surface)
    a = _parse_coords(chart, args.a)
    b = _parse_coords(chart, args.b)
    print(intersection_number(a, b))


def _index(args):
    return CurveGraphIndex(get_chart(args.surface), args.bound, args.cap)


def cmd_graph_dist(args):
    chart = get_chart(args.surface)
    index = _index(args)
    x = _parse_coords(chart, args.a)
    y = _parse_coords(chart, args.b)
    w = csv.writer(_writer(args))
    w.writerow(["x", "y", "d", "certified"])
    try:
        d, cert = index.distance_info(x, y)
        w.writerow([" ".join(map(str, x.coords)),
                    " ".join(map(str, y.coords)), d, int(cert)])
    except Unreachable as u:
        w.writerow([" ".join(map(str, x.coords)),
                    " ".join(map(str, y.coords)), f"unreachable({u.cap})", 0])


def cmd_graph_geodesic(args):
    chart = get_chart(args.surface)
    index = _index(args)
    x = _parse_coords(chart, args.a)
    y = _parse_coords(chart, args.b)
    path = index.geodesic(x, y)
    w = csv.writer(_writer(args))
    w.writerow(["step", "coords"])
    for i, c in enumerate(path):
        w.writerow([i, " ".join(map(str, c.coords))])


def cmd_graph_gromov(args):
    chart = get_chart(args.surface)
    index = _index(args)
    x = _parse_coords(chart, args.a)
    y = _parse_coords(chart, args.b)
    p = _parse_coords(chart, args.p)
    print(rat(index.gromov_product(x, y, p)))


def cmd_graph_scanL(args):
    chart = get_chart(args.surface)
    index = _index(args)
    alpha = _parse_coords(chart, args.a)
    beta = _parse_coords(chart, args.b)
    grid = [Fraction(s) for s in args.grid.split(",")]
    out = scan_L(alpha, beta, Fraction(args.r), grid, index)
    w = csv.writer(_writer(args))
    w.writerow(["a", "members", "diameter"])
    for a, row in sorted(out.items()):
        w.writerow([rat(a), len(row["members"]), rat(row["diameter"])])


def cmd_track_adapted(args):
    at = adapted_track(args.surface)
    data = at.track.to_json()
    data["pants"] = [c.to_json() for c in at.pants]
    data["connectors"] = [
        {"large": c["large"], "marker": c["marker"],
         "measure": list(c["measure"])} for c in at.connectors
    ]
    json.dump(data, _writer(args), indent=2)


def cmd_track_split(args):
    track = _load_track(args)
    move = json.loads(args.move)
    t2, M = track.split(move["branch"], move["dir"])
    out = {"track": t2.to_json(), "matrix": M}
    json.dump(out, _writer(args), indent=2)


def cmd_track_vcycles(args):
    track = _load_track(args)
    out = [{"measure": list(vc.measure), "curve": vc.curve.to_json()}
           for vc in cones.vertex_cycles(track)]
    json.dump(out, _writer(args), indent=2)


def cmd_track_decompose(args):
    at = adapted_track(args.surface)
    mu = [int(x) for x in args.measure.split(",")]
    mu0, n, large = decompose_at_adapted(at, mu)
    json.dump({"mu0": list(mu0), "n": list(n),
               "large_weights": list(large)}, sys.stdout, indent=2)
    print()


def _guide(args, at):
    rays = cones.extreme_rays(at.track)
    if args.guide:
        return [int(x) for x in args.guide.split(",")]
    rng = experiments.rng_for(args.seed, f"cli:{args.surface}")
    return experiments.random_guide(at.track, rays, rng)


def _seq_csv(seq, index, out):
    w = csv.writer(out)
    w.writerow(["stage", "move", "phiCurve", "dFromStart",
                "massOfGuidePreimage"])
    rows = sequences.convergence_diagnostic(seq, index)
    for i, row in enumerate(rows):
        move = ""
        if i > 0:
            e, d = seq.moves[i - 1]
            move = f"{e}{d}"
        w.writerow([row["stage"], move,
                    " ".join(map(str, row["curve"].coords)),
                    rat(row["d_from_start"]),
                    sum(seq.preimages[i])])


def cmd_seq_run(args):
    at = adapted_track(args.surface)
    guide = _guide(args, at)
    seq = sequences.run_splitting_sequence(at.track, guide, args.steps)
    index = CurveGraphIndex(at.track.chart, args.bound, args.cap)
    _seq_csv(seq, index, _writer(args))
    print(f"# halt: {seq.halt} after {len(seq)} splits", file=sys.stderr)


def cmd_seq_full(args):
    at = adapted_track(args.surface)
    guide = _guide(args, at)
    seq = sequences.run_full_splitting_sequence(at.track, guide, args.rounds)
    index = CurveGraphIndex(at.track.chart, args.bound, args.cap)
    _seq_csv(seq, index, _writer(args))
    print(f"# halt: {seq.halt} after {len(seq)} splits", file=sys.stderr)


def cmd_seq_verify(args):
    at = adapted_track(args.surface)
    ok = 0
    for k in range(args.samples):
        rays = cones.extreme_rays(at.track)
        rng = experiments.rng_for(args.seed + k, f"verify:{args.surface}")
        guide = experiments.random_guide(at.track, rays, rng)
        seq = sequences.run_splitting_sequence(at.track, guide, args.steps)
        carried = seq.check_carried_throughout()
        pushed = True
        try:
            for t in seq.tracks:
                for vc in cones.vertex_cycles(t):
                    pass
        except Exception:
            pushed = False
        if carried and pushed:
            ok += 1
        print(f"seq {k}: len {len(seq)} halt {seq.halt} carried {carried} "
              f"cycles_valid {pushed}")
    print(f"{ok}/{args.samples} sequences fully verified")


def cmd_verify_all(args):
    config = {
        "surfaces": ["s05", "s12"],
        "seed": args.seed,
        "bound": args.bound,
        "cap": args.cap,
        "samples": args.samples,
        "workers": args.workers,
    }
    report = experiments.verify_all(config)
    outdir = args.out or "report"
    os.makedirs(outdir, exist_ok=True)
    report.write_csv(os.path.join(outdir, "report.csv"))
    report.write_constants(os.path.join(outdir, "constants.json"))
    report.write_timings(os.path.join(outdir, "timings.csv"))
    render_figures(outdir, getattr(report, "figure_data", {}))
    for c in report.checks:
        status = "PASS" if c["violations"] == 0 else "FAIL"
        print(f"{status}  {c['check']:34s} samples={c['samples']} "
              f"violations={c['violations']} truncated={c['truncated']} "
              f"value={rat(c['value'])}")
    print(f"report written to {outdir}/")
    return 0 if report.passed() else 1


FIXTURES = {
    "s05-chart": lambda: get_chart("s05").to_json(),
    "s12-chart": lambda: get_chart("s12").to_json(),
    "s05-pants": lambda: [c.to_json() for c in pants_curves(get_chart("s05"))],
    "s12-pants": lambda: [c.to_json() for c in pants_curves(get_chart("s12"))],
    "s05-adapted": lambda: _adapted_fixture("s05"),
    "s12-adapted": lambda: _adapted_fixture("s12"),
}


def _adapted_fixture(surface):
    at = adapted_track(surface)
    data = at.track.to_json()
    data["connectors"] = [{"large": c["large"], "marker": c["marker"],
                           "measure": list(c["measure"])}
                          for c in at.connectors]
    return data


def cmd_fixture_emit(args):
    if args.name not in FIXTURES:
        print(f"unknown fixture {args.name!r}; known: {sorted(FIXTURES)}",
              file=sys.stderr)
        return 2
    json.dump(FIXTURES[args.name](), _writer(args), indent=2)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", choices=["s05", "s12"], default="s05")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--bound", type=int, default=4)
    common.add_argument("--cap", type=int, default=4)
    common.add_argument("--steps", type=int, default=30)
    common.add_argument("--samples", type=int, default=1)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default=None)

    p = argparse.ArgumentParser(prog="trackgraph")
    sub = p.add_subparsers(dest="cmd", required=True)

    def leaf(group, name, func, **kw):
        sp = group.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=func)
        return sp

    s = sub.add_parser("surface")
    ss = s.add_subparsers(dest="sub", required=True)
    leaf(ss, "info", cmd_surface_info)

    c = sub.add_parser("curves")
    cs = c.add_subparsers(dest="sub", required=True)
    leaf(cs, "enum", cmd_curves_enum)
    ci = leaf(cs, "i", cmd_curves_i)
    ci.add_argument("a")
    ci.add_argument("b")

    g = sub.add_parser("graph")
    gs = g.add_subparsers(dest="sub", required=True)
    gd = leaf(gs, "dist", cmd_graph_dist)
    gd.add_argument("a"); gd.add_argument("b")
    gg = leaf(gs, "geodesic", cmd_graph_geodesic)
    gg.add_argument("a"); gg.add_argument("b")
    gp = leaf(gs, "gromov", cmd_graph_gromov)
    gp.add_argument("a"); gp.add_argument("b"); gp.add_argument("p")
    gl = leaf(gs, "scanL", cmd_graph_scanL)
    gl.add_argument("a"); gl.add_argument("b")
    gl.add_argument("--r", default="4")
    gl.add_argument("--grid", default="1/8,1/2,2,8")

    t = sub.add_parser("track")
    ts = t.add_subparsers(dest="sub", required=True)
    leaf(ts, "adapted", cmd_track_adapted)
    tp = leaf(ts, "split", cmd_track_split)
    tp.add_argument("track")
    tp.add_argument("move", help='JSON, e.g. {"branch": 1, "dir": "L"}')
    tv = leaf(ts, "vcycles", cmd_track_vcycles)
    tv.add_argument("track")
    td = leaf(ts, "decompose", cmd_track_decompose)
    td.add_argument("measure")

    q = sub.add_parser("seq")
    qs = q.add_subparsers(dest="sub", required=True)
    qr = leaf(qs, "run", cmd_seq_run)
    qr.add_argument("--guide", default=None)
    qf = leaf(qs, "full", cmd_seq_full)
    qf.add_argument("--guide", default=None)
    qf.add_argument("--rounds", type=int, default=2)
    leaf(qs, "verify", cmd_seq_verify)

    v = sub.add_parser("verify")
    vs = v.add_subparsers(dest="sub", required=True)
    leaf(vs, "all", cmd_verify_all)

    f = sub.add_parser("fixture")
    fs = f.add_subparsers(dest="sub", required=True)
    fe = leaf(fs, "emit", cmd_fixture_emit)
    fe.add_argument("name")

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    code = args.func(args)
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
