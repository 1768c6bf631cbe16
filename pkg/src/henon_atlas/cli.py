"""Command-line front end: ``henon-atlas <command> [args]``.

Flags override spec-file keys, and spec-file keys override built-in defaults.
Exit codes: 0 success, 1 analysis error (e.g. no unstable direction),
2 usage or spec-file error, 3 output could not be written.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .errors import HenonAtlasError, SpecFileError
from .lyapunov import classify_attractor, lyapunov_spectrum, run_report
from .manifold import (
    curve_csv, min_return_distance, min_stable_plane_distance, trace_separatrix,
    trace_stable_separatrix,
)
from .mapcore import HenonMap, henon2d_normalize
from .presets import PRESETS
from .raster import REGION_PALETTE, colorize, density_projection, draw_polylines, ppm_bytes
from .specfile import RunSpec, parse_spec, read_spec
from .spectrum import (
    RegionLabel, boundary_curves, chart_csv, classify_point, curves_csv, figure8_inequalities,
    lorenz_inequalities, saddle_chart, solve_characteristic,
)
from .sweep import SweepSpec, export_csv, metadata_json, render_ppm, run_sweep

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class IOFailure(HenonAtlasError):
    pass


def _g(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _emit(key: str, value) -> None:
    print(f"{key}: {value}")


class _Writer:
    """Writes artifacts into the output directory, turning OS errors into IOFailure."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.written: list[str] = []

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def ensure_dir(self):
        try:
            os.makedirs(self.out_dir, exist_ok=True)
        except OSError as exc:
            raise IOFailure(f"cannot create output directory {self.out_dir!r}: {exc.strerror}") from None

    def write(self, name: str, data) -> str:
        self.ensure_dir()
        p = self.path(name)
        try:
            if isinstance(data, bytes):
                with open(p, "wb") as fh:
                    fh.write(data)
            else:
                with open(p, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(data)
        except OSError as exc:
            raise IOFailure(f"cannot write {p!r}: {exc.strerror}") from None
        self.written.append(p)
        return p

    def figure(self, name: str, draw, *args, **kwargs) -> str:
        self.ensure_dir()
        p = self.path(name)
        try:
            draw(*args, p, **kwargs)
        except OSError as exc:
            raise IOFailure(f"cannot write {p!r}: {exc.strerror}") from None
        self.written.append(p)
        return p


# -- shared option handling ---------------------------------------------------

def _load_spec(args) -> RunSpec:
    spec = read_spec(args.spec) if args.spec else parse_spec("")
    if getattr(args, "preset", None):
        if args.preset not in PRESETS:
            raise SpecFileError(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
        if args.preset != spec.preset:
            spec.point = None
            spec.terms = None
            spec.B = None
        spec.preset = args.preset
    if getattr(args, "point", None):
        spec.point = args.point
    for name in ("A", "C"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(spec, name, v)
    if getattr(args, "B", None) is not None:
        spec.B = args.B
    return spec


def _out_dir(args, spec: RunSpec) -> str:
    return args.out if args.out is not None else spec.output.get("dir", ".")


def _threads(args, spec: RunSpec) -> int:
    if args.threads is not None:
        return args.threads
    return int(spec.grid.get("threads", 1))


def _timestamp(args, spec: RunSpec) -> bool:
    return not args.no_timestamp and spec.output.get("timestamp", True)


def _figures(args, spec: RunSpec) -> bool:
    return not args.no_figures and spec.output.get("figures", True)


def _lyap_cfg(args, spec: RunSpec):
    cfg = spec.lyapunov_config()
    changes = {}
    if getattr(args, "n_measure", None) is not None:
        changes["n_measure"] = args.n_measure
    if getattr(args, "n_transient", None) is not None:
        changes["n_transient"] = args.n_transient
    return cfg.replace(**changes) if changes else cfg


def _meta_json(payload: dict, timestamp: bool) -> str:
    payload = {"software": "henon-atlas", "version": __version__, **payload}
    if timestamp:
        from datetime import datetime, timezone
        payload["created"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, float) and math.isnan(o):
        return None
    raise TypeError(type(o).__name__)


# -- commands -----------------------------------------------------------------

def cmd_classify(args) -> int:
    spec = _load_spec(args)
    A, C = spec.point_AC()
    B = spec.resolve_B() if spec.has_map() else None
    if B is None:
        raise SpecFileError("B is required (positional argument or map.B)")
    desc, label = classify_point(A, B, C)
    ms = solve_characteristic(A, B, C)
    _emit("A", _g(A))
    _emit("B", _g(B))
    _emit("C", _g(C))
    for k, z in enumerate(ms.roots, start=1):
        _emit(f"lambda{k}", f"{_g(z.real)} {_g(z.imag)}i  |{_g(abs(z))}|")
    _emit("sigma", _g(desc.sigma))
    _emit("unstable_count", desc.unstable_count)
    _emit("unstable_real", _g(desc.unstable_real))
    _emit("stable_pair", desc.stable_pair_kind)
    _emit("real_signs", " ".join(desc.real_signs) or "none")
    _emit("leading_stable_sign", desc.leading_stable_sign)
    _emit("on_bifurcation", desc.on_bifurcation or "none")
    _emit("region", label.name)
    if B > 0:
        lor = lorenz_inequalities(A, B, C)
        fig = figure8_inequalities(A, B, C)
        _emit("lorenz_conditions", " ".join(f"{k}={_g(v)}" for k, v in lor.items())
              + f" all={_g(all(lor.values()))}")
        _emit("figure8_conditions", " ".join(f"{k}={_g(v)}" for k, v in fig.items())
              + f" all={_g(all(fig.values()))}")
    else:
        _emit("lorenz_conditions", "n/a (needs B > 0)")
        _emit("figure8_conditions", "n/a (needs B > 0)")
    return EXIT_OK


def cmd_chart(args) -> int:
    spec = _load_spec(args)
    B = spec.resolve_B() if spec.has_map() else 0.5
    if args.rect is not None:
        rect = tuple(args.rect)
    elif any(k in spec.grid for k in ("A_min", "A_max", "C_min", "C_max")):
        rect = spec.rect()
    else:
        rect = (-4.0, 4.0, -4.0, 4.0)
    if args.res is not None:
        res = tuple(args.res)
    elif "W" in spec.grid or "H" in spec.grid:
        res = spec.resolution()
    else:
        res = (400, 400)
    if not (rect[0] < rect[1] and rect[2] < rect[3]):
        raise SpecFileError("rect must satisfy A_min < A_max and C_min < C_max")
    chart = saddle_chart(B, rect, res)
    curves = boundary_curves(B, rect[:2], max(4 * res[0], 64), rect[2:])
    rgb = colorize(chart.labels, REGION_PALETTE)
    draw_polylines(rgb, curves.values(), rect)
    w = _Writer(_out_dir(args, spec))
    w.write("chart.ppm", ppm_bytes(rgb))
    w.write("chart.csv", chart_csv(chart))
    w.write("curves.csv", curves_csv(curves))
    counts = {}
    for code in np.unique(chart.labels):
        counts[RegionLabel(int(code)).name] = int(np.count_nonzero(chart.labels == code))
    w.write("chart.json", _meta_json(
        {"B": B, "rect": list(rect), "resolution": list(res), "label_counts": counts},
        _timestamp(args, spec)))
    if _figures(args, spec):
        from .plotting import chart_figure
        w.figure("chart.png", chart_figure, chart, curves)
    _emit("B", _g(B))
    _emit("labels", ", ".join(f"{k}={v}" for k, v in counts.items()))
    for p in w.written:
        _emit("wrote", p)
    return EXIT_OK


def cmd_diagram(args) -> int:
    spec = _load_spec(args)
    B = spec.resolve_B()
    rect = tuple(args.rect) if args.rect is not None else spec.rect()
    res = tuple(args.res) if args.res is not None else spec.resolution()
    overlay = spec.grid.get("overlay", True) and not args.no_overlay
    try:
        sweep = SweepSpec(B, spec.nonlinearity(), rect, res, _lyap_cfg(args, spec), overlay)
    except ValueError as exc:
        raise SpecFileError(str(exc), spec.source) from None
    threads = _threads(args, spec)
    d = run_sweep(sweep, threads=threads)
    w = _Writer(_out_dir(args, spec))
    w.write("diagram.ppm", render_ppm(d))
    w.write("diagram.csv", export_csv(d))
    w.write("diagram.json", metadata_json(d, timestamp=_timestamp(args, spec)))
    if _figures(args, spec):
        from .plotting import diagram_figure
        curves = boundary_curves(B, rect[:2], max(4 * res[0], 64), rect[2:]) if overlay else None
        w.figure("diagram.png", diagram_figure, d, curves)
    counts = np.bincount(d.classes.ravel(), minlength=7)
    _emit("cells", int(d.classes.size))
    _emit("class_counts", " ".join(f"{k}={int(c)}" for k, c in enumerate(counts)))
    for p in w.written:
        _emit("wrote", p)
    return EXIT_OK


def _attractor_outputs(w: _Writer, m: HenonMap, run, cfg, label, args, spec, size) -> dict:
    report = run_report(m, run, cfg, label)
    w.write("report.json", _meta_json({"report": report}, _timestamp(args, spec)))
    if not run.escaped:
        lines = ["x,y,z"] + [f"{p[0]:.17g},{p[1]:.17g},{p[2]:.17g}" for p in run.attractor_sample]
        w.write("attractor.csv", "\n".join(lines) + "\n")
        w.write("projection.ppm", ppm_bytes(density_projection(run.attractor_sample, size=(size, size))))
        if _figures(args, spec):
            from .plotting import projection_figure
            w.figure("attractor.png", projection_figure, run.attractor_sample,
                     title=f"{label or 'map'}: A={m.A:g}, B={m.B:g}, C={m.C:g}")
    return report


def _print_report(report: dict) -> None:
    spec = report["spectrum"]
    _emit("class", f"{report['class_code']} {report['class_name']}")
    _emit("escaped", _g(report["escaped"]))
    if spec is not None:
        for k, v in enumerate(spec, start=1):
            _emit(f"L{k}", _g(v))
        _emit("L1+L2", _g(spec[0] + spec[1]))
        _emit("sum_L", _g(report["spectrum_sum"]))
        if report["sum_minus_log_det"] is not None:
            _emit("sum_L - ln|det J|", _g(report["sum_minus_log_det"]))
        _emit("min_distance_to_O", _g(report["min_distance_to_O"]))
    _emit("pseudohyperbolic", _g(report["pseudohyperbolic"]))
    _emit("homoclinic", _g(report["homoclinic"]))


def cmd_attractor(args) -> int:
    spec = _load_spec(args)
    m = spec.henon_map()
    cfg = _lyap_cfg(args, spec)
    run = lyapunov_spectrum(m, cfg=cfg)
    w = _Writer(_out_dir(args, spec))
    size = int(spec.output.get("projection_size", 512))
    report = _attractor_outputs(w, m, run, cfg, spec.preset, args, spec, size)
    _emit("map", f"A={_g(m.A)} B={_g(m.B)} C={_g(m.C)} f={m.nonlinearity.describe()}")
    _print_report(report)
    for p in w.written:
        _emit("wrote", p)
    return EXIT_OK


def cmd_separatrix(args) -> int:
    spec = _load_spec(args)
    m = spec.henon_map()
    cfg = spec.trace_config()
    changes = {}
    if args.direction is not None:
        changes["direction"] = args.direction
    if args.max_points is not None:
        changes["max_points"] = args.max_points
    cfg = cfg.replace(**changes) if changes else cfg
    curve = (trace_stable_separatrix if args.stable else trace_separatrix)(m, cfg)
    w = _Writer(_out_dir(args, spec))
    w.write("separatrix.csv", curve_csv(curve))
    size = int(spec.output.get("projection_size", 512))
    w.write("separatrix.ppm", ppm_bytes(density_projection(curve.points, size=(size, size))))
    d_ret = min_return_distance(curve)
    try:
        d_plane = min_stable_plane_distance(m, curve)
    except HenonAtlasError:
        d_plane = None
    summary = {
        "map": {"A": m.A, "B": m.B, "C": m.C, "nonlinearity": m.nonlinearity.describe()},
        "config": asdict(cfg),
        "stable": args.stable,
        "multiplier": curve.multiplier,
        "points": len(curve),
        "generations": int(curve.generation[-1]) if len(curve) else 0,
        "exited": curve.exited,
        "unresolved_gaps": curve.unresolved_gaps,
        "arclength": float(curve.arclength[-1]) if len(curve) else 0.0,
        "min_return_distance_to_O": None if math.isinf(d_ret) else d_ret,
        "min_stable_plane_distance": None if d_plane is None or math.isinf(d_plane) else d_plane,
    }
    w.write("separatrix.json", _meta_json({"separatrix": summary}, _timestamp(args, spec)))
    if _figures(args, spec):
        from .plotting import projection_figure
        kind = "stable" if args.stable else "unstable"
        w.figure("separatrix.png", projection_figure, curve.points, line=True,
                 title=f"{kind} separatrix, A={m.A:g}, B={m.B:g}, C={m.C:g}")
    _emit("multiplier", _g(curve.multiplier))
    _emit("points", len(curve))
    _emit("generations", summary["generations"])
    _emit("exited", _g(curve.exited))
    _emit("arclength", _g(summary["arclength"]))
    _emit("min_return_distance_to_O", _g(summary["min_return_distance_to_O"]))
    _emit("min_stable_plane_distance", _g(summary["min_stable_plane_distance"]))
    for p in w.written:
        _emit("wrote", p)
    return EXIT_OK


def cmd_henon2d(args) -> int:
    A, C, (yp, ym) = henon2d_normalize(args.M, args.C)
    D = (1.0 - args.C) ** 2 + 4.0 * args.M
    _emit("M", _g(args.M))
    _emit("C", _g(args.C))
    _emit("D", _g(D))
    _emit("fixed_points", f"{_g(yp)} {_g(ym)}")
    _emit("A", _g(A))
    _, label = classify_point(A, 0.0, C)
    _emit("region", label.name)
    if args.run:
        spec = _load_spec(argparse.Namespace(spec=args.spec))
        cfg = _lyap_cfg(args, spec)
        m = HenonMap(A, 0.0, C, PRESETS["henon2d"].nonlinearity)
        run = lyapunov_spectrum(m, cfg=cfg)
        w = _Writer(_out_dir(args, spec))
        size = int(spec.output.get("projection_size", 512))
        report = _attractor_outputs(w, m, run, cfg, "henon2d", args, spec, size)
        _print_report(report)
        for p in w.written:
            _emit("wrote", p)
    return EXIT_OK


def cmd_presets(args) -> int:
    for p in PRESETS.values():
        pts = "; ".join(f"{k}=({_g(a)}, {_g(c)})" for k, (a, c) in p.points.items())
        print(f"{p.name}: B={_g(p.B)} f={p.nonlinearity.describe()} points: {pts}")
        if p.description:
            print(f"    {p.description}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--spec", metavar="FILE", help="key=value run specification")
    p.add_argument("--out", metavar="DIR", help="output directory (default: output.dir or .)")
    p.add_argument("--threads", type=int, metavar="N", help="worker threads for sweeps")
    p.add_argument("--no-timestamp", action="store_true", help="omit creation time from metadata")
    p.add_argument("--no-figures", action="store_true", help="skip PNG figures")
    return p


def _lyap_opts(p):
    p.add_argument("-n", "--n-measure", type=int, dest="n_measure", help="measured iterations")
    p.add_argument("--n-transient", type=int, help="discarded iterations")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="henon-atlas",
        description="Saddle charts, Lyapunov diagrams, attractors and separatrices "
                    "of 3D generalized Henon maps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify the origin fixed point")
    p.add_argument("A", type=float, nargs="?")
    p.add_argument("B", type=float, nargs="?")
    p.add_argument("C", type=float, nargs="?")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("chart", parents=[common], help="saddle chart over the (A, C) plane")
    p.add_argument("--B", type=float)
    p.add_argument("--rect", type=float, nargs=4, metavar=("A_MIN", "A_MAX", "C_MIN", "C_MAX"))
    p.add_argument("--res", type=int, nargs=2, metavar=("W", "H"))
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("diagram", parents=[common], help="Lyapunov diagram")
    p.add_argument("--preset")
    p.add_argument("--point")
    p.add_argument("--B", type=float)
    p.add_argument("--rect", type=float, nargs=4, metavar=("A_MIN", "A_MAX", "C_MIN", "C_MAX"))
    p.add_argument("--res", type=int, nargs=2, metavar=("W", "H"))
    p.add_argument("--no-overlay", action="store_true", help="do not draw boundary curves")
    _lyap_opts(p)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("attractor", parents=[common], help="Lyapunov run and attractor portrait")
    p.add_argument("preset", nargs="?")
    p.add_argument("A", type=float, nargs="?")
    p.add_argument("C", type=float, nargs="?")
    p.add_argument("--point")
    _lyap_opts(p)
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("separatrix", parents=[common], help="trace a separatrix of the origin")
    p.add_argument("preset", nargs="?")
    p.add_argument("A", type=float, nargs="?")
    p.add_argument("C", type=float, nargs="?")
    p.add_argument("direction", type=int, nargs="?", choices=(1, -1))
    p.add_argument("--point")
    p.add_argument("--stable", action="store_true", help="stable separatrix via the inverse map")
    p.add_argument("--max-points", type=int)
    p.set_defaults(func=cmd_separatrix)

    p = sub.add_parser("henon2d", parents=[common], help="2D Henon map in standard form")
    p.add_argument("M", type=float)
    p.add_argument("C", type=float)
    p.add_argument("--run", action="store_true", help="also run the 2D attractor")
    _lyap_opts(p)
    p.set_defaults(func=cmd_henon2d)

    p = sub.add_parser("presets", parents=[common], help="list the preset catalog")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except SpecFileError as exc:
        print(f"henon-atlas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IOFailure as exc:
        print(f"henon-atlas: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HenonAtlasError as exc:
        print(f"henon-atlas: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"henon-atlas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
