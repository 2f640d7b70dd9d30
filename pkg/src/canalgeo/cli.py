"""Command-line front end.

Exit codes: 0 success or expected outcome, 2 input error, 3 degenerate
geometry, 4 a reproduced statement came out in the wrong direction.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from . import canal, cheeger, constructions, geom2d, geom3d, verify
from .serialize import BodyFormatError, cheeger_to_dict, dumps, jsonl, load_body, report_to_dict, to_csv
from ._tol import DegenerateInput, GeometryError, PreconditionViolated, ProjectionMismatch, ScaleLimit

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_ALARM = 0, 2, 3, 4
PLANAR_BUILTINS = ("unit-square", "disc", "disc-<m>", "triangle", "thin-rect", "hexagon", "pyramid", "pyramid-D")
SPATIAL_BUILTINS = ("cube", "K3", "AH", "LH", "pyramid", "pyramid-D")
DILATION_COLUMNS = ["lambda", "volume", "surface", "ratio"]
AH_COLUMNS = ["h", "volume", "surface", "ratio", "cylinder_limit", "exceeds"]
PYRAMID_COLUMNS = ["h", "ratio_C", "bound", "ratio_D", "amplification", "cheeger_C"]
EQ18_COLUMNS = ["h", "lhs", "rhs", "bracket_lo", "bracket_hi", "fails"]
OUTCOME_COLUMNS = ["trial", "seed", "name", "lhs", "rhs", "slack", "holds", "near_violation"]


class InputError(Exception):
    """Bad command-line value detected after parsing."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: str | None
    body: str | None
    projection: str | None
    witness: tuple
    n: int | None
    h: float | None
    h_range: tuple | None
    lambdas: tuple | None
    m: int | None
    tol: float | None
    seed: int
    trials: int
    check: str | None
    profiles: tuple
    format: str
    out: str | None

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        if a.m is not None and a.m < 1:
            raise InputError("--m must be positive")
        if a.tol is not None and not a.tol > 0:
            raise InputError("--tol must be positive")
        if a.trials < 0:
            raise InputError("--trials must be nonnegative")
        if a.h is not None and not (math.isfinite(a.h) and a.h > 0):
            raise InputError("--h must be positive")
        return cls(
            a.command, getattr(a, "target", None), a.body, a.projection, tuple(a.witness or ()),
            a.n, a.h, a.h_range, a.lambdas, a.m, a.tol, a.seed, a.trials,
            getattr(a, "check", None), tuple(a.profile or verify.PROFILES), a.format, a.out,
        )


def _h_range(text: str) -> tuple:
    try:
        parts = [float(x) for x in text.split(":")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc
    if len(parts) == 2:
        parts.append(1.0)
    lo, hi, step = parts if len(parts) == 3 else (None, None, None)
    if lo is None or not (0 < lo <= hi) or not step > 0:
        raise argparse.ArgumentTypeError("expected a:b or a:b:step with 0 < a <= b, step > 0")
    return lo, hi, step


def _lambdas(text: str) -> tuple:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad list {text!r}") from exc
    if not vals or any(v < 1 for v in vals) or list(vals) != sorted(vals):
        raise argparse.ArgumentTypeError("factors must be sorted and >= 1")
    return vals


def _heights(cfg: RunConfig, default: tuple) -> list[float]:
    if cfg.h_range is not None:
        lo, hi, step = cfg.h_range
        k = int(math.floor((hi - lo) / step + 1e-9))
        return [lo + i * step for i in range(k + 1)]
    if cfg.h is not None:
        return [cfg.h]
    return list(default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="builtin:<name> or a JSON body file")
    common.add_argument("--projection", help="planar body (builtin:<name> or file)")
    common.add_argument("--witness", action="append", help="JSON polytope file; repeatable")
    common.add_argument("--n", type=int)
    common.add_argument("--h", type=float)
    common.add_argument("--h-range", type=_h_range, metavar="A:B[:STEP]")
    common.add_argument("--lambdas", type=_lambdas, metavar="L1,L2,...")
    common.add_argument("--m", type=int, help="chords per rounded corner")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--profile", action="append", choices=verify.PROFILES + ("sharp",))
    common.add_argument("--format", choices=("json", "csv", "table"), default=None)
    common.add_argument("--out", metavar="PATH")
    p = argparse.ArgumentParser(prog="canalgeo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("cheeger", parents=[common], help="Cheeger set of a planar body")
    sub.add_parser("canal-bounds", parents=[common], help="bounds on the canal-class supremum")
    r = sub.add_parser("reproduce", parents=[common], help="tabulate an explicit construction")
    r.add_argument("target", choices=("prop-AH", "lemma-pyramid", "prop-eq18", "lemma-dilation"))
    s = sub.add_parser("search", parents=[common], help="seeded randomized inequality search")
    s.add_argument("--check", required=True, choices=sorted(verify.TRIALS))
    return p


# -- bodies ---------------------------------------------------------------


def planar_body(spec: str, cfg: RunConfig):
    if not spec.startswith("builtin:"):
        return load_body(spec)
    name = spec[len("builtin:"):]
    h = cfg.h if cfg.h is not None else 10.0
    if name == "unit-square":
        return geom2d.unit_square()
    if name == "disc":
        return geom2d.RoundedPolygon(geom2d.Degenerate2D([[0.0, 0.0]]), 1.0)
    if name.startswith("disc-"):
        try:
            return geom2d.regular_polygon(int(name[5:]))
        except ValueError as exc:
            raise InputError(f"bad disc approximation {name!r}") from exc
    if name == "triangle":
        return geom2d.hull2d([[0, 0], [4, 0], [0, 3]])
    if name == "thin-rect":
        return geom2d.rectangle(1.0, 0.01)
    if name == "hexagon":
        return geom2d.regular_polygon(6)
    if name in ("pyramid", "pyramid-D"):
        C, D = _pyramid(2, h)
        return C.polygon if name == "pyramid" else D.polygon
    raise InputError(f"unknown planar builtin {name!r}; choose from {', '.join(PLANAR_BUILTINS)}")


def _pyramid(n: int, h: float):
    try:
        return constructions.build_pyramid(n, h)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def spatial_body(spec: str, cfg: RunConfig) -> geom3d.ConvexPolytope3:
    if not spec.startswith("builtin:"):
        B = load_body(spec)
        if not isinstance(B, geom3d.ConvexPolytope3):
            raise InputError("expected a polytope3 body")
        return B
    name = spec[len("builtin:"):]
    if name == "cube":
        return geom3d.cube()
    if name == "K3":
        return constructions.build_Kn(3).polytope
    if name == "AH":
        return constructions.build_AH(3, cfg.h if cfg.h is not None else 83.0).polytope
    if name == "LH":
        return constructions.build_LH(3, cfg.h if cfg.h is not None else 10.0, tilde=True).polytope
    if name in ("pyramid", "pyramid-D"):
        C, D = _pyramid(3, cfg.h if cfg.h is not None else 10.0)
        return C.polytope if name == "pyramid" else D.polytope
    raise InputError(f"unknown spatial builtin {name!r}; choose from {', '.join(SPATIAL_BUILTINS)}")


# -- output ---------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def table(rows: list[dict], columns: list[str]) -> str:
    cells = [columns] + [[_fmt(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n" for row in cells)


def _kv(d: dict) -> str:
    return "".join(f"{k}: {_fmt(v)}\n" for k, v in d.items())


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------


def cmd_cheeger(cfg: RunConfig) -> int:
    if not cfg.body:
        raise InputError("--body is required")
    C = planar_body(cfg.body, cfg)
    if cfg.m is not None and isinstance(C, geom2d.RoundedPolygon):
        C = geom2d.polygonize(C, cfg.m)
    res = cheeger.cheeger_2d(C)
    d = cheeger_to_dict(res)
    fmt = cfg.format or "table"
    if fmt == "json":
        _emit(dumps(d) + "\n", cfg)
    elif fmt == "csv":
        _emit(to_csv([d], ["t_star", "ratio", "residual"]), cfg)
    else:
        _emit(_kv({"t_star": res.t_star, "ratio": res.ratio, "residual": res.residual}), cfg)
    return EXIT_OK


def cmd_canal_bounds(cfg: RunConfig) -> int:
    spec = cfg.projection or cfg.body
    if not spec:
        raise InputError("--projection (or --body) is required")
    C = planar_body(spec, cfg)
    witnesses = [(path, spatial_body(path, cfg)) for path in cfg.witness]
    report = canal.canal_bounds(C, witnesses, m=cfg.m or 64, tol=cfg.tol)
    fmt = cfg.format or "table"
    rows = [{"name": n, "slice_ratio": r, "ratio": q} for n, r, q, _ in report.witnesses]
    if fmt == "json":
        _emit(dumps(report_to_dict(report)) + "\n", cfg)
    elif fmt == "csv":
        _emit(to_csv(rows, ["name", "slice_ratio", "ratio"]), cfg)
    else:
        head = {k: v for k, v in report.as_dict().items() if k != "witnesses"}
        _emit(_kv(head) + table(rows, ["name", "slice_ratio", "ratio"]), cfg)
    return EXIT_OK


def _reproduce_ah(cfg: RunConfig):
    n = cfg.n or 3
    if n < 3:
        raise InputError("prop-AH needs --n >= 3")
    limit = 1.0 / (2 * (n - 1))
    rows, agree = [], True
    for h in _heights(cfg, (80, 81, 82, 83, 84, 85, 86)):
        b = constructions.build_AH(n, h)
        rows.append({"h": h, "volume": b.volume, "surface": b.surface_area, "ratio": b.ratio,
                     "cylinder_limit": limit, "exceeds": b.ratio > limit})
        if b.polytope is not None:
            p = b.polytope
            agree &= math.isclose(p.volume, b.volume, rel_tol=1e-9)
            agree &= math.isclose(p.surface_area, b.surface_area, rel_tol=1e-9)
    hstar = constructions.ah_crossover(n)
    consistent = all(r["exceeds"] == (r["h"] > hstar) for r in rows)
    ok = math.isfinite(hstar) and consistent and agree
    return rows, AH_COLUMNS, {"crossover_h": hstar, "polytope_agrees": agree}, ok


def _reproduce_pyramid(cfg: RunConfig):
    n = cfg.n or 2
    rows = []
    for h in _heights(cfg, (2, 5, 10, 30, 100)):
        C, D = _pyramid(n, h)
        row = {"h": h, "ratio_C": C.ratio, "bound": 1.0 / (2 * n), "ratio_D": D.ratio,
               "amplification": D.ratio / C.ratio}
        if n == 2:
            row["cheeger_C"] = cheeger.cheeger_2d(C.polygon).t_star
        rows.append(row)
    amps = [r["amplification"] for r in rows]
    ok = all(r["ratio_C"] < r["bound"] for r in rows)
    ok &= all(b > a for a, b in zip(amps, amps[1:])) and amps[-1] < n
    if n == 2:
        ok &= all(r["cheeger_C"] >= r["ratio_D"] - 1e-9 for r in rows)
    return rows, PYRAMID_COLUMNS, {"n": n, "amplification_limit": n}, ok


def _reproduce_eq18(cfg: RunConfig):
    rows = []
    for h in _heights(cfg, (100.0,)):
        if h < 2:
            raise InputError("prop-eq18 needs h >= 2")
        o = verify.check_eq18_failure(h)
        lo, hi = o.extra["bracket"]
        rows.append({"h": h, "lhs": o.lhs, "rhs": o.rhs, "bracket_lo": lo, "bracket_hi": hi,
                     "fails": not o.holds, "_in": lo - 1e-9 <= o.lhs <= hi + 1e-9})
    ok = rows[-1]["fails"] and all(r["_in"] for r in rows)
    return rows, EQ18_COLUMNS, {"limit": 0.5, "single_body_sum_at_infinity": 2.0 / 3.0}, ok


def _reproduce_dilation(cfg: RunConfig):
    K = spatial_body(cfg.body or "builtin:cube", cfg)
    lams = cfg.lambdas or (1.0, 2.0, 10.0, 100.0)
    rows = [{"lambda": r.lam, "volume": r.volume, "surface": r.surface, "ratio": r.ratio}
            for r in canal.dilation_family_ratios(K, canal.E3, lams)]
    limit = canal.slice_ratio(K)
    ratios = [r["ratio"] for r in rows]
    ok = all(b > a for a, b in zip(ratios, ratios[1:])) and all(q < limit for q in ratios)
    return rows, DILATION_COLUMNS, {"slice_ratio": limit}, ok


REPRODUCERS = {
    "prop-AH": _reproduce_ah,
    "lemma-pyramid": _reproduce_pyramid,
    "prop-eq18": _reproduce_eq18,
    "lemma-dilation": _reproduce_dilation,
}


def cmd_reproduce(cfg: RunConfig) -> int:
    rows, columns, info, ok = REPRODUCERS[cfg.target](cfg)
    rows = [{k: v for k, v in r.items() if not k.startswith("_")} for r in rows]
    verdict = "PASS" if ok else "FAIL"
    fmt = cfg.format or "table"
    if fmt == "json":
        _emit(dumps({"target": cfg.target, "rows": rows, **info, "result": verdict}) + "\n", cfg)
    elif fmt == "csv":
        _emit(to_csv(rows, columns), cfg)
    else:
        _emit(table(rows, columns) + _kv(info) + f"{verdict} {cfg.target}\n", cfg)
    if not ok:
        print(f"FAIL {cfg.target}: result contradicts the proved direction", file=sys.stderr)
    return EXIT_OK if ok else EXIT_ALARM


def cmd_search(cfg: RunConfig) -> int:
    params = {}
    if cfg.check == "ghp":
        params["profiles"] = cfg.profiles
    elif cfg.check == "proj-ratio" and cfg.projection:
        C = planar_body(cfg.projection, cfg)
        if isinstance(C, geom2d.RoundedPolygon):
            C = geom2d.polygonize(C, cfg.m or 64)
        params["projection"] = C
    rep = verify.search(cfg.check, cfg.trials, cfg.seed, **params)
    summary = rep.summary()
    summary["near_violation_trials"] = [i for i, o in enumerate(rep.outcomes) if o.near_violation]
    fmt = cfg.format or "json"
    if fmt == "json":
        recs = [{"trial": i, **o.to_dict()} for i, o in enumerate(rep.outcomes)]
        _emit(jsonl(recs + [{"summary": summary}]), cfg)
    elif fmt == "csv":
        rows = [{"trial": i, **o.to_dict(), "near_violation": o.near_violation}
                for i, o in enumerate(rep.outcomes)]
        _emit(to_csv(rows, OUTCOME_COLUMNS), cfg)
    else:
        _emit(_kv(summary), cfg)
    if cfg.check == "proj-ratio":
        alarm = not all(verify.calibrability_consistent(o) for o in rep.outcomes)
    else:
        alarm = bool(rep.violations)
    return EXIT_ALARM if alarm else EXIT_OK


COMMANDS = {
    "cheeger": cmd_cheeger,
    "canal-bounds": cmd_canal_bounds,
    "reproduce": cmd_reproduce,
    "search": cmd_search,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (InputError, BodyFormatError, PreconditionViolated, ProjectionMismatch, ScaleLimit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateInput, GeometryError) as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
