"""Command-line front end: builders, verifiers and exporters.

Every artifact is written under ``out/<subcommand>/<label>/`` together with the
run configuration that produced it.  Exit codes: 0 success, 1 failed
verification (the report is still written), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__

WORKERS_ENV = "RSETS_WORKERS"


@dataclass
class RunConfig:
    command: str
    params: dict
    seed: int = 0
    workers: int = 1
    G: int = 2048
    out: str = "out"
    mode: str = "relaxed"
    version: str = __version__

    def semantic(self) -> dict:
        """Everything that determines the output (the worker count does not)."""
        d = asdict(self)
        d.pop("workers")
        return d


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _angle(args, v: float) -> float:
    return math.radians(v) if args.deg else v


def _intervals(text: str, deg: bool) -> list[tuple[float, float]]:
    out = []
    for part in text.split(","):
        try:
            a, b = (float(t) for t in part.split(":"))
        except ValueError:
            raise UsageError(f"interval {part!r} is not of the form a:b") from None
        if deg:
            a, b = math.radians(a), math.radians(b)
        out.append((a, b))
    return out


def _write(cfg: RunConfig, label: str, name: str, payload) -> Path:
    d = Path(cfg.out) / cfg.command.replace(" ", "-") / label
    d.mkdir(parents=True, exist_ok=True)
    p = d / name
    if isinstance(payload, (dict, list)):
        payload = {"run_config": cfg.semantic(), "result": payload}
        p.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif isinstance(payload, bytes):
        p.write_bytes(payload)
    else:
        p.write_text(payload)
    return p


def _junit(path: str, report) -> None:
    from xml.sax.saxutils import quoteattr
    fails = sum(not c.passed for c in report.checks)
    lines = [f'<testsuite name={quoteattr(report.name)} tests="{len(report.checks)}" failures="{fails}">']
    for c in report.checks:
        lines.append(f"  <testcase classname={quoteattr(report.name)} name={quoteattr(c.name)}>")
        if not c.passed:
            msg = f"observed {c.observed!r} vs {c.claimed_bound!r} ({c.kind}), margin {c.margin!r}"
            lines.append(f"    <failure message={quoteattr(msg)}/>")
        lines.append("  </testcase>")
    lines.append("</testsuite>")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_phi_build(args, cfg):
    from .construct import ThetaConfig, build_phi
    tc = ThetaConfig(args.eps, _angle(args, args.gamma), args.n)
    phi, rc = build_phi(tc)
    res = {"N": tc.N, "flat_bound": tc.flat_bound, "bound_vacuous": tc.bound_vacuous,
           "radius": asdict(rc), "phi": phi.to_json()}
    p = _write(cfg, args.label, "phi.json", res)
    print(f"phi: N={tc.N} r={rc.r:.6g} -> {p}")
    return 0


def cmd_maxfn_eval(args, cfg):
    from .construct import ThetaConfig, build_phi
    from .maxop import ScaleBand, SearchParams, max_search
    phi, _ = build_phi(ThetaConfig(args.eps, _angle(args, args.gamma), args.n))
    band = ScaleBand(args.lo, math.inf if args.hi is None else args.hi)
    p = SearchParams(per_decade=args.per_decade, rounds=args.rounds)
    r = max_search(phi, np.array(args.x, float), _angle(args, args.slope), band, p)
    res = {"value": r.value, "rect": None if r.rect is None else r.rect.to_dict(),
           "evaluated": r.evaluated, "truncated": r.truncated, "band": band.to_json()}
    path = _write(cfg, args.label, "maxfn.json", res)
    print(f"M_s f(x) >= {r.value:.6g} over {r.evaluated} rectangles -> {path}")
    return 0


def cmd_schedule_build(args, cfg):
    from .construct import build_schedule
    sched = build_schedule(_intervals(args.intervals, args.deg), args.levels, mode=args.mode,
                           block_target=args.block_target, n_points=args.n_points, seed=cfg.seed)
    print(sched.table())
    p = _write(cfg, args.label, "schedule.json", sched.to_json())
    print(f"-> {p}")
    return 0


def cmd_split(args, cfg):
    from .construct import split_open_set
    pieces = split_open_set(_intervals(args.intervals, args.deg), depth=args.depth)
    res = [{"lo": q.lo, "hi": q.hi, "parent": list(q.parent), "triple": list(q.triple())} for q in pieces]
    for q in pieces[: args.show]:
        print(f"[{q.lo:.8f}, {q.hi:.8f})  from {q.parent}")
    p = _write(cfg, args.label, "pieces.json", res)
    print(f"{len(pieces)} pieces -> {p}")
    return 0


def _run_verify(args, cfg):
    from . import verify as V
    what, seed = args.what, cfg.seed
    if what == "lemma2":
        rep = V.verify_lemma2(args.eps, _angle(args, args.gamma), args.trials, seed, args.targeted,
                              args.n, workers=cfg.workers)
    elif what == "lemma3":
        rep = V.verify_lemma3(args.eps, _angle(args, args.gamma), args.trials, seed, args.n)
    elif what == "lemma4":
        from .construct import SlopeInterval
        S = SlopeInterval(_angle(args, args.alpha), _angle(args, args.gamma))
        rep = V.verify_lemma4(args.eps, args.delta, S, args.trials, seed, G=cfg.G,
                              checks=tuple(args.checks.split(",")))
    elif what == "lemma5":
        rep = V.verify_lemma5(args.T, args.density, args.delta, cfg.G, seed)
    elif what == "theorem1":
        from .construct import build_schedule
        sched = build_schedule(_intervals(args.intervals, args.deg), args.levels, mode=cfg.mode,
                               n_points=args.n_points, seed=seed)
        rep = V.verify_theorem1(sched, _angle(args, args.s_diverge), _angle(args, args.s_converge),
                                seed, grid=args.grid)
    else:
        rep = V.verify_theorem2(seed=seed, trials=args.trials)
    return rep


def cmd_verify(args, cfg):
    rep = _run_verify(args, cfg)
    print(rep.summary())
    p = _write(cfg, args.label, "report.json", rep.to_json())
    if args.junit:
        _junit(args.junit, rep)
    print(f"-> {p}")
    return 0 if rep.passed else 1


def cmd_export(args, cfg):
    from .construct import HyperbolicRegion, ThetaConfig, build_phi, build_schedule
    from .measure import PixelSet
    kind, fmt = args.object, args.format
    allowed = {"phi": {"json"}, "schedule": {"json"}, "report": {"json"},
               "witness-set": {"pbm", "csv"}}
    if fmt not in allowed[kind]:
        raise UsageError(f"cannot export {kind} as {fmt}")
    if kind == "phi":
        phi, _ = build_phi(ThetaConfig(args.eps, _angle(args, args.gamma), args.n))
        p = _write(cfg, args.label, "phi.json", phi.to_json())
    elif kind == "schedule":
        sched = build_schedule(_intervals(args.intervals, args.deg), args.levels, mode=cfg.mode,
                               seed=cfg.seed)
        p = _write(cfg, args.label, "schedule.json", sched.to_json())
    elif kind == "report":
        from .verify import Report
        if not args.input:
            raise UsageError("export report needs --input")
        data = json.loads(Path(args.input).read_text())
        rep = Report.loads(json.dumps(data.get("result", data)))
        p = _write(cfg, args.label, "report.json", rep.to_json())
    else:
        # periodic witness set {x : x - c in rot_s A} over a window of cells
        A = HyperbolicRegion(args.delta)
        s = _angle(args, args.slope)
        c, sn = math.cos(s), math.sin(s)

        def pred(P):
            q = P - np.rint(P)
            return A.contains(np.stack([c * q[:, 0] + sn * q[:, 1], -sn * q[:, 0] + c * q[:, 1]], -1))

        w = args.cells
        ps = PixelSet.from_predicate(pred, cfg.G, cells=w, origin=(-(w // 2), -(w // 2)))
        if fmt == "pbm":
            p = _write(cfg, args.label, "witness.pbm", ps.to_pbm())
        else:
            p = _write(cfg, args.label, "witness.csv", ps.to_csv())
            _write(cfg, args.label, "run_config.json", {"exact_area": A.area})
    print(f"-> {p}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default ${WORKERS_ENV} or 1)")
    common.add_argument("--grid", dest="G", type=int, default=2048, help="pixels per unit cell")
    common.add_argument("--out", default="out")
    common.add_argument("--label", default="default")
    common.add_argument("--mode", choices=["relaxed", "faithful"], default="relaxed")
    common.add_argument("--deg", action="store_true", help="angles are given in degrees")

    top = _Parser(prog="rsets", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    phi = sub.add_parser("phi").add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = phi.add_parser("build", parents=[common])
    b.add_argument("--eps", type=float, default=0.5)
    b.add_argument("--gamma", type=float, default=math.pi / 24)
    b.add_argument("--n", type=int, default=None)
    b.set_defaults(func=cmd_phi_build, command="phi build")

    mx = sub.add_parser("maxfn").add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = mx.add_parser("eval", parents=[common])
    e.add_argument("--eps", type=float, default=0.5)
    e.add_argument("--gamma", type=float, default=math.pi / 24)
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--x", type=float, nargs=2, default=[0.0, 0.0])
    e.add_argument("--slope", type=float, default=0.0)
    e.add_argument("--lo", type=float, default=0.0)
    e.add_argument("--hi", type=float, default=None)
    e.add_argument("--per-decade", type=int, default=24)
    e.add_argument("--rounds", type=int, default=3)
    e.set_defaults(func=cmd_maxfn_eval, command="maxfn eval")

    sc = sub.add_parser("schedule").add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = sc.add_parser("build", parents=[common])
    b.add_argument("--levels", type=int, default=3)
    b.add_argument("--intervals", default="0.1:0.2")
    b.add_argument("--block-target", type=float, default=0.5)
    b.add_argument("--n-points", type=int, default=64)
    b.set_defaults(func=cmd_schedule_build, command="schedule build")

    sp = sub.add_parser("split-intervals", parents=[common])
    sp.add_argument("--intervals", required=True)
    sp.add_argument("--depth", type=int, default=12)
    sp.add_argument("--show", type=int, default=10)
    sp.set_defaults(func=cmd_split, command="split-intervals")

    ver = sub.add_parser("verify").add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("lemma2", "lemma3", "lemma4", "lemma5", "theorem1", "theorem2"):
        v = ver.add_parser(name, parents=[common])
        v.add_argument("--junit", default=None)
        v.set_defaults(func=cmd_verify, command=f"verify {name}")
        if name in ("lemma2", "lemma3"):
            v.add_argument("--eps", type=float, default=0.5)
            v.add_argument("--gamma", type=float, default=math.pi / 24)
            v.add_argument("--n", type=int, default=None)
            v.add_argument("--trials", type=int, default=10**6 if name == "lemma2" else 10**5)
        if name == "lemma2":
            v.add_argument("--targeted", type=int, default=10**4)
        if name == "lemma4":
            v.add_argument("--eps", type=float, default=0.05)
            v.add_argument("--delta", type=float, default=0.01)
            v.add_argument("--alpha", type=float, default=math.pi / 48)
            v.add_argument("--gamma", type=float, default=math.pi / 48)
            v.add_argument("--trials", type=int, default=200)
            v.add_argument("--checks", default="l1,l2,l3,l4,l5")
        if name == "lemma5":
            v.add_argument("--T", type=int, default=3)
            v.add_argument("--density", type=float, default=0.5)
            v.add_argument("--delta", type=float, default=None)
        if name == "theorem1":
            v.add_argument("--levels", type=int, default=3)
            v.add_argument("--intervals", default="0.1:0.2")
            v.add_argument("--n-points", type=int, default=900)
            v.add_argument("--s-diverge", type=float, default=0.152)
            v.add_argument("--s-converge", type=float, default=0.8)
            v.add_argument("--pixels", dest="grid", type=int, default=64)
        if name == "theorem2":
            v.add_argument("--trials", type=int, default=200)

    ex = sub.add_parser("export", parents=[common])
    ex.add_argument("object", choices=["phi", "schedule", "report", "witness-set"])
    ex.add_argument("--format", choices=["json", "csv", "pbm"], default="json")
    ex.add_argument("--input", default=None)
    ex.add_argument("--eps", type=float, default=0.5)
    ex.add_argument("--gamma", type=float, default=math.pi / 24)
    ex.add_argument("--n", type=int, default=None)
    ex.add_argument("--levels", type=int, default=3)
    ex.add_argument("--intervals", default="0.1:0.2")
    ex.add_argument("--delta", type=float, default=0.01)
    ex.add_argument("--slope", type=float, default=0.0)
    ex.add_argument("--cells", type=int, default=1)
    ex.set_defaults(func=cmd_export, command="export")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        workers = args.workers if args.workers is not None else int(os.environ.get(WORKERS_ENV, "1"))
        skip = {"func", "command", "group", "action", "what", "seed", "workers", "G", "out", "label",
                "mode", "junit"}
        params = {k: v for k, v in vars(args).items() if k not in skip}
        cfg = RunConfig(args.command, params, args.seed, max(1, workers), args.G, args.out, args.mode)
        return args.func(args, cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:
        return int(e.code or 0)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
