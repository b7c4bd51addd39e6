"""Command-line entry point: generate, solve, verify, oracle, bench and plot.

Usage:
  segstab generate --class delaunay --n 100 --seed 7 --out inst.json
  segstab solve inst.json --nu 6 --out sol.json --csv runs.csv --svg inst.svg
  segstab verify inst.json sol.json
  segstab oracle inst.json --oracle-max 14
  segstab bench --class delaunay,gabriel --n 20,40 --seeds 5 --csv bench.csv
  segstab plot inst.json --solution sol.json --svg out.svg

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numeric or
degeneracy error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .generators import GenConfig, GenerationError, generate
from .instance import GraphClass, InvalidInstance, PlaneGraphInstance, split_isolated
from .oracle import DEFAULT_MAX_ACTIVE, OracleTooLarge, exact_opt, verify_hitting
from .solver import Solution, solve

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

CSV_HEADER = ["class", "n", "r", "nu", "seed", "Y0", "k", "H", "OPT", "ratio", "ms"]


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    instance: str
    cls: str
    n: int
    r: float
    nu: float
    seed: int | None
    Y0: int
    k: int
    H: int
    OPT: int | None = None
    ms: float = 0.0

    @property
    def ratio(self) -> float | None:
        if self.OPT is None:
            return None
        return self.H / self.OPT if self.OPT > 0 else 1.0

    def row(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.6g}"
            return str(v)

        return [
            self.cls,
            str(self.n),
            fmt(self.r),
            fmt(self.nu),
            fmt(self.seed),
            str(self.Y0),
            str(self.k),
            str(self.H),
            fmt(self.OPT),
            fmt(self.ratio),
            f"{self.ms:.1f}",
        ]


def append_records(path: str | Path, records: Sequence[RunRecord]) -> None:
    """Append rows, writing the header first when the file is new or empty."""
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    if not fresh:
        with path.open() as fh:
            head = fh.readline().strip().split(",")
        if head != CSV_HEADER:
            raise UsageError(f"{path} has a different header: {','.join(head)}")
    with path.open("a", newline="") as fh:
        w = csv.writer(fh)
        if fresh:
            w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow(rec.row())


def _record(inst: PlaneGraphInstance, sol: Solution, n: int, nu: float, seed, path: str, opt: int | None) -> RunRecord:
    st = sol.stats
    return RunRecord(
        instance=path,
        cls=inst.class_tag.value,
        n=n,
        r=inst.r,
        nu=nu,
        seed=seed,
        Y0=int(st.get("Y0", 0)),
        k=int(st.get("k_final", st.get("family", 0))),
        H=int(st["points"]),
        OPT=opt,
        ms=float(st["ms"]),
    )


def _oracle_value(inst: PlaneGraphInstance, guard: int) -> int | None:
    active, _ = split_isolated(inst)
    if len(active) > guard:
        return None
    return exact_opt(inst, max_active=guard).value


# ------------------------------------------------------------------ svg


def _fit(inst: PlaneGraphInstance, points: Sequence) -> tuple[np.ndarray, float]:
    """Offset and scale mapping the padded drawing box onto the 1000x1000 viewBox."""
    pts = [inst.vertices.reshape(-1, 2)]
    if len(points):
        pts.append(np.asarray(points, dtype=float).reshape(-1, 2))
    P = np.concatenate(pts)
    lo = P.min(axis=0) - inst.r
    hi = P.max(axis=0) + inst.r
    span = float(max(hi - lo)) or 1.0
    margin = 0.05 * 1000
    scale = (1000 - 2 * margin) / span
    return lo, scale


def render_svg(inst: PlaneGraphInstance, points: Sequence = ()) -> str:
    """Edges, capsule outlines, output points and their radius-r disks."""
    lo, scale = _fit(inst, points)
    margin = 50.0

    def tx(p) -> tuple[float, float]:
        x = margin + (p[0] - lo[0]) * scale
        y = 1000 - margin - (p[1] - lo[1]) * scale
        return x, y

    R = inst.r * scale
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">',
        '<rect x="0" y="0" width="1000" height="1000" fill="white"/>',
    ]
    for seg in inst.segments():
        a, b = np.array(tx(seg.a)), np.array(tx(seg.b))
        d = b - a
        L = math.hypot(*d)
        u = d / L if L > 0 else np.array([1.0, 0.0])
        nrm = np.array([-u[1], u[0]])
        ring = [a + R * nrm, b + R * nrm, b + R * u, b - R * nrm, a - R * nrm, a - R * u]
        centres = [None, b, b, None, a, a]  # arc centre for the piece leaving ring[i]
        cmd = [f"M{ring[0][0]:.3f},{ring[0][1]:.3f}"]
        for i in range(6):
            q = ring[(i + 1) % 6]
            c = centres[i]
            if c is None:
                cmd.append(f"L{q[0]:.3f},{q[1]:.3f}")
            else:
                p0 = ring[i] - c
                p1 = q - c
                sweep = 1 if p0[0] * p1[1] - p0[1] * p1[0] > 0 else 0
                cmd.append(f"A{R:.3f},{R:.3f} 0 0 {sweep} {q[0]:.3f},{q[1]:.3f}")
        out.append(f'<path class="capsule" d="{" ".join(cmd)} Z" fill="gray" fill-opacity="0.3" stroke="gray"/>')
    for seg in inst.segments():
        (x1, y1), (x2, y2) = tx(seg.a), tx(seg.b)
        out.append(f'<path class="edge" d="M{x1:.3f},{y1:.3f} L{x2:.3f},{y2:.3f}" stroke="black" stroke-width="2" fill="none"/>')
    for p in points:
        x, y = tx(p)
        out.append(f'<circle class="disk" cx="{x:.3f}" cy="{y:.3f}" r="{R:.3f}" fill="blue" fill-opacity="0.2" stroke="none"/>')
    for p in points:
        x, y = tx(p)
        out.append(f'<circle class="point" cx="{x:.3f}" cy="{y:.3f}" r="4" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -------------------------------------------------------------- commands


def _load_instance(path: str) -> PlaneGraphInstance:
    try:
        return PlaneGraphInstance.load(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except (KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed instance file {path}: {exc}") from exc


def _load_points(path: str) -> list:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    return [tuple(map(float, p)) for p in data["points"]]


def _gen_config(args) -> GenConfig:
    return GenConfig(seed=args.seed, n=args.n, r=args.r, r_frac=args.r_frac)


def cmd_generate(args) -> int:
    cls = GraphClass.parse(args.cls)
    inst = generate(cls, _gen_config(args))
    if args.out:
        inst.save(args.out)
        print(f"wrote {args.out}: {cls.value}, {len(inst.vertices)} vertices, {inst.n} edges, r={inst.r:.6g}")
    else:
        print(inst.dumps())
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    sol = solve(inst, nu=args.nu, variant=args.variant_override, prune_remark=args.prune_remark)
    opt = _oracle_value(inst, args.oracle_max) if args.oracle else None
    rec = _record(inst, sol, inst.n, args.nu, None, args.instance, opt)
    if args.out:
        Path(args.out).write_text(json.dumps(sol.to_json(), sort_keys=True) + "\n")
    if args.csv:
        append_records(args.csv, [rec])
    if args.svg:
        Path(args.svg).write_text(render_svg(inst, sol.points))
    print(",".join(CSV_HEADER))
    print(",".join(rec.row()))
    if not sol.report.ok:
        print(f"verification failed on edges {sol.report.failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    pts = _load_points(args.solution)
    rep = verify_hitting(inst, pts)
    limit = inst.r + rep.tol
    for e, (j, d) in enumerate(zip(rep.nearest, rep.distances)):
        status = "ok" if d <= limit else "FAIL"
        print(f"edge {e}: point {int(j)} dist {float(d):.9g} {status}")
    print(f"{'PASS' if rep.ok else 'FAIL'}: {inst.n - len(rep.failed)}/{inst.n} edges within r + tol = {limit:.9g}")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    try:
        res = exact_opt(inst, max_active=args.oracle_max)
    except OracleTooLarge as exc:
        raise UsageError(str(exc)) from exc
    print(res.value)
    return EXIT_OK


def _parse_list(text: str, conv=str) -> list:
    return [conv(t) for t in text.split(",") if t.strip()]


def _bench_one(job) -> tuple[RunRecord, bool]:
    cls, n, nu, seed, r, r_frac, guard, prune = job
    inst = generate(cls, GenConfig(seed=seed, n=n, r=r, r_frac=r_frac))
    sol = solve(inst, nu=nu, prune_remark=prune)
    opt = _oracle_value(inst, guard) if guard > 0 else None
    return _record(inst, sol, n, nu, seed, "", opt), sol.report.ok


def cmd_bench(args) -> int:
    classes = [GraphClass.parse(c) for c in _parse_list(args.cls)]
    ns = _parse_list(args.n_list, int)
    nus = _parse_list(args.nu_list, float)
    seeds = range(args.seed, args.seed + args.seeds)
    jobs = [
        (c, n, nu, s, args.r, args.r_frac, args.oracle_max, args.prune_remark)
        for c in classes
        for n in ns
        for nu in nus
        for s in seeds
    ]
    # workers own their instance and weights; results reach the sink in job order
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(_bench_one, jobs))
    records = [rec for rec, _ in results]
    if args.csv:
        append_records(args.csv, records)
    w = csv.writer(sys.stdout)
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.row())
    return EXIT_OK if all(ok for _, ok in results) else EXIT_VERIFY


def cmd_plot(args) -> int:
    inst = _load_instance(args.instance)
    pts = _load_points(args.solution) if args.solution else []
    Path(args.svg).write_text(render_svg(inst, pts))
    print(f"wrote {args.svg}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="segstab", description="Stab plane-graph edges with radius-r disks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def gen_flags(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--r", type=float, default=None, help="absolute radius (overrides --r-frac)")
        p.add_argument("--r-frac", dest="r_frac", type=float, default=0.3, help="radius as a fraction of the mean edge length")

    g = sub.add_parser("generate", help="write a seeded instance")
    g.add_argument("--class", dest="cls", required=True)
    g.add_argument("--n", type=int, default=20, help="points (triangulation classes) or edges (segment classes)")
    gen_flags(g)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("--nu", type=float, default=6.0)
    s.add_argument("--variant-override", dest="variant_override", default=None, help="run another class's finder")
    s.add_argument("--prune-remark", dest="prune_remark", action="store_true", help="bucket capsules whose segment meets a pivot segment")
    s.add_argument("--oracle", action="store_true", help="also compute OPT for the record")
    s.add_argument("--oracle-max", dest="oracle_max", type=int, default=DEFAULT_MAX_ACTIVE)
    s.add_argument("--out", default=None, help="solution JSON")
    s.add_argument("--csv", default=None, help="append the run record to this CSV")
    s.add_argument("--svg", default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution file against an instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exact optimum for small instances")
    o.add_argument("instance")
    o.add_argument("--oracle-max", dest="oracle_max", type=int, default=DEFAULT_MAX_ACTIVE)
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="seeded matrix of (class, n, nu)")
    b.add_argument("--class", dest="cls", default=",".join(c.value for c in GraphClass))
    b.add_argument("--n", dest="n_list", default="20")
    b.add_argument("--nu", dest="nu_list", default="6")
    b.add_argument("--seeds", type=int, default=3, help="number of consecutive seeds")
    gen_flags(b)
    b.add_argument("--prune-remark", dest="prune_remark", action="store_true")
    b.add_argument("--oracle-max", dest="oracle_max", type=int, default=0, help="compute OPT when active edges <= this (0: never)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--csv", default=None)
    b.set_defaults(func=cmd_bench)

    p = sub.add_parser("plot", help="draw an instance and optional solution as SVG")
    p.add_argument("instance")
    p.add_argument("--solution", default=None)
    p.add_argument("--svg", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInstance, GenerationError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # bad class names and parameter values (e.g. non-positive kappa)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if "kappa" in str(exc) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
