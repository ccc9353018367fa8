"""Command-line driver: orbit sweeps, collision matrices, the solid selection
problem, code assembly and verification, and reproduction of the published
tables against the embedded golden data."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import codegen, rrp
from .field import FieldError, field_context
from .geometry import GeometryError, Subspace, span
from .orbits import orbit_of, orbit_representatives, special_planes
from .sigma import (
    associated_code,
    collision_matrix,
    missing_points,
    permutation_equivalent,
)

# node budget per orbit for the lower-bound sweeps at v >= 14
LOWER_BOUND_BUDGET = 1 << 16


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    w: str | None = None
    mode: str = "exact"
    fmt: str = "text"
    long_run: bool = False
    jobs: int = 1
    out: str | None = None

    @property
    def v(self) -> int | None:
        return None if self.n is None else self.n + 3


def load_golden() -> dict:
    with resources.files("planecodes").joinpath("data/golden.json").open() as fh:
        return json.load(fh)


def plane_from_exponents(ctx, exps) -> Subspace:
    return span(ctx, [ctx.alpha(k) for k in exps])


def parse_plane(ctx, text: str) -> Subspace:
    w = span(ctx, [ctx.parse(t) for t in text.split(",")])
    if w.dim != 3:
        raise UsageError(f"--w {text!r} does not span a plane")
    return w


def _plane_label(w: Subspace) -> str:
    return "<" + ",".join(w.ctx.fmt(r) for r in w.rows) + ">"


# output

def emit(records, cfg: RunConfig, fields: list[str] | None = None) -> str:
    """Render a list of flat dicts (or one dict) as text, csv or json."""
    if isinstance(records, dict):
        records = [records]
    if cfg.fmt == "json":
        text = json.dumps(records if len(records) != 1 else records[0], indent=1) + "\n"
    else:
        fields = fields or list(records[0]) if records else []
        if cfg.fmt == "csv":
            buf = io.StringIO()
            wr = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
            wr.writeheader()
            for r in records:
                wr.writerow({k: _cell(r.get(k)) for k in fields})
            text = buf.getvalue()
        else:
            cells = [[str(_cell(r.get(k))) for k in fields] for r in records]
            widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(fields)]
            lines = ["  ".join(f.rjust(wd) for f, wd in zip(fields, widths))]
            lines += ["  ".join(c.rjust(wd) for c, wd in zip(row, widths)) for row in cells]
            text = "\n".join(lines) + "\n"
    return text


def _cell(x):
    if isinstance(x, (list, tuple)):
        return " ".join(str(y) for y in x)
    if isinstance(x, Fraction):
        return f"{float(x):.2f}"
    return "" if x is None else x


def write_output(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# orbit sweep

def _orbit_task(args):
    n, rows, mode, budget = args
    ctx = field_context(n, extended=True)
    w = Subspace(ctx, rows)
    cm = collision_matrix(w)
    lo, hi = rrp.gain_bounds(cm)
    seed = rrp.greedy(cm)
    return rows, lo, hi, seed.net_gain, missing_points(w).mu


def sweep(ctx, planes: list[Subspace], mode: str = "exact", jobs: int = 1,
          node_budget: int = rrp.DEFAULT_NODE_BUDGET) -> dict:
    """Maximum net gain over the given orbit representatives.

    Matrices and greedy seeds are computed (in parallel with jobs > 1);
    then orbits are solved in order of decreasing lower bound, each only
    searching for improvements on the best value so far, and skipped when
    their upper bound cannot beat it."""
    tasks = [(ctx.n, w.rows, mode, node_budget) for w in planes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            pre = list(ex.map(_orbit_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        pre = [_orbit_task(t) for t in tasks]
    pre.sort(key=lambda t: (-max(t[1], t[3]), t[0]))
    best, best_rows, proven, nodes = None, None, True, 0
    for rows, lo, hi, g, mu in pre:
        if best is not None and hi <= best:
            continue
        if mode == "greedy":
            val = g
        else:
            cm = collision_matrix(Subspace(ctx, rows))
            sol = rrp.solve(cm, "exact", node_budget, incumbent=best)
            nodes += sol.nodes
            proven &= sol.proven
            val = sol.net_gain
        if best is None or val > best:
            best, best_rows = val, rows
    return {
        "n": ctx.n,
        "orbits": len(planes),
        "N1": best,
        "W": _plane_label(Subspace(ctx, best_rows)) if best_rows else None,
        "proven": proven and mode == "exact",
        "nodes": nodes,
    }


def table1_planes(ctx, v: int, long_run: bool) -> list[Subspace]:
    """Orbit representatives searched for the row v."""
    if v <= 13:
        return [r.representative for r in orbit_representatives(ctx, long_run=True)]
    if not long_run:
        raise UsageError(f"v={v} needs --long-run")
    if v == 14:
        return [r.representative for r in orbit_representatives(ctx, long_run=True)
                if missing_points(r.representative).mu >= 5]
    if v == 15:
        return sorted({orbit_of(w).representative for w in special_planes(ctx)})
    raise UsageError(f"no sweep defined for v={v}")


# commands

def cmd_field_info(cfg: RunConfig) -> int:
    ctx = field_context(_need_n(cfg), extended=cfg.long_run)
    rec = {
        "n": ctx.n,
        "modulus": format(ctx.modulus, "#x"),
        "order": ctx.order,
        "alpha": format(ctx.alpha(1), "#x"),
        "trace_mask": format(ctx.trace_mask, "#x"),
        "subfields": [s for s in range(1, ctx.n + 1) if ctx.n % s == 0],
    }
    write_output(emit(rec, cfg), cfg)
    return 0


def cmd_orbits(cfg: RunConfig) -> int:
    ctx = field_context(_need_n(cfg))
    recs = []
    for r in orbit_representatives(ctx, long_run=cfg.long_run):
        mp = missing_points(r.representative)
        recs.append({"W": _plane_label(r.representative), "size": r.size, "mu": mp.mu})
    write_output(emit(recs, cfg, ["W", "size", "mu"]), cfg)
    return 0


def _plane_arg(cfg: RunConfig, ctx) -> Subspace:
    if cfg.w is None:
        return plane_from_exponents(ctx, [0, 1, 2])
    return parse_plane(ctx, cfg.w)


def cmd_collision_matrix(cfg: RunConfig) -> int:
    ctx = field_context(_need_n(cfg))
    cm = collision_matrix(_plane_arg(cfg, ctx))
    if cfg.fmt == "json":
        text = json.dumps(cm.to_json(), indent=1) + "\n"
    elif cfg.fmt == "csv":
        text = "\n".join(",".join(map(str, r)) for r in cm.entries) + "\n"
    else:
        text = cm.render() + "\n"
    write_output(text, cfg)
    return 0


def cmd_solve_rrp(cfg: RunConfig) -> int:
    ctx = field_context(_need_n(cfg))
    if cfg.w is None:
        rec = sweep(ctx, table1_planes(ctx, ctx.n + 3, cfg.long_run), cfg.mode, cfg.jobs)
    else:
        cm = collision_matrix(parse_plane(ctx, cfg.w))
        sol = rrp.solve(cm, cfg.mode)
        rec = sol.to_json(cm)
        rec["W"] = _plane_label(cm.w)
    write_output(emit(rec, cfg), cfg)
    return 0


def pipeline(v: int, w: Subspace | None = None, mode: str = "exact", jobs: int = 1,
             full_check: bool = True) -> tuple[codegen.SubspaceCode, dict]:
    """Collision matrix, solid selection, assembled code and its verification."""
    if not 7 <= v <= 16:
        raise UsageError("pipeline needs 7 <= v <= 16")
    ctx = field_context(v - 3)
    if w is None:
        best = sweep(ctx, table1_planes(ctx, v, long_run=False), mode, jobs)
        w = parse_plane(ctx, best["W"][1:-1])
    cm = collision_matrix(w)
    sol = rrp.solve(cm, mode)
    code = codegen.assemble_from_solution(cm, sol)
    n = ctx.n
    report = {
        "v": v,
        "W": _plane_label(w),
        "N1": sol.net_gain,
        "proven": sol.proven,
        "size": len(code),
        "expected_size": codegen.expected_size(n, sol.net_gain),
        "lmrd_code_bound": rrp.reference_bounds(v).lmrd_code_bound,
    }
    if full_check:
        ok, _ = codegen.min_distance_at_least_4(code)
        report["verified_distance"] = ok
    return code, report


def cmd_build_code(cfg: RunConfig) -> int:
    n = _need_n(cfg)
    ctx = field_context(n)
    w = None if cfg.w is None else parse_plane(ctx, cfg.w)
    code, report = pipeline(n + 3, w, cfg.mode, cfg.jobs)
    if cfg.out:
        code.write(cfg.out, {k: report[k] for k in ("N1", "verified_distance")})
    size_line = f"#C = 2^{2 * n} + {report['N1']}*(2^{n}-1) = {report['size']}"
    sys.stdout.write(emit(report, RunConfig("", fmt=cfg.fmt if cfg.fmt != "csv" else "text")))
    if cfg.fmt == "text":
        gap = report["size"] - report["lmrd_code_bound"]
        sys.stdout.write(f"{size_line}\nLMRD code bound {report['lmrd_code_bound']} ({gap:+d})\n")
    ok = report["verified_distance"] and report["size"] == report["expected_size"]
    return 0 if ok else 1


def cmd_verify_code(cfg: RunConfig) -> int:
    if not cfg.out:
        raise UsageError("verify-code reads the file given by --out")
    code = codegen.SubspaceCode.read(cfg.out)
    ok, witness = codegen.min_distance_at_least_4(code)
    cover = codegen.line_cover_check(code)
    rec = {
        "v": code.ambient.v,
        "size": len(code),
        "verified_distance": ok,
        "max_line_cover": max(cover) if cover else 0,
        "witness": None if witness is None else [[format(r, "x") for r in x] for x in witness],
    }
    sys.stdout.write(emit(rec, RunConfig("", fmt=cfg.fmt)))
    return 0 if ok else 1


def cmd_bounds(cfg: RunConfig) -> int:
    n = _need_n(cfg)
    rec = rrp.reference_bounds(n + 3).as_dict()
    for mu in (4, 7):
        rec[f"projective_gain_ceiling_mu{mu}"] = float(rrp.gain_ceiling(n, mu))
    write_output(emit(rec, cfg), cfg)
    return 0


# reproduction

def _diff(label: str, expected, got) -> dict | None:
    return None if expected == got else {"cell": label, "expected": expected, "got": got}


def reproduce_table1(cfg: RunConfig) -> tuple[list[dict], list[dict]]:
    golden = load_golden()["net_gains"]["rows"]
    top = 15 if cfg.long_run else 13
    rows, diffs = [], []
    for g in golden:
        v = g["v"]
        if v > top:
            continue
        n = v - 3
        ctx = field_context(n)
        planes = table1_planes(ctx, v, cfg.long_run)
        exact = v <= 13
        budget = rrp.DEFAULT_NODE_BUDGET if exact else LOWER_BOUND_BUDGET
        res = sweep(ctx, planes, cfg.mode, cfg.jobs, budget)
        w = plane_from_exponents(ctx, g["plane"])
        at_w = rrp.solve(collision_matrix(w), cfg.mode, budget).net_gain
        lmrd = f"{float(rrp.reference_bounds(v).lmrd_threshold):.2f}"
        row = {"v": v, "n": n, "orbits": res["orbits"], "N1": res["N1"], "N1_at_W": at_w,
               "lmrd": lmrd, "size": codegen.expected_size(n, res["N1"]),
               "proven": res["proven"]}
        rows.append(row)
        for key in ("orbits", "lmrd"):
            d = _diff(f"v={v} {key}", g[key], row[key])
            if d:
                diffs.append(d)
        if "plane_note" in g:
            row["note"] = g["plane_note"]
        if exact and cfg.mode == "exact":
            checks = [("N1", res["N1"])]
            if "plane_note" not in g:
                checks.append(("N1_at_W", at_w))
            for key, got in checks:
                d = _diff(f"v={v} {key}", g["N1"], got)
                if d:
                    diffs.append(d)
    return rows, diffs


def reproduce_table2(cfg: RunConfig) -> tuple[list[dict], list[dict]]:
    from .orbits import mu_distribution

    golden = load_golden()["mu_distribution"]["rows"]
    rows, diffs = [], []
    for key, expected in golden.items():
        n = int(key)
        ctx = field_context(n, extended=True)
        dist = mu_distribution(ctx)
        got = [dist[mu] for mu in range(3, 8)]
        rows.append({"n": n, **{f"mu{mu}": dist[mu] for mu in range(3, 8)}})
        for mu, e, g in zip(range(3, 8), expected, got):
            d = _diff(f"n={n} mu={mu}", e, g)
            if d:
                diffs.append(d)
                break
    return rows, diffs


def reproduce_v9_matrices(cfg: RunConfig) -> tuple[list[dict], list[dict]]:
    gold = load_golden()
    rows, diffs = [], []
    d8 = gold["v8_collision_matrix"]
    ctx = field_context(d8["n"])
    cm = collision_matrix(plane_from_exponents(ctx, d8["plane"]))
    ok = permutation_equivalent(cm.entries, d8["matrix"])
    rows.append({"v": 8, "W": _plane_label(cm.w), "orbit_size": orbit_of(cm.w).size, "match": ok})
    if not ok:
        diffs.append({"cell": "v=8 matrix", "expected": d8["matrix"], "got": cm.entries})
    d9 = gold["v9_collision_matrices"]
    ctx = field_context(d9["n"])
    for exps, size, mat in zip(d9["planes"], d9["orbit_sizes"], d9["matrices"]):
        w = plane_from_exponents(ctx, exps)
        cm = collision_matrix(w)
        got_size = orbit_of(w).size
        ok = permutation_equivalent(cm.entries, mat)
        rows.append({"v": 9, "W": _plane_label(w), "orbit_size": got_size, "match": ok})
        if not ok:
            diffs.append({"cell": f"v=9 matrix for {_plane_label(w)}", "expected": mat,
                          "got": [list(r) for r in cm.entries]})
        d = _diff(f"v=9 orbit size for {_plane_label(w)}", size, got_size)
        if d:
            diffs.append(d)
    return rows, diffs


def reproduce_figure1(cfg: RunConfig) -> tuple[list[dict], list[dict]]:
    d = load_golden()["v11_trace_zero_matrix"]
    ctx = field_context(d["n"])
    w = plane_from_exponents(ctx, d["plane"])
    cm = collision_matrix(w)
    code = associated_code(w)
    ok = permutation_equivalent(cm.entries, d["matrix"])
    row = {"v": 11, "W": _plane_label(w), "order": cm.order, "mu": code.mu,
           "weights": list(code.weight_distribution), "match": ok}
    diffs = [] if ok else [{"cell": "v=11 matrix", "expected": "golden 31x31",
                            "got": [list(r) for r in cm.entries]}]
    return [row], diffs


REPRODUCERS = {
    "table1": reproduce_table1,
    "table2": reproduce_table2,
    "example_v9_matrices": reproduce_v9_matrices,
    "figure1": reproduce_figure1,
}


def cmd_reproduce(cfg: RunConfig, target: str) -> int:
    rows, diffs = REPRODUCERS[target](cfg)
    if cfg.fmt == "json":
        text = json.dumps({"target": target, "rows": rows, "diffs": diffs}, indent=1) + "\n"
    else:
        text = emit(rows, cfg, [k for k in rows[0] if k != "note"])
        text += "".join(f"note v={r['v']}: {r['note']}\n" for r in rows if "note" in r)
        if diffs:
            text += f"MISMATCH: first divergent cell {diffs[0]['cell']}: " \
                    f"expected {diffs[0]['expected']}, got {diffs[0]['got']}\n"
        else:
            text += f"{target}: all golden values match\n"
    write_output(text, cfg)
    return 1 if diffs else 0


# argument handling

def _need_n(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise UsageError("give --n or --v")
    return cfg.n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="field degree n")
    common.add_argument("--v", type=int, help="ambient dimension v = n + 3")
    common.add_argument("--w", help='plane generators "g1,g2,g3" as alpha exponents, a^k or 0x hex')
    common.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="text")
    common.add_argument("--long-run", action="store_true", help="allow expensive computations")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", help="output file (input file for verify-code)")

    p = argparse.ArgumentParser(prog="planecodes", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("field-info", "field parameters"),
        ("orbits", "G-orbits of planes"),
        ("collision-matrix", "collision matrix of a plane"),
        ("solve-rrp", "maximum net gain for a plane, or over all orbits"),
        ("build-code", "assemble and verify a code"),
        ("verify-code", "check minimum distance of a code file"),
        ("bounds", "reference bounds for v"),
    ]:
        sub.add_parser(name, parents=[common], help=help_)
    rp = sub.add_parser("reproduce", parents=[common], help="compare with golden data")
    rp.add_argument("target", choices=sorted(REPRODUCERS))
    return p


def make_config(ns: argparse.Namespace) -> RunConfig:
    n = ns.n
    if ns.v is not None:
        if n is not None and n + 3 != ns.v:
            raise UsageError(f"--v {ns.v} and --n {n} disagree: v must equal n + 3")
        n = ns.v - 3
    return RunConfig(ns.command, n, ns.w, ns.mode, ns.fmt, ns.long_run, max(1, ns.jobs), ns.out)


COMMANDS = {
    "field-info": cmd_field_info,
    "orbits": cmd_orbits,
    "collision-matrix": cmd_collision_matrix,
    "solve-rrp": cmd_solve_rrp,
    "build-code": cmd_build_code,
    "verify-code": cmd_verify_code,
    "bounds": cmd_bounds,
}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = make_config(ns)
        if cfg.command == "reproduce":
            return cmd_reproduce(cfg, ns.target)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, FieldError, GeometryError, rrp.RRPError, codegen.CodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
