"""Command-line batch driver: JSON in, JSON out.

Exit codes: 0 success, 1 input error, 2 a checked property failed,
3 budget refusal.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import claims
from .ff_tower import FieldError, build_field
from .linpoly import LinPoly
from .linsets import compute_Rf, verify_rflf
from .rmcode import BudgetExceeded, build_code, idealiser, min_distance, singleton_status
from .scatter import (
    DEFAULT_BUDGET as CLASSIFY_BUDGET,
    FamilySpec,
    MethodDisagreement,
    build_family,
    classify,
    solve_norm_condition,
)

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3
TASKS = ("classify", "sweep_family", "linset", "code_analyze", "solve_norm")


class InputError(ValueError):
    pass


class PropertyViolation(RuntimeError):
    def __init__(self, payload):
        super().__init__("a checked property failed")
        self.payload = payload


def parse_field(text):
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"--field expects p,h,n[,t], got {text!r}") from exc
    if len(parts) not in (3, 4):
        raise InputError("--field expects p,h,n[,t]")
    return build_field(*parts)


def _need_field(tower):
    if tower is None:
        raise InputError("this task needs --field p,h,n[,t]")
    return tower


def _sampling_guard(tower, budget, seed):
    if tower.order - 1 > budget and seed is None:
        raise InputError("the run would sample; pass --seed")


# -- tasks -------------------------------------------------------------------------

def task_classify(tower, params, budget, seed, workers):
    F = _need_field(tower)
    f = LinPoly.from_json(F, params["f"])
    t = params.get("t")
    cbudget = budget if budget is not None else CLASSIFY_BUDGET
    _sampling_guard(F, cbudget, seed)
    rep = classify(f, t, params.get("method", "both"), budget=cbudget, seed=seed or 0)
    return rep.to_json(F, {"f": f.to_json()["coeffs"]})


def _sweep_values(F, spec, t):
    if isinstance(spec, list):
        return [F.parse_element(v) for v in spec]
    if spec == "all":
        return list(range(F.order))
    if spec == "nonzero":
        return list(range(1, F.order))
    if spec == "norm_classes":
        seen, out = set(), []
        for d in range(1, F.order):
            N = F.rel_norm(d, F.n, t)
            if N not in seen:
                seen.add(N)
                out.append(d)
        return out
    raise InputError(f"unknown sweep values {spec!r}")


def task_sweep_family(tower, params, budget, seed, workers):
    F = _need_field(tower)
    t = params.get("t", F.t)
    base = FamilySpec.from_json({"family": params["family"], "params": params.get("params", {})}, F)
    sweep = params.get("sweep", {})
    if len(sweep) > 1:
        raise InputError("sweep over one parameter at a time")
    cbudget = budget if budget is not None else CLASSIFY_BUDGET
    _sampling_guard(F, cbudget, seed)
    rows = []
    items = list(sweep.items()) or [(None, None)]
    key, spec = items[0]
    values = _sweep_values(F, spec, t) if key else [None]
    for v in values:
        prm = dict(base.params)
        if key:
            prm[key] = v
        f = build_family(FamilySpec(base.family, prm), F)
        rep = classify(f, t, params.get("method", "f_rho"), budget=cbudget, seed=seed or 0)
        row = {"verdicts": rep.verdicts, "sampled": rep.sampled}
        if key:
            row[key] = F.format_element(v)
            if key == "delta":
                row["norm"] = F.format_element(F.rel_norm(v, F.n, t))
        rows.append(row)
    return {"family": base.family, "t": t, "rows": rows}


def task_linset(tower, params, budget, seed, workers):
    F = _need_field(tower)
    f = LinPoly.from_json(F, params["f"])
    m = params.get("m", F.n)
    out = {"linear_set": compute_Rf(f, m).to_json(full=bool(params.get("full", False)))}
    if params.get("verify"):
        rep = verify_rflf(f, params.get("t", F.t))
        out["theorem"] = rep.to_json()
        if not rep.holds:
            raise PropertyViolation(out)
    return out


def task_code_analyze(tower, params, budget, seed, workers):
    F = _need_field(tower)
    code = build_code(F, params)
    d, hist = min_distance(code, budget)
    st = singleton_status(code, d)
    out = {
        "params": {**code.to_json(), "ell": st.ell, "n": st.n, "q": st.q, "k": st.k},
        "d_min": d,
        "rank_distribution": {str(r): c for r, c in hist.items()},
        "is_mrd": st.is_mrd,
        "defect": st.singleton_defect_s,
    }
    if params.get("idealisers", True):
        out["idealisers"] = {side: idealiser(code, side, seed=seed or 0).to_json() for side in ("left", "right")}
    return out


def task_solve_norm(tower, params, budget, seed, workers):
    method = params.get("method", "value_set")
    t = int(params["t"])
    s = int(params.get("s", 1))
    if method == "scan":
        F = _need_field(tower)
        if "d" not in params:
            raise InputError("scan needs d")
        rep = solve_norm_condition(F.q, t, s, F.parse_element(params["d"]), method="scan", tower=F)
    else:
        q = int(params["q"]) if "q" in params else _need_field(tower).q
        rep = solve_norm_condition(q, t, s, method="value_set")
    out = rep.to_json()
    out["message"] = "nontrivial solutions found" if rep.has_solution else "no nontrivial solutions"
    return out


TASK_FUNCS = {
    "classify": task_classify,
    "sweep_family": task_sweep_family,
    "linset": task_linset,
    "code_analyze": task_code_analyze,
    "solve_norm": task_solve_norm,
}


def run_task(task, tower, params, budget, seed, workers, dry_run=False):
    if task.startswith("reproduce:"):
        cid = task.split(":", 1)[1]
        if cid not in claims.CLAIMS:
            raise InputError(f"unknown claim {cid!r}; see list-claims")
        c = claims.CLAIMS[cid]
        if dry_run:
            return {"claim": cid, "criterion": c.criterion, "cost": c.cost, "est_seconds": c.est_seconds}
        res = claims.run_claim(cid, workers=workers, seed=seed or 0)
        if not res.holds:
            raise PropertyViolation(res.to_json())
        return res.to_json()
    if task not in TASK_FUNCS:
        raise InputError(f"unknown task {task!r}; expected one of {TASKS} or reproduce:<claim-id>")
    if dry_run:
        return {"task": task, "dry_run": True}
    return TASK_FUNCS[task](tower, params, budget, seed, workers)


# -- rendering ---------------------------------------------------------------------------

def _render_table(rows):
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    cells = [[json.dumps(r.get(c), sort_keys=True) if not isinstance(r.get(c), str) else r[c] for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def render(obj, pretty):
    if not pretty:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    parts = []
    rows = None
    if isinstance(obj, list):
        rows, rest = obj, {}
    else:
        key = next((k for k in ("table", "rows") if isinstance(obj.get(k), list) and obj[k]), None)
        rows = obj.get(key) if key else None
        rest = {k: v for k, v in obj.items() if k != key}
    if rest:
        parts.append(json.dumps(rest, sort_keys=True, indent=2))
    if rows:
        flat = [{k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in r.items()} for r in rows]
        parts.append(_render_table(flat))
    return "\n".join(parts)


# -- entry point -------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="scatterlab", description="Partially scattered q-polynomials, linear sets and MRD codes.")
    ap.add_argument("command", nargs="?", default="run", choices=("run", "list-claims"))
    ap.add_argument("--field", help="p,h,n[,t]: the tower F_p <= F_q (q = p^h) <= F_{q^t} <= F_{q^n}")
    ap.add_argument("--task", help=f"one of {', '.join(TASKS)} or reproduce:<claim-id>")
    ap.add_argument("--params", help="JSON file with task parameters ('-' for stdin)")
    ap.add_argument("--budget", type=int, help="work budget (codewords / classified elements); env SCATTERLAB_BUDGET")
    ap.add_argument("--seed", type=int, help="seed for any sampled mode")
    ap.add_argument("--workers", type=int, default=1, help="worker processes for sweeps (output is identical)")
    ap.add_argument("--pretty", action="store_true", help="human-readable rendering")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--dry-run", action="store_true", help="print cost estimates without running")
    return ap


def _load_params(path):
    if not path:
        return {}
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read params: {exc}") from exc


def main(argv=None):
    args = build_parser().parse_args(argv)
    budget = args.budget
    if budget is None and os.environ.get("SCATTERLAB_BUDGET"):
        budget = int(os.environ["SCATTERLAB_BUDGET"])
    code, payload = EXIT_OK, None
    try:
        if args.command == "list-claims":
            payload = claims.list_claims()
            if not args.dry_run:
                payload = [{k: v for k, v in c.items() if k != "est_seconds"} for c in payload]
        else:
            if not args.task:
                raise InputError("--task is required")
            tower = parse_field(args.field) if args.field else None
            params = _load_params(args.params)
            payload = run_task(args.task, tower, params, budget, args.seed, args.workers, args.dry_run)
    except PropertyViolation as exc:
        code, payload = EXIT_VIOLATION, exc.payload
    except MethodDisagreement as exc:
        code, payload = EXIT_VIOLATION, {"error": str(exc)}
    except BudgetExceeded as exc:
        code, payload = EXIT_BUDGET, {"error": str(exc)}
    except (InputError, FieldError, KeyError, TypeError, ValueError) as exc:
        code, payload = EXIT_INPUT, {"error": f"{type(exc).__name__}: {exc}"}
    text = render(payload, args.pretty)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    if code in (EXIT_INPUT, EXIT_BUDGET):
        print(f"scatterlab: {payload['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
