"""Solver wrappers and the experiment runner.

Every solver returns a walk in the caller's graph, re-verified against that
graph here, so a builder bug shows up as verified=false rather than a
silently wrong row.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import gen
from .absorb import build_absorbing_cycle
from .errors import ArgumentError, BestEffort, ChromaError, ContractError, DriverExhausted
from .extremal import extremal_long_cycle
from .graph import (CYCLE, EdgeColouredGraph, PcWalk, critical_reduction, host_hash, min_colour_degree,
                    serialize, star_normalize)
from .rotation import long_one_path_cycle
from .verify import ExtremalWitness, as_fraction, check_pc_cycle, check_pc_path

CSV_HEADER = ["instance_hash", "n", "delta_c", "solver", "achieved_len", "target_len", "verified", "wall_ms", "seed"]
SOLVERS = ("extremal", "rotate", "absorb")

DEFAULTS = {
    "extremal": {"eps": Fraction(1, 100)},
    "rotate": {"beta": Fraction(1, 10), "eps": Fraction(1, 100)},
    "absorb": {"gamma": Fraction(1, 100), "eps": Fraction(0)},
}


def target_len(g: EdgeColouredGraph) -> int:
    """min{floor(3 delta^c / 2), n}: the headline bound, reported but never asserted."""
    return min((3 * min_colour_degree(g)) // 2, g.n)


@dataclass
class SolveOutcome:
    solver: str
    walk: Optional[PcWalk]
    verified: bool
    status: str
    detail: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[ExtremalWitness] = None

    @property
    def achieved_len(self) -> int:
        return self.walk.length if self.walk is not None else 0


def _reverify(g: EdgeColouredGraph, vertices, kind: str) -> PcWalk:
    return check_pc_cycle(g, vertices) if kind == CYCLE else check_pc_path(g, vertices)


def _params(solver: str, params: Optional[dict]) -> dict:
    out = dict(DEFAULTS[solver])
    for k, v in (params or {}).items():
        if v is None:
            continue
        out[k] = v if k == "seed" else as_fraction(v)
    return out


def solve(g: EdgeColouredGraph, solver: str, params: Optional[dict] = None, seed: int = 0) -> SolveOutcome:
    """Run one builder; errors that the builder documents become status strings."""
    if solver not in SOLVERS:
        raise ArgumentError(f"unknown solver {solver!r}")
    p = _params(solver, params)
    try:
        if solver == "extremal":
            return _solve_extremal(g, p)
        if solver == "rotate":
            return _solve_rotate(g, p)
        return _solve_absorb(g, p, seed)
    except ArgumentError:
        raise
    except ChromaError as exc:
        return SolveOutcome(solver, None, False, type(exc).__name__, {"error": str(exc)})


def _solve_extremal(g: EdgeColouredGraph, p: dict) -> SolveOutcome:
    h = star_normalize(critical_reduction(g))
    delta = p.get("delta", Fraction(min_colour_degree(h), g.n))
    try:
        res = extremal_long_cycle(h, delta, p["eps"])
    except BestEffort as exc:
        return SolveOutcome("extremal", None, False, "BestEffort", {"stage": exc.stage})
    walk = _reverify(g, res.walk.vertices, res.walk.kind)
    return SolveOutcome("extremal", walk, True, res.verdict, {"target": res.target})


def rotation_certificate(g: EdgeColouredGraph, H) -> PcWalk:
    """Longest component of a 1-path-cycle as a path or cycle of g (ties prefer the path)."""
    best = _reverify(g, H.path, "PATH")
    for cyc in H.cycles:
        w = _reverify(g, cyc, CYCLE)
        if w.order > best.order:
            best = w
    return best


def _solve_rotate(g: EdgeColouredGraph, p: dict) -> SolveOutcome:
    h = critical_reduction(g)
    delta = p.get("delta", Fraction(min_colour_degree(h) - 1, g.n))
    witness = None
    try:
        res = long_one_path_cycle(h, delta, p["beta"], p["eps"])
        H, status, target = res.structure, res.verdict, res.target
        witness = res.witness
    except DriverExhausted as exc:
        H, status, target = exc.best, "EXHAUSTED", None
    walk = rotation_certificate(g, H)
    return SolveOutcome("rotate", walk, True, status, {"structure_order": H.order, "target": target}, witness)


def _solve_absorb(g: EdgeColouredGraph, p: dict, seed: int) -> SolveOutcome:
    cyc, fam = build_absorbing_cycle(g, p["gamma"], p["eps"], seed=int(p.get("seed", seed)))
    walk = _reverify(g, cyc.vertices, CYCLE)
    return SolveOutcome("absorb", walk, True, "OK", {"family": len(fam.members)})


# plans

GENERATORS = {
    "sharpness": (gen.gen_sharpness, ("d", "n"), False),
    "eps_extremal_exact": (gen.gen_eps_extremal_exact, ("m",), False),
    "extremal": (gen.gen_extremal, ("delta", "eps", "n"), True),
    "random_mcd": (gen.gen_random_mcd, ("n", "delta", "colour_budget"), True),
    "locally_bounded": (gen.gen_locally_bounded, ("n", "k"), True),
}


def generate(family: str, params: dict, seed: int = 0):
    """Build an instance by family name; returns (graph, witness or None)."""
    if family not in GENERATORS:
        raise ArgumentError(f"unknown generator family {family!r}")
    fn, keys, seeded = GENERATORS[family]
    missing = [k for k in keys if k not in params]
    if missing:
        raise ArgumentError(f"{family} needs parameters {missing}")
    args = [as_fraction(params[k]) if k in ("delta", "eps") else int(params[k]) for k in keys]
    if seeded:
        args.append(seed)
    out = fn(*args)
    if isinstance(out, tuple):
        return out
    if family == "sharpness":
        return out, gen.sharpness_witness(*args)
    return out, None


def validate_plan(plan: Any) -> List[dict]:
    """Normalise a plan dict into a list of cells; any schema problem is an ArgumentError."""
    if not isinstance(plan, dict):
        raise ArgumentError("plan must be a JSON object")
    unknown = set(plan) - {"experiments", "persist", "jobs"}
    if unknown:
        raise ArgumentError(f"unknown plan keys {sorted(unknown)}")
    exps = plan.get("experiments", [])
    if not isinstance(exps, list):
        raise ArgumentError("experiments must be a list")
    cells = []
    for i, e in enumerate(exps):
        if not isinstance(e, dict) or "generator" not in e or "solvers" not in e:
            raise ArgumentError(f"experiment {i} needs generator and solvers")
        gspec = e["generator"]
        if not isinstance(gspec, dict) or gspec.get("family") not in GENERATORS:
            raise ArgumentError(f"experiment {i}: unknown generator family")
        solvers = []
        for s in e["solvers"]:
            s = {"name": s} if isinstance(s, str) else s
            if not isinstance(s, dict) or s.get("name") not in SOLVERS:
                raise ArgumentError(f"experiment {i}: unknown solver {s!r}")
            solvers.append({"name": s["name"], "params": dict(s.get("params", {}))})
        if "seeds" in e:
            seeds = e["seeds"]
            if not isinstance(seeds, list) or not all(isinstance(x, int) for x in seeds):
                raise ArgumentError(f"experiment {i}: seeds must be a list of integers")
        else:
            reps = e.get("repetitions", 1)
            if not isinstance(reps, int) or reps < 0:
                raise ArgumentError(f"experiment {i}: repetitions must be a non-negative integer")
            seeds = list(range(reps))
        cells.append({"family": gspec["family"], "params": dict(gspec.get("params", {})),
                      "solvers": solvers, "seeds": list(seeds)})
    return cells


def _override_seeds(seeds: List[int]) -> List[int]:
    env = os.environ.get("CHROMA_SEED")
    if env is None or env == "":
        return seeds
    try:
        base = int(env)
    except ValueError:
        raise ArgumentError("CHROMA_SEED must be an integer") from None
    return [base + i for i in range(len(seeds))]


def _run_cell(task) -> List[dict]:
    family, params, solvers, seed, persist = task
    g, _ = generate(family, params, seed)
    text = serialize(g)
    hh = host_hash(g)
    if persist:
        Path(persist).mkdir(parents=True, exist_ok=True)
        Path(persist, f"{hh}.ecg").write_text(text)
    rows = []
    for s in solvers:
        t0 = time.perf_counter()
        out = solve(g, s["name"], s["params"], seed)
        ms = int(round((time.perf_counter() - t0) * 1000))
        rows.append({"instance_hash": hh, "n": g.n, "delta_c": min_colour_degree(g), "solver": s["name"],
                     "achieved_len": out.achieved_len, "target_len": target_len(g),
                     "verified": "true" if out.verified else "false", "wall_ms": ms, "seed": seed})
    return rows


def run_experiment(plan: Any, jobs: int = 1) -> List[dict]:
    """Rows in plan order: experiments, then seeds, then solvers."""
    cells = validate_plan(plan)
    persist = plan.get("persist") if isinstance(plan, dict) else None
    tasks = []
    for c in cells:
        for seed in _override_seeds(c["seeds"]):
            tasks.append((c["family"], c["params"], c["solvers"], seed, persist))
    jobs = int(plan.get("jobs", jobs)) if isinstance(plan, dict) else jobs
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_cell, tasks))
    else:
        chunks = [_run_cell(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def rows_to_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def load_plan(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"plan is not valid JSON: {exc}") from None
