"""Command-line front end: single checks, sweeps, fuzzing and the identity suite.

Exit status: 0 verified, 2 violated, 3 hypotheses unmet, 4 inconclusive,
1 usage or domain error. Sweeps and fuzz runs exit 2 if any row of a
theorem expected to hold is violated, otherwise 4 if any row is
inconclusive, otherwise 0.

Fuzz randomness comes from a counter-based SplitMix64 stream: draw k of
trial i is splitmix64(seed + (i * 64 + k + 1) * 0x9E3779B97F4A7C15) mod 2^64,
mapped to [0, 1) by its top 53 bits. Trials are therefore independent of
each other and of the number of worker processes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Any, Iterable, Optional, Sequence

from . import expr as _expr
from .expr import ParseError, parse
from .quadrature import QuadSettings
from .theorems import (
    DISCREPANCY_TAG,
    HYPOTHESES_UNMET,
    INCONCLUSIVE,
    STATUSES,
    THEOREMS,
    VERIFIED,
    VIOLATED,
    CheckReport,
    CheckSettings,
    PreconditionError,
    Workspace,
    replay_command,
    run_proof_fact_suite,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, EXIT_UNMET, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
STATUS_EXIT = {VERIFIED: EXIT_OK, VIOLATED: EXIT_VIOLATED, HYPOTHESES_UNMET: EXIT_UNMET, INCONCLUSIVE: EXIT_INCONCLUSIVE}
PRECONDITION = "precondition_error"
SKIPPED = "skipped"

PARAMS = ("a", "b", "m", "alpha", "alpha1", "q")
PARAM_DEFAULTS = {"a": 0.0, "b": 1.0, "m": 1.0, "alpha": 1.0, "alpha1": 1.0, "q": 1.0}
# violations here would contradict a sound proof; the rest are discrepancy candidates
SOUND_THEOREMS = ("HH", "T1_1", "T1_2", "L1_1", "T2_1", "T2_2", "C2_1", "T2_3")
FUZZ_THEOREMS = ("HH", "T1_1", "T1_2", "L1_1", "T2_1", "T2_2", "C2_1", "T2_3", "T3_1", "C3_1", "T3_2", "C3_2")
FUZZ_GRID_N = 24
DEFAULT_ALPHA_GRID = (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
DEFAULT_ALPHA1_GRID = (0.25, 0.5, 0.75, 1.0)
MIN_MARGIN_K = 10


class UsageError(ValueError):
    pass


# --- configuration ---------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    theorem: Optional[str] = None
    function_text: Optional[str] = None
    params: dict[str, str] = field(default_factory=dict)
    trials: int = 1000
    seed: int = 0
    output_format: str = "text"
    abs_tol: Optional[float] = None
    max_subdivisions: Optional[int] = None
    panel_order: Optional[int] = None
    grid_n: Optional[int] = None
    check_tol: Optional[float] = None
    jobs: int = 1

    def settings(self) -> CheckSettings:
        q = QuadSettings()
        q = QuadSettings(
            abs_tol=self.abs_tol if self.abs_tol is not None else q.abs_tol,
            max_subdivisions=self.max_subdivisions if self.max_subdivisions is not None else q.max_subdivisions,
            panel_order=self.panel_order if self.panel_order is not None else q.panel_order,
        )
        s = CheckSettings(quad=q)
        if self.check_tol is not None:
            s = replace(s, check_tol=self.check_tol)
        grid = self.grid_n if self.grid_n is not None else (FUZZ_GRID_N if self.command == "fuzz" else s.grid_n)
        return replace(s, grid_n=grid)


def parse_values(text: str, name: str) -> list[float]:
    """A scalar, a comma list, or an inclusive range start:stop:step."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise UsageError(f"{name}: range must be start:stop:step, got {text!r}")
            start, stop, step = parts
            if not all(math.isfinite(v) for v in parts) or step <= 0 or stop < start:
                raise UsageError(f"{name}: range needs finite start <= stop and step > 0, got {text!r}")
            # stop is included when within half a step
            n = int(math.floor((stop - start) / step + 0.5)) + 1
            return [round(start + i * step, 12) for i in range(n)]
        values = [float(p) for p in text.split(",")]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{name}: cannot read {text!r} as a number, list or range") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise UsageError(f"{name}: values must be finite, got {text!r}")
    return values


_CONFIG_KEYS = {
    "theorem": str,
    "f": str,
    "a": str,
    "b": str,
    "m": str,
    "alpha": str,
    "alpha1": str,
    "q": str,
    "trials": int,
    "seed": int,
    "format": str,
    "abs_tol": float,
    "max_subdivisions": int,
    "panel_order": int,
    "grid_n": int,
    "check_tol": float,
    "jobs": int,
}


def read_config(path: str) -> dict[str, Any]:
    """Flat ``key = value`` file; '#' starts a comment."""
    out: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhfrac",
        description="Verify Hermite-Hadamard type inequalities for Riemann-Liouville fractional integrals.",
        epilog=_expr.__doc__.split("\n\n", 1)[1] + "\n" + __doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    help_tail = {"epilog": parser.epilog, "formatter_class": argparse.RawDescriptionHelpFormatter}

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key = value file; flags given on the command line win")
        p.add_argument("--format", dest="output_format", choices=("text", "json-lines", "csv"))
        p.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
        p.add_argument("--max-subdivisions", type=int)
        p.add_argument("--panel-order", type=int)
        p.add_argument("--grid-n", type=int, help="points per axis for hypothesis certificates")
        p.add_argument("--check-tol", type=float)

    def theorem_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--theorem", help="one of " + ", ".join(THEOREMS))
        p.add_argument("--f", dest="function_text", help="function of x (see grammar below)")
        for name in PARAMS:
            p.add_argument(f"--{name}", help="value; sweeps accept start:stop:step or a,b,c")

    p_check = sub.add_parser("check", help="check one theorem at one parameter point", **help_tail)
    theorem_args(p_check)
    common(p_check)

    p_sweep = sub.add_parser("sweep", help="check one theorem over a parameter grid", **help_tail)
    theorem_args(p_sweep)
    common(p_sweep)
    p_sweep.add_argument("--jobs", type=int)

    p_fuzz = sub.add_parser("fuzz", help="random functions and parameters against every theorem", **help_tail)
    p_fuzz.add_argument("--theorem", help="comma list restricting the theorems run")
    p_fuzz.add_argument("--trials", type=int)
    p_fuzz.add_argument("--seed", type=int)
    p_fuzz.add_argument("--jobs", type=int)
    common(p_fuzz)

    p_id = sub.add_parser("identities", help="closed-form integral facts used by the proofs", **help_tail)
    p_id.add_argument("--alpha", help="alpha grid (list or range)")
    p_id.add_argument("--alpha1", help="alpha1 grid (list or range)")
    common(p_id)
    for p in (p_check, p_sweep, p_fuzz, p_id):
        p.set_defaults(parser=p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    merged: dict[str, Any] = read_config(ns.config) if getattr(ns, "config", None) else {}
    renames = {"function_text": "f", "output_format": "format"}
    for key, value in vars(ns).items():
        if key in ("command", "config", "parser") or value is None:
            continue
        merged[renames.get(key, key)] = value
    cfg = RunConfig(command=ns.command)
    cfg.theorem = merged.pop("theorem", None)
    cfg.function_text = merged.pop("f", None)
    cfg.params = {k: str(merged.pop(k)) for k in PARAMS if k in merged}
    for key in ("trials", "seed", "abs_tol", "max_subdivisions", "panel_order", "grid_n", "check_tol", "jobs"):
        if key in merged:
            setattr(cfg, key, merged.pop(key))
    cfg.output_format = merged.pop("format", "text")
    if cfg.output_format not in ("text", "json-lines", "csv"):
        raise UsageError(f"format: must be text, json-lines or csv, got {cfg.output_format!r}")
    if merged:
        raise UsageError(f"{', '.join(sorted(merged))}: not used by the {cfg.command} command")
    if not (0 <= cfg.seed < 2**64):
        raise UsageError(f"seed: must be a 64-bit unsigned integer, got {cfg.seed!r}")
    if cfg.trials < 1:
        raise UsageError(f"trials: must be >= 1, got {cfg.trials!r}")
    if cfg.jobs < 1:
        raise UsageError(f"jobs: must be >= 1, got {cfg.jobs!r}")
    return cfg


def _theorem_params(cfg: RunConfig) -> tuple[str, list[str]]:
    if cfg.theorem is None:
        raise UsageError("theorem: --theorem is required")
    if cfg.theorem not in THEOREMS:
        raise UsageError(f"theorem: unknown id {cfg.theorem!r}; expected one of {', '.join(THEOREMS)}")
    if cfg.function_text is None:
        raise UsageError("f: --f is required")
    wanted = list(THEOREMS[cfg.theorem].params)
    extra = [k for k in cfg.params if k not in wanted]
    if extra:
        raise UsageError(f"{', '.join(extra)}: not a parameter of {cfg.theorem} (uses {', '.join(wanted)})")
    return cfg.theorem, wanted


# --- rendering ---------------------------------------------------------------


def fmt_real(v: Optional[float]) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "" if v is None else repr(v)
    return "%.17g" % v


def render_text(r: CheckReport) -> str:
    lines = [f"theorem: {r.theorem_id}"]
    lines.append("inputs: " + " ".join(f"{k}={v}" for k, v in r.inputs.items()))
    lines.append(f"status: {r.status}")
    lines.append(f"lhs: {fmt_real(r.lhs)}")
    lines.append(f"rhs: {fmt_real(r.rhs)}")
    lines.append(f"margin: {fmt_real(r.margin)}")
    for name, c in r.hypotheses:
        detail = f"holds ({c.evidence}, n={c.grid_size})" if c.holds else f"fails at {list(c.witness)}"
        lines.append(f"hypothesis: {name}: {detail}; max violation {fmt_real(c.max_violation)}")
    lines.extend(f"note: {n}" for n in r.notes)
    return "\n".join(lines)


def report_json(r: CheckReport) -> str:
    return json.dumps(r.to_dict(), sort_keys=True)


def _csv_text(rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([fmt_real(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# --- check and sweep ---------------------------------------------------------


def _run_point(args: tuple) -> CheckReport:
    theorem, function_text, values, settings = args
    f = parse(function_text)
    try:
        return THEOREMS[theorem].run(f, values, Workspace(settings))
    except PreconditionError as exc:
        inputs = {"f": function_text, **values}
        return CheckReport(theorem, math.nan, math.nan, math.nan, PRECONDITION, [], [str(exc)], inputs)


def run_check(cfg: RunConfig, out) -> int:
    theorem, wanted = _theorem_params(cfg)
    f = parse(cfg.function_text)
    values = {}
    for k in wanted:
        raw = cfg.params.get(k)
        if raw is None:
            values[k] = PARAM_DEFAULTS[k]
            continue
        vals = parse_values(raw, k)
        if len(vals) != 1 or ":" in raw:
            raise UsageError(f"{k}: check takes a scalar, got {raw!r} (use sweep for ranges)")
        values[k] = vals[0]
    report = THEOREMS[theorem].run(f, values, Workspace(cfg.settings()))
    if cfg.output_format == "text":
        out.write(render_text(report) + "\n")
    elif cfg.output_format == "json-lines":
        out.write(report_json(report) + "\n")
    else:
        out.write(_csv_text([_sweep_header(wanted), _sweep_row(report, wanted)]))
    return STATUS_EXIT[report.status]


def _sweep_header(wanted: Sequence[str]) -> list[str]:
    return ["theorem_id", "f", *wanted, "lhs", "rhs", "margin", "status", "notes"]


def _sweep_row(r: CheckReport, wanted: Sequence[str]) -> list[Any]:
    return [r.theorem_id, r.inputs["f"], *(float(r.inputs[k]) for k in wanted),
            r.lhs, r.rhs, r.margin, r.status, " | ".join(r.notes)]


def _sweep_exit(theorem_ids: Iterable[str], statuses: Iterable[str]) -> int:
    code = EXIT_OK
    for tid, status in zip(theorem_ids, statuses):
        if status == VIOLATED and tid.rstrip("ab") in SOUND_THEOREMS:
            return EXIT_VIOLATED
        if status == INCONCLUSIVE:
            code = EXIT_INCONCLUSIVE
    return code


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def run_sweep(cfg: RunConfig, out) -> int:
    theorem, wanted = _theorem_params(cfg)
    parse(cfg.function_text)  # report syntax errors before any work
    grids = []
    ranged = False
    for k in wanted:
        raw = cfg.params.get(k)
        if raw is None:
            grids.append([PARAM_DEFAULTS[k]])
            continue
        vals = parse_values(raw, k)
        ranged = ranged or len(vals) > 1 or ":" in raw
        grids.append(vals)
    if not ranged:
        raise UsageError("sweep: at least one parameter must be a range or list")
    settings = cfg.settings()
    points = [(theorem, cfg.function_text, dict(zip(wanted, combo)), settings) for combo in product(*grids)]
    reports = _map(_run_point, points, cfg.jobs)
    if cfg.output_format == "csv":
        out.write(_csv_text([_sweep_header(wanted), *(_sweep_row(r, wanted) for r in reports)]))
    elif cfg.output_format == "json-lines":
        for r in reports:
            out.write(report_json(r) + "\n")
    else:
        for r in reports:
            params = " ".join(f"{k}={r.inputs[k]!r}" for k in wanted)
            out.write(f"{r.theorem_id} {params} status={r.status} lhs={fmt_real(r.lhs)} "
                      f"rhs={fmt_real(r.rhs)} margin={fmt_real(r.margin)}\n")
            for n in r.notes:
                out.write(f"  note: {n}\n")
    return _sweep_exit((r.theorem_id for r in reports), (r.status for r in reports))


# --- fuzz --------------------------------------------------------------------

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_DRAWS_PER_TRIAL = 64


def splitmix64(x: int) -> int:
    z = x & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def uniform(seed: int, counter: int) -> float:
    """Value in [0, 1) for position ``counter`` of the stream ``seed``."""
    return (splitmix64(seed + (counter + 1) * _GOLDEN) >> 11) * 2.0**-53


@dataclass(frozen=True)
class FuzzInstance:
    function_text: str
    params: dict[str, float]


def draw_instance(seed: int, trial: int) -> FuzzInstance:
    base = trial * _DRAWS_PER_TRIAL
    u = [uniform(seed, base + k) for k in range(12)]
    c1, c2, c3 = (5.0 * v for v in u[0:3])
    p1, p2 = (1.0 + 3.0 * v for v in u[3:5])
    lam = 0.1 + 1.9 * u[5]
    text = f"{c1:.6f}*x^{p1:.6f} + {c2:.6f}*x^{p2:.6f} + {c3:.6f}*(exp({lam:.6f}*x) - 1)"
    a, b = sorted((3.0 * u[6], 3.0 * u[7]))
    params = {
        "a": a,
        "b": b,
        "m": 1.0 - u[8],
        "alpha1": 1.0 - u[9],
        "alpha": 2.0 * (1.0 - u[10]),
        "q": 1.0 + 3.0 * u[11],
    }
    return FuzzInstance(text, params)


@dataclass(frozen=True)
class FuzzRecord:
    trial: int
    theorem_id: str
    status: str
    margin: float
    notes: tuple[str, ...]
    replay: str


def _fuzz_trial(args: tuple) -> list[FuzzRecord]:
    seed, trial, theorems, settings = args
    inst = draw_instance(seed, trial)
    f = parse(inst.function_text)
    ws = Workspace(settings)
    records = []
    for tid in theorems:
        wanted = THEOREMS[tid].params
        values = {k: inst.params[k] for k in wanted}
        replay = replay_command(tid, inst.function_text, values)
        if tid in ("C2_1", "C3_1", "C3_2") and values["alpha"] > 1.0:
            records.append(FuzzRecord(trial, tid, SKIPPED, math.nan, ("alpha > 1",), replay))
            continue
        if tid == "C2_1" and values["q"] == 1.0:
            records.append(FuzzRecord(trial, tid, SKIPPED, math.nan, ("q = 1",), replay))
            continue
        try:
            r = THEOREMS[tid].run(f, values, ws)
        except PreconditionError as exc:
            records.append(FuzzRecord(trial, tid, PRECONDITION, math.nan, (str(exc),), replay))
            continue
        replay = replay_command(r.theorem_id, inst.function_text, values)
        records.append(FuzzRecord(trial, r.theorem_id, r.status, r.margin, tuple(r.notes), replay))
    return records


def _base_id(tid: str) -> str:
    return tid[:-1] if tid in ("T2_1a", "T2_1b", "T3_1a", "T3_1b") else tid


def run_fuzz(cfg: RunConfig, out) -> int:
    if cfg.function_text is not None or cfg.params:
        raise UsageError("fuzz draws its own function and parameters; --f and parameter flags are not accepted")
    if cfg.theorem:
        theorems = [t.strip() for t in cfg.theorem.split(",") if t.strip()]
        unknown = [t for t in theorems if t not in FUZZ_THEOREMS]
        if unknown:
            raise UsageError(f"theorem: {', '.join(unknown)} not fuzzable; choose from {', '.join(FUZZ_THEOREMS)}")
    else:
        theorems = list(FUZZ_THEOREMS)
    settings = cfg.settings()
    jobs = [(cfg.seed, i, tuple(theorems), settings) for i in range(cfg.trials)]
    records = [r for batch in _map(_fuzz_trial, jobs, cfg.jobs) for r in batch]

    columns = (*STATUSES, PRECONDITION, SKIPPED)
    counts = {t: {s: 0 for s in columns} for t in theorems}
    for r in records:
        counts[_base_id(r.theorem_id)][r.status] += 1
    ranked = sorted(
        (r for r in records if r.status in (VERIFIED, VIOLATED) and r.theorem_id != "L1_1"),
        key=lambda r: (r.margin, r.trial, r.theorem_id),
    )[:MIN_MARGIN_K]
    violated = [r for r in records if r.status == VIOLATED]

    if cfg.output_format == "json-lines":
        for t in theorems:
            out.write(json.dumps({"kind": "counts", "theorem_id": t, **counts[t]}, sort_keys=True) + "\n")
        for kind, rows in (("min_margin", ranked), ("violated", violated)):
            for r in rows:
                out.write(json.dumps({
                    "kind": kind, "trial": r.trial, "theorem_id": r.theorem_id, "status": r.status,
                    "margin": r.margin, "notes": list(r.notes), "replay": r.replay,
                }, sort_keys=True) + "\n")
    elif cfg.output_format == "csv":
        rows: list[list[Any]] = [["kind", "theorem_id", *columns, "trial", "margin", "notes", "replay"]]
        for t in theorems:
            rows.append(["counts", t, *(counts[t][s] for s in columns), "", "", "", ""])
        for kind, group in (("min_margin", ranked), ("violated", violated)):
            for r in group:
                rows.append([kind, r.theorem_id, *([""] * len(columns)), r.trial, r.margin,
                             " | ".join(r.notes), r.replay])
        out.write(_csv_text(rows))
    else:
        out.write(f"fuzz: trials={cfg.trials} seed={cfg.seed} grid_n={settings.grid_n}\n")
        width = max(len(c) for c in columns)
        out.write("theorem " + " ".join(c.rjust(width) for c in columns) + "\n")
        for t in theorems:
            out.write(t.ljust(7) + " " + " ".join(str(counts[t][c]).rjust(width) for c in columns) + "\n")
        out.write(f"\n{len(ranked)} smallest margins:\n")
        for r in ranked:
            out.write(f"  trial {r.trial} {r.theorem_id} {r.status} margin={fmt_real(r.margin)}\n    {r.replay}\n")
        out.write(f"\n{len(violated)} violated:\n")
        for r in violated:
            tagged = DISCREPANCY_TAG if DISCREPANCY_TAG in r.notes else "unexplained"
            out.write(f"  trial {r.trial} {r.theorem_id} margin={fmt_real(r.margin)} [{tagged}]\n    {r.replay}\n")
    return _sweep_exit((r.theorem_id for r in records), (r.status for r in records))


# --- identities --------------------------------------------------------------


def is_informational(r: CheckReport) -> bool:
    inp = r.inputs
    return inp.get("fact") == "vi-sym" and inp.get("alpha") != inp.get("alpha1")


def run_identities(cfg: RunConfig, out) -> int:
    extra = [k for k in cfg.params if k not in ("alpha", "alpha1")]
    if cfg.function_text is not None or cfg.theorem is not None or extra:
        raise UsageError("identities only accepts --alpha and --alpha1 grids")
    alphas = parse_values(cfg.params["alpha"], "alpha") if "alpha" in cfg.params else list(DEFAULT_ALPHA_GRID)
    alpha1s = parse_values(cfg.params["alpha1"], "alpha1") if "alpha1" in cfg.params else list(DEFAULT_ALPHA1_GRID)
    if min(alphas) <= 0 or min(alpha1s) <= 0:
        raise UsageError("alpha, alpha1: grids must be positive")
    reports = run_proof_fact_suite(alphas, alpha1s, cfg.settings())
    code = EXIT_OK
    failing = []
    for r in reports:
        if r.status == INCONCLUSIVE:
            failing.append(r)
            code = max(code, EXIT_INCONCLUSIVE) if code != EXIT_VIOLATED else code
        elif r.status == VIOLATED and not is_informational(r):
            failing.append(r)
            code = EXIT_VIOLATED
    if cfg.output_format == "json-lines":
        for r in reports:
            d = r.to_dict()
            d["informational"] = is_informational(r)
            out.write(json.dumps(d, sort_keys=True) + "\n")
    elif cfg.output_format == "csv":
        rows: list[list[Any]] = [["fact", "alpha", "alpha1", "lhs", "rhs", "margin", "status", "informational"]]
        for r in reports:
            rows.append([r.inputs.get("fact"), float(r.inputs.get("alpha", math.nan)),
                         r.inputs.get("alpha1", ""), r.lhs, r.rhs, r.margin, r.status,
                         "yes" if is_informational(r) else "no"])
        out.write(_csv_text(rows))
    else:
        for r in reports:
            where = " ".join(f"{k}={v}" for k, v in r.inputs.items() if k != "fact")
            flag = " (informational)" if is_informational(r) else ""
            out.write(f"fact {r.inputs.get('fact')} {where}: {r.status}{flag} "
                      f"lhs={fmt_real(r.lhs)} rhs={fmt_real(r.rhs)}\n")
        out.write(f"{len(reports) - len(failing)}/{len(reports)} entries pass or are informational\n")
    for r in failing:
        sys.stderr.write(f"failing fact {r.inputs.get('fact')} at {r.inputs}: {r.status}\n")
    return code


# --- entry point ---------------------------------------------------------------

COMMANDS = {"check": run_check, "sweep": run_sweep, "fuzz": run_fuzz, "identities": run_identities}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which would read as "violated"
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except ParseError as exc:
        sys.stderr.write(f"hhfrac: f: {exc}\n")
    except (UsageError, PreconditionError, ValueError, OSError) as exc:
        sys.stderr.write(f"hhfrac: {exc}\n")
    return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
