"""``chvatal-verify``: run the checks over ranges and write flat reports.

Every subcommand produces a list of :class:`VerdictRecord` rows, sorted by
``(check, n, m)`` before anything is written, so a report never depends on
the worker count.  A one-line summary goes to stderr.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import partial
from typing import Callable, Optional, Sequence

from .binom import (
    mc_estimate,
    q_direct,
    q_table,
    switch_predicate,
    tail_numerators,
    target_m,
    theorem_check,
)
from .enclosure import certified_theorem_check
from .lemmas import DEFAULT_V_GRID as LEMMA2_GRID
from .lemmas import h_of, g_of, lemma1_conditions
from .proofsteps import (
    DEFAULT_V_GRID as SCALAR_GRID,
    SCALAR_KINDS,
    cubic_truncation,
    gamma_closed_form,
    proof_step_report,
    scalar_inequality_check,
)
from .report import FIELDS, WITHIN_4SE, VerdictRecord, format_rational, render, sort_records

__all__ = ["main", "run", "RunConfig", "build_parser", "MC_TRIPLES"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
ENV_PREFIX = "CHVERIFY_"

SUBCOMMANDS = (
    "table", "verify-theorem", "verify-lemma1", "verify-lemma2", "verify-proof",
    "verify-scalars", "mc-check", "bench", "emit-plot-data",
)

# per-subcommand fallbacks for options without a global default
_DEFAULTS = {
    "n_min": 2,
    "n_max": {"verify-theorem": 500, "verify-lemma1": 200, "verify-lemma2": 200,
              "emit-plot-data": 60},
    "s_max": {"verify-proof": 200, "verify-scalars": 50},
    "mode": "exact",
    "precision": {"verify-scalars": 128},
    "jobs": None,  # resolved to the core count
    "format": "json",
    "out": None,
    "seed": 0,
    "v_grid": None,
    "decimals": 12,
    "samples": 100_000,
    "timings": False,
    "points": "1000,2000,3000",
}
_FALLBACK_PRECISION = 53

# (n, m, seed offset) for the Monte Carlo sanity check; m runs over the
# minimizer, its neighbours and a few points far from it
MC_TRIPLES = tuple(
    (n, m, i)
    for i, (n, m) in enumerate([
        (5, 3), (6, 4), (7, 5), (9, 6), (10, 7), (12, 8), (15, 10), (20, 13),
        (20, 14), (25, 17), (30, 20), (30, 10), (40, 27), (40, 26), (50, 33),
        (50, 25), (60, 40), (75, 50), (90, 60), (100, 67),
    ])
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n_min: int = 2
    n_max: int = 2
    n: Optional[int] = None
    s_max: int = 1
    mode: str = "exact"
    precision: int = 53
    jobs: int = 1
    format: str = "json"
    out: Optional[str] = None
    seed: int = 0
    v_grid: Optional[tuple[Fraction, ...]] = None
    decimals: int = 12
    samples: int = 100_000
    timings: bool = False
    points: tuple[int, ...] = (1000, 2000, 3000)

    def validate(self) -> None:
        if self.n_min < 2 or self.n_min > self.n_max:
            raise UsageError(f"need 2 <= n-min <= n-max, got {self.n_min}..{self.n_max}")
        if self.jobs < 1:
            raise UsageError(f"jobs must be >= 1, got {self.jobs}")
        if self.precision < 8:
            raise UsageError(f"precision must be >= 8 bits, got {self.precision}")
        if self.s_max < (2 if self.command == "verify-scalars" else 1):
            raise UsageError(f"s-max too small: {self.s_max}")
        if self.decimals < 0:
            raise UsageError("decimals must be >= 0")
        if self.samples < 1:
            raise UsageError("samples must be >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if self.v_grid is not None and not all(0 < v <= 1 for v in self.v_grid):
            raise UsageError("every v-grid point must lie in (0, 1]")
        if self.command == "table" and self.n is None:
            raise UsageError("table needs --n")
        if any(p < 2 for p in self.points):
            raise UsageError("bench points must be >= 2")


# -- argument handling ------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _grid(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty v-grid")
    return tuple(_rational(p) for p in parts)


def _points(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point list {text!r}") from exc


def _flag(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off", ""):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


_TYPES: dict[str, Callable] = {
    "n_min": int, "n_max": int, "n": int, "s_max": int, "precision": int, "jobs": int,
    "seed": int, "decimals": int, "samples": int, "v_grid": _grid, "points": _points,
    "timings": _flag, "mode": str, "format": str, "out": str,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chvatal-verify",
        description="Exact and certified checks of the binomial-tail minimizer theorem and its proof.",
    )
    parser.add_argument("command", choices=SUBCOMMANDS, metavar="subcommand",
                        help=", ".join(SUBCOMMANDS))
    # every option defaults to None so environment and built-in defaults can fill in
    parser.add_argument("--n-min", type=int)
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--n", type=int, help="single n (sets both ends of the range)")
    parser.add_argument("--s-max", type=int)
    parser.add_argument("--mode", choices=("exact", "certified", "both"))
    parser.add_argument("--precision", type=int, help="bits for certified/enclosure checks")
    parser.add_argument("--jobs", type=int, help="worker processes (default: core count)")
    parser.add_argument("--format", choices=("json", "csv"))
    parser.add_argument("--out", help="report path (default: stdout)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--v-grid", type=_grid, help="comma-separated rationals in (0, 1]")
    parser.add_argument("--decimals", type=int, help="digits for emit-plot-data")
    parser.add_argument("--samples", type=int, help="Monte Carlo samples per triple")
    parser.add_argument("--points", type=_points, help="comma-separated n values for bench")
    parser.add_argument("--timings", action="store_const", const=True,
                        help="fill elapsed_ns (makes reports run-dependent)")
    return parser


def _resolve(ns: argparse.Namespace, env: dict) -> RunConfig:
    cmd = ns.command
    values = {}
    for name, conv in _TYPES.items():
        value = getattr(ns, name, None)
        if value is None:
            raw = env.get(ENV_PREFIX + name.upper())
            if raw is not None:
                try:
                    value = conv(raw)
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"bad {ENV_PREFIX}{name.upper()}={raw!r}: {exc}") from exc
        if value is None:
            default = _DEFAULTS.get(name)
            if isinstance(default, dict):
                default = default.get(cmd)
            if name == "points" and isinstance(default, str):
                default = _points(default)
            value = default
        values[name] = value
    if values["mode"] not in ("exact", "certified", "both"):
        raise UsageError(f"bad mode {values['mode']!r}")
    if values["format"] not in ("json", "csv"):
        raise UsageError(f"bad format {values['format']!r}")
    if values["n"] is not None:
        values["n_min"] = values["n_max"] = values["n"]
    if values["n_max"] is None:
        values["n_max"] = max(values["n_min"], 2)
    if values["s_max"] is None:
        values["s_max"] = 1
    if values["precision"] is None:
        values["precision"] = _FALLBACK_PRECISION
    if values["jobs"] is None:
        values["jobs"] = os.cpu_count() or 1
    return RunConfig(command=cmd, **values)


# -- work items (module level so they pickle) -------------------------------

def _theorem_exact(n: int) -> list[VerdictRecord]:
    num = tail_numerators(n)
    verdict = theorem_check(n, numerators=num)
    scale = n ** n
    t = target_m(n)
    other = min(v for m, v in enumerate(num) if m != t)
    recs = [VerdictRecord("theorem.i", n, t, Fraction(num[t], scale), Fraction(other, scale),
                          "<", "exact", )]
    m = t - 1 if verdict.switch_iff_holds else verdict.first_violation_m
    op = ">=" if switch_predicate(n, m) else "<"
    recs.append(VerdictRecord("theorem.ii", n, m, Fraction(num[m], scale), Fraction(num[m + 1], scale),
                              op, "exact"))
    return recs


def _theorem_certified(n: int, precision: int):
    res = certified_theorem_check(n, precision)
    lo, hi, verdict = res.lo, res.hi, res.verdict
    t = target_m(n)
    other = Fraction(min(lo[m] for m in range(n + 1) if m != t))
    recs = [VerdictRecord("theorem.i", n, t, Fraction(hi[t]), other, "<", "certified", )]
    m = t - 1 if verdict.switch_iff_holds else verdict.first_violation_m
    if switch_predicate(n, m):
        recs.append(VerdictRecord("theorem.ii", n, m, Fraction(lo[m]), Fraction(hi[m + 1]),
                                  ">=", "certified"))
    else:
        recs.append(VerdictRecord("theorem.ii", n, m, Fraction(hi[m]), Fraction(lo[m + 1]),
                                  "<", "certified"))
    return recs, (res.comparisons, res.refined, res.exact)


def theorem_item(n: int, mode: str, precision: int, timings: bool):
    recs, stats = [], (0, 0, 0)
    if mode in ("exact", "both"):
        start = time.perf_counter_ns()
        recs += _stamp(_theorem_exact(n), start, timings)
    if mode in ("certified", "both"):
        start = time.perf_counter_ns()
        out, stats = _theorem_certified(n, precision)
        recs += _stamp(out, start, timings)
    return recs, stats


def lemma1_item(n: int, timings: bool):
    start = time.perf_counter_ns()
    scale = n ** n
    num = tail_numerators(n)
    recs = []
    for m in range(n - 1):
        cond = lemma1_conditions(n, m, (Fraction(num[m], scale), Fraction(num[m + 1], scale)))
        # each criterion is ">= iff the switch predicate holds"
        op = ">=" if switch_predicate(n, m) else "<"
        parts = [("direct", cond.direct), ("main", cond.main), ("eq3", cond.eq3), ("eq4", cond.eq4)]
        for name, comp in parts:
            if comp is not None:
                recs.append(VerdictRecord(f"lemma1.{name}", n, m, comp.lhs, comp.rhs, op, "exact"))
    return _stamp(recs, start, timings), None


def lemma2_item(n: int, grid: Sequence[Fraction], timings: bool):
    start = time.perf_counter_ns()
    ms = range(1, n - 1)
    recs = []
    h = [h_of(n, m) for m in ms]
    for i, m in enumerate(ms[:-1]):
        recs.append(VerdictRecord("lemma2.h", n, m, h[i], h[i + 1], ">", "exact"))
    for v in grid:
        g = [g_of(n, m, v) for m in ms]
        for i, m in enumerate(ms[:-1]):
            recs.append(VerdictRecord(f"lemma2.g@v={format_rational(v)}", n, m, g[i], g[i + 1],
                                      ">", "exact"))
    return _stamp(recs, start, timings), None


_INDEXED = re.compile(r"^(eq9|eq10)\.r(\d)$")


def proof_item(s: int, grid: Sequence[Fraction], timings: bool):
    start = time.perf_counter_ns()
    recs = []
    for rel in proof_step_report(s).relations:
        hit = _INDEXED.match(rel.name)
        check, r = (hit.group(1), int(hit.group(2))) if hit else (rel.name, None)
        recs.append(VerdictRecord(check, s, r, rel.lhs, rel.rhs, rel.op, "exact"))
    if s >= 2:
        for v in grid:
            tag = format_rational(v)
            g = cubic_truncation(s, v, "gamma")
            lam = cubic_truncation(s, v, "lambda")
            recs.append(VerdictRecord(f"sign.gamma@v={tag}", s, None, g, Fraction(0), "<", "exact"))
            recs.append(VerdictRecord(f"sign.lambda@v={tag}", s, None, lam, Fraction(0), "<", "exact"))
            recs.append(VerdictRecord(f"sign.gamma.closed@v={tag}", s, None, g,
                                      gamma_closed_form(s, v), "==", "exact"))
    return _stamp(recs, start, timings), None


_SCALAR_ID = {"log_tail_I": "tail.I", "log_tail_H": "tail.H"}


def scalar_item(s: int, grid: Sequence[Fraction], precision: int, timings: bool):
    start = time.perf_counter_ns()
    recs = []
    for kind in SCALAR_KINDS:
        for chk in scalar_inequality_check(kind, [s], grid, precision=precision):
            params = [(k, v) for k, v in chk.params if k not in ("s", "d")]
            index = int(dict(chk.params).get("s", dict(chk.params).get("d", 0)))
            label = ",".join(f"{k}={format_rational(v) if isinstance(v, Fraction) else v}"
                             for k, v in params)
            base = _SCALAR_ID.get(kind, f"scalar.{kind}")
            # an inconclusive check renders bounds on which the relation fails
            recs.append(VerdictRecord(f"{base}@{label}", index, None, chk.lhs, chk.rhs,
                                      chk.op, chk.mode))
    return _stamp(recs, start, timings), None


def _stamp(recs, start, timings):
    if not timings:
        return recs
    ns = time.perf_counter_ns() - start
    return [replace(r, elapsed_ns=ns) for r in recs]


def mc_item(triple, seed: int, samples: int, timings: bool):
    n, m, offset = triple
    start = time.perf_counter_ns()
    est = mc_estimate(n, m, samples, seed + offset)
    exact = q_direct(n, m)
    rec = VerdictRecord(f"mc@seed={seed + offset}", n, m, Fraction(est.successes, samples), exact,
                        WITHIN_4SE, "montecarlo", samples=samples)
    return _stamp([rec], start, timings), None


# -- driver -----------------------------------------------------------------

def _fan_out(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _collect(results) -> tuple[list[VerdictRecord], list]:
    recs, stats = [], []
    for r, st in results:
        recs.extend(r)
        stats.append(st)
    return sort_records(recs), stats


def _write(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _report(cfg: RunConfig, records: list[VerdictRecord], extra: str = "") -> int:
    _write(render((r.row() for r in records), cfg.format, FIELDS), cfg)
    failed = [r for r in records if not r.passed]
    line = f"{cfg.command}: {len(records)} checks, {len(records) - len(failed)} passed, {len(failed)} failed"
    if extra:
        line += f"; {extra}"
    print(line, file=sys.stderr)
    for r in failed[:20]:
        print(f"COUNTEREXAMPLE {r.check} n={r.n} m={r.m}: {format_rational(r.lhs)} {r.op} "
              f"{format_rational(r.rhs)} is false", file=sys.stderr)
    if len(failed) > 20:
        print(f"... and {len(failed) - 20} more failures", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_table(cfg: RunConfig) -> int:
    table = q_table(cfg.n)
    rows = [{"m": m, "q": format_rational(q)} for m, q in enumerate(table.q)]
    _write(render(rows, cfg.format, ("m", "q")), cfg)
    print(f"table: n={cfg.n}, {len(rows)} values", file=sys.stderr)
    return EXIT_OK


def _cmd_theorem(cfg: RunConfig) -> int:
    fn = partial(theorem_item, mode=cfg.mode, precision=cfg.precision, timings=cfg.timings)
    records, stats = _collect(_fan_out(fn, range(cfg.n_min, cfg.n_max + 1), cfg.jobs))
    extra = f"mode={cfg.mode}, n={cfg.n_min}..{cfg.n_max}"
    if cfg.mode in ("certified", "both"):
        comps = sum(s[0] for s in stats)
        refined = sum(s[1] for s in stats)
        exact = sum(s[2] for s in stats)
        extra += (f", precision={cfg.precision}, fallback fraction {refined}/{comps}"
                  f" ({exact} settled exactly)")
    if cfg.mode == "both":
        paired: dict = {}
        for r in records:
            paired.setdefault((r.check, r.n), set()).add(r.passed)
        disagree = sum(1 for v in paired.values() if len(v) > 1)
        extra += f", exact/certified disagreements {disagree}"
        if disagree:
            _report(cfg, records, extra)
            return EXIT_FAIL
    return _report(cfg, records, extra)


def _cmd_lemma1(cfg: RunConfig) -> int:
    fn = partial(lemma1_item, timings=cfg.timings)
    records, _ = _collect(_fan_out(fn, range(cfg.n_min, cfg.n_max + 1), cfg.jobs))
    return _report(cfg, records, f"n={cfg.n_min}..{cfg.n_max}")


def _cmd_lemma2(cfg: RunConfig) -> int:
    grid = cfg.v_grid or LEMMA2_GRID
    lo = max(cfg.n_min, 4)
    fn = partial(lemma2_item, grid=grid, timings=cfg.timings)
    records, _ = _collect(_fan_out(fn, range(lo, cfg.n_max + 1), cfg.jobs))
    return _report(cfg, records, f"n={lo}..{cfg.n_max}")


def _cmd_proof(cfg: RunConfig) -> int:
    grid = cfg.v_grid or LEMMA2_GRID
    fn = partial(proof_item, grid=grid, timings=cfg.timings)
    records, _ = _collect(_fan_out(fn, range(1, cfg.s_max + 1), cfg.jobs))
    return _report(cfg, records, f"s=1..{cfg.s_max}")


def _cmd_scalars(cfg: RunConfig) -> int:
    grid = cfg.v_grid or SCALAR_GRID
    fn = partial(scalar_item, grid=grid, precision=cfg.precision, timings=cfg.timings)
    records, _ = _collect(_fan_out(fn, range(2, cfg.s_max + 1), cfg.jobs))
    return _report(cfg, records, f"s=2..{cfg.s_max}, precision={cfg.precision}")


def _cmd_mc(cfg: RunConfig) -> int:
    fn = partial(mc_item, seed=cfg.seed, samples=cfg.samples, timings=cfg.timings)
    records, _ = _collect(_fan_out(fn, MC_TRIPLES, cfg.jobs))
    return _report(cfg, records, f"{len(MC_TRIPLES)} triples, {cfg.samples} samples, PCG64")


def bench_point(n: int, precision: int) -> dict:
    start = time.perf_counter_ns()
    exact = theorem_check(n)
    exact_ns = time.perf_counter_ns() - start
    start = time.perf_counter_ns()
    cert = certified_theorem_check(n, precision)
    cert_ns = time.perf_counter_ns() - start
    agree = cert.verdict == exact
    return {
        "n": n,
        "exact_ns": exact_ns,
        "certified_ns": cert_ns,
        "speedup": f"{exact_ns / max(cert_ns, 1):.1f}",
        "comparisons": cert.comparisons,
        "fallback_fraction": format_rational(cert.fallback_fraction),
        "exact_fallbacks": cert.exact,
        "verdicts_agree": agree,
        "pass": agree and cert_ns < exact_ns,
    }


def _cmd_bench(cfg: RunConfig) -> int:
    # timed one point at a time in this process so the measurements do not compete
    rows = [bench_point(n, cfg.precision) for n in cfg.points]
    fields = ("n", "exact_ns", "certified_ns", "speedup", "comparisons", "fallback_fraction",
              "exact_fallbacks", "verdicts_agree", "pass")
    _write(render(rows, cfg.format, fields), cfg)
    ok = all(r["pass"] for r in rows)
    print(f"bench: {len(rows)} points, certified faster and in agreement on "
          f"{sum(r['pass'] for r in rows)}/{len(rows)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def plot_rows(n: int, decimals: int) -> list[dict]:
    num = tail_numerators(n)
    scale = n ** n
    low = min(num)
    t = target_m(n)
    rows = []
    for m, s in enumerate(num):
        # round half to even on the exact value
        digits = round(Fraction(s * 10 ** decimals, scale))
        whole, frac = divmod(digits, 10 ** decimals)
        text = f"{whole}.{frac:0{decimals}d}" if decimals else str(whole)
        rows.append({"n": n, "m": m, "q_decimal": text, "is_min": s == low, "target_m": t})
    return rows


def _cmd_plot(cfg: RunConfig) -> int:
    fn = partial(plot_rows, decimals=cfg.decimals)
    chunks = _fan_out(fn, range(cfg.n_min, cfg.n_max + 1), cfg.jobs)
    rows = [r for chunk in chunks for r in chunk]
    _write(render(rows, cfg.format, ("n", "m", "q_decimal", "is_min", "target_m")), cfg)
    print(f"emit-plot-data: n={cfg.n_min}..{cfg.n_max}, {len(rows)} rows, "
          f"{cfg.decimals} decimals", file=sys.stderr)
    return EXIT_OK


_HANDLERS = {
    "table": _cmd_table,
    "verify-theorem": _cmd_theorem,
    "verify-lemma1": _cmd_lemma1,
    "verify-lemma2": _cmd_lemma2,
    "verify-proof": _cmd_proof,
    "verify-scalars": _cmd_scalars,
    "mc-check": _cmd_mc,
    "bench": _cmd_bench,
    "emit-plot-data": _cmd_plot,
}


def run(argv: Optional[Sequence[str]] = None, env: Optional[dict] = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage and the message to stderr
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _resolve(ns, dict(os.environ) if env is None else env)
        cfg.validate()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chvatal-verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _HANDLERS[cfg.command](cfg)
    except Exception as exc:  # noqa: BLE001 - reported as an internal error
        print(f"chvatal-verify: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
