"""Command line front end: build, run, verify, bench."""
from __future__ import annotations

import argparse
import csv
import io
import math
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .errors import AssumptionViolated, EmptySet, SinrError, TooSmall
from .geometry import ring_parameters
from .model import Classification, SinrParams, Transmitter, strengths
from .nonuniform import NoReceptionCertificate, NonUniformEngine
from .oracle import exact_interference, exact_sinr
from .scenario import (Mode, Scenario, format_scenario, make_engine, parse_mode, parse_ops_text,
                       parse_scenario, random_scenario)
from .sic import sic_resolve

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3
COLUMNS = ["op", "x", "y", "candidate", "stilde", "intrf_tilde", "class", "status", "rounds"]
SLACK = 1e-9


def _num(v) -> str:
    return "" if v is None else repr(float(v))


def _check_size(engine, eps: float) -> None:
    n = len(engine)
    if n == 0:
        raise EmptySet("no transmitters")
    if n < 2:
        raise TooSmall("need at least two transmitters")
    if not n > 1 / eps:
        raise AssumptionViolated(f"n={n} must exceed 1/eps={1 / eps:g}")


def run_ops(sc: Scenario, ops_text: str, seed: int = 0) -> str:
    """Execute an operation stream; one CSV row per QUERY/SIC and per failed line."""
    engine = make_engine(sc, seed=seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for op in parse_ops_text(ops_text):
        if op.error is not None:
            w.writerow([op.kind, "", "", "", "", "", "", op.error.code, ""])
            continue
        try:
            if op.kind == "INSERT":
                engine.insert(Transmitter(*op.args))
            elif op.kind == "DELETE":
                engine.delete(op.args[0])
            elif op.kind == "QUERY":
                x, y = op.args
                _check_size(engine, sc.params.eps)
                r = engine.query((x, y))
                w.writerow(["QUERY", _num(x), _num(y), "" if r.candidate is None else r.candidate,
                            _num(r.stilde), _num(r.intrf_tilde), r.classification.value, "OK", ""])
            elif op.kind == "SIC":
                x, y, target = op.args
                out = sic_resolve(engine, (x, y), target)
                cand, st, _ = out.per_round[-1]
                w.writerow(["SIC", _num(x), _num(y), target, _num(st), "", out.status.value, "OK",
                            out.rounds])
        except SinrError as e:
            row = [op.kind] + ([_num(op.args[0]), _num(op.args[1])] if op.kind in ("QUERY", "SIC") else ["", ""])
            w.writerow(row + ["", "", "", "", e.code, ""])
    return buf.getvalue()


def _power_sampler(sc: Scenario, rng: np.random.Generator):
    powers = sorted({t.power for t in sc.transmitters}) or [1.0]
    lo, hi = powers[0], powers[-1]
    name = sc.mode.name
    if name in ("uniform", "classes"):
        return lambda: float(rng.choice(powers))
    if name == "bounded":
        return lambda: float(rng.uniform(lo, lo * sc.mode.c))
    if hi <= lo:
        hi = lo * 1000
    return lambda: float(lo * (hi / lo) ** rng.uniform(0, 1))


def verify(sc: Scenario, queries: int, updates: int, seed: int) -> tuple[str, int]:
    """Interleave random updates and queries, checking every answer against the oracle."""
    rng = np.random.default_rng(seed)
    p = sc.params
    engine = make_engine(sc, seed=seed)
    live = {t.id: t for t in sc.transmitters}
    if live:
        xs = [t.x for t in live.values()]
        ys = [t.y for t in live.values()]
        box = (min(xs), max(xs), min(ys), max(ys))
    else:
        box = (0.0, 1.0, 0.0, 1.0)
    power = _power_sampler(sc, rng)
    next_id = max(live, default=-1) + 1
    floor_n = math.floor(1 / p.eps) + 2
    c = dict.fromkeys(["checked", "skipped_small", "sandwich_violations", "stilde_violations",
                       "candidate_violations", "classification_violations", "certificates",
                       "certificate_violations", "inserts", "deletes"], 0)
    classes = dict.fromkeys(k.value for k in Classification)
    classes = {k: 0 for k in classes}
    max_ratio = 1.0
    events = rng.permutation(np.array([0] * queries + [1] * updates, dtype=np.int8))
    for ev in events:
        if ev == 1:
            if len(live) > floor_n and rng.random() < 0.5:
                pid = int(rng.choice(sorted(live)))
                engine.delete(pid)
                del live[pid]
                c["deletes"] += 1
            else:
                t = Transmitter(next_id, float(rng.uniform(box[0], box[1])),
                                float(rng.uniform(box[2], box[3])), power())
                next_id += 1
                engine.insert(t)
                live[t.id] = t
                c["inserts"] += 1
            continue
        q = (float(rng.uniform(box[0], box[1])), float(rng.uniform(box[2], box[3])))
        if not (len(live) >= 2 and len(live) > 1 / p.eps):
            c["skipped_small"] += 1
            continue
        res = engine.query(q)
        S = list(live.values())
        true_id, true_sinr = exact_sinr(S, q, p)
        c["checked"] += 1
        classes[res.classification.value] += 1
        if res.candidate is None:
            # a bare certificate answer: only soundness can be checked
            if not true_sinr < 1:
                c["classification_violations"] += 1
            continue
        I = exact_interference(S, q, res.candidate, p.alpha)
        est = res.intrf_tilde - p.noise
        if I > 0:
            max_ratio = max(max_ratio, est / I)
        if not (I * (1 - SLACK) <= est <= (1 + p.eps) * I * (1 + SLACK)):
            c["sandwich_violations"] += 1
        t = live[res.candidate]
        nrg = float(strengths(q[0], q[1], [t.x], [t.y], [t.power], p.alpha)[0])
        denom = I + p.noise
        sinr_c = math.inf if denom == 0 else nrg / denom
        if not (res.stilde <= sinr_c * (1 + SLACK) and res.stilde > (1 - p.eps) * sinr_c * (1 - SLACK)):
            c["stilde_violations"] += 1
        if res.candidate != true_id and not (sc.mode.name == "bounded" and true_sinr < 1):
            c["candidate_violations"] += 1
        if res.classification is Classification.RECEIVES:
            if res.candidate != true_id or true_sinr < p.beta * (1 - SLACK):
                c["classification_violations"] += 1
        elif res.classification is Classification.NO_RECEPTION:
            if true_sinr >= p.beta * (1 + SLACK):
                c["classification_violations"] += 1
        if isinstance(engine, NonUniformEngine):
            sp = engine.find_strongest_pair(q, certify=True)
            if isinstance(sp, NoReceptionCertificate):
                c["certificates"] += 1
                if not true_sinr < 1:
                    c["certificate_violations"] += 1
    bad = sum(v for k, v in c.items() if k.endswith("violations"))
    lines = [f"mode {sc.mode}", f"seed {seed}", f"queries {queries}", f"updates {updates}",
             f"final_n {len(live)}"]
    lines += [f"{k} {v}" for k, v in c.items()]
    lines += [f"class_{k.lower()} {v}" for k, v in classes.items()]
    lines += [f"max_ratio {max_ratio!r}", f"result {'FAIL' if bad else 'PASS'}"]
    return "\n".join(lines) + "\n", bad


BENCH_COLUMNS = ["mode", "n", "eps", "build_s", "query_ms", "update_ms", "visits", "rings",
                 "visit_ratio"]


def bench(mode: Mode, sizes: list[int], eps: float, repeats: int, seed: int,
          alpha: float = 2.0, beta: float = 1.5) -> list[dict]:
    """Median query/update times and node-visit counters per size."""
    params = SinrParams(alpha, beta, 0.0, eps)
    rows = []
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        sc = random_scenario(rng, n, mode, params)
        t0 = time.perf_counter()
        engine = make_engine(sc, seed=seed, strict=True)
        build = time.perf_counter() - t0
        side = math.sqrt(n)
        qt, vis, rings = [], [], []
        for _ in range(repeats):
            q = (float(rng.uniform(0, side)), float(rng.uniform(0, side)))
            t0 = time.perf_counter()
            engine.query(q)
            qt.append(time.perf_counter() - t0)
            vis.append(engine.stats.visits)
            rings.append(engine.stats.rings)
        ut = []
        sampler = _power_sampler(sc, rng)
        for i in range(repeats):
            t = Transmitter(n + i, float(rng.uniform(0, side)), float(rng.uniform(0, side)), sampler())
            t0 = time.perf_counter()
            engine.insert(t)
            engine.delete(t.id)
            ut.append((time.perf_counter() - t0) / 2)
        rows.append({"mode": str(mode), "n": n, "eps": eps, "build_s": build,
                     "query_ms": 1e3 * statistics.median(qt), "update_ms": 1e3 * statistics.median(ut),
                     "visits": statistics.median(vis), "rings": statistics.median(rings),
                     "visit_ratio": ""})
    by_n = {r["n"]: r for r in rows}
    for r in rows:
        prev = by_n.get(r["n"] // 4)
        if prev and prev["visits"]:
            r["visit_ratio"] = r["visits"] / prev["visits"]
    return rows


def format_bench(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def build_summary(sc: Scenario) -> str:
    engine = make_engine(sc)
    x, l = ring_parameters(sc.params.eps, sc.params.alpha)
    lines = [f"mode {sc.mode}", f"transmitters {len(engine)}", f"band_ratio {x!r}", f"sides {l}"]
    if sc.mode.name == "bounded":
        lines.append(f"subranges {engine.m}")
    if sc.mode.name in ("classes", "bounded"):
        lines.append(f"classes {len(engine.classes)}")
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sinrq", description="Dynamic approximate SINR queries.")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    b = sub.add_parser("build", help="parse a scenario and build its engine")
    b.add_argument("--scenario", required=True)
    b.add_argument("--out")
    r = sub.add_parser("run", help="execute an operation file, write query CSV")
    r.add_argument("--scenario", required=True)
    r.add_argument("--ops", required=True)
    r.add_argument("--out")
    r.add_argument("--seed", type=int, default=0)
    v = sub.add_parser("verify", help="randomized oracle check of a scenario")
    v.add_argument("--scenario", required=True)
    v.add_argument("--queries", type=int, default=200)
    v.add_argument("--updates", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    g = sub.add_parser("bench", help="timings and node-visit counters")
    g.add_argument("--mode", default="uniform")
    g.add_argument("--sizes", default="1024,4096,16384")
    g.add_argument("--eps", type=float, default=0.2)
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--repeats", type=int, default=20)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    s = sub.add_parser("generate", help="write a random scenario file")
    s.add_argument("--mode", default="uniform")
    s.add_argument("--n", type=int, default=500)
    s.add_argument("--eps", type=float, default=0.2)
    s.add_argument("--alpha", type=float, default=2.0)
    s.add_argument("--beta", type=float, default=1.5)
    s.add_argument("--noise", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    return ap


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.verb == "build":
            _emit(build_summary(parse_scenario(args.scenario)), args.out)
        elif args.verb == "run":
            sc = parse_scenario(args.scenario)
            ops = Path(args.ops).read_text(encoding="utf-8")
            _emit(run_ops(sc, ops, args.seed), args.out)
        elif args.verb == "verify":
            text, bad = verify(parse_scenario(args.scenario), args.queries, args.updates, args.seed)
            _emit(text, args.out)
            return EXIT_VERIFY if bad else EXIT_OK
        elif args.verb == "bench":
            sizes = [int(s) for s in args.sizes.split(",") if s]
            rows = bench(parse_mode(args.mode), sizes, args.eps, args.repeats, args.seed, args.alpha)
            _emit(format_bench(rows), args.out)
        elif args.verb == "generate":
            params = SinrParams(args.alpha, args.beta, args.noise, args.eps)
            sc = random_scenario(np.random.default_rng(args.seed), args.n, parse_mode(args.mode), params)
            _emit(format_scenario(sc), args.out)
    except (OSError, ValueError) as e:
        print(f"sinrq: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SinrError as e:
        print(f"sinrq: {e.code}: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK
