"""Scenario and operation files, engine construction and random workloads."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .classes import BoundedRatioEngine, FewPowersEngine
from .errors import Malformed, ModeMismatch, SinrError
from .model import SinrParams, Transmitter
from .nonuniform import NonUniformEngine
from .uniform import UniformEngine

MODES = ("uniform", "classes", "bounded", "nonuniform")


@dataclass(frozen=True)
class Mode:
    name: str
    c: Optional[float] = None

    def __str__(self) -> str:
        return f"bounded:{self.c:g}" if self.name == "bounded" else self.name


def parse_mode(text: str) -> Mode:
    name, _, arg = text.partition(":")
    if name not in MODES:
        raise Malformed(f"unknown mode {text!r}")
    if name == "bounded":
        try:
            c = float(arg)
        except ValueError:
            raise Malformed(f"bounded mode needs a ratio, e.g. bounded:2, got {text!r}") from None
        if not c >= 1:
            raise Malformed(f"bounded ratio must be >= 1, got {c}")
        return Mode(name, c)
    if arg:
        raise Malformed(f"mode {name} takes no argument")
    return Mode(name)


@dataclass
class Scenario:
    params: SinrParams
    mode: Mode
    transmitters: list[Transmitter] = field(default_factory=list)


def _float(tok: str, lineno: int, what: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise Malformed(f"line {lineno}: {what} is not a number: {tok!r}") from None
    if not math.isfinite(v):
        raise Malformed(f"line {lineno}: {what} must be finite")
    return v


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise Malformed(f"line {lineno}: {what} is not an integer: {tok!r}") from None


def check_mode(mode: Mode, transmitters: list[Transmitter]) -> None:
    powers = {t.power for t in transmitters}
    if mode.name == "uniform" and len(powers) > 1:
        raise ModeMismatch("uniform mode with unequal powers")
    if mode.name == "bounded":
        if not transmitters:
            raise Malformed("bounded mode needs at least one transmitter to fix the power range")
        if max(powers) > mode.c * min(powers):
            raise ModeMismatch(f"power ratio {max(powers) / min(powers):g} exceeds {mode.c:g}")


def parse_scenario_text(text: str) -> Scenario:
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, toks) for i, toks in lines if toks and not toks[0].startswith("#")]
    if not lines or lines[0][1] != ["sinr", "v1"]:
        raise Malformed("line 1: expected header 'sinr v1'")
    if len(lines) < 2:
        raise Malformed("missing parameter line")
    lineno, toks = lines[1]
    keys = ["alpha", "beta", "noise", "eps", "mode"]
    if len(toks) != 10 or toks[0::2] != keys:
        raise Malformed(f"line {lineno}: expected 'alpha <f> beta <f> noise <f> eps <f> mode <mode>'")
    vals = {k: toks[2 * i + 1] for i, k in enumerate(keys)}
    try:
        params = SinrParams(*(_float(vals[k], lineno, k) for k in keys[:4]))
    except Malformed as e:
        raise Malformed(f"line {lineno}: {e}") from None
    mode = parse_mode(vals["mode"])
    txs, seen = [], set()
    for lineno, toks in lines[2:]:
        if toks[0] != "tx" or len(toks) != 5:
            raise Malformed(f"line {lineno}: expected 'tx <id> <x> <y> <power>'")
        pid = _int(toks[1], lineno, "id")
        if pid in seen:
            raise Malformed(f"line {lineno}: duplicate id {pid}")
        seen.add(pid)
        x, y, p = (_float(toks[k], lineno, w) for k, w in zip((2, 3, 4), ("x", "y", "power")))
        if not p > 0:
            raise Malformed(f"line {lineno}: power must be positive, got {p}")
        txs.append(Transmitter(pid, x, y, p))
    check_mode(mode, txs)
    return Scenario(params, mode, txs)


def parse_scenario(path) -> Scenario:
    return parse_scenario_text(Path(path).read_text(encoding="utf-8"))


def format_scenario(sc: Scenario) -> str:
    p = sc.params
    out = ["sinr v1", f"alpha {p.alpha!r} beta {p.beta!r} noise {p.noise!r} eps {p.eps!r} mode {sc.mode}"]
    out += [f"tx {t.id} {t.x!r} {t.y!r} {t.power!r}" for t in sc.transmitters]
    return "\n".join(out) + "\n"


def make_engine(sc: Scenario, seed: int = 0, strict: bool = False):
    p, m, txs = sc.params, sc.mode, sc.transmitters
    if m.name == "uniform":
        return UniformEngine(p, txs, strict=strict)
    if m.name == "classes":
        return FewPowersEngine(p, txs, strict=strict)
    if m.name == "bounded":
        pmin = min(t.power for t in txs)
        return BoundedRatioEngine(p, pmin, m.c, txs, strict=strict)
    return NonUniformEngine(p, txs, seed=seed, strict=strict)


def random_power(rng: np.random.Generator, mode: Mode) -> float:
    if mode.name == "uniform":
        return 1.0
    if mode.name == "classes":
        return float(rng.choice([1.0, 2.0, 4.0]))
    if mode.name == "bounded":
        return float(rng.uniform(1.0, mode.c))
    return float(10 ** rng.uniform(0, 3))


def random_transmitters(rng: np.random.Generator, n: int, mode: Mode, side: float,
                        start_id: int = 0) -> list[Transmitter]:
    xy = rng.uniform(0, side, size=(n, 2))
    return [Transmitter(start_id + i, float(xy[i, 0]), float(xy[i, 1]), random_power(rng, mode))
            for i in range(n)]


def random_scenario(rng: np.random.Generator, n: int, mode: Mode, params: SinrParams) -> Scenario:
    """n transmitters at unit density in a square, powers drawn per mode."""
    txs = random_transmitters(rng, n, mode, math.sqrt(n))
    if mode.name == "bounded":
        # pin the range so later inserts drawn from [1, c] stay inside it
        txs[0] = Transmitter(txs[0].id, txs[0].x, txs[0].y, 1.0)
    return Scenario(params, mode, txs)


@dataclass(frozen=True)
class Op:
    lineno: int
    kind: str
    args: tuple
    error: Optional[SinrError] = None


def parse_ops_text(text: str) -> list[Op]:
    ops = []
    for i, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if not toks or toks[0].startswith("#"):
            continue
        kind = toks[0].upper()
        try:
            if kind == "INSERT" and len(toks) == 5:
                args = (_int(toks[1], i, "id"), _float(toks[2], i, "x"), _float(toks[3], i, "y"),
                        _float(toks[4], i, "power"))
            elif kind == "DELETE" and len(toks) == 2:
                args = (_int(toks[1], i, "id"),)
            elif kind == "QUERY" and len(toks) == 3:
                args = (_float(toks[1], i, "x"), _float(toks[2], i, "y"))
            elif kind == "SIC" and len(toks) == 4:
                args = (_float(toks[1], i, "x"), _float(toks[2], i, "y"), _int(toks[3], i, "target"))
            else:
                raise Malformed(f"line {i}: cannot parse {line.strip()!r}")
            ops.append(Op(i, kind, args))
        except Malformed as e:
            ops.append(Op(i, kind, tuple(toks[1:]), e))
    return ops
