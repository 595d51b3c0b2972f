"""Top-level decision procedures over the integers and the naturals.

``decide_z`` dispatches on the linear coefficients present:

1. a constant map (a = 0): try with and without passing through its value;
2. the identity: drop it;
3. a shift z + k: reduce to the modular extremum of the other maps;
4. exactly one map -z + c, all others expanding: interval search;
5. two maps -z + c, -z + d: their composition is the shift z + (c - d);
6. all maps expanding: interval search.

``decide_n`` is the analogue over the naturals, where a map may only be
applied when its result is nonnegative.

Witnesses are built alongside the decision as RLE runs over the maps
themselves and converted to indices of the caller's system at the end.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .affine import (
    AffineMap,
    AffineSystem,
    Domain,
    check_witness,
    compose_word,
    power,
)
from .errors import PreconditionError, ResourceExceeded, WitnessUnavailable
from .interval import DEFAULT_MAX_VERTICES, decide_expanding_n, decide_expanding_z
from .monotone import AnalysisStats, ExtremumMode, ModAnalysis
from .regex import DEFAULT_MAX_NODES
from .verdict import Verdict

log = logging.getLogger(__name__)

MAX_EXPANDED_RUNS = 10**6


@dataclass
class SolveStats:
    regex_nodes: int = 0
    clauses: int = 0
    elapsed_ms: float = 0.0
    subproblems: int = 0


@dataclass
class _Outcome:
    reachable: bool
    runs: list | None = None  # [(AffineMap, count)], None if unavailable


def _fmt(maps, x, y):
    return "[" + ", ".join(f"({f.a},{f.b})" for f in maps) + f"] x={x} y={y}"


def _push(out, f, c):
    if c == 0:
        return
    if out and out[-1][0] == f:
        out[-1] = (f, out[-1][1] + c)
    else:
        out.append((f, c))


def _join(*parts):
    out = []
    for part in parts:
        if part is None:
            return None
        for f, c in part:
            _push(out, f, c)
    return out


def _value(runs, z):
    for f, c in runs:
        z = power(f, c)(z)
    return z


class _Solver:
    def __init__(self, witness=True, max_nodes=DEFAULT_MAX_NODES, max_vertices=DEFAULT_MAX_VERTICES):
        self.witness = witness
        self.max_nodes = max_nodes
        self.max_vertices = max_vertices
        self.memo = {}
        self.trace = []
        self.stats = SolveStats()
        self.analysis = AnalysisStats()

    def _note(self, depth, label, maps, x, y, extra=""):
        summary = f"depth={depth} {_fmt(maps, x, y)}"
        if extra:
            summary += f" {extra}"
        self.trace.append((label, summary))

    def _analyze(self, sub, k, mode, valid):
        an = ModAnalysis(sub, k, mode, valid=valid, max_nodes=self.max_nodes)
        self.analysis.absorb(an.stats)
        return an

    def _interval(self, verdict: Verdict, sub: AffineSystem):
        if not verdict.reachable:
            return _Outcome(False)
        runs = [(sub.map(i), c) for i, c in verdict.witness] if self.witness else None
        return _Outcome(True, runs)

    # ------------------------------------------------------------- integers

    def decide_z(self, maps: tuple, x: int, y: int, depth=0) -> _Outcome:
        key = ("Z", maps, x, y)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.stats.subproblems += 1
        out = self._decide_z(maps, x, y, depth)
        self.memo[key] = out
        return out

    def _decide_z(self, maps, x, y, depth):
        if x == y:
            self._note(depth, "Z:x=y", maps, x, y)
            return _Outcome(True, [])
        if not maps:
            self._note(depth, "Z:no-maps", maps, x, y)
            return _Outcome(False)

        for j, f in enumerate(maps):
            if f.a == 0:
                rest = maps[:j] + maps[j + 1 :]
                self._note(depth, "Z:case1-constant", maps, x, y, f"f={f}")
                first = self.decide_z(rest, x, y, depth + 1)
                if first.reachable:
                    return first
                second = self.decide_z(rest, f.b, y, depth + 1)
                if second.reachable:
                    return _Outcome(True, _join([(f, 1)], second.runs) if self.witness else None)
                return _Outcome(False)

        for j, f in enumerate(maps):
            if f.is_identity:
                self._note(depth, "Z:case2-identity", maps, x, y)
                return self.decide_z(maps[:j] + maps[j + 1 :], x, y, depth + 1)

        for j, f in enumerate(maps):
            if f.is_shift:
                self._note(depth, "Z:case3-shift", maps, x, y, f"k={f.b}")
                return self._shift_z(maps, j, x, y)

        invols = [j for j, f in enumerate(maps) if f.a == -1]
        if len(invols) >= 2:
            j, k = invols[:2]
            fj, fk = maps[j], maps[k]
            g = AffineMap(1, fj.b - fk.b)  # fj after fk
            self._note(
                depth,
                "Z:case5-two-involutions",
                maps,
                x,
                y,
                f"g={g}; target y (source text says 0)",
            )
            aug = maps + (g,)
            out = self._shift_z(aug, len(aug) - 1, x, y)
            if out.reachable and out.runs is not None:
                out = _Outcome(True, self._expand_composite(out.runs, g, (fk, fj)))
            return out

        sub = AffineSystem(maps, x, y)
        if len(invols) == 1:
            self._note(depth, "Z:case4-involution", maps, x, y)
            verdict = decide_expanding_z(sub, invols[0] + 1, self.max_vertices)
        else:
            self._note(depth, "Z:case6-expanding", maps, x, y)
            verdict = decide_expanding_z(sub, None, self.max_vertices)
        return self._interval(verdict, sub)

    def _expand_composite(self, runs, g, parts):
        out = []
        for f, c in runs:
            if f != g:
                _push(out, f, c)
                continue
            if c * len(parts) > MAX_EXPANDED_RUNS:
                return None
            for _ in range(c):
                for p in parts:
                    _push(out, p, 1)
        return out

    def _shift_z(self, maps, j, x, y):
        g = maps[j]
        k = g.b
        rest = maps[:j] + maps[j + 1 :]
        sub = AffineSystem(rest, x, y)
        mode = ExtremumMode.SUP if k < 0 else ExtremumMode.INF
        an = self._analyze(sub, k, mode, valid=False)
        res = an.result
        self.trace.append(("Z:mod-extremum", f"k={k} mode={mode.name} -> {res}"))
        if res.kind == "empty":
            return _Outcome(False)
        if res.kind == "negative":
            return _Outcome(True, self._negative_witness(an, sub, g) if self.witness else None)
        v = res.value
        ok = v >= y if k < 0 else v <= y
        if not ok:
            return _Outcome(False)
        if not self.witness:
            return _Outcome(True)
        try:
            s = [(sub.map(i), c) for i, c in an.witness(y)]
        except WitnessUnavailable as exc:
            log.info("witness unavailable: %s", exc)
            return _Outcome(True)
        gx = _value(s, x)
        n, r = divmod(y - gx, k)
        if r or n < 0:
            raise AssertionError(f"shift count not a nonnegative integer: {y - gx}/{k}")
        return _Outcome(True, _join(s, [(g, n)]))

    def _negative_witness(self, an, sub, g):
        k = g.b
        try:
            flat = [sub.map(i) for i, c in an.negative_witness() for _ in range(c)]
        except WitnessUnavailable as exc:
            log.info("witness unavailable: %s", exc)
            return None
        x, y = sub.x, sub.y
        d = compose_word(flat)(x) - y
        if d == 0 or (d > 0) != (k > 0):
            return _join([(f, 1) for f in flat], [(g, -d // k)])
        p = max(i for i, f in enumerate(flat) if f.a < 0)
        mult = 1
        for f in flat[p:]:
            mult *= f.a
        # inserting g^n before position p adds mult*n*k, whose sign opposes d
        n = -(-abs(d) // abs(mult * k))
        pumped = [(f, 1) for f in flat[:p]] + [(g, n)] + [(f, 1) for f in flat[p:]]
        m, r = divmod(y - _value(pumped, x), k)
        if r or m < 0:
            raise AssertionError("negative-coefficient pumping failed")
        return _join(pumped, [(g, m)])

    # -------------------------------------------------------------- naturals

    def decide_n(self, maps: tuple, x: int, y: int, depth=0) -> _Outcome:
        key = ("N", maps, x, y)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.stats.subproblems += 1
        out = self._decide_n(maps, x, y, depth)
        self.memo[key] = out
        return out

    def _decide_n(self, maps, x, y, depth):
        if x == y:
            self._note(depth, "N:x=y", maps, x, y)
            return _Outcome(True, [])
        if not maps:
            self._note(depth, "N:no-maps", maps, x, y)
            return _Outcome(False)

        for j, f in enumerate(maps):
            if f.a == 0:
                rest = maps[:j] + maps[j + 1 :]
                if f.b < 0:
                    self._note(depth, "N:case1-constant-dropped", maps, x, y, f"f={f}")
                    return self.decide_n(rest, x, y, depth + 1)
                self._note(depth, "N:case1-constant", maps, x, y, f"f={f}")
                first = self.decide_n(rest, x, y, depth + 1)
                if first.reachable:
                    return first
                second = self.decide_n(rest, f.b, y, depth + 1)
                if second.reachable:
                    return _Outcome(True, _join([(f, 1)], second.runs) if self.witness else None)
                return _Outcome(False)

        for j, f in enumerate(maps):
            if f.a < 0:
                rest = maps[:j] + maps[j + 1 :]
                if f.b < 0:
                    self._note(depth, "N:case2-negative-dropped", maps, x, y, f"f={f}")
                    return self.decide_n(rest, x, y, depth + 1)
                self._note(depth, "N:case2-negative", maps, x, y, f"f={f}")
                return self._negative_n(f, rest, x, y, depth)

        for j, f in enumerate(maps):
            if f.is_identity:
                self._note(depth, "N:case3-identity", maps, x, y)
                return self.decide_n(maps[:j] + maps[j + 1 :], x, y, depth + 1)

        for j, f in enumerate(maps):
            if f.is_shift and f.b < 0:
                self._note(depth, "N:case4-negative-shift", maps, x, y, f"k={f.b}")
                return self._shift_n(maps, j, x, y)

        self._note(depth, "N:case5-expanding", maps, x, y)
        sub = AffineSystem(maps, x, y, Domain.NATURALS)
        return self._interval(decide_expanding_n(sub, self.max_vertices), sub)

    def _negative_n(self, f, rest, x, y, depth):
        """Graph over the points where ``f`` is applicable, their images, x and y."""
        top = f.b // -f.a
        if top + 1 > self.max_vertices:
            raise ResourceExceeded("applicability graph vertices", self.max_vertices, top + 1)
        applicable = range(0, top + 1)
        images = {f(u) for u in applicable}
        sources = images | {x}
        targets = sorted(set(applicable) | {y})
        parent = {x: None}
        order = [x]
        i = 0
        while i < len(order) and y not in parent:
            u = order[i]
            i += 1
            steps = []
            if 0 <= u <= top:
                steps.append((f(u), [(f, 1)]))
            if u in sources:
                for v in targets:
                    if v != u and v not in parent:
                        out = self.decide_n(rest, u, v, depth + 1)
                        if out.reachable:
                            steps.append((v, out.runs))
            for v, runs in steps:
                if v not in parent:
                    parent[v] = (u, runs)
                    order.append(v)
        if y not in parent:
            return _Outcome(False)
        if not self.witness:
            return _Outcome(True)
        pieces = []
        v = y
        while parent[v] is not None:
            u, runs = parent[v]
            pieces.append(runs)
            v = u
        return _Outcome(True, _join(*reversed(pieces)))

    def _shift_n(self, maps, j, x, y):
        g = maps[j]
        k = g.b
        rest = maps[:j] + maps[j + 1 :]
        sub = AffineSystem(rest, x, y, Domain.NATURALS)
        an = self._analyze(sub, k, ExtremumMode.SUP, valid=True)
        res = an.result
        self.trace.append(("N:mod-extremum-valid", f"k={k} -> {res}"))
        if res.kind == "empty" or res.value < y:
            return _Outcome(False)
        if not self.witness:
            return _Outcome(True)
        try:
            s = [(sub.map(i), c) for i, c in an.witness(y)]
        except WitnessUnavailable as exc:
            log.info("witness unavailable: %s", exc)
            return _Outcome(True)
        n, r = divmod(_value(s, x) - y, -k)
        if r or n < 0:
            raise AssertionError("valid shift count not a nonnegative integer")
        return _Outcome(True, _join(s, [(g, n)]))


def _finish(solver: _Solver, sys: AffineSystem, out: _Outcome, started) -> Verdict:
    witness = None
    if out.reachable and out.runs is not None:
        index = {f: i for i, f in enumerate(sys.maps, 1)}
        witness = tuple((index[f], c) for f, c in out.runs if c)
        if not check_witness(sys, witness):
            raise AssertionError(f"internal witness failed verification: {witness}")
    solver.stats.regex_nodes = solver.analysis.regex_nodes
    solver.stats.clauses = solver.analysis.clauses
    solver.stats.elapsed_ms = (time.perf_counter() - started) * 1000
    return Verdict(out.reachable, witness, tuple(solver.trace))


def _solve(sys, witness, max_nodes, max_vertices, stats):
    started = time.perf_counter()
    solver = _Solver(witness, max_nodes, max_vertices)
    if sys.domain is Domain.INTEGERS:
        out = solver.decide_z(sys.maps, sys.x, sys.y)
    else:
        out = solver.decide_n(sys.maps, sys.x, sys.y)
    verdict = _finish(solver, sys, out, started)
    if stats is not None:
        stats.__dict__.update(solver.stats.__dict__)
    return verdict


def decide_z(
    sys: AffineSystem,
    witness=True,
    max_nodes=DEFAULT_MAX_NODES,
    max_vertices=DEFAULT_MAX_VERTICES,
    stats: SolveStats | None = None,
) -> Verdict:
    """Decide whether ``sys.y`` is reachable from ``sys.x`` over the integers."""
    if sys.domain is not Domain.INTEGERS:
        raise PreconditionError("decide_z needs the integer domain")
    return _solve(sys, witness, max_nodes, max_vertices, stats)


def decide_n(
    sys: AffineSystem,
    witness=True,
    max_nodes=DEFAULT_MAX_NODES,
    max_vertices=DEFAULT_MAX_VERTICES,
    stats: SolveStats | None = None,
) -> Verdict:
    """Decide reachability over the naturals (orbits must stay nonnegative)."""
    if sys.domain is not Domain.NATURALS:
        raise PreconditionError("decide_n needs the natural domain")
    return _solve(sys, witness, max_nodes, max_vertices, stats)


def decide(sys: AffineSystem, **kwargs) -> Verdict:
    if sys.domain is Domain.INTEGERS:
        return decide_z(sys, **kwargs)
    return decide_n(sys, **kwargs)


def extract_witness(sys: AffineSystem, **kwargs) -> tuple:
    """RLE witness for a reachable instance.

    Raises WitnessUnavailable when the instance is reachable but the
    certificate could not be built within caps, PreconditionError when the
    instance is unreachable.
    """
    verdict = decide(sys, witness=True, **kwargs)
    if not verdict.reachable:
        raise PreconditionError("instance is unreachable; there is no witness")
    if verdict.witness is None:
        raise WitnessUnavailable("certificate exceeds resource caps")
    return verdict.witness
