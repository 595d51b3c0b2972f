"""Suprema and infima of values reachable modulo k.

Given maps with positive linear coefficients every composition is an
increasing function, which is what makes star factors analyzable: if one
word of a star body moves a value in the wanted direction, repeating it
moves the value arbitrarily far.  The predicates below decide whether some
word of a reduced (union-free, ∅-free) expression moves ``z`` strictly up
(SUP) or strictly down (INF); the valid variant additionally requires the
whole orbit to stay nonnegative.

Every positive answer can be turned into a concrete word by the ``find_*``
functions, which pump star bodies just enough.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .affine import (
    INF,
    NEG_INF,
    AffineMap,
    AffineSystem,
    ExtInt,
    IDENTITY,
    compose_word,
    power,
)
from .errors import PreconditionError, ResourceExceeded, WitnessUnavailable
from .regex import (
    DEFAULT_MAX_NODES,
    Concat,
    Epsilon,
    Literal,
    NodeBudget,
    Star,
    automaton_to_regex,
    build_mod_automaton,
    eliminate_empty,
    has_negative_literal,
    mod_reachable,
    to_dnf,
)

MAX_WITNESS_RUNS = 10**6


class ExtremumMode(enum.Enum):
    SUP = 1
    INF = -1


@dataclass(frozen=True)
class ModExtremumResult:
    kind: str  # "empty", "negative" or "value"
    value: ExtInt | None = None

    def __str__(self):
        if self.kind == "value":
            return f"Value({self.value})"
        return self.kind.capitalize()


EMPTY = ModExtremumResult("empty")
NEGATIVE = ModExtremumResult("negative")


def Value(v: ExtInt) -> ModExtremumResult:
    return ModExtremumResult("value", v)


# ------------------------------------------------------------------ words
# Words produced here are RLE lists of (index, count) over the system's maps.


def _append_run(runs, index, count):
    if count <= 0:
        return
    if runs and runs[-1][0] == index:
        runs[-1] = (index, runs[-1][1] + count)
    else:
        runs.append((index, count))


def _extend(runs, other, times=1):
    if times == 0 or not other:
        return
    if len(other) == 1:
        _append_run(runs, other[0][0], other[0][1] * times)
        return
    if len(runs) + len(other) * times > MAX_WITNESS_RUNS:
        raise WitnessUnavailable(f"witness would exceed {MAX_WITNESS_RUNS} runs")
    for _ in range(times):
        for i, c in other:
            _append_run(runs, i, c)


def _runs_map(sys, runs) -> AffineMap:
    acc = IDENTITY
    for i, c in runs:
        acc = acc.then(power(sys.map(i), c))
    return acc


# ------------------------------------------------------------- predicates


def factors_of(e):
    """Flatten a reduced expression into a tuple of Literal / Star factors."""
    if isinstance(e, Epsilon):
        return ()
    if isinstance(e, (Literal, Star)):
        return (e,)
    if isinstance(e, Concat):
        out = []
        for p in e.parts:
            out.extend(factors_of(p))
        return tuple(out)
    raise PreconditionError(f"expression is not reduced: {e}")


def _first_star(fs):
    for j, f in enumerate(fs):
        if isinstance(f, Star):
            return j
    return None


class MonotoneAnalyzer:
    """Increase / decrease predicates over one system, with memoization.

    ``mode`` picks the direction (SUP: strictly increase, INF: strictly
    decrease).  With ``valid=True`` only words whose orbit stays
    nonnegative count; that variant is only defined for SUP.
    """

    def __init__(self, sys: AffineSystem, mode=ExtremumMode.SUP, valid=False):
        if valid and mode is not ExtremumMode.SUP:
            raise PreconditionError("the valid predicate is defined for SUP only")
        self.sys = sys
        self.mode = mode
        self.sign = mode.value
        self.valid = valid
        self._memo = {}
        self._checked = set()

    # -- helpers

    def _better(self, v, w) -> bool:
        return self.sign * (v - w) > 0

    def _lit(self, f: Literal) -> AffineMap:
        g = self.sys.map(f.index)
        if g.a <= 0:
            raise PreconditionError(f"literal f{f.index} has non-positive coefficient {g.a}")
        return g

    def _check(self, fs):
        for f in fs:
            if isinstance(f, Literal):
                self._lit(f)
            elif isinstance(f, Star):
                if f.body not in self._checked:
                    self._check(factors_of(f.body))
                    self._checked.add(f.body)
            else:
                raise PreconditionError(f"expression is not reduced: {f}")

    def _seq(self, fs):
        return [self._lit(f) for f in fs if isinstance(f, Literal)]

    def seq_valid(self, z, maps) -> bool:
        if z < 0:
            return False
        for g in maps:
            z = g(z)
            if z < 0:
                return False
        return True

    # -- predicate

    def holds(self, z: int, e) -> bool:
        fs = factors_of(e) if not isinstance(e, tuple) else e
        self._check(fs)
        if self.valid and z < 0:
            raise PreconditionError("valid predicate needs z >= 0")
        return self._holds(z, fs)

    def _holds(self, z, fs):
        key = (z, fs)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        j = _first_star(fs)
        if j is None:
            maps = self._seq(fs)
            ok = self._better(compose_word(maps)(z), z)
            if ok and self.valid:
                ok = self.seq_valid(z, maps)
        else:
            ell = self._seq(fs[:j])
            if self.valid and not self.seq_valid(z, ell):
                ok = False
            else:
                ok = self._holds(z, fs[:j] + fs[j + 1 :]) or self._holds(
                    compose_word(ell)(z), factors_of(fs[j].body)
                )
        self._memo[key] = ok
        return ok

    # -- witnesses

    def _shortest(self, fs):
        """Runs of the shortest word of ``fs``: its literals, stars taken as ε."""
        runs = []
        for f in fs:
            if isinstance(f, Literal):
                _append_run(runs, f.index, 1)
        return runs

    def _threshold(self, tail: list, target: int, strict: bool):
        """Least extreme value w with tail(w) beyond ``target`` (and tail valid from w).

        SUP: smallest w with tail(w) >= target (> if strict);
        INF: largest w with tail(w) <= target (< if strict).
        """
        g = compose_word(tail)
        if self.sign > 0:
            t = target + 1 if strict else target
            w = -((g.b - t) // g.a)  # ceil((t - b) / a)
        else:
            t = target - 1 if strict else target
            w = (t - g.b) // g.a
        if self.valid:
            acc = IDENTITY
            w = max(w, 0)
            for h in tail:
                acc = acc.then(h)
                w = max(w, -(acc.b // acc.a))  # ceil(-b / a)
        return w

    def _pump(self, p_runs, u, w_needed):
        """Least n with p^n(u) at or beyond ``w_needed`` in the mode's direction."""
        p = _runs_map(self.sys, p_runs)
        s = self.sign
        if s * (u - w_needed) >= 0:
            return 0
        if p.a == 1:
            return -((u - w_needed) // p.b)  # ceil((w_needed - u) / b)
        n, v = 0, u
        while s * (v - w_needed) < 0:
            v = p(v)
            n += 1
        return n

    def find(self, z: int, e):
        """Runs of a word of L(e) that moves ``z`` strictly in the mode's
        direction (validly, for the valid variant), or None."""
        fs = factors_of(e) if not isinstance(e, tuple) else e
        if not self.holds(z, fs):
            return None
        return self._find(z, fs)

    def _find(self, z, fs):
        if not self._holds(z, fs):
            return None
        j = _first_star(fs)
        if j is None:
            return self._shortest(fs)
        if self._holds(z, fs[:j] + fs[j + 1 :]):
            return self._find(z, fs[:j] + fs[j + 1 :])
        ell = self._seq(fs[:j])
        u = compose_word(ell)(z)
        p_runs = self._find(u, factors_of(fs[j].body))
        beta = fs[j + 1 :]
        tail = self._seq(beta)
        w_needed = self._threshold(tail, z, strict=True)
        n = self._pump(p_runs, u, w_needed)
        runs = self._shortest(fs[:j])
        _extend(runs, p_runs, n)
        _extend(runs, self._shortest(beta))
        return runs

    # -- clause iteration

    def clause_extremum(self, x: int, clause):
        """Extremum of P_s(x) over words s of ``clause``; None if discarded."""
        clause = tuple(clause)
        self._check(clause)
        v = x
        for f in clause:
            if isinstance(v, float):
                continue
            if isinstance(f, Literal):
                v = self._lit(f)(v)
                if self.valid and v < 0:
                    return None
            elif self._holds(v, factors_of(f.body)):
                v = INF if self.sign > 0 else NEG_INF
        return v

    def clause_witness(self, x: int, clause, target: int):
        """Runs of a word of ``clause`` reaching ``target`` or beyond, or None."""
        clause = tuple(clause)
        self._check(clause)
        runs = []
        v = x
        for j, f in enumerate(clause):
            if isinstance(f, Literal):
                v = self._lit(f)(v)
                if self.valid and v < 0:
                    return None
                _append_run(runs, f.index, 1)
                continue
            body = factors_of(f.body)
            if not self._holds(v, body):
                continue
            rest = clause[j + 1 :]
            tail = self._seq(rest)
            w_needed = self._threshold(tail, target, strict=False)
            p_runs = self._find(v, body)
            _extend(runs, p_runs, self._pump(p_runs, v, w_needed))
            _extend(runs, self._shortest(rest))
            return runs
        if self.sign * (v - target) >= 0:
            return runs
        return None


def increase_predicate(z: int, e, sys: AffineSystem, mode=ExtremumMode.SUP) -> bool:
    return MonotoneAnalyzer(sys, mode).holds(z, e)


def valid_increase_predicate(z: int, e, sys: AffineSystem) -> bool:
    if z < 0:
        raise PreconditionError("z must be nonnegative")
    return MonotoneAnalyzer(sys, ExtremumMode.SUP, valid=True).holds(z, e)


def clause_extremum(x, clause, sys, mode=ExtremumMode.SUP, valid=False):
    if valid and x < 0:
        raise PreconditionError("x must be nonnegative for the valid variant")
    return MonotoneAnalyzer(sys, mode, valid).clause_extremum(x, clause)


# ------------------------------------------------------ modular extremum


@dataclass
class AnalysisStats:
    regex_nodes: int = 0
    clauses: int = 0

    def absorb(self, other: "AnalysisStats"):
        self.regex_nodes = max(self.regex_nodes, other.regex_nodes)
        self.clauses += other.clauses


class ModAnalysis:
    """The full pipeline for one (system, k, mode, valid) query.

    automaton -> reachability -> regex -> ∅-elimination -> negative scan ->
    DNF -> per-clause extremum.  Keeps the intermediate objects so witnesses
    can be built afterwards.
    """

    def __init__(self, sys, k, mode=ExtremumMode.SUP, valid=False, max_nodes=DEFAULT_MAX_NODES):
        if any(f.a == 0 for f in sys.maps):
            raise PreconditionError("maps must have nonzero linear coefficients")
        if valid and (any(f.a <= 0 for f in sys.maps) or sys.x < 0 or sys.y < 0):
            raise PreconditionError("valid variant needs a > 0 and x, y >= 0")
        self.sys = sys
        self.k = k
        self.mode = mode
        self.valid = valid
        self.budget = NodeBudget(max_nodes)
        self.stats = AnalysisStats()
        self.automaton = build_mod_automaton(sys, k)
        self.regex = None
        self.clauses = None
        self.values = None
        try:
            self.result = self._run()
        except ResourceExceeded as exc:
            exc.peak = self.budget.peak
            raise
        self.stats.regex_nodes = self.budget.peak

    def _run(self):
        if not mod_reachable(self.automaton):
            return EMPTY
        self.regex = eliminate_empty(automaton_to_regex(self.automaton, budget=self.budget))
        self.budget.check(self.regex.size)
        if has_negative_literal(self.regex, self.sys):
            if self.valid:
                raise PreconditionError("negative literal in the valid variant")
            return NEGATIVE
        self.clauses = to_dnf(self.regex, budget=self.budget)
        self.stats.clauses = len(self.clauses)
        self.analyzer = MonotoneAnalyzer(self.sys, self.mode, self.valid)
        self.values = [self.analyzer.clause_extremum(self.sys.x, c) for c in self.clauses]
        found = [v for v in self.values if v is not None]
        if not found:
            return EMPTY
        return Value(max(found) if self.mode is ExtremumMode.SUP else min(found))

    def witness(self, target: int):
        """Runs of a word s with P_s(x) ≡ y (mod k) and P_s(x) at or beyond
        ``target`` in the mode's direction (and valid, if requested)."""
        if self.result.kind != "value":
            raise PreconditionError("no value to certify")
        s = self.mode.value
        for c, v in zip(self.clauses, self.values):
            if v is not None and s * (v - target) >= 0:
                runs = self.analyzer.clause_witness(self.sys.x, c, target)
                if runs is not None:
                    return runs
        raise WitnessUnavailable("no clause reaches the target")

    def negative_witness(self):
        """Runs of a shortest word accepted by the automaton that uses a map
        with a negative coefficient."""
        aut = self.automaton
        neg = [f.a < 0 for f in self.sys.maps]
        start = (aut.start, False)
        parent = {start: None}
        queue = deque([start])
        goal = (aut.accept, True)
        while queue:
            state = queue.popleft()
            if state == goal:
                break
            r, used = state
            for i, t in enumerate(aut.delta[r], 1):
                nxt = (t, used or neg[i - 1])
                if nxt not in parent:
                    parent[nxt] = (state, i)
                    queue.append(nxt)
        if goal not in parent:
            raise WitnessUnavailable("no accepted word with a negative coefficient")
        word = []
        state = goal
        while parent[state] is not None:
            state, i = parent[state]
            word.append(i)
        word.reverse()
        runs = []
        for i in word:
            _append_run(runs, i, 1)
        return runs


def mod_extremum(sys, k, mode=ExtremumMode.SUP, max_nodes=DEFAULT_MAX_NODES):
    return ModAnalysis(sys, k, mode, valid=False, max_nodes=max_nodes).result


def mod_extremum_valid(sys, k, max_nodes=DEFAULT_MAX_NODES):
    return ModAnalysis(sys, k, ExtremumMode.SUP, valid=True, max_nodes=max_nodes).result
