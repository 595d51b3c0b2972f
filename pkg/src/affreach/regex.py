"""Congruence automata, state elimination and regular-expression normalization.

Regular expressions here are immutable trees over literals that name map
indices.  The smart constructors ``concat``, ``union`` and ``star`` flatten
nested operators, drop epsilon factors from concatenations, deduplicate
union alternatives and collapse ``(a*)*`` to ``a*``.  They never touch the
empty set; ``eliminate_empty`` does that explicitly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .affine import AffineSystem
from .errors import PreconditionError, ResourceExceeded

DEFAULT_MAX_NODES = 10**6
DEFAULT_MAX_WORDS = 10**5


class Regex:
    __slots__ = ("size", "_hash")

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


class EmptySet(Regex):
    __slots__ = ()
    __hash__ = Regex.__hash__

    def __init__(self):
        self.size = 1
        self._hash = hash("EmptySet")

    def __eq__(self, other):
        return isinstance(other, EmptySet)

    def __str__(self):
        return "∅"


class Epsilon(Regex):
    __slots__ = ()
    __hash__ = Regex.__hash__

    def __init__(self):
        self.size = 1
        self._hash = hash("Epsilon")

    def __eq__(self, other):
        return isinstance(other, Epsilon)

    def __str__(self):
        return "ε"


class Literal(Regex):
    __slots__ = ("index",)
    __hash__ = Regex.__hash__

    def __init__(self, index: int):
        self.index = index
        self.size = 1
        self._hash = hash(("Literal", index))

    def __eq__(self, other):
        return isinstance(other, Literal) and other.index == self.index

    def __str__(self):
        return f"f{self.index}"


class _Nary(Regex):
    __slots__ = ("parts",)
    __hash__ = Regex.__hash__
    tag = ""

    def __init__(self, parts):
        flat = []
        for p in parts:
            if type(p) is type(self):
                flat.extend(p.parts)
            else:
                flat.append(p)
        if len(flat) < 2:
            raise PreconditionError(f"{type(self).__name__} needs at least two children")
        self.parts = tuple(flat)
        self.size = 1 + sum(p.size for p in self.parts)
        self._hash = hash((self.tag, self.parts))

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other._hash == self._hash
            and other.parts == self.parts
        )


class Concat(_Nary):
    __slots__ = ()
    __hash__ = Regex.__hash__
    tag = "Concat"

    def __str__(self):
        return "".join(f"({p})" if isinstance(p, Union) else str(p) for p in self.parts)


class Union(_Nary):
    __slots__ = ()
    __hash__ = Regex.__hash__
    tag = "Union"

    def __str__(self):
        return "|".join(str(p) for p in self.parts)


class Star(Regex):
    __slots__ = ("body",)
    __hash__ = Regex.__hash__

    def __init__(self, body: Regex):
        self.body = body
        self.size = 1 + body.size
        self._hash = hash(("Star", body))

    def __eq__(self, other):
        return isinstance(other, Star) and other._hash == self._hash and other.body == self.body

    def __str__(self):
        if isinstance(self.body, (Literal, EmptySet, Epsilon)):
            return f"{self.body}*"
        return f"({self.body})*"


EMPTY = EmptySet()
EPSILON = Epsilon()


def concat(*parts: Regex) -> Regex:
    parts = [p for p in parts if not isinstance(p, Epsilon)]
    if not parts:
        return EPSILON
    if len(parts) == 1:
        return parts[0]
    return Concat(parts)


def union(*parts: Regex) -> Regex:
    alts = {}
    for p in parts:
        for q in p.parts if isinstance(p, Union) else (p,):
            alts.setdefault(q, None)
    if not alts:
        return EMPTY
    if len(alts) == 1:
        return next(iter(alts))
    return Union(list(alts))


def star(body: Regex) -> Regex:
    if isinstance(body, Star):
        return body
    if isinstance(body, Epsilon):
        return EPSILON
    return Star(body)


def literals(r: Regex):
    """Yield every Literal node of ``r``."""
    stack = [r]
    while stack:
        node = stack.pop()
        if isinstance(node, Literal):
            yield node
        elif isinstance(node, _Nary):
            stack.extend(node.parts)
        elif isinstance(node, Star):
            stack.append(node.body)


class NodeBudget:
    """Cap on the size of any expression built, plus the peak size seen."""

    def __init__(self, cap: int = DEFAULT_MAX_NODES):
        self.cap = cap
        self.peak = 0

    def check(self, size: int, what="regex nodes"):
        if size > self.cap:
            raise ResourceExceeded(what, self.cap, size)
        if size > self.peak:
            self.peak = size


# ---------------------------------------------------------------- automata


@dataclass(frozen=True)
class ModAutomaton:
    """Deterministic automaton on the residues mod ``modulus``.

    ``delta[r][i - 1]`` is the residue reached from ``r`` on map index ``i``.
    """

    modulus: int
    delta: tuple
    start: int
    accept: int

    @property
    def n_symbols(self) -> int:
        return len(self.delta[0]) if self.delta else 0

    @property
    def transitions(self) -> dict:
        return {
            (r, i): t for r, row in enumerate(self.delta) for i, t in enumerate(row, 1)
        }

    def step(self, state: int, index: int) -> int:
        return self.delta[state][index - 1]

    def accepts(self, word) -> bool:
        state = self.start
        for i in word:
            state = self.delta[state][i - 1]
        return state == self.accept

    def with_accept(self, accept: int) -> "ModAutomaton":
        return ModAutomaton(self.modulus, self.delta, self.start, accept)


def build_mod_automaton(sys: AffineSystem, k: int) -> ModAutomaton:
    if k == 0:
        raise PreconditionError("modulus must be nonzero")
    m = abs(k)
    delta = tuple(tuple((f.a * r + f.b) % m for f in sys.maps) for r in range(m))
    return ModAutomaton(m, delta, sys.x % m, sys.y % m)


def _reachable_states(aut: ModAutomaton, source: int, forward=True):
    if forward:
        succ = {r: set(row) for r, row in enumerate(aut.delta)}
    else:
        succ = {r: set() for r in range(aut.modulus)}
        for r, row in enumerate(aut.delta):
            for t in row:
                succ[t].add(r)
    seen = {source}
    queue = deque([source])
    while queue:
        r = queue.popleft()
        for t in sorted(succ[r]):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def mod_reachable(aut: ModAutomaton) -> bool:
    return aut.accept in _reachable_states(aut, aut.start)


def automaton_to_regex(aut: ModAutomaton, max_nodes=DEFAULT_MAX_NODES, budget=None) -> Regex:
    """Regular expression for the language of ``aut`` by state elimination.

    States that are not both reachable from the start and co-reachable from
    the accept state are trimmed first.  The rest are eliminated in
    increasing residue order, never the start or accept state.
    """
    budget = budget or NodeBudget(max_nodes)
    forward = _reachable_states(aut, aut.start)
    if aut.accept not in forward:
        return EMPTY
    useful = forward & _reachable_states(aut, aut.accept, forward=False)

    edges: dict = {}
    for r in sorted(useful):
        for i, t in enumerate(aut.delta[r], 1):
            if t in useful:
                edges.setdefault((r, t), []).append(Literal(i))
    edges = {pq: union(*lits) for pq, lits in edges.items()}
    for e in edges.values():
        budget.check(e.size)

    s, t = aut.start, aut.accept
    for k in sorted(useful - {s, t}):
        loop = edges.pop((k, k), None)
        loop_star = star(loop) if loop is not None else EPSILON
        incoming = [(p, e) for (p, q), e in edges.items() if q == k]
        outgoing = [(q, e) for (p, q), e in edges.items() if p == k]
        for p, _ in incoming:
            del edges[(p, k)]
        for q, _ in outgoing:
            del edges[(k, q)]
        for p, e_in in incoming:
            for q, e_out in outgoing:
                size = e_in.size + loop_star.size + e_out.size + 1
                old = edges.get((p, q))
                if old is not None:
                    size += old.size + 1
                budget.check(size)
                path = concat(e_in, loop_star, e_out)
                edges[(p, q)] = path if old is None else union(old, path)

    r_ss = edges.get((s, s))
    if s == t:
        result = star(r_ss) if r_ss is not None else EPSILON
        budget.check(result.size)
        return result
    r_st = edges[(s, t)]
    r_tt = edges.get((t, t))
    r_ts = edges.get((t, s))
    tt_star = star(r_tt) if r_tt is not None else EPSILON
    loops = []
    if r_ss is not None:
        loops.append(r_ss)
    if r_ts is not None:
        budget.check(r_st.size + tt_star.size + r_ts.size + 1)
        loops.append(concat(r_st, tt_star, r_ts))
    head = star(union(*loops)) if loops else EPSILON
    budget.check(head.size + r_st.size + tt_star.size + 1)
    return concat(head, r_st, tt_star)


# ---------------------------------------------------------- normalization


def eliminate_empty(r: Regex) -> Regex:
    """Remove the empty set using E|∅ = E, E∅ = ∅ and ∅* = ε."""
    if isinstance(r, Union):
        parts = [eliminate_empty(p) for p in r.parts]
        parts = [p for p in parts if not isinstance(p, EmptySet)]
        return union(*parts)
    if isinstance(r, Concat):
        parts = []
        for p in r.parts:
            p = eliminate_empty(p)
            if isinstance(p, EmptySet):
                return EMPTY
            parts.append(p)
        return concat(*parts)
    if isinstance(r, Star):
        body = eliminate_empty(r.body)
        if isinstance(body, EmptySet):
            return EPSILON
        return star(body)
    return r


def has_negative_literal(r: Regex, sys: AffineSystem) -> bool:
    return any(sys.map(lit.index).a < 0 for lit in literals(r))


def clause_regex(clause) -> Regex:
    return concat(*clause)


def _clause_size(clause) -> int:
    return sum(f.size for f in clause)


def to_dnf(r: Regex, max_nodes=DEFAULT_MAX_NODES, budget=None) -> list:
    """Disjunctive normal form of an ∅-free expression.

    Returns a list of clauses; each clause is a tuple of factors, every factor
    a Literal or a Star whose body is itself union-free.  Unions under a star
    are removed with (a|b)* = (a*b*)*, unions under a concatenation by
    distributing.  Recursion is structural, so it terminates.
    """
    budget = budget or NodeBudget(max_nodes)
    clauses = _dnf(r, budget)
    budget.check(sum(_clause_size(c) + 1 for c in clauses), "DNF nodes")
    return clauses


def _dedupe(clauses):
    return list(dict.fromkeys(clauses))


def _dnf(r, budget):
    if isinstance(r, EmptySet):
        raise PreconditionError("to_dnf needs an ∅-free expression")
    if isinstance(r, Epsilon):
        return [()]
    if isinstance(r, Literal):
        return [(r,)]
    if isinstance(r, Union):
        out = []
        for p in r.parts:
            out.extend(_dnf(p, budget))
        out = _dedupe(out)
        budget.check(sum(_clause_size(c) + 1 for c in out), "DNF nodes")
        return out
    if isinstance(r, Concat):
        acc = [()]
        for p in r.parts:
            rhs = _dnf(p, budget)
            estimate = len(rhs) * sum(_clause_size(c) + 1 for c in acc) + len(acc) * sum(
                _clause_size(c) for c in rhs
            )
            budget.check(estimate, "DNF nodes")
            acc = _dedupe(a + b for a, b in product(acc, rhs))
        return acc
    if isinstance(r, Star):
        terms = []
        body_clauses = _dnf(r.body, budget)
        if len(body_clauses) == 1:
            factor = star(concat(*body_clauses[0]))
        else:
            for c in body_clauses:
                if c:
                    terms.append(star(concat(*c)))
            factor = star(concat(*terms))
        budget.check(factor.size, "DNF nodes")
        return [()] if isinstance(factor, Epsilon) else [(factor,)]
    raise TypeError(f"not a regex: {r!r}")


# ---------------------------------------------------------------- languages


def enumerate_language(r: Regex, max_len: int, max_words=DEFAULT_MAX_WORDS) -> set:
    """All words of L(r) of length at most ``max_len``."""
    if max_len < 0:
        raise PreconditionError("max_len must be nonnegative")
    memo = {}

    def lang(node):
        key = id(node)
        if key in memo:
            return memo[key][1]
        if isinstance(node, EmptySet):
            out = set()
        elif isinstance(node, Epsilon):
            out = {()}
        elif isinstance(node, Literal):
            out = {(node.index,)} if max_len >= 1 else set()
        elif isinstance(node, Union):
            out = set()
            for p in node.parts:
                out |= lang(p)
        elif isinstance(node, Concat):
            out = {()}
            for p in node.parts:
                rhs = lang(p)
                out = {a + b for a in out for b in rhs if len(a) + len(b) <= max_len}
                if not out:
                    break
        elif isinstance(node, Star):
            body = [w for w in lang(node.body) if w]
            out = {()}
            frontier = {()}
            while frontier:
                frontier = {
                    a + b for a in frontier for b in body if len(a) + len(b) <= max_len
                } - out
                out |= frontier
                if len(out) > max_words:
                    break
        else:
            raise TypeError(f"not a regex: {node!r}")
        if len(out) > max_words:
            raise ResourceExceeded("enumerated words", max_words, len(out))
        memo[key] = (node, out)
        return out

    return set(lang(r))


def matches(r: Regex, word) -> bool:
    """Membership test: is ``word`` in L(r)?"""
    word = tuple(word)
    n = len(word)
    memo = {}

    def ends(node, i):
        key = (id(node), i)
        if key in memo:
            return memo[key]
        if isinstance(node, EmptySet):
            out = frozenset()
        elif isinstance(node, Epsilon):
            out = frozenset((i,))
        elif isinstance(node, Literal):
            out = frozenset((i + 1,)) if i < n and word[i] == node.index else frozenset()
        elif isinstance(node, Union):
            out = frozenset().union(*(ends(p, i) for p in node.parts))
        elif isinstance(node, Concat):
            cur = {i}
            for p in node.parts:
                cur = set().union(*(ends(p, j) for j in cur)) if cur else set()
            out = frozenset(cur)
        elif isinstance(node, Star):
            seen = {i}
            todo = [i]
            while todo:
                j = todo.pop()
                for e in ends(node.body, j):
                    if e not in seen:
                        seen.add(e)
                        todo.append(e)
            out = frozenset(seen)
        else:
            raise TypeError(f"not a regex: {node!r}")
        memo[key] = out
        return out

    return n in ends(r, 0)
