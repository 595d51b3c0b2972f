"""Exact arithmetic for integer affine maps, words of map applications and orbits.

Words are sequences of 1-based map indices applied left to right: the first
index is applied first to the argument.  Run-length encoded words (RLE) are
sequences of ``(index, count)`` pairs and are never expanded; each run is
evaluated in closed form.

All arithmetic uses Python integers, so nothing overflows.  Extended integers
(suprema and infima) are plain ``int`` values plus the floats ``INF`` and
``-INF``; Python orders mixed int/float comparisons exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import PreconditionError

INF = math.inf
NEG_INF = -math.inf

ExtInt = Union[int, float]
Word = tuple
RLEWord = tuple


class Domain(enum.Enum):
    INTEGERS = "Z"
    NATURALS = "N"


@dataclass(frozen=True, order=True)
class AffineMap:
    """The map z -> a*z + b."""

    a: int
    b: int

    def __call__(self, z: int) -> int:
        return self.a * z + self.b

    def then(self, other: "AffineMap") -> "AffineMap":
        """Map applying ``self`` first and ``other`` second."""
        return AffineMap(other.a * self.a, other.a * self.b + other.b)

    @property
    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0

    @property
    def is_shift(self) -> bool:
        return self.a == 1 and self.b != 0

    def __str__(self):
        sign = "-" if self.b < 0 else "+"
        return f"{self.a}z{sign}{abs(self.b)}"


IDENTITY = AffineMap(1, 0)


def apply(f: AffineMap, z: int) -> int:
    return f.a * z + f.b


def apply_ext(f: AffineMap, v: ExtInt) -> ExtInt:
    """Apply ``f`` to an extended integer.  Infinite inputs need a != 0."""
    if isinstance(v, float):
        if f.a == 0:
            raise PreconditionError("constant map applied to an infinite value")
        return v if f.a > 0 else -v
    return f.a * v + f.b


def power(f: AffineMap, n: int) -> AffineMap:
    """``f`` composed with itself ``n`` times, in closed form."""
    if n < 0:
        raise PreconditionError("negative repetition count")
    if n == 0:
        return IDENTITY
    a, b = f.a, f.b
    if a == 1:
        return AffineMap(1, n * b)
    if a == 0:
        return f
    an = a**n
    return AffineMap(an, b * (an - 1) // (a - 1))


def compose_word(maps: Sequence[AffineMap]) -> AffineMap:
    """Single affine map equal to applying ``maps`` left to right."""
    acc = IDENTITY
    for f in maps:
        acc = acc.then(f)
    return acc


class AffineSystem:
    """A reachability instance: maps, start ``x``, target ``y`` and a domain.

    Duplicate maps are dropped, keeping the first occurrence, so indices
    1..N refer to distinct maps.
    """

    __slots__ = ("maps", "x", "y", "domain")

    def __init__(self, maps: Iterable, x: int, y: int, domain: Domain = Domain.INTEGERS):
        seen = {}
        for f in maps:
            if not isinstance(f, AffineMap):
                f = AffineMap(*f)
            if not (isinstance(f.a, int) and isinstance(f.b, int)):
                raise PreconditionError(f"non-integer coefficients in {f!r}")
            seen.setdefault(f, None)
        if not isinstance(domain, Domain):
            domain = Domain(domain)
        if domain is Domain.NATURALS and (x < 0 or y < 0):
            raise PreconditionError("x and y must be nonnegative over the naturals")
        object.__setattr__(self, "maps", tuple(seen))
        object.__setattr__(self, "x", int(x))
        object.__setattr__(self, "y", int(y))
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, name, value):
        raise AttributeError("AffineSystem is immutable")

    def __len__(self):
        return len(self.maps)

    def __eq__(self, other):
        if not isinstance(other, AffineSystem):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.maps, self.x, self.y, self.domain)

    def __repr__(self):
        maps = ", ".join(f"({f.a},{f.b})" for f in self.maps)
        return f"AffineSystem([{maps}], x={self.x}, y={self.y}, domain={self.domain.value})"

    def map(self, index: int) -> AffineMap:
        """Map with 1-based ``index``."""
        if not 1 <= index <= len(self.maps):
            raise PreconditionError(f"map index {index} out of range 1..{len(self.maps)}")
        return self.maps[index - 1]

    def index_of(self, f: AffineMap) -> int:
        return self.maps.index(f) + 1

    def with_maps(self, maps, x=None, y=None, domain=None) -> "AffineSystem":
        return AffineSystem(
            maps,
            self.x if x is None else x,
            self.y if y is None else y,
            self.domain if domain is None else domain,
        )


def apply_word(sys: AffineSystem, w: Sequence[int], z: int):
    """Return ``(value, orbit)`` of applying word ``w`` to ``z``."""
    orbit = [z]
    for i in w:
        z = sys.map(i)(z)
        orbit.append(z)
    return z, orbit


def apply_rle(sys: AffineSystem, w: Sequence, z: int) -> int:
    for index, count in w:
        if count < 0:
            raise PreconditionError("negative run count")
        z = power(sys.map(index), count)(z)
    return z


def is_valid_orbit(sys: AffineSystem, w: Sequence[int], z: int) -> bool:
    if z < 0:
        return False
    for i in w:
        z = sys.map(i)(z)
        if z < 0:
            return False
    return True


def run_minimum(f: AffineMap, z: int, n: int) -> int:
    """Minimum over the orbit z, f(z), ..., f^n(z) without materializing it.

    Writing p for the (rational) fixed point, f^t(z) - p = a^t (z - p).  The
    even-indexed and odd-indexed subsequences are therefore each monotone,
    so the minimum is attained at one of z, f(z), f^(n-1)(z), f^n(z).
    """
    if n == 0:
        return z
    candidates = [z, f(z), power(f, n)(z)]
    if n >= 2:
        candidates.append(power(f, n - 1)(z))
    return min(candidates)


def check_witness(sys: AffineSystem, w: Sequence) -> bool:
    """True iff the RLE word ``w`` maps ``sys.x`` to ``sys.y`` (validly over N)."""
    z = sys.x
    natural = sys.domain is Domain.NATURALS
    try:
        runs = [(int(i), int(c)) for i, c in w]
    except (TypeError, ValueError):
        return False
    for index, count in runs:
        if count < 0 or not 1 <= index <= len(sys.maps):
            return False
        f = sys.maps[index - 1]
        if natural and run_minimum(f, z, count) < 0:
            return False
        z = power(f, count)(z)
    return z == sys.y


def shift_normalize(sys: AffineSystem, shift_index: int, w: Sequence[int]):
    """Remove every use of a shift z -> z + k from ``w``.

    Returns ``(h, a)`` with ``h`` the remaining word and ``a`` the integer
    with apply_word(w, z) == apply_word(h, z) + a*k for every z.  Each shift
    occurrence contributes the product of the linear coefficients of all
    maps applied after it.
    """
    shift = sys.map(shift_index)
    if shift.a != 1:
        raise PreconditionError(f"map {shift_index} is not a shift")
    h = []
    weight = 0
    for i in w:
        if i == shift_index:
            weight += 1
            continue
        f = sys.map(i)
        if f.a == 0:
            raise PreconditionError(f"map {i} has zero linear coefficient")
        weight *= f.a
        h.append(i)
    return tuple(h), weight


def rle_from_word(w: Sequence[int]) -> tuple:
    runs = []
    for i in w:
        if runs and runs[-1][0] == i:
            runs[-1][1] += 1
        else:
            runs.append([i, 1])
    return tuple((i, c) for i, c in runs)


def expand_rle(w: Sequence, limit: int = 10**6) -> tuple:
    """Flat word of an RLE word; refuses expansions longer than ``limit``."""
    total = sum(c for _, c in w)
    if total > limit:
        raise PreconditionError(f"expansion length {total} exceeds {limit}")
    out = []
    for i, c in w:
        out.extend([i] * c)
    return tuple(out)


def ext_str(v: ExtInt) -> str:
    if v == INF:
        return "+inf"
    if v == NEG_INF:
        return "-inf"
    return str(v)
