"""Grades and regradings: finite injections, composed in reverse.

A regrading from grade ``n`` to grade ``m`` is an injective map from
``{0..m-1}`` into ``{0..n-1}``, stored as the tuple of its values.  Wires
are merged by composing these maps the opposite way round, which is what
makes discarding a grade wire (``n -> 0``) legal while inventing one is
not.  ``embed`` turns an injection into the 0/1 matrix that copies input
bits onto output positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import GradingError
from .stoch import ONE, ZERO, StochMatrix, _make, bits_to_index, index_to_bits


@dataclass(frozen=True)
class Injection:
    """A grade morphism n -> m: an injective map [m] -> [n]."""

    dom_grade: int
    cod_grade: int
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if self.dom_grade < 0 or self.cod_grade < 0:
            raise GradingError("grades must be non-negative")
        if len(self.map) != self.cod_grade:
            raise GradingError(f"map has {len(self.map)} entries, expected {self.cod_grade}")
        if len(set(self.map)) != len(self.map):
            raise GradingError(f"map {self.map} is not injective")
        for v in self.map:
            if not 0 <= v < self.dom_grade:
                raise GradingError(f"map value {v} outside [0, {self.dom_grade})")

    def __str__(self):
        return f"inj {self.dom_grade}->{self.cod_grade} [{','.join(str(v) for v in self.map)}]"


def identity(n: int) -> Injection:
    return Injection(n, n, tuple(range(n)))


def compose(s: Injection, t: Injection) -> Injection:
    """Composite s then t; the underlying maps compose the other way."""
    if s.cod_grade != t.dom_grade:
        raise GradingError(f"cannot compose grade {s.cod_grade} into grade {t.dom_grade}")
    return Injection(s.dom_grade, t.cod_grade, tuple(s.map[v] for v in t.map))


def tensor(s: Injection, t: Injection) -> Injection:
    """Block sum: s acts on the first wires, t on a shifted copy."""
    shifted = tuple(s.dom_grade + v for v in t.map)
    return Injection(s.dom_grade + t.dom_grade, s.cod_grade + t.cod_grade, s.map + shifted)


def symmetry(a: int, b: int) -> Injection:
    """The grade swap a + b -> b + a."""
    return Injection(a + b, b + a, tuple(a + i for i in range(b)) + tuple(range(a)))


def discard(n: int) -> Injection:
    """The unique morphism n -> 0."""
    return Injection(n, 0, ())


def enumerate_injections(a: int, b: int) -> list[Injection]:
    """All morphisms a -> b, in lexicographic map order; empty when b > a."""
    return [Injection(a, b, p) for p in permutations(range(a), b)]


def embed(t: Injection) -> StochMatrix:
    """The 0/1 matrix sending |x_0..x_{n-1}> to |x_t(0)..x_t(m-1)>."""
    n, m = t.dom_grade, t.cod_grade
    targets = []
    for j in range(1 << n):
        bits = index_to_bits(n, j)
        targets.append(bits_to_index(tuple(bits[v] for v in t.map)))
    rows = tuple(
        tuple(ONE if targets[j] == i else ZERO for j in range(1 << n)) for i in range(1 << m)
    )
    return _make(n, m, rows)
