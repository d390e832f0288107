"""Graded monoidal terms over a wire signature.

Terms are the syntax of string diagrams: generators, identities, the wire
crossing, sequential and parallel composites, and an explicit regrading
node that reindexes the grade wires of its body by an injection.  A term's
profile is the triple (arity, coarity, grade).  Sequential composition
concatenates grades (first factor's grade wires first), and so does the
parallel product.

The concrete syntax is s-expressions::

    (seq (par id1 knight) (gen and))
    (regrade (inj 2->1 [0]) knight)
    (state 1/2)

Bare generator names, ``id0``, ``id1``, ``swap`` and ``knight`` are atoms;
``(seq ...)`` and ``(par ...)`` take two or more arguments and nest to the
left; ``(id n)``, ``(swap n m)`` and ``(knights a)`` are conveniences for
wide identities, block crossings and rows of knight generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .errors import TermError
from .grading import Injection
from .stoch import _rat


class GradedTerm:
    """Base class; all nodes are immutable and compare structurally."""

    __slots__ = ()


@dataclass(frozen=True)
class Gen(GradedTerm):
    name: str
    param: Fraction | None = None

    def __post_init__(self):
        if self.param is not None:
            object.__setattr__(self, "param", _rat(self.param))


@dataclass(frozen=True)
class Id0(GradedTerm):
    pass


@dataclass(frozen=True)
class Id1(GradedTerm):
    pass


@dataclass(frozen=True)
class Swap(GradedTerm):
    pass


@dataclass(frozen=True)
class Seq(GradedTerm):
    first: GradedTerm
    second: GradedTerm


@dataclass(frozen=True)
class Par(GradedTerm):
    left: GradedTerm
    right: GradedTerm


@dataclass(frozen=True)
class Regrade(GradedTerm):
    regrading: Injection
    body: GradedTerm


DEL = Gen("del")
COPY = Gen("copy")
AND = Gen("and")
NOT = Gen("not")
COND = Gen("cond")
KNIGHT = Gen("knight")


def state(p) -> Gen:
    return Gen("state", _rat(p))


class Profile(NamedTuple):
    arity: int
    coarity: int
    grade: int


class GeneratorDecl(NamedTuple):
    name: str
    arity: int
    coarity: int
    grade: int
    parametric: bool = False


class GradedSignature:
    """The available generators with their profiles."""

    def __init__(self, decls: Sequence[GeneratorDecl]):
        self._decls = {d.name: d for d in decls}

    def __contains__(self, name: str) -> bool:
        return name in self._decls

    def names(self):
        return tuple(self._decls)

    def lookup(self, gen: Gen) -> GeneratorDecl:
        decl = self._decls.get(gen.name)
        if decl is None:
            raise TermError(f"unknown generator {gen.name!r}")
        if decl.parametric and gen.param is None:
            raise TermError(f"generator {gen.name!r} needs a parameter")
        if not decl.parametric and gen.param is not None:
            raise TermError(f"generator {gen.name!r} takes no parameter")
        if decl.parametric and not 0 <= gen.param <= 1:
            raise TermError(f"parameter {gen.param} outside [0, 1]")
        return decl


IMPCIRC = GradedSignature(
    [
        GeneratorDecl("del", 1, 0, 0),
        GeneratorDecl("copy", 1, 2, 0),
        GeneratorDecl("and", 2, 1, 0),
        GeneratorDecl("not", 1, 1, 0),
        GeneratorDecl("state", 0, 1, 0, parametric=True),
        GeneratorDecl("cond", 2, 1, 0),
        GeneratorDecl("knight", 0, 1, 1),
    ]
)


def infer_profile(term: GradedTerm, sig: GradedSignature = IMPCIRC) -> Profile:
    """Profile of a term, or raise TermError pinpointing the bad node."""
    if isinstance(term, Gen):
        decl = sig.lookup(term)
        return Profile(decl.arity, decl.coarity, decl.grade)
    if isinstance(term, Id0):
        return Profile(0, 0, 0)
    if isinstance(term, Id1):
        return Profile(1, 1, 0)
    if isinstance(term, Swap):
        return Profile(2, 2, 0)
    if isinstance(term, Seq):
        f = infer_profile(term.first, sig)
        g = infer_profile(term.second, sig)
        if f.coarity != g.arity:
            raise TermError(
                f"coarity {f.coarity} != arity {g.arity} in {format_term(term)}"
            )
        return Profile(f.arity, g.coarity, f.grade + g.grade)
    if isinstance(term, Par):
        f = infer_profile(term.left, sig)
        g = infer_profile(term.right, sig)
        return Profile(f.arity + g.arity, f.coarity + g.coarity, f.grade + g.grade)
    if isinstance(term, Regrade):
        f = infer_profile(term.body, sig)
        if term.regrading.cod_grade != f.grade:
            raise TermError(
                f"regrading target grade {term.regrading.cod_grade} != term grade {f.grade}"
                f" in {format_term(term)}"
            )
        return Profile(f.arity, f.coarity, term.regrading.dom_grade)
    raise TermError(f"not a graded term: {term!r}")


def validate(term: GradedTerm, sig: GradedSignature = IMPCIRC) -> str | None:
    """None when the term is well formed, else the first diagnostic."""
    try:
        infer_profile(term, sig)
    except TermError as exc:
        return str(exc)
    return None


# ---------------------------------------------------------------- derived

def seq(*terms: GradedTerm) -> GradedTerm:
    if not terms:
        return Id0()
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par(*terms: GradedTerm) -> GradedTerm:
    if not terms:
        return Id0()
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def identity_term(n: int) -> GradedTerm:
    if n == 0:
        return Id0()
    return par(*[Id1()] * n)


def knights(a: int) -> GradedTerm:
    if a == 0:
        return Id0()
    return par(*[KNIGHT] * a)


def discards(n: int) -> GradedTerm:
    if n == 0:
        return Id0()
    return par(*[DEL] * n)


def permutation_term(targets: Sequence[int]) -> GradedTerm:
    """A wiring that routes input wire i to output position targets[i].

    Built as a ladder of adjacent crossings, bubble-sort style.
    """
    w = len(targets)
    if sorted(targets) != list(range(w)):
        raise TermError(f"{targets} is not a permutation of 0..{w - 1}")
    want = [0] * w
    for i, t in enumerate(targets):
        want[t] = i
    cur = list(range(w))
    layers = []
    for p in range(w):
        q = cur.index(want[p])
        while q > p:
            cur[q - 1], cur[q] = cur[q], cur[q - 1]
            layers.append(par(identity_term(q - 1), Swap(), identity_term(w - q - 1)))
            q -= 1
    if not layers:
        return identity_term(w)
    return seq(*layers)


def swap_term(n: int, m: int) -> GradedTerm:
    """The block crossing on n + m wires, sending u·v to v·u."""
    return permutation_term([m + i for i in range(n)] + list(range(m)))


# ------------------------------------------------------- concrete syntax

_ATOMS = {
    "id0": Id0,
    "id1": Id1,
    "swap": Swap,
}
_BARE_GENS = ("del", "copy", "and", "not", "cond", "knight")


def format_term(term: GradedTerm) -> str:
    """Canonical s-expression for a term; inverse of parse_term."""
    if isinstance(term, Gen):
        if term.param is not None:
            return f"({term.name} {term.param})"
        return term.name
    if isinstance(term, Id0):
        return "id0"
    if isinstance(term, Id1):
        return "id1"
    if isinstance(term, Swap):
        return "swap"
    if isinstance(term, Seq):
        return f"(seq {format_term(term.first)} {format_term(term.second)})"
    if isinstance(term, Par):
        return f"(par {format_term(term.left)} {format_term(term.right)})"
    if isinstance(term, Regrade):
        r = term.regrading
        return f"(regrade (inj {r.dom_grade}->{r.cod_grade} [{','.join(map(str, r.map))}]) {format_term(term.body)})"
    raise TermError(f"not a graded term: {term!r}")


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokens(text: str) -> Iterator[str]:
    for m in _TOKEN.finditer(text):
        yield m.group(0)


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise TermError("unexpected end of term text")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise TermError(f"expected {tok!r}, got {got!r}")

    def number(self) -> int:
        tok = self.next()
        try:
            return int(tok)
        except ValueError:
            raise TermError(f"expected a number, got {tok!r}") from None

    def rational(self) -> Fraction:
        tok = self.next()
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise TermError(f"expected a rational, got {tok!r}") from None

    def injection(self) -> Injection:
        self.expect("(")
        self.expect("inj")
        dims = self.next()
        m = re.fullmatch(r"(\d+)->(\d+)", dims)
        if not m:
            raise TermError(f"expected n->m after inj, got {dims!r}")
        body = self.next()
        if not (body.startswith("[") and body.endswith("]")):
            raise TermError(f"expected [i,...] in inj, got {body!r}")
        inner = body[1:-1]
        try:
            values = tuple(int(v) for v in inner.split(",")) if inner else ()
        except ValueError:
            raise TermError(f"bad injection map {body!r}") from None
        self.expect(")")
        return Injection(int(m.group(1)), int(m.group(2)), values)

    def term(self) -> GradedTerm:
        tok = self.next()
        if tok == ")":
            raise TermError("unexpected ')'")
        if tok != "(":
            return self.atom(tok)
        head = self.next()
        if head in ("seq", "par"):
            parts = []
            while self.peek() != ")":
                parts.append(self.term())
            self.expect(")")
            if len(parts) < 2:
                raise TermError(f"({head} ...) needs at least two arguments")
            return seq(*parts) if head == "seq" else par(*parts)
        if head == "regrade":
            r = self.injection()
            body = self.term()
            self.expect(")")
            return Regrade(r, body)
        if head == "gen":
            name = self.next()
            self.expect(")")
            return Gen(name)
        if head in ("state", "flip"):
            p = self.rational()
            self.expect(")")
            return state(p)
        if head == "id":
            n = self.number()
            self.expect(")")
            return identity_term(n)
        if head == "swap":
            n = self.number()
            m = self.number()
            self.expect(")")
            return swap_term(n, m)
        if head == "knights":
            a = self.number()
            self.expect(")")
            return knights(a)
        raise TermError(f"unknown term form ({head} ...)")

    def atom(self, tok: str) -> GradedTerm:
        if tok in _ATOMS:
            return _ATOMS[tok]()
        if tok in _BARE_GENS:
            return Gen(tok)
        raise TermError(f"unknown atom {tok!r}")


def parse_term(text: str) -> GradedTerm:
    """Parse one term s-expression; trailing text is an error."""
    p = _Parser(text)
    if p.peek() is None:
        raise TermError("empty term text")
    out = p.term()
    if p.peek() is not None:
        raise TermError(f"trailing input from {p.peek()!r}")
    return out
