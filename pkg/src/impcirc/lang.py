"""A tiny probabilistic expression language and its compilation to diagrams.

Grammar, in order of loosest binding::

    expr  ::= let x = expr in expr
            | if expr then expr else expr
            | observe atom
            | atom
    atom  ::= flip NUM | knight | IDENT | fst atom | snd atom
            | ( expr ) | ( expr , expr )
    NUM   ::= decimal or fraction literal, e.g. 0.25 or 1/4

Types are booleans and pairs.  ``flip p`` is a coin with exact rational
bias p, ``knight`` is a nondeterministic boolean whose outcome becomes a
branch of the result rather than a weighted outcome, and ``observe e``
conditions the current run on every wire of e being 1.  The grade of an
expression counts its knights; an eventual result is reported per branch.

``if`` runs both branches and selects with a multiplexer, so weight lost
to an observe in either branch scales the whole outcome — conditioning is
multiplicative across branches, not lazy.

The binder ``_`` is a wildcard: it binds a fresh name that cannot be
referenced.  Rebinding a name already in scope is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, TypingError
from .semantics import GradedMorphism, evaluate
from .stoch import as_subdistribution, bitstring
from .terms import (
    COND,
    COPY,
    KNIGHT,
    AND,
    NOT,
    Gen,
    GradedTerm,
    Id0,
    Id1,
    discards,
    identity_term,
    par,
    permutation_term,
    seq,
    state,
)

# ------------------------------------------------------------------ types


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class BoolT(Type):
    def __str__(self):
        return "B"


@dataclass(frozen=True)
class ProdT(Type):
    left: Type
    right: Type

    def __str__(self):
        return f"({self.left} * {self.right})"


BOOL = BoolT()


def type_width(t: Type) -> int:
    if isinstance(t, BoolT):
        return 1
    if isinstance(t, ProdT):
        return type_width(t.left) + type_width(t.right)
    raise TypingError(f"not a type: {t!r}")


# ------------------------------------------------------------------- AST


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Flip(Expr):
    bias: Fraction


@dataclass(frozen=True)
class Knight(Expr):
    pass


@dataclass(frozen=True)
class Pair(Expr):
    first: Expr
    second: Expr


@dataclass(frozen=True)
class Fst(Expr):
    pair: Expr


@dataclass(frozen=True)
class Snd(Expr):
    pair: Expr


@dataclass(frozen=True)
class If(Expr):
    guard: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class Let(Expr):
    name: str
    bound: Expr
    body: Expr


@dataclass(frozen=True)
class Observe(Expr):
    target: Expr


# ------------------------------------------------------------------ lexer

_KEYWORDS = {"let", "in", "if", "then", "else", "flip", "knight", "fst", "snd", "observe"}
_TOKEN = re.compile(
    r"""(?P<ws>\s+|\#[^\n]*)
      | (?P<num>\d+(\.\d+)?(/\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<punct>[(),=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | ident | kw | punct | eof
    text: str
    line: int
    col: int


def _lex(src: str) -> list[_Tok]:
    toks = []
    line, col, pos = 1, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"stray character {src[pos]!r}", line, col)
        text = m.group(0)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            if kind == "ident" and text in _KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _ExprParser:
    def __init__(self, src: str):
        self.toks = _lex(src)
        self.pos = 0
        self.fresh = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message + (f", got {tok.text!r}" if tok.text else ", got end of input"),
                         tok.line, tok.col)

    def expect(self, text: str):
        tok = self.next()
        if tok.text != text:
            self.pos -= 1
            self.fail(f"expected {text!r}")

    def binder(self) -> str:
        tok = self.next()
        if tok.kind == "ident":
            if tok.text == "_":
                self.fresh += 1
                return f"_%{self.fresh}"  # wildcard: fresh and unmentionable
            return tok.text
        self.pos -= 1
        self.fail("expected a name to bind")

    def expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "let":
            self.next()
            name = self.binder()
            self.expect("=")
            bound = self.expr()
            self.expect("in")
            return Let(name, bound, self.expr())
        if tok.kind == "kw" and tok.text == "if":
            self.next()
            guard = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            return If(guard, then, self.expr())
        if tok.kind == "kw" and tok.text == "observe":
            self.next()
            return Observe(self.atom())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "kw" and tok.text == "flip":
            num = self.next()
            if num.kind != "num":
                self.pos -= 1
                self.fail("expected a bias after flip")
            try:
                bias = Fraction(num.text)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad bias literal {num.text!r}", num.line, num.col) from None
            if bias > 1:
                raise ParseError(f"flip bias {num.text} outside [0, 1]", num.line, num.col)
            return Flip(bias)
        if tok.kind == "kw" and tok.text == "knight":
            return Knight()
        if tok.kind == "kw" and tok.text in ("fst", "snd"):
            inner = self.atom()
            return Fst(inner) if tok.text == "fst" else Snd(inner)
        if tok.kind == "ident":
            return Var(tok.text)
        if tok.text == "(":
            first = self.expr()
            tok = self.next()
            if tok.text == ")":
                return first
            if tok.text == ",":
                second = self.expr()
                self.expect(")")
                return Pair(first, second)
            self.pos -= 1
            self.fail("expected ')' or ','")
        self.pos -= 1
        self.fail("expected an expression")


def parse_program(src: str) -> Expr:
    p = _ExprParser(src)
    out = p.expr()
    if p.peek().kind != "eof":
        p.fail("trailing input")
    return out


# ------------------------------------------------------------- typechecker

Context = tuple[tuple[str, Type], ...]


def context_width(ctx: Context) -> int:
    return sum(type_width(t) for _, t in ctx)


@dataclass(frozen=True)
class TypedExpr:
    expr: Expr
    context: Context
    type: Type
    grade: int


def _infer(expr: Expr, ctx: Context) -> tuple[Type, int]:
    if isinstance(expr, Var):
        for name, t in ctx:
            if name == expr.name:
                return t, 0
        raise TypingError(f"unbound variable {expr.name!r}")
    if isinstance(expr, Flip):
        return BOOL, 0
    if isinstance(expr, Knight):
        return BOOL, 1
    if isinstance(expr, Pair):
        t1, a = _infer(expr.first, ctx)
        t2, b = _infer(expr.second, ctx)
        return ProdT(t1, t2), a + b
    if isinstance(expr, (Fst, Snd)):
        t, a = _infer(expr.pair, ctx)
        if not isinstance(t, ProdT):
            raise TypingError(f"projection from non-pair type {t}")
        return (t.left if isinstance(expr, Fst) else t.right), a
    if isinstance(expr, If):
        tg, a = _infer(expr.guard, ctx)
        if tg != BOOL:
            raise TypingError(f"if guard has type {tg}, expected B")
        t1, b = _infer(expr.then, ctx)
        t2, c = _infer(expr.orelse, ctx)
        if t1 != t2:
            raise TypingError(f"if branches disagree: {t1} vs {t2}")
        return t1, a + b + c
    if isinstance(expr, Let):
        if any(name == expr.name for name, _ in ctx):
            raise TypingError(f"variable {expr.name!r} is already bound")
        t1, a = _infer(expr.bound, ctx)
        t2, b = _infer(expr.body, ctx + ((expr.name, t1),))
        return t2, a + b
    if isinstance(expr, Observe):
        t, a = _infer(expr.target, ctx)
        return t, a
    raise TypingError(f"not an expression: {expr!r}")


def typecheck(expr: Expr, ctx: Context = ()) -> TypedExpr:
    """Type and grade of an expression in a context, or a TypingError."""
    t, grade = _infer(expr, ctx)
    return TypedExpr(expr, ctx, t, grade)


# --------------------------------------------------------------- compiler


def _copies(m: int) -> GradedTerm:
    """Fan a single wire out into m copies."""
    if m == 0:
        return Gen("del")
    if m == 1:
        return Id1()
    return seq(COPY, par(Id1(), _copies(m - 1)))


def copy_context(k: int) -> GradedTerm:
    """Duplicate a k-wire bundle into two consecutive copies of the bundle."""
    if k == 0:
        return Id0()
    spread = par(*[COPY] * k)
    targets = [0] * (2 * k)
    for i in range(k):
        targets[2 * i] = i
        targets[2 * i + 1] = k + i
    return seq(spread, permutation_term(targets))


def mux(n: int) -> GradedTerm:
    """Select between two n-wire bundles by a guard: out = g ? x : y.

    Input wires are guard, x_1..x_n, y_1..y_n; each output is
    or(and(g, x_i), and(not g, y_i)) with the guard fanned out as needed.
    """
    if n == 0:
        return Gen("del")
    fan = par(_copies(2 * n), identity_term(2 * n))
    targets = [0] * (4 * n)
    for i in range(n):
        targets[2 * i] = 4 * i  # guard copy for the x side
        targets[2 * i + 1] = 4 * i + 2  # guard copy for the y side
        targets[2 * n + i] = 4 * i + 1  # x_i
        targets[3 * n + i] = 4 * i + 3  # y_i
    or_gate = seq(par(NOT, NOT), AND, NOT)
    pick = par(AND, seq(par(NOT, Id1()), AND))  # (g and x_i, not g and y_i)
    block = seq(pick, or_gate)
    return seq(fan, permutation_term(targets), par(*[block] * n))


def _observe_wires(w: int) -> GradedTerm:
    # keep each wire only when it carries 1
    if w == 0:
        return Id0()
    check = seq(par(Id1(), state(1)), COND)
    return par(*[check] * w)


def compile_typed(te: TypedExpr) -> GradedTerm:
    """Compile a typed expression to a term of profile (|Γ|, |τ|, grade)."""
    return _compile(te.expr, te.context)


def _free(expr: Expr) -> frozenset[str]:
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, (Flip, Knight)):
        return frozenset()
    if isinstance(expr, Pair):
        return _free(expr.first) | _free(expr.second)
    if isinstance(expr, (Fst, Snd)):
        return _free(expr.pair)
    if isinstance(expr, If):
        return _free(expr.guard) | _free(expr.then) | _free(expr.orelse)
    if isinstance(expr, Let):
        return _free(expr.bound) | (_free(expr.body) - {expr.name})
    if isinstance(expr, Observe):
        return _free(expr.target)
    raise TypingError(f"not an expression: {expr!r}")


def _compile(expr: Expr, ctx: Context) -> GradedTerm:
    # Narrow to the free variables first: unused wires are deleted once
    # up front instead of being copied along and deleted leaf by leaf.
    # Pure plumbing, but it keeps if/let from tripling dead context.
    fv = _free(expr)
    if any(name not in fv for name, _ in ctx):
        trim = par(
            *[
                identity_term(type_width(t)) if name in fv else discards(type_width(t))
                for name, t in ctx
            ]
        )
        sub = tuple((name, t) for name, t in ctx if name in fv)
        return seq(trim, _compile(expr, sub))
    k = context_width(ctx)
    if isinstance(expr, Var):
        pieces = [
            identity_term(type_width(t)) if name == expr.name else discards(type_width(t))
            for name, t in ctx
        ]
        return par(*pieces)
    if isinstance(expr, Flip):
        return par(discards(k), state(expr.bias))
    if isinstance(expr, Knight):
        return par(discards(k), KNIGHT)
    if isinstance(expr, Pair):
        halves = par(_compile(expr.first, ctx), _compile(expr.second, ctx))
        return seq(copy_context(k), halves)
    if isinstance(expr, Fst):
        t, _ = _infer(expr.pair, ctx)
        inner = _compile(expr.pair, ctx)
        return seq(inner, par(identity_term(type_width(t.left)), discards(type_width(t.right))))
    if isinstance(expr, Snd):
        t, _ = _infer(expr.pair, ctx)
        inner = _compile(expr.pair, ctx)
        return seq(inner, par(discards(type_width(t.left)), identity_term(type_width(t.right))))
    if isinstance(expr, If):
        t, _ = _infer(expr, ctx)
        triple = seq(copy_context(k), par(identity_term(k), copy_context(k)))
        branches = par(
            _compile(expr.guard, ctx),
            _compile(expr.then, ctx),
            _compile(expr.orelse, ctx),
        )
        return seq(triple, branches, mux(type_width(t)))
    if isinstance(expr, Let):
        t1, _ = _infer(expr.bound, ctx)
        body = _compile(expr.body, ctx + ((expr.name, t1),))
        return seq(
            copy_context(k),
            par(identity_term(k), _compile(expr.bound, ctx)),
            body,
        )
    if isinstance(expr, Observe):
        t, _ = _infer(expr.target, ctx)
        return seq(_compile(expr.target, ctx), _observe_wires(type_width(t)))
    raise TypingError(f"not an expression: {expr!r}")


def compile_program(src: str) -> tuple[TypedExpr, GradedTerm]:
    te = typecheck(parse_program(src))
    return te, compile_typed(te)


# -------------------------------------------------------------------- run


@dataclass(frozen=True)
class BranchReport:
    """One nondeterministic branch: its grade-wire bits and outcome weights."""

    bits: str
    dist: dict[str, Fraction]
    mass: Fraction
    normalized: dict[str, Fraction] | None


@dataclass(frozen=True)
class RunResult:
    type: Type
    grade: int
    branches: tuple[BranchReport, ...]


def run(src: str) -> RunResult:
    """Parse, typecheck, compile and evaluate a closed program."""
    te, term = compile_program(src)
    ev: GradedMorphism = evaluate(term)
    reports = []
    for j, block in enumerate(ev.branch_matrices()):
        dist = as_subdistribution(block)
        mass = sum(dist.values(), Fraction(0))
        normalized = {k: v / mass for k, v in dist.items()} if mass else None
        reports.append(BranchReport(bitstring(te.grade, j), dist, mass, normalized))
    return RunResult(te.type, te.grade, tuple(reports))


def run_result_json(res: RunResult) -> dict:
    """JSON-ready dict; rationals as lowest-term strings, stable key order."""
    return {
        "type": str(res.type),
        "grade": res.grade,
        "branches": [
            {
                "bits": b.bits,
                "mass": str(b.mass),
                "dist": {k: str(v) for k, v in sorted(b.dist.items())},
                "normalized": (
                    {k: str(v) for k, v in sorted(b.normalized.items())}
                    if b.normalized is not None
                    else None
                ),
            }
            for b in res.branches
        ],
    }


def format_run_result(res: RunResult) -> str:
    lines = [f"type: {res.type}", f"grade: {res.grade}"]
    for b in res.branches:
        label = b.bits if b.bits else "-"
        lines.append(f"branch {label}: mass {b.mass}")
        for outcome in b.dist:
            norm = "-" if b.normalized is None else str(b.normalized[outcome])
            lines.append(f"  {outcome}: {b.dist[outcome]}  (normalized {norm})")
    return "\n".join(lines)
