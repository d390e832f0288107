"""Pulling nondeterminism to the front: every term is a knight row then a circuit.

``injection_circuit`` realizes a grade morphism as an ordinary wiring —
route the selected wires to the outputs in order, discard the rest — and
``factorize`` rewrites any term as ``(id_n ⊗ knight^a) ; zero_part`` with a
0-graded ``zero_part``.  The zero part takes the n original inputs first
and the a bent-down grade wires after them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TermError
from .grading import Injection
from .terms import (
    IMPCIRC,
    Gen,
    GradedSignature,
    GradedTerm,
    Id0,
    Id1,
    Par,
    Regrade,
    Seq,
    Swap,
    discards,
    identity_term,
    infer_profile,
    knights,
    par,
    permutation_term,
    seq,
    swap_term,
)


def injection_circuit(t: Injection) -> GradedTerm:
    """A 0-graded wiring with the same matrix as the embedded injection.

    Output j carries input wire t.map[j]; unselected inputs are discarded.
    """
    b, a = t.dom_grade, t.cod_grade
    selected = set(t.map)
    order = list(t.map) + [i for i in range(b) if i not in selected]
    targets = [0] * b
    for position, wire in enumerate(order):
        targets[wire] = position
    shuffle = permutation_term(targets)
    trim = par(identity_term(a), discards(b - a))
    if b == a:
        return shuffle
    return seq(shuffle, trim)


@dataclass(frozen=True)
class Factorization:
    grade: int
    zero_part: GradedTerm


def factorize(term: GradedTerm, sig: GradedSignature = IMPCIRC) -> Factorization:
    """Split a term into its grade and a knight-free, regrade-free circuit."""
    n, _, _ = infer_profile(term, sig)

    if isinstance(term, Gen):
        if sig.lookup(term).grade != 0:
            # a lone branch generator is the identity once its wire is bent down
            return Factorization(1, Id1())
        return Factorization(0, term)
    if isinstance(term, (Id0, Id1, Swap)):
        return Factorization(0, term)

    if isinstance(term, Regrade):
        inner = factorize(term.body, sig)
        r = term.regrading
        zero = seq(par(identity_term(n), injection_circuit(r)), inner.zero_part)
        return Factorization(r.dom_grade, zero)

    if isinstance(term, Seq):
        first = factorize(term.first, sig)
        second = factorize(term.second, sig)
        zero = seq(
            par(first.zero_part, identity_term(second.grade)),
            second.zero_part,
        )
        return Factorization(first.grade + second.grade, zero)

    if isinstance(term, Par):
        left = factorize(term.left, sig)
        right = factorize(term.right, sig)
        n1, _, _ = infer_profile(term.left, sig)
        n2, _, _ = infer_profile(term.right, sig)
        # inputs arrive as u u' x x'; bring each grade bundle next to its owner
        route = par(identity_term(n1), swap_term(n2, left.grade), identity_term(right.grade))
        zero = seq(route, par(left.zero_part, right.zero_part))
        return Factorization(left.grade + right.grade, zero)

    raise TermError(f"not a graded term: {term!r}")


def reassemble(fact: Factorization, sig: GradedSignature = IMPCIRC) -> GradedTerm:
    """The term (id_n ⊗ knight^a) ; zero_part that the factorization stands for."""
    arity, _, zgrade = infer_profile(fact.zero_part, sig)
    if zgrade != 0:
        raise TermError(f"zero part has grade {zgrade}")
    n = arity - fact.grade
    if n < 0:
        raise TermError(f"zero part arity {arity} below grade {fact.grade}")
    return seq(par(identity_term(n), knights(fact.grade)), fact.zero_part)
