"""Evaluation of graded terms into block-stochastic matrices.

A term with profile (n, m, a) denotes a sub-stochastic matrix whose input
bundle carries the a grade wires first, then the n ordinary inputs; the
output bundle is the m ordinary outputs.  Splitting the input columns
along the grade wires reads the morphism as 2**a sub-stochastic blocks,
one per nondeterministic branch.

The composition formulas route grade wires explicitly:

* regrading precomposes with the embedded injection on the grade wires;
* ``Seq(f, g)`` keeps f's grade wires before g's, so a crossing moves g's
  grade bundle out of the way before f consumes its own;
* ``Par(f, g)`` likewise collects both grade bundles up front.

Composites with the crossings and embeddings are pure column reindexings,
so they are applied as index gathers rather than dense matrix products;
the multiplication that actually mixes weights happens blockwise.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import permutations

from .errors import EvalLimitError, NotComparable, TermError
from .grading import Injection, embed
from .stoch import (
    StochMatrix,
    _make,
    bits_to_index,
    blocks,
    generator_matrix,
    identity_matrix,
    index_to_bits,
    kron,
    matmul,
    swap_matrix,
)
from .terms import (
    IMPCIRC,
    Gen,
    GradedSignature,
    GradedTerm,
    Id0,
    Id1,
    Par,
    Profile,
    Regrade,
    Seq,
    Swap,
    infer_profile,
)

DEFAULT_MAX_WIRES = 14


@dataclass(frozen=True)
class GradedMorphism:
    """A profile together with its 2**coarity x 2**(grade+arity) matrix."""

    profile: Profile
    matrix: StochMatrix

    def branch_matrices(self) -> list[StochMatrix]:
        """One sub-stochastic block per setting of the grade wires."""
        return blocks(self.matrix, self.profile.grade)


def wire_limit() -> int:
    """Wire budget for evaluation, from IMPCIRC_MAX_WIRES when set."""
    raw = os.environ.get("IMPCIRC_MAX_WIRES")
    if raw is None:
        return DEFAULT_MAX_WIRES
    try:
        return int(raw)
    except ValueError:
        raise EvalLimitError(f"IMPCIRC_MAX_WIRES={raw!r} is not an integer") from None


def _select_columns(m: StochMatrix, in_wires: int, colmap) -> StochMatrix:
    # Composite of m with a deterministic 0/1 matrix: gather columns.
    rows = tuple(tuple(row[j] for j in colmap) for row in m.rows)
    return _make(in_wires, m.out_wires, rows)


def _check(profile: Profile, limit: int):
    if profile.grade + profile.arity > limit or profile.coarity > limit:
        raise EvalLimitError(
            f"term needs {max(profile.grade + profile.arity, profile.coarity)} wires,"
            f" over the limit of {limit}"
        )


def evaluate(
    term: GradedTerm, sig: GradedSignature = IMPCIRC, max_wires: int | None = None
) -> GradedMorphism:
    """Evaluate a term; raises TermError if ill-formed, EvalLimitError if huge."""
    limit = wire_limit() if max_wires is None else max_wires
    infer_profile(term, sig)  # reject ill-formed terms with the usual diagnostics
    return _eval(term, sig, limit)


def _eval(term: GradedTerm, sig: GradedSignature, limit: int) -> GradedMorphism:
    if isinstance(term, Gen):
        decl = sig.lookup(term)
        profile = Profile(decl.arity, decl.coarity, decl.grade)
        if term.name == "knight":
            # the branch wire feeds straight through to the output
            return GradedMorphism(profile, identity_matrix(1))
        return GradedMorphism(profile, generator_matrix(term.name, term.param))
    if isinstance(term, Id0):
        return GradedMorphism(Profile(0, 0, 0), identity_matrix(0))
    if isinstance(term, Id1):
        return GradedMorphism(Profile(1, 1, 0), identity_matrix(1))
    if isinstance(term, Swap):
        return GradedMorphism(Profile(2, 2, 0), swap_matrix(1, 1))

    if isinstance(term, Regrade):
        ev = _eval(term.body, sig, limit)
        n = ev.profile.arity
        r = term.regrading
        b, a = r.dom_grade, r.cod_grade
        profile = Profile(n, ev.profile.coarity, b)
        _check(profile, limit)
        colmap = []
        for j in range(1 << (b + n)):
            bits = index_to_bits(b + n, j)
            grade_bits, in_bits = bits[:b], bits[b:]
            colmap.append(bits_to_index(tuple(grade_bits[v] for v in r.map) + in_bits))
        return GradedMorphism(profile, _select_columns(ev.matrix, b + n, colmap))

    if isinstance(term, Seq):
        ef = _eval(term.first, sig, limit)
        eg = _eval(term.second, sig, limit)
        n, m, a = ef.profile
        _, l, b = eg.profile
        profile = Profile(n, l, a + b)
        _check(profile, limit)
        # blockwise product over g's grade wires, then put f's grade first
        g_blocks = blocks(eg.matrix, b)
        stacked = _hstack([matmul(ef.matrix, gb) for gb in g_blocks], a + n, l)
        if a == 0 or b == 0:  # the grade shuffle is trivial
            return GradedMorphism(profile, stacked)
        colmap = []
        for j in range(1 << (a + b + n)):
            bits = index_to_bits(a + b + n, j)
            colmap.append(bits_to_index(bits[a : a + b] + bits[:a] + bits[a + b :]))
        return GradedMorphism(profile, _select_columns(stacked, a + b + n, colmap))

    if isinstance(term, Par):
        ef = _eval(term.left, sig, limit)
        eg = _eval(term.right, sig, limit)
        n, m, a = ef.profile
        n2, m2, b = eg.profile
        profile = Profile(n + n2, m + m2, a + b)
        _check(profile, limit)
        k = kron(ef.matrix, eg.matrix)  # columns read (a, n, b, n2)
        if n == 0 or b == 0:  # the middle blocks need no crossing
            return GradedMorphism(profile, k)
        colmap = []
        for j in range(1 << (a + b + n + n2)):
            bits = index_to_bits(a + b + n + n2, j)
            rearranged = (
                bits[:a] + bits[a + b : a + b + n] + bits[a : a + b] + bits[a + b + n :]
            )
            colmap.append(bits_to_index(rearranged))
        return GradedMorphism(profile, _select_columns(k, a + b + n + n2, colmap))

    raise TermError(f"not a graded term: {term!r}")


def _hstack(parts: list[StochMatrix], in_wires_each: int, out_wires: int) -> StochMatrix:
    if len(parts) == 1:
        return parts[0]
    extra = (len(parts) - 1).bit_length()
    rows = tuple(
        tuple(x for part in parts for x in part.rows[i]) for i in range(1 << out_wires)
    )
    return _make(in_wires_each + extra, out_wires, rows)


def eval_ungraded(term: GradedTerm, sig: GradedSignature = IMPCIRC) -> StochMatrix:
    """Plain circuit evaluation by matmul/kron; rejects graded constructs.

    This is deliberately independent of `evaluate`: on 0-graded terms the
    two must agree, which pins the graded formulas down on the fragment
    where ordinary circuit semantics already says what is right.
    """
    if isinstance(term, Gen):
        decl = sig.lookup(term)
        if decl.grade != 0:
            raise TermError(f"generator {term.name!r} is graded")
        return generator_matrix(term.name, term.param)
    if isinstance(term, Id0):
        return identity_matrix(0)
    if isinstance(term, Id1):
        return identity_matrix(1)
    if isinstance(term, Swap):
        return swap_matrix(1, 1)
    if isinstance(term, Seq):
        return matmul(eval_ungraded(term.first, sig), eval_ungraded(term.second, sig))
    if isinstance(term, Par):
        return kron(eval_ungraded(term.left, sig), eval_ungraded(term.right, sig))
    if isinstance(term, Regrade):
        raise TermError("regrading is not an ungraded construct")
    raise TermError(f"not a graded term: {term!r}")


def equal(s: GradedTerm, t: GradedTerm, sig: GradedSignature = IMPCIRC) -> bool:
    """Exact semantic equality; profiles must match or NotComparable is raised."""
    es = evaluate(s, sig)
    et = evaluate(t, sig)
    if es.profile != et.profile:
        raise NotComparable(f"profiles differ: {tuple(es.profile)} vs {tuple(et.profile)}")
    return es.matrix == et.matrix


def regrade_morphism(ev: GradedMorphism, r: Injection) -> GradedMorphism:
    """Apply a regrading directly to an evaluated morphism."""
    n = ev.profile.arity
    if r.cod_grade != ev.profile.grade:
        raise NotComparable(
            f"regrading target grade {r.cod_grade} != morphism grade {ev.profile.grade}"
        )
    b = r.dom_grade
    colmap = []
    for j in range(1 << (b + n)):
        bits = index_to_bits(b + n, j)
        colmap.append(bits_to_index(tuple(bits[:b][v] for v in r.map) + bits[b:]))
    return GradedMorphism(
        Profile(n, ev.profile.coarity, b), _select_columns(ev.matrix, b + n, colmap)
    )


def equal_up_to_regrading(
    s: GradedTerm, t: GradedTerm, sig: GradedSignature = IMPCIRC
) -> Injection | None:
    """Search for an injection that regrades the lower-grade term onto the other.

    Returns a witness whose source grade is the larger of the two grades, or
    None when no injection works.  Arities and coarities must agree.
    """
    es = evaluate(s, sig)
    et = evaluate(t, sig)
    if (es.profile.arity, es.profile.coarity) != (et.profile.arity, et.profile.coarity):
        raise NotComparable(
            f"wire profiles differ: {tuple(es.profile)} vs {tuple(et.profile)}"
        )
    high, low = (es, et) if es.profile.grade >= et.profile.grade else (et, es)
    a, b = high.profile.grade, low.profile.grade
    for p in permutations(range(a), b):
        r = Injection(a, b, p)
        if regrade_morphism(low, r).matrix == high.matrix:
            return r
    return None
