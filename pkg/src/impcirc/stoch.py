"""Exact (sub)stochastic linear algebra over power-of-two dimensions.

A matrix with ``n`` input wires and ``m`` output wires is a dense grid of
``fractions.Fraction`` entries with ``2**m`` rows and ``2**n`` columns.
Basis states of an ``n``-wire bundle are bitstrings ``x_0 .. x_{n-1}`` read
left to right with ``x_0`` the high-order bit, and index ``k`` stands for
the bitstring whose numeric value is ``2**n - 1 - k``.  So index 0 is the
all-ones string and the last index is the all-zeros string; the Kronecker
product then tensors wire bundles with the left factor owning the leading
wires.

Column sums are required to stay at or below one (sub-stochasticity); a
matrix is stochastic when every column sums to exactly one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import WiringError

ZERO = Fraction(0)
ONE = Fraction(1)


def bits_to_index(bits: Sequence[int]) -> int:
    """Index of the basis state with the given bit values."""
    value = 0
    for b in bits:
        value = value * 2 + b
    return (1 << len(bits)) - 1 - value


def index_to_bits(wires: int, index: int) -> tuple[int, ...]:
    """Bit values of basis state `index` on a bundle of `wires` wires."""
    value = (1 << wires) - 1 - index
    return tuple((value >> (wires - 1 - i)) & 1 for i in range(wires))


def bitstring(wires: int, index: int) -> str:
    return "".join(str(b) for b in index_to_bits(wires, index))


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class StochMatrix:
    """A sub-stochastic matrix between wire bundles, with exact entries."""

    in_wires: int
    out_wires: int
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_rat(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n_rows, n_cols = 1 << self.out_wires, 1 << self.in_wires
        if len(rows) != n_rows or any(len(row) != n_cols for row in rows):
            raise WiringError(
                f"expected {n_rows}x{n_cols} grid for {self.in_wires}->{self.out_wires} wires"
            )
        for row in rows:
            for x in row:
                if x < 0 or x > 1:
                    raise WiringError(f"entry {x} outside [0, 1]")
        for j, s in enumerate(self.column_sums()):
            if s > 1:
                raise WiringError(f"column {j} sums to {s} > 1")

    def column_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row[j] for row in self.rows) for j in range(1 << self.in_wires))

    def is_stochastic(self) -> bool:
        """True when every column sums to exactly one."""
        return all(s == 1 for s in self.column_sums())

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows)


def _make(in_wires: int, out_wires: int, rows) -> StochMatrix:
    # Unvalidated constructor for matrices produced by the operations in
    # this package, which preserve sub-stochasticity; validating every
    # intermediate again would dominate the evaluator's runtime.
    m = object.__new__(StochMatrix)
    object.__setattr__(m, "in_wires", in_wires)
    object.__setattr__(m, "out_wires", out_wires)
    object.__setattr__(m, "rows", rows)
    return m


def identity_matrix(wires: int) -> StochMatrix:
    d = 1 << wires
    return _make(
        wires, wires, tuple(tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d))
    )


def _int_grid(rows):
    # Clearing denominators keeps the inner matmul loop in plain ints,
    # which avoids one gcd per intermediate product.
    den = lcm(*(x.denominator for row in rows for x in row)) if rows and rows[0] else 1
    grid = [[x.numerator * (den // x.denominator) for x in row] for row in rows]
    return grid, den


def _scaled(m: StochMatrix):
    got = m.__dict__.get("_int_cache")
    if got is None:
        got = _int_grid(m.rows)
        object.__setattr__(m, "_int_cache", got)
    return got


def matmul(f: StochMatrix, g: StochMatrix) -> StochMatrix:
    """Diagrammatic composite `f` then `g`; the matrix product is M(g)·M(f)."""
    if f.out_wires != g.in_wires:
        raise WiringError(f"cannot compose {f.out_wires} output wires into {g.in_wires} inputs")
    gi, gd = _scaled(g)
    fi, fd = _scaled(f)
    den = gd * fd
    # most factors are wiring matrices, so walk only the nonzero entries
    fcols_nz = [
        [(k, col[k]) for k in range(len(col)) if col[k]] for col in zip(*fi)
    ] if fi else []
    out = []
    for grow in gi:
        row = []
        for nz in fcols_nz:
            num = 0
            for k, v in nz:
                if grow[k]:
                    num += grow[k] * v
            row.append(ZERO if not num else ONE if num == den else Fraction(num, den))
        out.append(tuple(row))
    return _make(f.in_wires, g.out_wires, tuple(out))


def kron(f: StochMatrix, g: StochMatrix) -> StochMatrix:
    """Kronecker product; `f` owns the leading wires of both bundles."""
    zeros = (ZERO,) * (1 << g.in_wires)
    out = []
    for frow in f.rows:
        for grow in g.rows:
            row: list[Fraction] = []
            for a in frow:
                if not a:
                    row += zeros
                elif a == ONE:
                    row += grow
                else:
                    row += [a * b if b else ZERO for b in grow]
            out.append(tuple(row))
    return _make(f.in_wires + g.in_wires, f.out_wires + g.out_wires, tuple(out))


def swap_matrix(n: int, m: int) -> StochMatrix:
    """The block transposition sending a state u·v on n+m wires to v·u."""
    d = 1 << (n + m)
    targets = []
    for j in range(d):
        bits = index_to_bits(n + m, j)
        targets.append(bits_to_index(bits[n:] + bits[:n]))
    rows = tuple(tuple(ONE if targets[j] == i else ZERO for j in range(d)) for i in range(d))
    return _make(n + m, m + n, rows)


_F = Fraction
_FIXED_GENERATORS = {
    "del": (1, 0, ((_F(1), _F(1)),)),
    "copy": (1, 2, ((_F(1), _F(0)), (_F(0), _F(0)), (_F(0), _F(0)), (_F(0), _F(1)))),
    "and": (2, 1, ((_F(1), _F(0), _F(0), _F(0)), (_F(0), _F(1), _F(1), _F(1)))),
    "not": (1, 1, ((_F(0), _F(1)), (_F(1), _F(0)))),
    # cond keeps the first wire only when the second is 1; columns |10> and
    # |01> sum to zero, so this is the one genuinely sub-stochastic generator.
    "cond": (2, 1, ((_F(1), _F(0), _F(0), _F(0)), (_F(0), _F(0), _F(0), _F(1)))),
}


def generator_matrix(name: str, param: Fraction | None = None) -> StochMatrix:
    """Matrix of a basic circuit generator; `state` takes a bias parameter."""
    if name == "state":
        if param is None:
            raise WiringError("state needs a bias parameter")
        p = _rat(param)
        if p < 0 or p > 1:
            raise WiringError(f"state bias {p} outside [0, 1]")
        return StochMatrix(0, 1, ((p,), (ONE - p,)))
    if name not in _FIXED_GENERATORS:
        raise WiringError(f"unknown generator {name!r}")
    if param is not None:
        raise WiringError(f"generator {name!r} takes no parameter")
    n, m, rows = _FIXED_GENERATORS[name]
    return StochMatrix(n, m, rows)


def blocks(f: StochMatrix, grade_wires: int) -> list[StochMatrix]:
    """Split columns along the leading `grade_wires` wires of the input.

    Block 0 corresponds to the all-ones setting of the leading wires and the
    last block to all-zeros, matching the basis ordering.
    """
    if grade_wires < 0 or grade_wires > f.in_wires:
        raise WiringError(f"cannot split {grade_wires} leading wires off {f.in_wires}")
    rest = f.in_wires - grade_wires
    width = 1 << rest
    out = []
    for j in range(1 << grade_wires):
        cols = range(j * width, (j + 1) * width)
        out.append(
            _make(rest, f.out_wires, tuple(tuple(row[c] for c in cols) for row in f.rows))
        )
    return out


def as_subdistribution(f: StochMatrix) -> dict[str, Fraction]:
    """Read a 0-input matrix as a map from outcome bitstrings to weights."""
    if f.in_wires != 0:
        raise WiringError("only a 0-input matrix is a subdistribution")
    return {bitstring(f.out_wires, i): f.rows[i][0] for i in range(1 << f.out_wires)}


def to_json_dict(f: StochMatrix) -> dict:
    """JSON-ready form with entries as exact `num/den` strings."""
    return {
        "in": f.in_wires,
        "out": f.out_wires,
        "entries": [[str(x) for x in row] for row in f.rows],
    }


def from_json_dict(d: dict) -> StochMatrix:
    try:
        rows = tuple(tuple(Fraction(x) for x in row) for row in d["entries"])
        return StochMatrix(d["in"], d["out"], rows)
    except (KeyError, ValueError, TypeError) as exc:
        raise WiringError(f"bad matrix JSON: {exc}") from exc


def dump_json(f: StochMatrix) -> str:
    return json.dumps(to_json_dict(f), sort_keys=True)


def load_json(text: str) -> StochMatrix:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WiringError(f"bad matrix JSON: {exc}") from exc
    return from_json_dict(d)
