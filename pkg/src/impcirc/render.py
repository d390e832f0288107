"""Rendering: terms to Graphviz DOT, run results to CSV and figures.

The DOT view draws one box per generator with wires flowing left to
right.  Grade wires enter from a bottom rank of ports and are drawn
dashed; a regrading shows up as its own box reindexing those ports.
Identities and crossings are pure wiring and produce edges only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .errors import TermError
from .lang import RunResult
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
    infer_profile,
)


class _Net:
    """One wire: a source endpoint, a sink endpoint, union-find merged."""

    __slots__ = ("parent", "source", "sink", "grade")

    def __init__(self, grade: bool = False):
        self.parent = self
        self.source = None
        self.sink = None
        self.grade = grade

    def find(self) -> "_Net":
        node = self
        while node.parent is not node:
            node.parent = node.parent.parent
            node = node.parent
        return node


def _merge(a: _Net, b: _Net):
    a, b = a.find(), b.find()
    if a is b:
        return
    if (a.source and b.source) or (a.sink and b.sink):
        raise TermError("wire connected twice on the same side")
    b.parent = a
    a.source = a.source or b.source
    a.sink = a.sink or b.sink
    a.grade = a.grade or b.grade


@dataclass
class _Frag:
    inputs: list
    outputs: list
    grades: list
    nodes: list = field(default_factory=list)  # (node_id, label)


class _Builder:
    def __init__(self, sig: GradedSignature):
        self.sig = sig
        self.counter = 0
        self.nets: list[_Net] = []

    def node_id(self) -> str:
        self.counter += 1
        return f"n{self.counter}"

    def net(self, grade=False) -> _Net:
        net = _Net(grade)
        self.nets.append(net)
        return net

    def build(self, term: GradedTerm) -> _Frag:
        if isinstance(term, Gen):
            decl = self.sig.lookup(term)
            nid = self.node_id()
            label = term.name if term.param is None else f"{term.name} {term.param}"
            ins, outs, grs = [], [], []
            for i in range(decl.arity):
                net = self.net()
                net.sink = (nid, f"in{i}")
                ins.append(net)
            for i in range(decl.coarity):
                net = self.net()
                net.source = (nid, f"out{i}")
                outs.append(net)
            for i in range(decl.grade):
                net = self.net(grade=True)
                net.sink = (nid, f"g{i}")
                grs.append(net)
            frag = _Frag(ins, outs, grs)
            frag.nodes.append((nid, label))
            return frag
        if isinstance(term, Id0):
            return _Frag([], [], [])
        if isinstance(term, Id1):
            net = self.net()
            return _Frag([net], [net], [])
        if isinstance(term, Swap):
            a, b = self.net(), self.net()
            return _Frag([a, b], [b, a], [])
        if isinstance(term, Seq):
            f = self.build(term.first)
            g = self.build(term.second)
            for left, right in zip(f.outputs, g.inputs):
                _merge(left, right)
            frag = _Frag(f.inputs, g.outputs, f.grades + g.grades)
            frag.nodes = f.nodes + g.nodes
            return frag
        if isinstance(term, Par):
            f = self.build(term.left)
            g = self.build(term.right)
            frag = _Frag(
                f.inputs + g.inputs, f.outputs + g.outputs, f.grades + g.grades
            )
            frag.nodes = f.nodes + g.nodes
            return frag
        if isinstance(term, Regrade):
            f = self.build(term.body)
            r = term.regrading
            nid = self.node_id()
            for i, net in enumerate(f.grades):
                _merge_source(net, (nid, f"out{i}"))
            fresh = []
            for i in range(r.dom_grade):
                net = self.net(grade=True)
                net.sink = (nid, f"in{i}")
                fresh.append(net)
            frag = _Frag(f.inputs, f.outputs, fresh)
            frag.nodes = f.nodes + [(nid, str(r))]
            return frag
        raise TermError(f"not a graded term: {term!r}")


def _merge_source(net: _Net, endpoint):
    root = net.find()
    if root.source:
        raise TermError("grade wire already driven")
    root.source = endpoint


def term_to_dot(term: GradedTerm, sig: GradedSignature = IMPCIRC, name: str = "diagram") -> str:
    """Graphviz source for a term's string diagram."""
    profile = infer_profile(term, sig)
    builder = _Builder(sig)
    frag = builder.build(term)

    lines = [
        f"digraph {name} {{",
        "  rankdir=LR;",
        "  node [shape=box, fontname=monospace];",
    ]
    for i, net in enumerate(frag.inputs):
        port = f"in{i}"
        lines.append(f'  {port} [shape=point, xlabel="{port}"];')
        _merge_source(net, (port, None))
    for i, net in enumerate(frag.outputs):
        port = f"out{i}"
        lines.append(f'  {port} [shape=point, xlabel="{port}"];')
        root = net.find()
        if root.sink:
            raise TermError("output wire already consumed")
        root.sink = (port, None)
    for i, net in enumerate(frag.grades):
        port = f"grade{i}"
        lines.append(f'  {port} [shape=point, xlabel="{port}"];')
        _merge_source(net, (port, None))
    for nid, label in frag.nodes:
        lines.append(f'  {nid} [label="{label}"];')

    seen = set()
    for net in builder.nets:
        root = net.find()
        if id(root) in seen:
            continue
        seen.add(id(root))
        if root.source is None or root.sink is None:
            continue  # dangling nets cannot occur in well-typed terms
        style = " [style=dashed]" if root.grade else ""
        lines.append(f"  {root.source[0]} -> {root.sink[0]}{style};")
    lines.append(
        f'  label="arity {profile.arity}, coarity {profile.coarity}, grade {profile.grade}";'
    )
    lines.append("}")
    return "\n".join(lines) + "\n"


def count_boxes(dot: str, label: str) -> int:
    """How many generator boxes with the given label a DOT source contains."""
    return sum(1 for line in dot.splitlines() if f'[label="{label}"]' in line)


# ----------------------------------------------------------------- report


def write_report(result: RunResult, out_dir: Path, stem: str) -> list[Path]:
    """Write a CSV of branch outcomes and a bar-chart figure next to it."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}_branches.csv"
    png_path = out_dir / f"{stem}_distribution.png"

    with open(csv_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["branch", "outcome", "weight", "normalized"])
        for b in result.branches:
            label = b.bits if b.bits else "-"
            for outcome, weight in b.dist.items():
                norm = "" if b.normalized is None else str(b.normalized[outcome])
                writer.writerow([label, outcome, str(weight), norm])

    n = len(result.branches)
    fig, axes = plt.subplots(n, 1, figsize=(6, 2.2 * n), squeeze=False)
    for ax, b in zip(axes[:, 0], result.branches):
        outcomes = list(b.dist)
        ax.bar(outcomes, [float(v) for v in b.dist.values()], color="#4878a8")
        label = b.bits if b.bits else "-"
        ax.set_title(f"branch {label} (mass {b.mass})", fontsize=10)
        ax.set_ylim(0, 1)
        ax.set_ylabel("weight")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
