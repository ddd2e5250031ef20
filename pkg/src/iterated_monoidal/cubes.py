"""Little n-cubes with exact rational coordinates.

A box is a product of closed intervals [u_i, v_i] inside [0, 1]^n.  We
write c <_i d when v_i(c) <= u_i(d), i.e. an axis-i hyperplane separates the
interiors with c on the negative side.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .enumeration import enumerate_objects
from .coherence import hom_exists
from .expressions import Expression, ExpressionError, Gen, Node, is_object, leaves, pair_table, render

ZERO_Q = Fraction(0)
ONE_Q = Fraction(1)


@dataclass(frozen=True)
class Box:
    intervals: tuple  # ((u_1, v_1), ..., (u_n, v_n)) as Fractions

    def __post_init__(self):
        for u, v in self.intervals:
            if not (0 <= u < v <= 1):
                raise ValueError(f"interval [{u}, {v}] is not a nonempty subinterval of [0, 1]")

    @classmethod
    def of(cls, *intervals) -> "Box":
        return cls(tuple((Fraction(u), Fraction(v)) for u, v in intervals))

    @property
    def n(self) -> int:
        return len(self.intervals)

    def barycenter(self) -> tuple:
        return tuple((u + v) / 2 for u, v in self.intervals)

    def interiors_meet(self, other: "Box") -> bool:
        return all(u < w and z < v for (u, v), (z, w) in zip(self.intervals, other.intervals))


def below(c: Box, d: Box, axis: int) -> bool:
    """c <_axis d (axes are 1-based)."""
    return c.intervals[axis - 1][1] <= d.intervals[axis - 1][0]


@dataclass(frozen=True)
class Configuration:
    n: int
    labels: tuple
    boxes: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.boxes) or len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct and match the boxes")
        for b in self.boxes:
            if b.n != self.n:
                raise ValueError(f"box of dimension {b.n} in a {self.n}-cube configuration")
        for b, c in combinations(self.boxes, 2):
            if b.interiors_meet(c):
                raise ValueError("little cubes must have disjoint interiors")

    @property
    def k(self) -> int:
        return len(self.boxes)

    def box(self, label: int) -> Box:
        return self.boxes[self.labels.index(label)]

    def relabel(self, mapping) -> "Configuration":
        return Configuration(self.n, tuple(mapping[a] for a in self.labels), self.boxes)

    def sub(self, labels) -> "Configuration":
        keep = set(labels)
        pairs = [(a, b) for a, b in zip(self.labels, self.boxes) if a in keep]
        return Configuration(self.n, tuple(a for a, _ in pairs), tuple(b for _, b in pairs))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "boxes": [
                {"label": a, "intervals": [[str(u), str(v)] for u, v in b.intervals]}
                for a, b in sorted(zip(self.labels, self.boxes))
            ],
        }

    @classmethod
    def from_json(cls, data) -> "Configuration":
        if isinstance(data, str):
            data = json.loads(data)
        labels, boxes = [], []
        for entry in data["boxes"]:
            labels.append(int(entry["label"]))
            boxes.append(Box.of(*[(Fraction(u), Fraction(v)) for u, v in entry["intervals"]]))
        return cls(int(data["n"]), tuple(labels), tuple(boxes))

    def to_svg(self, size: int = 400) -> str:
        if self.n != 2:
            raise ValueError("SVG output is only available for n = 2")
        s = size
        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {s} {s}" width="{s}" height="{s}">',
            f'<rect x="0" y="0" width="{s}" height="{s}" fill="none" stroke="black"/>',
        ]
        for a, b in sorted(zip(self.labels, self.boxes)):
            (u1, v1), (u2, v2) = b.intervals
            x, y = float(u1) * s, (1 - float(v2)) * s
            w, h = float(v1 - u1) * s, float(v2 - u2) * s
            cx, cy = x + w / 2, y + h / 2
            out.append(f'<rect x="{x:g}" y="{y:g}" width="{w:g}" height="{h:g}" fill="#dde" stroke="black"/>')
            out.append(f'<text x="{cx:g}" y="{cy:g}" text-anchor="middle" dominant-baseline="middle">{a}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def configuration(n: int, boxes: dict) -> Configuration:
    """Build from ``{label: [(u, v), ...]}`` with anything ``Fraction`` accepts."""
    labels = tuple(sorted(boxes))
    return Configuration(n, labels, tuple(Box.of(*boxes[a]) for a in labels))


# ------------------------------------------------------------------ G and F

def _check_labels(c: Configuration, a: Expression):
    if sorted(c.labels) != sorted(leaves(a)):
        raise ExpressionError("configuration labels do not match the expression")


def in_G(c: Configuration, a: Expression) -> bool:
    """Every relation a #i b of the expression holds as c_a <_i c_b."""
    _check_labels(c, a)
    if len(c.labels) < 2:
        return True
    t = pair_table(a, max(c.n, 1))
    for x, y in t.pairs():
        op, first = t.rel(x, y)
        if op > c.n:
            return False
        second = y if first == x else x
        if not below(c.box(first), c.box(second), op):
            return False
    return True


def _relabel_to_standard(c: Configuration, a: Expression):
    """Both renamed so the labels are 1..k (M_n(k) is enumerated on 1..k)."""
    ls = sorted(leaves(a))
    ren = {x: i + 1 for i, x in enumerate(ls)}
    from .expressions import relabel

    return c.relabel(ren), relabel(a, ren), len(ls)


def in_F(c: Configuration, a: Expression, n: int | None = None) -> bool:
    """c lies in G(X) for some X -> A."""
    _check_labels(c, a)
    n = c.n if n is None else n
    c2, a2, k = _relabel_to_standard(c, a)
    return any(in_G(c2, x) for x in enumerate_objects(n, k) if hom_exists(x, a2))


def realize(a: Expression, n: int) -> Configuration:
    """Canonical point of G(A): a #i node cuts its box into equal slabs along axis i."""
    if not is_object(a):
        raise ExpressionError("realize needs distinct generators")
    out: dict = {}

    def go(x, box):
        if isinstance(x, Gen):
            out[x.label] = box
        elif isinstance(x, Node):
            if x.op > n:
                raise ExpressionError(f"operation #{x.op} needs n >= {x.op}")
            u, v = box[x.op - 1]
            m = len(x.children)
            for r, child in enumerate(x.children):
                sub = list(box)
                sub[x.op - 1] = (u + (v - u) * r / m, u + (v - u) * (r + 1) / m)
                go(child, tuple(sub))

    go(a, tuple((ZERO_Q, ONE_Q) for _ in range(n)))
    labels = tuple(sorted(out))
    return Configuration(n, labels, tuple(Box(out[x]) for x in labels))


# --------------------------------------------------------- decomposability

def clumps(boxes: Sequence[Box], axis: int) -> list[list[int]]:
    """Indices of ``boxes`` grouped into maximal runs whose axis-projections overlap.

    Consecutive groups are separated by a hyperplane perpendicular to ``axis``
    missing every interior; the grouping is the finest such.
    """
    order = sorted(range(len(boxes)), key=lambda i: boxes[i].intervals[axis - 1])
    groups: list[list[int]] = []
    reach = None
    for i in order:
        u, v = boxes[i].intervals[axis - 1]
        if reach is None or u >= reach:
            groups.append([i])
            reach = v
        else:
            groups[-1].append(i)
            reach = max(reach, v)
    return groups


def decomposable(c: Configuration, mode: str = "plain") -> bool:
    """Recursive hyperplane separability: any axis order (plain) or axes 1..n in turn (milgram)."""
    boxes = list(c.boxes)
    if mode == "plain":
        return _plain(boxes, c.n)
    if mode == "milgram":
        return _milgram(boxes, 1, c.n)
    raise ValueError(f"unknown mode {mode!r}")


def _plain(boxes, n) -> bool:
    if len(boxes) <= 1:
        return True
    for axis in range(1, n + 1):
        groups = clumps(boxes, axis)
        if len(groups) >= 2:
            return all(_plain([boxes[i] for i in g], n) for g in groups)
    return False


def _milgram(boxes, axis, n) -> bool:
    if len(boxes) <= 1:
        return True
    if axis > n:
        return False
    return all(_milgram([boxes[i] for i in g], axis + 1, n) for g in clumps(boxes, axis))


def shrink(c: Configuration) -> Configuration:
    """Clamp every side to m/(2k) about the barycenter, m the least l-inf barycenter distance."""
    if c.k <= 1:
        return c
    centers = [b.barycenter() for b in c.boxes]
    m = min(max(abs(p - q) for p, q in zip(x, y)) for x, y in combinations(centers, 2))
    side = m / (2 * c.k)
    boxes = []
    for b, ctr in zip(c.boxes, centers):
        iv = []
        for (u, v), z in zip(b.intervals, ctr):
            iv.append((u, v) if v - u <= side else (z - side / 2, z + side / 2))
        boxes.append(Box(tuple(iv)))
    return Configuration(c.n, c.labels, tuple(boxes))


# ------------------------------------------------------------ compatibility

def axis_constraints(a: Expression, b: Expression, n: int) -> dict[int, set]:
    """Edges x -> y on axis i whenever either expression demands c_x <_i c_y."""
    edges: dict[int, set] = {i: set() for i in range(1, n + 1)}
    for e in (a, b):
        t = pair_table(e, n)
        for x, y in t.pairs():
            op, first = t.rel(x, y)
            edges[op].add((first, y if first == x else x))
    return edges


def g_compatible(a: Expression, b: Expression, n: int):
    """Decide G(A) ∩ G(B) ≠ ∅; returns ``(answer, witness or None)``."""
    if sorted(leaves(a)) != sorted(leaves(b)):
        raise ExpressionError("expressions must have the same generators")
    labels = sorted(leaves(a))
    layers: dict[int, dict] = {}
    for axis, edges in axis_constraints(a, b, n).items():
        depth = _longest_path_layers(labels, edges)
        if depth is None:
            return False, None
        layers[axis] = depth
    boxes = []
    for x in labels:
        iv = []
        for axis in range(1, n + 1):
            depth = layers[axis]
            width = max(depth.values()) + 1
            iv.append((Fraction(depth[x], width), Fraction(depth[x] + 1, width)))
        boxes.append(Box(tuple(iv)))
    return True, Configuration(n, tuple(labels), tuple(boxes))


def _longest_path_layers(nodes, edges):
    """Longest-path depth of every node, or None if the digraph has a cycle."""
    preds = {x: [] for x in nodes}
    indeg = {x: 0 for x in nodes}
    for s, t in edges:
        preds[t].append(s)
        indeg[t] += 1
    succ = {x: [] for x in nodes}
    for s, t in edges:
        succ[s].append(t)
    depth = {x: 0 for x in nodes}
    ready = [x for x in nodes if indeg[x] == 0]
    seen = 0
    while ready:
        x = ready.pop()
        seen += 1
        for y in succ[x]:
            depth[y] = max(depth[y], depth[x] + 1)
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    return depth if seen == len(nodes) else None


# -------------------------------------------------------------- operad maps

def cubes_compose(outer: Configuration, inners: Sequence[Configuration]) -> Configuration:
    """Affinely place inner j into outer box j; inner labels are shifted blockwise."""
    k = outer.k
    if len(inners) != k or sorted(outer.labels) != list(range(1, k + 1)):
        raise ValueError(f"outer has arity {k} but {len(inners)} inputs were given")
    labels, boxes = [], []
    offset = 0
    for j, inner in enumerate(inners, start=1):
        if inner.n != outer.n or sorted(inner.labels) != list(range(1, inner.k + 1)):
            raise ValueError("inner configurations must share n and use labels 1..m")
        host = outer.box(j)
        for a, b in zip(inner.labels, inner.boxes):
            iv = tuple(
                (u + (v - u) * z, u + (v - u) * w) for (u, v), (z, w) in zip(host.intervals, b.intervals)
            )
            labels.append(a + offset)
            boxes.append(Box(iv))
        offset += inner.k
    order = sorted(range(len(labels)), key=lambda i: labels[i])
    return Configuration(outer.n, tuple(labels[i] for i in order), tuple(boxes[i] for i in order))


def permute_configuration(c: Configuration, sigma: Sequence[int]) -> Configuration:
    """Rename box a to sigma[a-1]."""
    return c.relabel({a: sigma[a - 1] for a in c.labels})


# ---------------------------------------------------------------- sampling

def random_configuration(rng: random.Random, n: int, k: int, denominator: int = 64,
                         max_side: Fraction = Fraction(1, 2), attempts: int = 10_000) -> Configuration:
    """Rejection-sample k boxes with disjoint interiors on a rational grid."""
    top = int(max_side * denominator)
    for _ in range(attempts):
        boxes: list[Box] = []
        for _ in range(k):
            for _ in range(200):
                iv = []
                for _ in range(n):
                    w = rng.randint(1, top)
                    u = rng.randint(0, denominator - w)
                    iv.append((Fraction(u, denominator), Fraction(u + w, denominator)))
                cand = Box(tuple(iv))
                if not any(cand.interiors_meet(b) for b in boxes):
                    boxes.append(cand)
                    break
            else:
                break
        if len(boxes) == k:
            return Configuration(n, tuple(range(1, k + 1)), tuple(boxes))
    raise RuntimeError("could not sample a configuration; lower max_side")


def g_membership(c: Configuration, objects: Sequence[Expression]) -> list[Expression]:
    """The objects X (on c's labels) with c in G(X)."""
    return [x for x in objects if in_G(c, x)]


def describe(c: Configuration) -> str:
    parts = []
    for a, b in sorted(zip(c.labels, c.boxes)):
        parts.append(f"{a}: " + " x ".join(f"[{u},{v}]" for u, v in b.intervals))
    return "; ".join(parts)


__all__ = [
    "Box", "Configuration", "configuration", "below", "in_G", "in_F", "realize", "clumps",
    "decomposable", "shrink", "g_compatible", "axis_constraints", "cubes_compose",
    "permute_configuration", "random_configuration", "g_membership", "describe", "render",
]
