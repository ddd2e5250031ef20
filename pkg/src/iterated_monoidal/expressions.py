"""Objects of the free n-fold monoidal category on a set of labels.

An expression is built from generators (positive integer labels), the unit
``0`` and n strictly associative products.  Values are always kept in
canonical form: a ``Node`` never has a child with the same operation and
never has a ``Zero`` child, so structural equality is equality of objects.

Concrete syntax: ``#i`` denotes the i-th product, e.g. ``(2 #2 3) #1 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence, Union


class ExpressionError(ValueError):
    pass


class ParseError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True, slots=True)
class Zero:
    def __repr__(self) -> str:
        return "Zero"


@dataclass(frozen=True, slots=True)
class Gen:
    label: int

    def __repr__(self) -> str:
        return f"Gen({self.label})"


@dataclass(frozen=True, slots=True)
class Node:
    op: int
    children: tuple

    def __repr__(self) -> str:
        return f"Node({self.op}, {list(self.children)!r})"


Expression = Union[Zero, Gen, Node]
ZERO = Zero()


def box(i: int, parts: Iterable[Expression]) -> Expression:
    """The i-th product of ``parts``, flattened and with units absorbed."""
    if i < 1:
        raise ExpressionError(f"operation index must be positive, got {i}")
    children = []
    for part in parts:
        if isinstance(part, Zero):
            continue
        if isinstance(part, Node) and part.op == i:
            children.extend(part.children)
        else:
            children.append(part)
    if not children:
        return ZERO
    if len(children) == 1:
        return children[0]
    return Node(i, tuple(children))


def gens(*labels: int) -> tuple:
    return tuple(Gen(a) for a in labels)


def leaves(e: Expression) -> tuple:
    """Generator labels in reading order."""
    out: list[int] = []

    def walk(x):
        if isinstance(x, Gen):
            out.append(x.label)
        elif isinstance(x, Node):
            for c in x.children:
                walk(c)

    walk(e)
    return tuple(out)


def max_op(e: Expression) -> int:
    if isinstance(e, Node):
        return max(e.op, max(max_op(c) for c in e.children))
    return 0


def is_canonical(e: Expression) -> bool:
    if isinstance(e, Node):
        if len(e.children) < 2:
            return False
        for c in e.children:
            if isinstance(c, Zero) or (isinstance(c, Node) and c.op == e.op):
                return False
            if not is_canonical(c):
                return False
    return True


def has_distinct_leaves(e: Expression) -> bool:
    ls = leaves(e)
    return len(set(ls)) == len(ls)


def is_object(e: Expression, k: int | None = None) -> bool:
    """True if ``e`` uses each label once (and exactly 1..k when k is given)."""
    ls = leaves(e)
    if len(set(ls)) != len(ls):
        return False
    return k is None or sorted(ls) == list(range(1, k + 1))


# --------------------------------------------------------------------- syntax

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<sym>[#()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), m.start("int")))
        else:
            tokens.append((m.group("sym"), m.group("sym"), m.start("sym")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Expression:
        parts = [self.atom()]
        op = None
        while self.peek()[0] == "#":
            hash_pos = self.take("#")[2]
            tok = self.take("int")
            i = int(tok[1])
            if i < 1 or i > self.n:
                raise ParseError(f"operation #{i} outside 1..{self.n}", tok[2])
            if op is not None and i != op:
                raise ParseError(
                    f"mixed operations #{op} and #{i} at one level; add parentheses", hash_pos
                )
            op = i
            parts.append(self.atom())
        if op is None:
            return parts[0]
        return box(op, parts)

    def atom(self) -> Expression:
        tok = self.peek()
        if tok[0] == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if tok[0] == "int":
            self.take("int")
            value = int(tok[1])
            return ZERO if value == 0 else Gen(value)
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"expected a label, '0' or '(', found {what}", tok[2])


def parse(text: str, n: int, *, distinct: bool = False, k: int | None = None) -> Expression:
    """Parse concrete syntax into a canonical expression.

    With ``distinct`` (or ``k``) the result must use every label at most once
    (and exactly the labels 1..k when ``k`` is given).
    """
    p = _Parser(text, n)
    e = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    if distinct or k is not None:
        ls = leaves(e)
        seen = set()
        for a in ls:
            if a in seen:
                raise ExpressionError(f"duplicate generator {a}")
            seen.add(a)
        if k is not None and sorted(ls) != list(range(1, k + 1)):
            raise ExpressionError(f"labels {sorted(ls)} are not exactly 1..{k}")
    return e


def render(e: Expression) -> str:
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Gen):
        return str(e.label)
    sep = f" #{e.op} "
    return sep.join(render(c) if not isinstance(c, Node) else f"({render(c)})" for c in e.children)


def sort_key(e: Expression) -> str:
    return render(e)


# ----------------------------------------------------------- label operations

def restrict(e: Expression, labels: Iterable[int]) -> Expression:
    """Send every generator outside ``labels`` to the unit and re-canonicalize."""
    keep = frozenset(labels)

    def go(x):
        if isinstance(x, Gen):
            return x if x.label in keep else ZERO
        if isinstance(x, Node):
            return box(x.op, [go(c) for c in x.children])
        return x

    return go(e)


def relabel(e: Expression, mapping: Mapping[int, int]) -> Expression:
    """Rename generators; labels missing from ``mapping`` are kept."""
    ls = leaves(e)
    images = [mapping.get(a, a) for a in ls]
    if len(set(images)) != len(set(ls)):
        raise ExpressionError("relabelling map is not injective on the generators")

    def go(x):
        if isinstance(x, Gen):
            return Gen(mapping.get(x.label, x.label))
        if isinstance(x, Node):
            return Node(x.op, tuple(go(c) for c in x.children))
        return x

    return go(e)


def permute(e: Expression, sigma: Sequence[int]) -> Expression:
    """Relabel by a permutation given in one-line notation (a -> sigma[a-1]).

    Labels above len(sigma) are kept, so the result stays injective.
    """
    m = len(sigma)
    if sorted(sigma) != list(range(1, m + 1)):
        raise ExpressionError(f"{list(sigma)} is not a permutation of 1..{m}")

    def go(x):
        if isinstance(x, Gen):
            return Gen(sigma[x.label - 1]) if 1 <= x.label <= m else x
        if isinstance(x, Node):
            return Node(x.op, tuple(go(c) for c in x.children))
        return x

    return go(e)


def is_level_ordered(e: Expression) -> bool:
    """Operation indices strictly increase from the root to every leaf."""

    def go(x, parent):
        if isinstance(x, Node):
            if x.op <= parent:
                return False
            return all(go(c, x.op) for c in x.children)
        return True

    return go(e, 0)


def subterms(e: Expression, path: tuple = ()) -> Iterator[tuple[tuple, Expression]]:
    """Yield ``(path, subterm)`` for every subterm, root first."""
    yield path, e
    if isinstance(e, Node):
        for idx, c in enumerate(e.children):
            yield from subterms(c, path + (idx,))


def replace_at(e: Expression, path: Sequence[int], new: Expression) -> Expression:
    """Replace the subterm at ``path`` and re-canonicalize along the way up."""
    if not path:
        return new
    assert isinstance(e, Node)
    idx = path[0]
    child = replace_at(e.children[idx], path[1:], new)
    return box(e.op, e.children[:idx] + (child,) + e.children[idx + 1:])


# ------------------------------------------------------------------ PairTable

@dataclass(frozen=True)
class PairTable:
    """Colour and orientation of every pair of labels.

    ``order`` is the total order inducing the orientation (a before b means
    the edge a -> b) and ``colors[p]`` is the colour of the p-th pair in
    ``combinations(sorted(labels), 2)``.
    """

    n: int
    order: tuple
    colors: tuple

    def __post_init__(self):
        k = len(self.order)
        if len(set(self.order)) != k:
            raise ExpressionError("PairTable order repeats a label")
        if len(self.colors) != k * (k - 1) // 2:
            raise ExpressionError("PairTable needs one colour per pair of labels")
        if self.colors and (min(self.colors) < 1 or max(self.colors) > self.n):
            bad = next(c for c in self.colors if not 1 <= c <= self.n)
            raise ExpressionError(f"colour {bad} outside 1..{self.n}")

    @cached_property
    def labels(self) -> tuple:
        return tuple(sorted(self.order))

    @cached_property
    def position(self) -> dict:
        return {a: i for i, a in enumerate(self.order)}

    @cached_property
    def _pair_index(self) -> dict:
        return {p: i for i, p in enumerate(combinations(self.labels, 2))}

    def pairs(self) -> list:
        return list(combinations(self.labels, 2))

    def color(self, a: int, b: int) -> int:
        return self.colors[self._pair_index[(a, b) if a < b else (b, a)]]

    def first(self, a: int, b: int) -> int:
        return a if self.position[a] < self.position[b] else b

    def rel(self, a: int, b: int) -> tuple[int, int]:
        """``(op, first)`` for the unordered pair {a, b}."""
        return self.color(a, b), self.first(a, b)

    @classmethod
    def from_rels(cls, n: int, labels: Iterable[int], rels: Mapping) -> "PairTable":
        """Build from ``{(a, b): (op, first)}``; raises if orientations are cyclic."""
        labels = sorted(labels)
        wins = {a: 0 for a in labels}
        colors = []
        for a, b in combinations(labels, 2):
            op, first = rels[(a, b)] if (a, b) in rels else rels[(b, a)]
            if first not in (a, b):
                raise ExpressionError(f"first={first} is not in the pair {{{a},{b}}}")
            colors.append(op)
            wins[first] += 1
        order = tuple(sorted(labels, key=lambda a: -wins[a]))
        # a transitive tournament has out-degrees k-1, ..., 0
        if sorted(wins.values()) != list(range(len(labels))):
            raise ExpressionError("orientation is not a transitive tournament")
        table = cls(n, order, tuple(colors))
        for a, b in combinations(labels, 2):
            op, first = rels[(a, b)] if (a, b) in rels else rels[(b, a)]
            if table.first(a, b) != first:
                raise ExpressionError("orientation is not a transitive tournament")
        return table

    def restrict(self, labels: Iterable[int]) -> "PairTable":
        keep = set(labels)
        order = tuple(a for a in self.order if a in keep)
        colors = tuple(self.color(a, b) for a, b in combinations(sorted(order), 2))
        return PairTable(self.n, order, colors)

    def to_json(self) -> dict:
        rels = [
            {"a": a, "b": b, "op": self.color(a, b), "first": self.first(a, b)}
            for a, b in self.pairs()
        ]
        return {"n": self.n, "labels": list(self.labels), "rels": rels}

    @classmethod
    def from_json(cls, data: Mapping) -> "PairTable":
        rels = {(r["a"], r["b"]): (r["op"], r["first"]) for r in data["rels"]}
        return cls.from_rels(data["n"], data["labels"], rels)


def pair_table(e: Expression, n: int | None = None) -> PairTable:
    """Relation a #i b for every pair, read off at the least common ancestor."""
    if not has_distinct_leaves(e):
        raise ExpressionError("pair table needs pairwise distinct generators")
    if n is None:
        n = max(max_op(e), 1)
    rel: dict = {}

    def walk(x):
        if isinstance(x, Node):
            blocks = [leaves(c) for c in x.children]
            for p, q in combinations(range(len(blocks)), 2):
                for a in blocks[p]:
                    for b in blocks[q]:
                        rel[(a, b) if a < b else (b, a)] = x.op
            for c in x.children:
                walk(c)

    walk(e)
    order = leaves(e)
    colors = tuple(rel[p] for p in combinations(sorted(order), 2))
    return PairTable(n, order, colors)


def from_pair_table(t: PairTable) -> Expression | None:
    """The unique expression with fingerprint ``t``, or ``None`` if none exists.

    At each level the top operation is the one admitting a cut of the
    (ordered) label sequence with every crossing pair of that colour; the
    finest such partition gives the children.
    """

    def build(seq: tuple):
        if len(seq) == 0:
            return ZERO
        if len(seq) == 1:
            return Gen(seq[0])
        found = {}
        for cut in range(1, len(seq)):
            cs = {t.color(a, b) for a in seq[:cut] for b in seq[cut:]}
            if len(cs) == 1:
                found.setdefault(cs.pop(), []).append(cut)
        if not found:
            return None
        assert len(found) == 1, "two operations admit a global split"
        (op, cuts), = found.items()
        bounds = [0] + cuts + [len(seq)]
        children = []
        for lo, hi in zip(bounds, bounds[1:]):
            c = build(seq[lo:hi])
            if c is None:
                return None
            children.append(c)
        return Node(op, tuple(children))

    return build(t.order)
