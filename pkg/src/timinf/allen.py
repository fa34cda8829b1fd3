"""Allen's interval algebra: base relations, composition, constraint networks.

Two intervals stand in exactly one of 13 qualitative relations.  Incomplete
knowledge is a set of candidate relations; an empty set means the constraints
are contradictory.  Networks of interval constraints are tightened to a
path-consistent fixpoint by ``closure``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Endpoint = Union[int, float, Fraction]


class Allen(enum.Enum):
    """The 13 base interval relations, with their conventional symbols."""

    BEFORE = "<"
    AFTER = ">"
    MEETS = "m"
    MET_BY = "mi"
    OVERLAPS = "o"
    OVERLAPPED_BY = "oi"
    DURING = "d"
    CONTAINS = "di"
    STARTS = "s"
    STARTED_BY = "si"
    FINISHES = "f"
    FINISHED_BY = "fi"
    EQUALS = "="

    @property
    def symbol(self) -> str:
        return self.value

    @property
    def inverse(self) -> "Allen":
        return _INVERSE[self]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Allen.{self.name}"


_INVERSE = {
    Allen.BEFORE: Allen.AFTER,
    Allen.AFTER: Allen.BEFORE,
    Allen.MEETS: Allen.MET_BY,
    Allen.MET_BY: Allen.MEETS,
    Allen.OVERLAPS: Allen.OVERLAPPED_BY,
    Allen.OVERLAPPED_BY: Allen.OVERLAPS,
    Allen.DURING: Allen.CONTAINS,
    Allen.CONTAINS: Allen.DURING,
    Allen.STARTS: Allen.STARTED_BY,
    Allen.STARTED_BY: Allen.STARTS,
    Allen.FINISHES: Allen.FINISHED_BY,
    Allen.FINISHED_BY: Allen.FINISHES,
    Allen.EQUALS: Allen.EQUALS,
}

BY_SYMBOL = {r.value: r for r in Allen}

#: A constraint between two intervals: the set of relations still possible.
RelationSet = frozenset

FULL: RelationSet = frozenset(Allen)
EMPTY: RelationSet = frozenset()


def invert(r: Allen) -> Allen:
    """Inverse relation: if X r Y then Y invert(r) X."""
    return _INVERSE[r]


def invert_set(s: Iterable[Allen]) -> RelationSet:
    """Element-wise inverse of a relation set."""
    return frozenset(_INVERSE[r] for r in s)


def parse_set(text: str) -> RelationSet:
    """Parse a relation set from symbols or names ("< m" or "before,meets")."""
    members = set()
    for token in text.replace(",", " ").split():
        if token in BY_SYMBOL:
            members.add(BY_SYMBOL[token])
        else:
            try:
                members.add(Allen[token.upper()])
            except KeyError:
                raise ValueError(f"unknown interval relation: {token!r}") from None
    return frozenset(members)


def format_set(s: Iterable[Allen]) -> str:
    """Render a relation set using the conventional symbols, in table order."""
    order = {r: i for i, r in enumerate(Allen)}
    return " ".join(r.value for r in sorted(s, key=order.get))


class DegenerateIntervalError(ValueError):
    """An interval whose start does not strictly precede its end."""


@dataclass(frozen=True)
class ConcreteInterval:
    """An interval with explicit rational endpoints; zero length is rejected."""

    start: Endpoint
    end: Endpoint

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise DegenerateIntervalError(
                f"interval start must precede end, got [{self.start}, {self.end}]"
            )


def relate_concrete(a: ConcreteInterval, b: ConcreteInterval) -> Allen:
    """The unique base relation between two concrete intervals."""
    if a.end < b.start:
        return Allen.BEFORE
    if b.end < a.start:
        return Allen.AFTER
    if a.end == b.start:
        return Allen.MEETS
    if b.end == a.start:
        return Allen.MET_BY
    if a.start == b.start and a.end == b.end:
        return Allen.EQUALS
    if a.start == b.start:
        return Allen.STARTS if a.end < b.end else Allen.STARTED_BY
    if a.end == b.end:
        return Allen.FINISHES if a.start > b.start else Allen.FINISHED_BY
    if a.start < b.start:
        return Allen.OVERLAPS if a.end < b.end else Allen.CONTAINS
    return Allen.DURING if a.end < b.end else Allen.OVERLAPPED_BY


# The 169 transitivity entries: given X r1 Y and Y r2 Z, the relations possible
# between X and Z.  Kept as an explicit constant; the test suite re-derives it
# by exhaustive enumeration of integer-endpoint intervals.
_COMPOSITION_SYMBOLS = {
    "< <": "<",
    "< >": "< > m mi o oi d di s si f fi =",
    "< m": "<",
    "< mi": "< m o d s",
    "< o": "<",
    "< oi": "< m o d s",
    "< d": "< m o d s",
    "< di": "<",
    "< s": "<",
    "< si": "<",
    "< f": "< m o d s",
    "< fi": "<",
    "< =": "<",
    "> <": "< > m mi o oi d di s si f fi =",
    "> >": ">",
    "> m": "> mi oi d f",
    "> mi": ">",
    "> o": "> mi oi d f",
    "> oi": ">",
    "> d": "> mi oi d f",
    "> di": ">",
    "> s": "> mi oi d f",
    "> si": ">",
    "> f": ">",
    "> fi": ">",
    "> =": ">",
    "m <": "<",
    "m >": "> mi oi di si",
    "m m": "<",
    "m mi": "s si f fi =",
    "m o": "<",
    "m oi": "o oi d di s si f fi =",
    "m d": "o d s",
    "m di": "<",
    "m s": "m",
    "m si": "m",
    "m f": "o d s",
    "m fi": "<",
    "m =": "m",
    "mi <": "< m o di fi",
    "mi >": ">",
    "mi m": "s si f fi =",
    "mi mi": ">",
    "mi o": "o oi d di s si f fi =",
    "mi oi": ">",
    "mi d": "oi d f",
    "mi di": ">",
    "mi s": "oi d f",
    "mi si": ">",
    "mi f": "mi",
    "mi fi": "mi",
    "mi =": "mi",
    "o <": "<",
    "o >": "> mi oi di si",
    "o m": "<",
    "o mi": "oi di si",
    "o o": "< m o",
    "o oi": "o oi d di s si f fi =",
    "o d": "o d s",
    "o di": "< m o di fi",
    "o s": "o",
    "o si": "o di fi",
    "o f": "o d s",
    "o fi": "< m o",
    "o =": "o",
    "oi <": "< m o di fi",
    "oi >": ">",
    "oi m": "o di fi",
    "oi mi": ">",
    "oi o": "o oi d di s si f fi =",
    "oi oi": "> mi oi",
    "oi d": "oi d f",
    "oi di": "> mi oi di si",
    "oi s": "oi d f",
    "oi si": "> mi oi",
    "oi f": "oi",
    "oi fi": "oi di si",
    "oi =": "oi",
    "d <": "<",
    "d >": ">",
    "d m": "<",
    "d mi": ">",
    "d o": "< m o d s",
    "d oi": "> mi oi d f",
    "d d": "d",
    "d di": "< > m mi o oi d di s si f fi =",
    "d s": "d",
    "d si": "> mi oi d f",
    "d f": "d",
    "d fi": "< m o d s",
    "d =": "d",
    "di <": "< m o di fi",
    "di >": "> mi oi di si",
    "di m": "o di fi",
    "di mi": "oi di si",
    "di o": "o di fi",
    "di oi": "oi di si",
    "di d": "o oi d di s si f fi =",
    "di di": "di",
    "di s": "o di fi",
    "di si": "di",
    "di f": "oi di si",
    "di fi": "di",
    "di =": "di",
    "s <": "<",
    "s >": ">",
    "s m": "<",
    "s mi": "mi",
    "s o": "< m o",
    "s oi": "oi d f",
    "s d": "d",
    "s di": "< m o di fi",
    "s s": "s",
    "s si": "s si =",
    "s f": "d",
    "s fi": "< m o",
    "s =": "s",
    "si <": "< m o di fi",
    "si >": ">",
    "si m": "o di fi",
    "si mi": "mi",
    "si o": "o di fi",
    "si oi": "oi",
    "si d": "oi d f",
    "si di": "di",
    "si s": "s si =",
    "si si": "si",
    "si f": "oi",
    "si fi": "di",
    "si =": "si",
    "f <": "<",
    "f >": ">",
    "f m": "m",
    "f mi": ">",
    "f o": "o d s",
    "f oi": "> mi oi",
    "f d": "d",
    "f di": "> mi oi di si",
    "f s": "d",
    "f si": "> mi oi",
    "f f": "f",
    "f fi": "f fi =",
    "f =": "f",
    "fi <": "<",
    "fi >": "> mi oi di si",
    "fi m": "m",
    "fi mi": "oi di si",
    "fi o": "o",
    "fi oi": "oi di si",
    "fi d": "o d s",
    "fi di": "di",
    "fi s": "o",
    "fi si": "di",
    "fi f": "f fi =",
    "fi fi": "fi",
    "fi =": "fi",
    "= <": "<",
    "= >": ">",
    "= m": "m",
    "= mi": "mi",
    "= o": "o",
    "= oi": "oi",
    "= d": "d",
    "= di": "di",
    "= s": "s",
    "= si": "si",
    "= f": "f",
    "= fi": "fi",
    "= =": "=",
}

COMPOSITION: dict[tuple[Allen, Allen], RelationSet] = {
    (BY_SYMBOL[key.split()[0]], BY_SYMBOL[key.split()[1]]): parse_set(value)
    for key, value in _COMPOSITION_SYMBOLS.items()
}


def compose(r1: Allen, r2: Allen) -> RelationSet:
    """Relations possible between X and Z given X r1 Y and Y r2 Z."""
    return COMPOSITION[(r1, r2)]


def compose_sets(s1: Iterable[Allen], s2: Iterable[Allen]) -> RelationSet:
    """Pointwise lift of compose; an empty argument absorbs to the empty set."""
    out: set = set()
    for r1 in s1:
        for r2 in s2:
            out |= COMPOSITION[(r1, r2)]
            if len(out) == 13:
                return FULL
    return frozenset(out)


class InconsistentNetwork(Exception):
    """Raised when propagation empties an edge: the constraints contradict.

    This is a domain outcome, not a programming error; callers that need the
    result as a value should catch it.
    """

    def __init__(self, i, j):
        super().__init__(f"no relation remains possible between {i!r} and {j!r}")
        self.edge = (i, j)


@dataclass
class TemporalNetwork:
    """A binary constraint network over interval-valued nodes.

    Edges are kept for both orientations; ``edge(j, i)`` is always the
    element-wise inverse of ``edge(i, j)``.  Missing edges read as the full
    set (no information).
    """

    _nodes: set = field(default_factory=set)
    _edges: dict = field(default_factory=dict)

    @property
    def nodes(self) -> frozenset:
        return frozenset(self._nodes)

    def add_node(self, node) -> None:
        self._nodes.add(node)

    def edge(self, i, j) -> RelationSet:
        if i == j:
            return frozenset({Allen.EQUALS}) if i in self._nodes else FULL
        return self._edges.get((i, j), FULL)

    def constrain(self, i, j, relations: Iterable[Allen]) -> RelationSet:
        """Intersect edge(i, j) with ``relations``; returns the new edge.

        Both orientations are updated.  An empty result is stored as-is so
        that closure can report it; callers may also check the return value.
        """
        if i == j:
            raise ValueError("self-edges are fixed to {equals}")
        self._nodes.add(i)
        self._nodes.add(j)
        new = self.edge(i, j) & frozenset(relations)
        self._edges[(i, j)] = new
        self._edges[(j, i)] = invert_set(new)
        return new

    def constrained_pairs(self) -> list:
        """Ordered pairs (i, j) carrying explicit constraints."""
        return list(self._edges.keys())

    def copy(self) -> "TemporalNetwork":
        dup = TemporalNetwork()
        dup._nodes = set(self._nodes)
        dup._edges = dict(self._edges)
        return dup

    def __eq__(self, other) -> bool:
        if not isinstance(other, TemporalNetwork):
            return NotImplemented
        if self._nodes != other._nodes:
            return False
        for i in self._nodes:
            for j in self._nodes:
                if i != j and self.edge(i, j) != other.edge(i, j):
                    return False
        return True


def closure(net: TemporalNetwork) -> TemporalNetwork:
    """Tighten ``net`` to its path-consistency fixpoint.

    Repeatedly refines edge(i, k) with compose(edge(i, j), edge(j, k)) until
    nothing changes, using a work queue of touched edges.  Raises
    InconsistentNetwork as soon as an edge becomes empty.
    """
    out = net.copy()
    nodes = sorted(out.nodes, key=repr)
    queue = list(out.constrained_pairs())
    seen = set(queue)

    def tighten(x, y, candidate) -> None:
        current = out.edge(x, y)
        new = current & candidate
        if new == current:
            return
        out.constrain(x, y, new)
        if not new:
            raise InconsistentNetwork(x, y)
        for touched in ((x, y), (y, x)):
            if touched not in seen:
                seen.add(touched)
                queue.append(touched)

    while queue:
        i, j = queue.pop(0)
        seen.discard((i, j))
        rel_ij = out.edge(i, j)
        if not rel_ij:
            raise InconsistentNetwork(i, j)
        for k in nodes:
            if k == i or k == j:
                continue
            # i--j--k tightens (i, k); k--i--j tightens (k, j)
            tighten(i, k, compose_sets(rel_ij, out.edge(j, k)))
            tighten(k, j, compose_sets(out.edge(k, i), rel_ij))
    return out
