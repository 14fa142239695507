"""Partner structure of a finite ultrametric space.

Two points are partners when their mutual distance is simultaneously the
minimum distance from each of them to the rest of the space. Being
partners is an equivalence relation on the set of partnered points, and
the resulting classes drive everything else in this package: they
describe all metric bases, the unique 2-metric basis, and the minimal
basis-preserving subspace.

A point that is not partnered still attains its minimum somewhere (the
space is finite); it is called pseudopartnered. Points whose minimum is
not attained cannot exist here, so the ``Unpartnered`` tag is only part
of the vocabulary, never a classification result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import UltrametricSpace
from .errors import InternalInvariantError

INFINITY = math.inf


@dataclass(frozen=True)
class Partnered:
    """The point reciprocates minimum distance with every listed partner."""

    partners: tuple[str, ...]
    min_dist: Fraction


@dataclass(frozen=True)
class Pseudopartnered:
    """Minimum attained on ``nearest``, but no element reciprocates it."""

    nearest: tuple[str, ...]
    min_dist: Fraction


@dataclass(frozen=True)
class Unpartnered:
    """Minimum distance not attained; impossible in a finite space."""


PointClass = Partnered | Pseudopartnered | Unpartnered


@dataclass(frozen=True)
class PartnerPartition:
    """Every point of the space, sorted into partner classes or the rest.

    ``classes`` are the equivalence classes of the partner relation (each
    of size >= 2, all pairwise distances within a class equal);
    ``unpartnered`` is always empty for finite spaces and kept only so the
    shape of the classification is explicit.
    """

    classes: tuple[tuple[str, ...], ...]
    pseudopartnered: tuple[str, ...]
    unpartnered: tuple[str, ...] = ()

    @property
    def partnered(self) -> tuple[str, ...]:
        """P(X): all partnered points, sorted."""
        return tuple(sorted(lab for cls in self.classes for lab in cls))

    def class_of(self, label: str) -> tuple[str, ...] | None:
        for cls in self.classes:
            if label in cls:
                return cls
        return None


def _min_offdiag_ranks(space: UltrametricSpace):
    """Per-point minimum off-diagonal rank (the rank of its nearest distance)."""
    arr = space.rank_array.copy()
    n = space.n
    big = len(space.table) + 1
    arr[range(n), range(n)] = big
    return arr.min(axis=1)


def nearest_set(space: UltrametricSpace, x: str) -> tuple[tuple[str, ...], Fraction]:
    """All points realizing min_{z != x} d(x, z), with that minimum."""
    i = space.index(x)
    row = space.ranks[i]
    m = min(r for j, r in enumerate(row) if j != i)
    members = tuple(sorted(space.labels[j] for j, r in enumerate(row) if j != i and r == m))
    return members, space.table.value(m)


def classify_point(space: UltrametricSpace, x: str) -> PointClass:
    """Partnered with its full reciprocating set, else pseudopartnered.

    Finite spaces never yield ``Unpartnered``: the minimum below is taken
    over finitely many positive distances.
    """
    i = space.index(x)
    mins = _min_offdiag_ranks(space)
    nearest = [j for j in range(space.n) if j != i and space.ranks[i][j] == mins[i]]
    reciprocating = [j for j in nearest if mins[j] == mins[i]]
    min_dist = space.table.value(int(mins[i]))
    if reciprocating:
        return Partnered(
            partners=tuple(sorted(space.labels[j] for j in reciprocating)),
            min_dist=min_dist,
        )
    return Pseudopartnered(
        nearest=tuple(sorted(space.labels[j] for j in nearest)),
        min_dist=min_dist,
    )


def partner_partition(space: UltrametricSpace) -> PartnerPartition:
    """Split X into partner classes and pseudopartnered points.

    Classes are connected components of the partner relation; the theory
    makes the relation transitive on partnered points, so components are
    genuine equivalence classes. That and the equal-distance invariant
    are re-checked here because the rest of the package builds on them.
    """
    mins = _min_offdiag_ranks(space)
    n = space.n
    ranks = space.rank_array

    partners_of: dict[int, list[int]] = {}
    for i in range(n):
        mates = [
            j
            for j in range(n)
            if j != i and ranks[i][j] == mins[i] and mins[j] == mins[i]
        ]
        if mates:
            partners_of[i] = mates

    classes: list[tuple[str, ...]] = []
    seen: set[int] = set()
    for i in sorted(partners_of, key=lambda i: space.labels[i]):
        if i in seen:
            continue
        stack, component = [i], {i}
        while stack:
            cur = stack.pop()
            for j in partners_of[cur]:
                if j not in component:
                    component.add(j)
                    stack.append(j)
        seen |= component
        members = sorted(space.labels[j] for j in component)
        common = mins[i]
        for a in component:
            for b in component:
                if a != b and ranks[a][b] != common:
                    raise InternalInvariantError(
                        f"partner class {members} has unequal internal distances"
                    )
        classes.append(tuple(members))

    classes.sort(key=lambda cls: cls[0])
    partnered = {lab for cls in classes for lab in cls}
    pseudo = tuple(sorted(set(space.labels) - partnered))
    if not classes:
        raise InternalInvariantError("finite space without partner points")
    return PartnerPartition(classes=tuple(classes), pseudopartnered=pseudo)


@dataclass(frozen=True)
class TraceStep:
    point: str
    dist: Fraction | float  # math.inf on the first step only


@dataclass(frozen=True)
class PseudopartneringTrace:
    """Greedy nearest-point descent from ``start``.

    ``steps[k]`` holds the k-th visited point together with the distance
    at which it was entered (infinity for the start). The walk stops when
    the open ball of the current radius around the current point contains
    nothing else; that last point is ``terminal`` and is always partnered.
    """

    start: str
    steps: tuple[TraceStep, ...]
    terminal: str
    terminal_class: Partnered

    @property
    def dists(self) -> tuple[Fraction | float, ...]:
        return tuple(s.dist for s in self.steps)


def pseudopartnering_trace(space: UltrametricSpace, x: str) -> PseudopartneringTrace:
    """Run the descent from ``x``, breaking ties by smallest label.

    Each move goes to the nearest point strictly inside the current ball,
    so the entry distances strictly decrease and (the space being finite)
    the walk visits at most n points.
    """
    cur = space.index(x)
    radius = len(space.table) + 1  # sentinel rank above every real distance
    steps = [TraceStep(point=x, dist=INFINITY)]

    for _ in range(space.n):
        row = space.ranks[cur]
        inside = [j for j in range(space.n) if j != cur and row[j] < radius]
        if not inside:
            break
        best = min(row[j] for j in inside)
        nxt = min(
            (j for j in inside if row[j] == best),
            key=lambda j: space.labels[j],
        )
        steps.append(TraceStep(point=space.labels[nxt], dist=space.table.value(best)))
        cur, radius = nxt, best
    else:
        raise InternalInvariantError("pseudopartnering trace exceeded the point count")

    terminal = space.labels[cur]
    cls = classify_point(space, terminal)
    if not isinstance(cls, Partnered):
        raise InternalInvariantError(
            f"trace terminal {terminal!r} is not partnered; finite theory forbids this"
        )
    return PseudopartneringTrace(
        start=x, steps=tuple(steps), terminal=terminal, terminal_class=cls
    )
