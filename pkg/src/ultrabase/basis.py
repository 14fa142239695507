"""Metric generators, bases and dimensions of a finite ultrametric space.

The structure theory makes these computations combinatorial instead of
exhaustive: a set is a metric basis exactly when it takes every partner
class except one freely chosen element of each, the set of all partnered
points P(X) is the unique 2-metric basis, and no set whatsoever is a
3-metric generator (a partner pair is distinguished only by itself).
The brute-force counterparts used to cross-check all of this live in
:mod:`ultrabase.oracle`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .core import UltrametricSpace
from .errors import InternalInvariantError, NotBasisError, UsageError
from .partner import partner_partition

DEFAULT_ENUMERATION_CAP = 10_000


def distinguishes(space: UltrametricSpace, z: str, x: str, y: str) -> bool:
    """True when d(x,z) != d(y,z)."""
    if x == y:
        raise UsageError("distinguishes needs two distinct points")
    return space.rank(x, z) != space.rank(y, z)


def distinguishers(space: UltrametricSpace, x: str, y: str) -> tuple[str, ...]:
    """All points telling x and y apart; always contains x and y themselves."""
    if x == y:
        raise UsageError("distinguishers needs two distinct points")
    i, j = space.index(x), space.index(y)
    return tuple(
        lab
        for lab in sorted(space.labels)
        if space.ranks[i][space.index(lab)] != space.ranks[j][space.index(lab)]
    )


@dataclass(frozen=True)
class GeneratorCheck:
    """Outcome of a k-generator test, with a witness pair on failure."""

    ok: bool
    k: int
    witness: tuple[str, str] | None = None
    witness_count: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _landmark_indices(space: UltrametricSpace, landmarks: Iterable[str]) -> list[int]:
    idx = sorted({space.index(s) for s in landmarks})
    return idx


def is_k_generator(space: UltrametricSpace, landmarks: Iterable[str], k: int) -> GeneratorCheck:
    """Does every pair of points have at least k distinguishers in the set?

    On failure the witness is the lexicographically first failing pair,
    together with how many landmarks actually distinguish it. An empty
    landmark set simply fails (witness: the first pair), it is not an
    error.
    """
    if k < 1:
        raise UsageError("k must be a positive integer")
    cols = _landmark_indices(space, landmarks)
    ranks = space.rank_array
    n = space.n
    if cols:
        sub = ranks[:, cols]
        counts = (sub[:, None, :] != sub[None, :, :]).sum(axis=2)
    else:
        counts = np.zeros((n, n), dtype=int)

    failing = [
        (x, y)
        for x, y in itertools.combinations(sorted(space.labels), 2)
        if counts[space.index(x), space.index(y)] < k
    ]
    if not failing:
        return GeneratorCheck(ok=True, k=k)
    x, y = failing[0]
    return GeneratorCheck(
        ok=False,
        k=k,
        witness=(x, y),
        witness_count=int(counts[space.index(x), space.index(y)]),
    )


@dataclass(frozen=True)
class BasisFamily:
    """All metric bases, in product form.

    A concrete basis drops exactly one freely chosen element from each
    partner class and keeps everything else of P(X); pseudopartnered
    points never appear. The family is kept unexpanded because ``count``
    (the product of the class sizes) can be exponential in n.
    """

    classes: tuple[tuple[str, ...], ...]
    count: int

    @property
    def dim1(self) -> int:
        return sum(len(cls) - 1 for cls in self.classes)

    @property
    def choice_space(self) -> tuple[tuple[str, ...], ...]:
        """Per class, the elements that may be the dropped one (all of them)."""
        return self.classes

    @property
    def required_core(self) -> frozenset[str]:
        """Points forced into every basis.

        Empty whenever each class offers a real choice, which is always
        the case here since partner classes have at least two members.
        """
        return frozenset(cls[0] for cls in self.classes if len(cls) == 1)

    def bases(self, cap: int | None = DEFAULT_ENUMERATION_CAP) -> Iterator[tuple[str, ...]]:
        """Yield concrete bases as sorted tuples, at most ``cap`` of them.

        The first basis yielded drops the largest element of every class,
        which makes it the lexicographically smallest basis.
        """
        pool = sorted(lab for cls in self.classes for lab in cls)
        dropped_choices = [tuple(sorted(cls, reverse=True)) for cls in self.classes]
        for i, dropped in enumerate(itertools.product(*dropped_choices)):
            if cap is not None and i >= cap:
                return
            out = set(dropped)
            yield tuple(lab for lab in pool if lab not in out)

    def is_basis(self, landmarks: Iterable[str]) -> bool:
        """Membership test against the product form, without enumeration."""
        s = set(landmarks)
        covered = 0
        for cls in self.classes:
            inside = sum(1 for lab in cls if lab in s)
            if inside < len(cls) - 1:
                return False
            covered += inside
        # every landmark must lie in some class, and each class misses one element
        return covered == len(s) and len(s) == self.dim1


def metric_bases(space: UltrametricSpace) -> BasisFamily:
    """Product-form description of every metric basis of the space."""
    partition = partner_partition(space)
    count = math.prod(len(cls) for cls in partition.classes)
    return BasisFamily(classes=partition.classes, count=count)


def two_metric_basis(space: UltrametricSpace) -> tuple[str, ...]:
    """P(X), the unique set distinguishing every pair twice at minimum size."""
    return partner_partition(space).partnered


@dataclass(frozen=True)
class DimensionReport:
    n: int
    dim1: int
    dim2: int
    max_k: int = 2  # largest k admitting a k-metric basis; always 2 here

    def __post_init__(self):
        if not (1 <= self.dim1 <= self.n - 1 and 2 <= self.dim2 <= self.n):
            raise InternalInvariantError(
                f"dimension bounds violated: n={self.n} dim1={self.dim1} dim2={self.dim2}"
            )


def dimensions(space: UltrametricSpace) -> DimensionReport:
    """Metric dimensions from the partner classes.

    dim1 sums (class size - 1) over the partner classes, dim2 counts the
    partnered points. Both always satisfy 1 <= dim1 <= n-1 and
    2 <= dim2 <= n.
    """
    partition = partner_partition(space)
    return DimensionReport(
        n=space.n,
        dim1=sum(len(cls) - 1 for cls in partition.classes),
        dim2=sum(len(cls) for cls in partition.classes),
    )


def _require_basis(space: UltrametricSpace, landmarks: Iterable[str]) -> tuple[str, ...]:
    """Normalize a landmark set and raise NotBasisError unless it is a basis."""
    s = tuple(sorted({lab for lab in landmarks}))
    for lab in s:
        space.index(lab)
    check = is_k_generator(space, s, 1)
    if not check.ok:
        assert check.witness is not None
        x, y = check.witness
        raise NotBasisError(
            f"{{{', '.join(s)}}} is not a metric generator: "
            f"pair ({x},{y}) has no distinguisher in it",
            witness=(x, y),
        )
    family = metric_bases(space)
    if not family.is_basis(s):
        raise NotBasisError(
            f"{{{', '.join(s)}}} is a metric generator but not a basis "
            f"(size {len(s)}, dimension {family.dim1})"
        )
    return s


def minimal_subspace(space: UltrametricSpace, landmarks: Iterable[str]) -> UltrametricSpace:
    """Smallest subspace still having the given basis as a metric basis.

    That subspace is the restriction to P(X): dropping any partnered
    point breaks some partner class and with it the basis property, while
    every pseudopartnered point is redundant.
    """
    _require_basis(space, landmarks)
    return space.restrict(partner_partition(space).partnered)


def is_basis_of_subspace(
    space: UltrametricSpace, landmarks: Iterable[str], subspace_points: Iterable[str]
) -> bool:
    """Does the basis transfer structurally to the restriction?

    Returns whether the restriction contains all of P(X). When it does,
    the partner classes survive unchanged and the landmark set is a
    metric basis of the restriction for the same structural reason it is
    one of the full space; that implication is re-verified here by a
    direct generator-plus-minimality check on the restricted space.

    The converse does not hold: cutting away a point's only partners can
    let the survivor pair up with a formerly pseudopartnered point, and
    the landmark set may then be a basis of the small space by accident
    (e.g. 1/min on {1..4}: {3} is a basis of the restriction to {2,3}
    even though the partnered set {3,4} does not survive). This function
    reports False for such restrictions; use
    ``metric_bases(space.restrict(points)).is_basis(landmarks)`` to query
    the restriction in its own right.
    """
    s = _require_basis(space, landmarks)
    sub = {lab for lab in subspace_points}
    for lab in sub:
        space.index(lab)
    if not set(s) <= sub:
        raise UsageError("the subspace must contain every landmark")

    structural = set(partner_partition(space).partnered) <= sub

    if structural:
        restricted = space.restrict(sub)
        direct = is_k_generator(restricted, s, 1).ok and all(
            not is_k_generator(restricted, [t for t in s if t != drop], 1).ok
            for drop in s
        )
        if not direct:
            raise InternalInvariantError(
                f"restriction to {sorted(sub)} contains every partnered point "
                f"but the direct basis check failed"
            )
    return structural
