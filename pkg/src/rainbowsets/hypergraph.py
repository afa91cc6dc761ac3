"""Ground sets, k-subset colourings, sunflower audits and conflict hypergraphs.

Vertices are dense indices 0..N-1; the application modules keep the mapping
from indices to domain objects (points, integers).  Everything here is exact:
colour values are compared for equality only, never approximately.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

from .errors import BudgetError, ParameterError
from .keys import canonical_key

# Exhaustive operations refuse to touch more k-subsets than this unless the
# caller raises the budget explicitly; they fail loudly rather than sample.
DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class GroundSet:
    """Dense vertex ids 0..n-1."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("ground set needs at least one vertex")

    @property
    def vertices(self) -> range:
        return range(self.n)


@dataclass(frozen=True)
class ColouringSpec:
    """Edge size k, sunflower core size h, and the claimed petal bound.

    ``max_petals`` is the colouring's promise: no monochromatic family of
    k-edges sharing h common vertices has more members than this.
    """

    k: int
    h: int
    max_petals: int

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError("edge size k must be at least 1")
        if not 0 <= self.h < self.k:
            raise ParameterError(f"core size must satisfy 0 <= h < k, got h={self.h}, k={self.k}")
        if self.max_petals < 1:
            raise ParameterError("petal bound must be at least 1")


@dataclass(frozen=True, eq=False)
class Colouring:
    """A pure deterministic map from k-subsets of the ground set to colours.

    The evaluator receives the subset as a sorted tuple of vertex ids and
    returns an exact hashable value (int, Fraction, tuple, ...).  Use
    ``colour`` for arbitrary id order and ``colour_key`` for the canonical
    byte serialization.
    """

    spec: ColouringSpec
    evaluator: Callable[[tuple[int, ...]], object]
    label: str

    def colour(self, edge) -> object:
        e = tuple(sorted(edge))
        if len(e) != self.spec.k:
            raise ParameterError(f"edge must have {self.spec.k} vertices, got {len(e)}")
        for a, b in zip(e, e[1:]):
            if a == b:
                raise ParameterError("edge vertices must be distinct")
        return self.evaluator(e)

    def colour_key(self, edge) -> bytes:
        return canonical_key(self.colour(edge))


@dataclass(frozen=True)
class SunflowerReport:
    """Worst monochromatic sunflower found: its core, colour and petal edges."""

    core: tuple[int, ...]
    colour: bytes
    petals: int
    witness_edges: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ConflictEdge:
    """The union A∪B shared by one or more monochromatic k-edge pairs."""

    vertices: tuple[int, ...]
    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


@dataclass(frozen=True)
class ConflictHypergraph:
    """Conflict structure whose independent sets are exactly the rainbow sets.

    Each edge records the union of a pair of distinct same-coloured k-edges;
    a subset of the ground set is rainbow iff it contains no recorded pair
    with both members inside it.
    """

    ground: GroundSet
    k: int
    edges: tuple[ConflictEdge, ...]

    @property
    def num_pairs(self) -> int:
        return sum(len(e.pairs) for e in self.edges)

    def iter_pairs(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        for edge in self.edges:
            yield from edge.pairs

    def pair_degrees(self) -> list[int]:
        """Number of generating pairs whose union contains each vertex."""
        deg = [0] * self.ground.n
        for edge in self.edges:
            weight = len(edge.pairs)
            for v in edge.vertices:
                deg[v] += weight
        return deg


def enumerate_ksubsets(ground: GroundSet, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of the ground set as sorted tuples, in lexicographic order."""
    if not 1 <= k <= ground.n:
        raise ParameterError(f"k={k} out of range for ground set of size {ground.n}")
    return combinations(ground.vertices, k)


def _require_budget(amount: int, budget: int, what: str) -> None:
    if amount > budget:
        raise BudgetError(f"{what} needs {amount} enumeration steps; budget is {budget}")


def colour_classes(
    colouring: Colouring, ground: GroundSet, budget: int = DEFAULT_BUDGET
) -> dict[bytes, list[tuple[int, ...]]]:
    """Group every k-subset of the ground set by its canonical colour key."""
    k = colouring.spec.k
    if k > ground.n:
        raise ParameterError(f"k={k} exceeds ground set size {ground.n}")
    _require_budget(math.comb(ground.n, k), budget, "colour_classes")
    classes: dict[bytes, list[tuple[int, ...]]] = defaultdict(list)
    ev = colouring.evaluator
    for e in combinations(ground.vertices, k):
        classes[canonical_key(ev(e))].append(e)
    return dict(classes)


def max_monochromatic_sunflower(
    colouring: Colouring, ground: GroundSet, h: int, budget: int = DEFAULT_BUDGET
) -> SunflowerReport:
    """Find the (core, colour) pair collecting the most same-coloured k-edges.

    Every k-edge of every colour class is bucketed under each of its h-element
    subsets; the report is the fullest bucket.  For h = 0 the core is empty and
    the petal count is the size of the largest colour class.  Deterministic:
    colour classes are scanned in key order and cores in sorted order, and only
    a strictly fuller bucket replaces the incumbent.
    """
    k = colouring.spec.k
    if not 0 <= h < k:
        raise ParameterError(f"core size must satisfy 0 <= h < k, got h={h}")
    if ground.n < k:
        raise ParameterError(f"need at least k={k} vertices, got {ground.n}")
    _require_budget(math.comb(ground.n, k) * math.comb(k, h), budget, "sunflower audit")
    classes = colour_classes(colouring, ground, budget=budget)
    best: SunflowerReport | None = None
    for key in sorted(classes):
        buckets: dict[tuple[int, ...], list[tuple[int, ...]]] = defaultdict(list)
        for e in classes[key]:
            for core in combinations(e, h):
                buckets[core].append(e)
        for core in sorted(buckets):
            petals = len(buckets[core])
            if best is None or petals > best.petals:
                best = SunflowerReport(
                    core=core, colour=key, petals=petals, witness_edges=tuple(buckets[core])
                )
    assert best is not None
    return best


def validate_lambda(
    colouring: Colouring, ground: GroundSet, budget: int = DEFAULT_BUDGET
) -> tuple[bool, SunflowerReport]:
    """Audit the colouring's declared petal bound; the report is returned either way."""
    report = max_monochromatic_sunflower(colouring, ground, colouring.spec.h, budget=budget)
    return report.petals <= colouring.spec.max_petals, report


def build_conflict_hypergraph(
    colouring: Colouring, ground: GroundSet, budget: int = DEFAULT_BUDGET
) -> ConflictHypergraph:
    """Record the union A∪B of every pair of distinct same-coloured k-edges.

    Unions are deduplicated by vertex set but keep all generating pairs, so
    the number of pairs equals the sum of C(class size, 2) over colour
    classes.  Pair enumeration counts against the budget.
    """
    classes = colour_classes(colouring, ground, budget=budget)
    total_pairs = sum(math.comb(len(edges), 2) for edges in classes.values())
    _require_budget(total_pairs, budget, "conflict pair enumeration")
    by_union: dict[tuple[int, ...], list] = defaultdict(list)
    for key in sorted(classes):
        for a, b in combinations(classes[key], 2):
            union = tuple(sorted(set(a) | set(b)))
            by_union[union].append((a, b))
    edges = tuple(
        ConflictEdge(vertices=u, pairs=tuple(ps)) for u, ps in sorted(by_union.items())
    )
    return ConflictHypergraph(ground=ground, k=colouring.spec.k, edges=edges)
