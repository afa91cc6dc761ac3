"""Exact rational geometry colourings: circumradius, volume, similarity type.

All predicates and colour values are computed over Fractions; there is no
floating-point path anywhere, so colour equality is genuine equality of the
underlying geometric quantity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations, permutations

from .errors import BudgetError, DegenerateInputError, ParameterError, ValidationError
from .hypergraph import DEFAULT_BUDGET, Colouring, ColouringSpec
from .keys import canonical_key

Point = tuple[Fraction, ...]

DEFAULT_REJECTION_FACTOR = 1000  # generator gives up after this many draws per point


def as_point(coords) -> Point:
    return tuple(Fraction(c) for c in coords)


def squared_distance(p: Point, q: Point) -> Fraction:
    return sum((a - b) * (a - b) for a, b in zip(p, q))


def det_exact(matrix: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction Gaussian elimination with pivot search."""
    m = [list(row) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square rational system; None when singular."""
    n = len(matrix)
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [a * inv for a in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def squared_volume(points) -> Fraction:
    """Squared d-volume of the simplex on d+1 points in dimension d.

    Computed from the bordered squared-distance determinant:
    Vol^2 = (-1)^(d+1) / (2^d (d!)^2) * det M with M the (d+2)x(d+2) matrix
    whose first row and column are (0, 1, ..., 1) and whose interior holds
    the pairwise squared distances.  Zero iff the points are affinely
    dependent.
    """
    pts = [as_point(p) for p in points]
    if not pts:
        raise ParameterError("no points given")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ParameterError("points have mixed dimensions")
    if len(pts) != d + 1:
        raise ParameterError(f"need d+1={d + 1} points in dimension {d}, got {len(pts)}")
    size = d + 2
    m = [[Fraction(0)] * size for _ in range(size)]
    for i in range(1, size):
        m[0][i] = Fraction(1)
        m[i][0] = Fraction(1)
    for i in range(d + 1):
        for j in range(d + 1):
            m[i + 1][j + 1] = squared_distance(pts[i], pts[j])
    coefficient = Fraction((-1) ** (d + 1), (2 ** d) * math.factorial(d) ** 2)
    return coefficient * det_exact(m)


def squared_circumradius(points) -> Fraction:
    """Exact squared circumradius of the simplex through d+1 independent points.

    Solves the linear system for the centre equidistant from all points and
    re-substitutes to confirm that every squared distance agrees.
    """
    pts = [as_point(p) for p in points]
    if squared_volume(pts) == 0:
        raise DegenerateInputError("points are affinely dependent; no circumsphere")
    d = len(pts[0])
    p0 = pts[0]
    norm0 = sum(c * c for c in p0)
    matrix = []
    rhs = []
    for p in pts[1:]:
        matrix.append([2 * (a - b) for a, b in zip(p, p0)])
        rhs.append(sum(c * c for c in p) - norm0)
    centre = solve_exact(matrix, rhs)
    assert centre is not None, "independent points gave a singular centre system"
    r2 = squared_distance(tuple(centre), p0)
    for p in pts[1:]:
        assert squared_distance(tuple(centre), p) == r2
    return r2


def _similarity_profile(pts: list[Point]) -> tuple[Fraction, ...]:
    n = len(pts)
    dist = [[squared_distance(pts[i], pts[j]) for j in range(n)] for i in range(n)]
    total = sum(dist[i][j] for i in range(n) for j in range(n))
    best = None
    for perm in permutations(range(n)):
        profile = tuple(
            dist[perm[i]][perm[j]] / total for i in range(n) for j in range(i + 1, n)
        )
        if best is None or profile < best:
            best = profile
    assert best is not None
    return best


def similarity_canonical_form(points) -> bytes:
    """Canonical key of the simplex's similarity class, reflections identified.

    The squared-distance matrix is normalized by the sum of its entries
    (killing scale) and the lexicographically smallest flattened upper
    triangle over all vertex permutations is serialized.  Squared-distance
    matrices determine point tuples up to isometry, so two tuples share a key
    iff they are similar.
    """
    pts = [as_point(p) for p in points]
    if squared_volume(pts) == 0:
        raise DegenerateInputError("points are affinely dependent; no similarity type")
    return canonical_key(_similarity_profile(pts))


@dataclass(frozen=True)
class PointInstance:
    """A point set in R^d with general-position flags.

    The flags only become True after the corresponding exhaustive check has
    passed; use ``validate`` or the check functions.
    """

    dim: int
    points: tuple[Point, ...]
    no_hyperplane: bool = False
    no_sphere: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError("dimension must be at least 1")
        if any(len(p) != self.dim for p in self.points):
            raise ParameterError("point dimension mismatch")
        if len(set(self.points)) != len(self.points):
            raise ParameterError("points must be distinct")

    def __len__(self) -> int:
        return len(self.points)

    def validate(self, budget: int = DEFAULT_BUDGET, sphere: bool = True) -> "PointInstance":
        """Run the exhaustive checks and return a flagged copy; raise on violation."""
        witness = find_hyperplane_violation(self, budget=budget)
        if witness is not None:
            raise ValidationError(
                f"points {list(witness)} lie on a hyperplane: {self._describe(witness)}"
            )
        inst = replace(self, no_hyperplane=True)
        if sphere:
            witness = find_sphere_violation(inst, budget=budget)
            if witness is not None:
                raise ValidationError(
                    f"points {list(witness)} lie on a sphere: {self._describe(witness)}"
                )
            inst = replace(inst, no_sphere=True)
        return inst

    def _describe(self, idxs) -> str:
        return "; ".join(
            "(" + ", ".join(str(c) for c in self.points[i]) + ")" for i in idxs
        )


def find_hyperplane_violation(inst: PointInstance, budget: int = DEFAULT_BUDGET):
    """First (d+1)-subset with zero volume, as index tuple; None if there is none."""
    n, d = len(inst), inst.dim
    if n < d + 1:
        return None
    total = math.comb(n, d + 1)
    if total > budget:
        raise BudgetError(f"hyperplane check needs {total} subsets; budget is {budget}")
    for idxs in combinations(range(n), d + 1):
        if squared_volume([inst.points[i] for i in idxs]) == 0:
            return idxs
    return None


def check_no_hyperplane(inst: PointInstance, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no d+1 points lie on a common hyperplane (vacuous below d+1 points)."""
    return find_hyperplane_violation(inst, budget=budget) is None


def _lifted_matrix(pts: list[Point]) -> list[list[Fraction]]:
    # rows [ |x|^2, x_1..x_d, 1 ]; zero determinant means the d+2 points lie
    # on a common sphere (or hyperplane, excluded by the earlier check)
    rows = []
    for p in pts:
        rows.append([sum(c * c for c in p), *p, Fraction(1)])
    return rows


def find_sphere_violation(inst: PointInstance, budget: int = DEFAULT_BUDGET):
    """First (d+2)-subset on a common (d-1)-sphere; requires the hyperplane check first."""
    n, d = len(inst), inst.dim
    if n < d + 2:
        return None
    total = math.comb(n, d + 2)
    if total > budget:
        raise BudgetError(f"sphere check needs {total} subsets; budget is {budget}")
    for idxs in combinations(range(n), d + 2):
        if det_exact(_lifted_matrix([inst.points[i] for i in idxs])) == 0:
            return idxs
    return None


def check_no_sphere(inst: PointInstance, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no d+2 points are cospherical (vacuous below d+2 points)."""
    return find_sphere_violation(inst, budget=budget) is None


def generate_general_position(n: int, dim: int, seed: int, coord_bound: int | None = None,
                              max_attempts: int | None = None) -> PointInstance:
    """Random integer points with no d+1 on a hyperplane and no d+2 on a sphere.

    Draws uniformly from [0, coord_bound]^dim, rejecting any candidate that
    breaks either condition against the accepted prefix; both flags are
    therefore True on return.  coord_bound defaults to 4n^2 for collision
    head-room.  Deterministic for a given seed.
    """
    if n < 1:
        raise ParameterError("need at least one point")
    if dim < 1:
        raise ParameterError("dimension must be at least 1")
    if coord_bound is None:
        coord_bound = max(4 * n * n, 4)
    if coord_bound < 1:
        raise ParameterError("coordinate bound must be at least 1")
    if max_attempts is None:
        max_attempts = DEFAULT_REJECTION_FACTOR * n
    rng = random.Random(seed)
    accepted: list[Point] = []
    attempts = 0
    while len(accepted) < n:
        if attempts >= max_attempts:
            raise BudgetError(
                f"gave up after {attempts} draws with {len(accepted)}/{n} points placed; "
                f"try a larger coord_bound (currently {coord_bound})"
            )
        attempts += 1
        candidate = tuple(Fraction(rng.randint(0, coord_bound)) for _ in range(dim))
        if candidate in accepted:
            continue
        ok = True
        for prior in combinations(accepted, dim):
            if squared_volume(list(prior) + [candidate]) == 0:
                ok = False
                break
        if ok:
            for prior in combinations(accepted, dim + 1):
                if det_exact(_lifted_matrix(list(prior) + [candidate])) == 0:
                    ok = False
                    break
        if ok:
            accepted.append(candidate)
    return PointInstance(dim=dim, points=tuple(accepted), no_hyperplane=True, no_sphere=True)


def _require_flags(inst: PointInstance, sphere: bool, what: str) -> None:
    if not inst.no_hyperplane:
        raise ValidationError(f"{what} needs the hyperplane check; call validate() first")
    if sphere and not inst.no_sphere:
        raise ValidationError(f"{what} needs the sphere check; call validate() first")


def circumradius_colouring(inst: PointInstance) -> Colouring:
    """Colour (d+1)-tuples by exact squared circumradius; at most 2 petals per core."""
    _require_flags(inst, sphere=True, what="circumradius colouring")
    d = inst.dim
    pts = inst.points
    spec = ColouringSpec(k=d + 1, h=d, max_petals=2)

    def evaluator(ids: tuple[int, ...]):
        return squared_circumradius([pts[i] for i in ids])

    return Colouring(spec=spec, evaluator=evaluator, label="circumradius")


def volume_colouring(inst: PointInstance) -> Colouring:
    """Colour (d+1)-tuples by exact squared volume; at most 2d petals per core."""
    _require_flags(inst, sphere=False, what="volume colouring")
    d = inst.dim
    pts = inst.points
    spec = ColouringSpec(k=d + 1, h=d, max_petals=2 * d)

    def evaluator(ids: tuple[int, ...]):
        return squared_volume([pts[i] for i in ids])

    return Colouring(spec=spec, evaluator=evaluator, label="volume")


def similarity_colouring(inst: PointInstance) -> Colouring:
    """Colour (d+1)-tuples by similarity class; at most 2(d+1)! petals per core."""
    _require_flags(inst, sphere=False, what="similarity colouring")
    d = inst.dim
    pts = inst.points
    spec = ColouringSpec(k=d + 1, h=d, max_petals=2 * math.factorial(d + 1))

    def evaluator(ids: tuple[int, ...]):
        selected = [pts[i] for i in ids]
        if squared_volume(selected) == 0:
            raise DegenerateInputError("degenerate tuple in similarity colouring")
        return _similarity_profile(selected)

    return Colouring(spec=spec, evaluator=evaluator, label="similarity")


def points_to_obj(inst: PointInstance) -> dict:
    """JSON-ready form: rationals as decimal strings, paired numerator/denominator."""
    return {
        "type": "points",
        "d": inst.dim,
        "coords": [
            [[str(c.numerator), str(c.denominator)] for c in p] for p in inst.points
        ],
    }


def points_from_obj(obj: dict) -> PointInstance:
    """Parse the JSON form; validation flags start False and must be re-earned."""
    if obj.get("type") != "points":
        raise ParameterError(f"expected a points instance, got type={obj.get('type')!r}")
    dim = int(obj["d"])
    points = tuple(
        tuple(Fraction(int(num), int(den)) for num, den in p) for p in obj["coords"]
    )
    return PointInstance(dim=dim, points=points)
