"""Algebraic colourings: symmetric bivariate polynomials and Sidon differences.

Polynomials live over the exact rationals or a prime field GF(p); integer
instances use arbitrary precision throughout, so nothing overflows and colour
equality is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ParameterError, ValidationError
from .hypergraph import Colouring, ColouringSpec

RATIONALS = "Q"

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit (and then some) inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class SymPoly:
    """A symmetric bivariate polynomial as a coefficient map (i, j) -> c.

    ``field`` is "Q" for the rationals or a prime modulus.  Coefficients are
    normalized (reduced mod p, zeros dropped) and must satisfy c[i][j] ==
    c[j][i]; the total degree must be exactly ``degree``.
    """

    def __init__(self, field, coeffs: dict):
        if field != RATIONALS:
            field = int(field)
            if not is_prime(field):
                raise ParameterError(f"modulus {field} is not prime")
        self.field = field
        normalized: dict[tuple[int, int], object] = {}
        for (i, j), c in coeffs.items():
            if i < 0 or j < 0:
                raise ParameterError("monomial exponents must be nonnegative")
            value = self.element(c)
            if value != self.zero():
                normalized[(int(i), int(j))] = value
        if not normalized:
            raise ParameterError("polynomial must be nonzero of degree at least 1")
        for (i, j), c in normalized.items():
            if normalized.get((j, i)) != c:
                raise ParameterError(f"coefficients not symmetric at ({i},{j})")
        self.degree = max(i + j for i, j in normalized)
        if self.degree < 1:
            raise ParameterError("polynomial degree must be at least 1")
        self.coeffs = dict(sorted(normalized.items()))

    def zero(self):
        return Fraction(0) if self.field == RATIONALS else 0

    def element(self, value):
        """Coerce a scalar into the field (Fraction over Q, residue mod p)."""
        if self.field == RATIONALS:
            return Fraction(value)
        return int(value) % self.field

    def evaluate(self, x, y):
        x, y = self.element(x), self.element(y)
        if self.field == RATIONALS:
            return sum((c * x**i * y**j for (i, j), c in self.coeffs.items()), Fraction(0))
        p = self.field
        total = 0
        for (i, j), c in self.coeffs.items():
            total = (total + c * pow(x, i, p) * pow(y, j, p)) % p
        return total

    def x_coefficient_poly(self, power: int) -> dict[int, object]:
        """The y-polynomial multiplying x**power, as a map j -> coefficient."""
        return {j: c for (i, j), c in self.coeffs.items() if i == power}

    def eval_y_poly(self, poly: dict[int, object], y):
        y = self.element(y)
        if self.field == RATIONALS:
            return sum((c * y**j for j, c in poly.items()), Fraction(0))
        p = self.field
        return sum(c * pow(y, j, p) for j, c in poly.items()) % p

    @property
    def label(self) -> str:
        where = "Q" if self.field == RATIONALS else f"GF({self.field})"
        return f"poly-d{self.degree}-{where}"


@dataclass(frozen=True)
class PolyGround:
    """A ground set prepared for polynomial colouring.

    ``kept`` are the usable values, ``removed`` the values where the pivot
    coefficient polynomial vanished, ``pivot_power`` the smallest x-power
    whose y-coefficient polynomial is not formally zero.
    """

    poly: SymPoly
    kept: tuple
    removed: tuple
    pivot_power: int


def poly_prepare(poly: SymPoly, values) -> PolyGround:
    """Drop the values where the lowest informative coefficient polynomial vanishes.

    Writing p(x, y) = sum_i q_i(y) x^i, the smallest power j >= 1 with q_j
    not formally zero always exists (symmetry would otherwise force p
    constant).  The removed set is the zero set of q_j inside the input, so
    it has at most deg(q_j) <= degree - 1 elements; for every kept value y0,
    p(x, y0) is a nonconstant polynomial in x of degree at most the total
    degree, which is what bounds the petals of the colouring.
    """
    elements = [poly.element(v) for v in values]
    if len(set(elements)) != len(elements):
        raise ParameterError("ground values must be distinct in the field")
    pivot = None
    for power in range(1, poly.degree + 1):
        if poly.x_coefficient_poly(power):
            pivot = power
            break
    if pivot is None:
        raise RuntimeError("internal invariant violated: no informative x-power found")
    q = poly.x_coefficient_poly(pivot)
    removed = tuple(v for v in elements if poly.eval_y_poly(q, v) == poly.zero())
    kept = tuple(v for v in elements if poly.eval_y_poly(q, v) != poly.zero())
    return PolyGround(poly=poly, kept=kept, removed=removed, pivot_power=pivot)


def poly_colouring(prepared: PolyGround) -> Colouring:
    """Colour pairs {a, b} of the prepared values by the value p(a, b).

    At most ``degree`` same-coloured pairs can share a point, hence the petal
    bound.  Raises if the kept values were not actually prepared (some value
    still zeroes the pivot coefficient polynomial).
    """
    poly = prepared.poly
    q = poly.x_coefficient_poly(prepared.pivot_power)
    if not q:
        raise ValidationError("prepared ground does not match its polynomial")
    for v in prepared.kept:
        if poly.eval_y_poly(q, v) == poly.zero():
            raise ValidationError(f"value {v} was not prepared out (pivot polynomial vanishes)")
    values = prepared.kept
    spec = ColouringSpec(k=2, h=1, max_petals=poly.degree)

    def evaluator(ids: tuple[int, ...]):
        return poly.evaluate(values[ids[0]], values[ids[1]])

    return Colouring(spec=spec, evaluator=evaluator, label=poly.label)


@dataclass(frozen=True)
class IntegerInstance:
    """A strictly increasing tuple of positive integers."""

    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise ParameterError("need at least one value")
        if any(v < 1 for v in self.values):
            raise ParameterError("values must be positive")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ParameterError("values must be strictly increasing")

    def __len__(self) -> int:
        return len(self.values)


def sidon_colouring(inst: IntegerInstance) -> Colouring:
    """Colour pairs {x, y} by |x - y|; each difference repeats at most twice through a point."""
    values = inst.values
    spec = ColouringSpec(k=2, h=1, max_petals=2)

    def evaluator(ids: tuple[int, ...]):
        return abs(values[ids[1]] - values[ids[0]])

    return Colouring(spec=spec, evaluator=evaluator, label="sidon")


def is_b2_sequence(seq) -> bool:
    """True iff all pairwise differences are distinct.

    Equivalent to all pairwise sums a_i + a_j (i <= j) being distinct:
    a + b = c + d with {a,b} != {c,d} rearranges to a - d = c - b.
    """
    values = tuple(seq)
    if any(v < 1 for v in values):
        raise ParameterError("values must be positive")
    if any(a >= b for a, b in zip(values, values[1:])):
        raise ParameterError("values must be strictly increasing")
    diffs = [b - a for a, b in combinations(values, 2)]
    return len(set(diffs)) == len(diffs)


def integers_to_obj(inst: IntegerInstance) -> dict:
    """JSON-ready form with values as decimal strings (arbitrary precision safe)."""
    return {"type": "integers", "values": [str(v) for v in inst.values]}


def integers_from_obj(obj: dict) -> IntegerInstance:
    if obj.get("type") != "integers":
        raise ParameterError(f"expected an integers instance, got type={obj.get('type')!r}")
    return IntegerInstance(values=tuple(int(v) for v in obj["values"]))


def sympoly_to_obj(poly: SymPoly) -> dict:
    field = "Q" if poly.field == RATIONALS else {"GF": poly.field}
    coeffs = [[i, j, str(c)] for (i, j), c in poly.coeffs.items()]
    return {"type": "sympoly", "field": field, "degree": poly.degree, "coeffs": coeffs}


def sympoly_from_obj(obj: dict) -> SymPoly:
    if obj.get("type") != "sympoly":
        raise ParameterError(f"expected a sympoly, got type={obj.get('type')!r}")
    field = obj["field"]
    if field != "Q":
        field = int(field["GF"])
    coeffs: dict[tuple[int, int], object] = {}
    for i, j, c in obj["coeffs"]:
        value = Fraction(c) if field == "Q" else int(c)
        key = (int(i), int(j))
        if key in coeffs and coeffs[key] != value:
            raise ParameterError(f"conflicting coefficients for monomial {key}")
        coeffs[key] = value
        mirror = (key[1], key[0])
        if mirror not in coeffs:
            coeffs[mirror] = value
    poly = SymPoly(field, coeffs)
    declared = int(obj["degree"])
    if poly.degree != declared:
        raise ParameterError(f"declared degree {declared} but coefficients give {poly.degree}")
    return poly
