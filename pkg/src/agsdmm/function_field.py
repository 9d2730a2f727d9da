"""Hyperelliptic function fields y^2 = f(x) over odd prime fields.

A curve here is determined by a squarefree f(x) = (x - a_1)...(x - a_d) with
d odd, split over the base field. The key facts used throughout:

  * genus g = (d - 1) / 2,
  * x has a double pole and y a pole of order d at the single point at
    infinity, so the pole orders realized there form the numerical
    semigroup generated by 2 and d,
  * the functions x^a * y^b with b in {0, 1} are a canonical basis for the
    spaces of functions with poles only at infinity, indexed by their pole
    order 2a + d*b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .field import FieldElement, PrimeField


@dataclass(frozen=True)
class Monomial:
    """The function x^a * y^b with b in {0, 1}."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b not in (0, 1):
            raise ValueError(f"invalid monomial exponents (a={self.a}, b={self.b})")

    def pole_number(self, d: int) -> int:
        return 2 * self.a + d * self.b

    def __mul__(self, other: "Monomial") -> "Monomial":
        # closed only while the product stays in y-degree <= 1
        if self.b and other.b:
            raise ValueError("product leaves the canonical form (needs y^2 reduction)")
        return Monomial(self.a + other.a, self.b + other.b)

    def __str__(self):
        parts = []
        if self.a == 1:
            parts.append("x")
        elif self.a > 1:
            parts.append(f"x^{self.a}")
        if self.b:
            parts.append("y")
        return " ".join(parts) if parts else "1"


class WeierstrassSemigroup:
    """Pole orders at the point at infinity: the semigroup generated by 2 and d."""

    __slots__ = ("d", "g")

    def __init__(self, d: int):
        if d < 1 or d % 2 == 0:
            raise ValueError(f"d must be an odd positive integer, got {d}")
        self.d = d
        self.g = (d - 1) // 2

    def gaps(self) -> list[int]:
        """The g missing pole orders: the odd numbers 1, 3, ..., 2g - 1."""
        return list(range(1, 2 * self.g, 2))

    def is_pole_number(self, w: int) -> bool:
        return w >= 0 and (w % 2 == 0 or w >= self.d)

    def __contains__(self, w: int) -> bool:
        return self.is_pole_number(w)

    def __repr__(self):
        return f"WeierstrassSemigroup(2, {self.d})"


@dataclass(frozen=True)
class Place:
    """A rational place: an affine point (x, y) with y^2 = f(x), or the point at infinity."""

    x: FieldElement | None
    y: FieldElement | None

    @classmethod
    def affine(cls, x: FieldElement, y: FieldElement) -> "Place":
        return cls(x, y)

    @classmethod
    def at_infinity(cls) -> "Place":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def coords(self) -> tuple[int, int]:
        if self.is_infinity:
            raise ValueError("the place at infinity has no affine coordinates")
        return (self.x.value, self.y.value)

    def __repr__(self):
        if self.is_infinity:
            return "Place(infinity)"
        return f"Place(x={self.x.value}, y={self.y.value})"


class HyperellipticCurve:
    """The curve y^2 = f(x) with f squarefree of odd degree, split over F_q."""

    def __init__(self, field: PrimeField, roots):
        self.field = field
        rs = tuple(r if isinstance(r, FieldElement) else field.element(r) for r in roots)
        for r in rs:
            if r.field != field:
                raise ValueError("roots must live in the curve's base field")
        if len(rs) % 2 == 0:
            raise ValueError(f"f must have odd degree, got {len(rs)} roots")
        if len(set(r.value for r in rs)) != len(rs):
            raise ValueError("roots must be pairwise distinct (f must be squarefree)")
        self.roots = rs
        self.d = len(rs)
        self.f_coeffs = self._expand(rs)

    def _expand(self, roots) -> tuple[FieldElement, ...]:
        # ascending coefficients of prod (x - r), monic
        coeffs = [self.field.one]
        for r in roots:
            nxt = [self.field.zero] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] = nxt[i + 1] + c
                nxt[i] = nxt[i] - c * r
            coeffs = nxt
        return tuple(coeffs)

    @property
    def genus(self) -> int:
        return (self.d - 1) // 2

    def semigroup(self) -> WeierstrassSemigroup:
        return WeierstrassSemigroup(self.d)

    def f_at(self, x) -> FieldElement:
        v = self.field.one
        x = x if isinstance(x, FieldElement) else self.field.element(x)
        for r in self.roots:
            v = v * (x - r)
        return v

    def affine_place(self, x, y) -> Place:
        """Validated affine place; raises if (x, y) is not on the curve."""
        x = x if isinstance(x, FieldElement) else self.field.element(x)
        y = y if isinstance(y, FieldElement) else self.field.element(y)
        if y * y != self.f_at(x):
            raise ValueError(f"({x.value}, {y.value}) does not satisfy y^2 = f(x)")
        return Place.affine(x, y)

    def monomial_for_pole_number(self, w: int) -> Monomial:
        """The unique canonical monomial with pole order w at infinity."""
        if not self.semigroup().is_pole_number(w):
            raise ValueError(f"{w} is a gap for d={self.d}; no function has that pole order")
        if w % 2 == 0:
            return Monomial(w // 2, 0)
        return Monomial((w - self.d) // 2, 1)

    def riemann_roch_basis(self, k: int) -> list[Monomial]:
        """Canonical monomials with pole order <= k, sorted by pole order."""
        sg = self.semigroup()
        return [
            self.monomial_for_pole_number(w) for w in range(max(k, -1) + 1)
            if sg.is_pole_number(w)
        ]

    def evaluate(self, mono: Monomial, place: Place) -> FieldElement:
        if place.is_infinity:
            raise ValueError("cannot evaluate at the place at infinity (it is the pole)")
        q = self.field.q
        v = pow(place.x.value, mono.a, q)
        if mono.b:
            v = v * place.y.value % q
        return self.field.element(v)

    def enumerate_places(self) -> list[Place]:
        """All rational places: affine points sorted by (x, y), then infinity."""
        places = []
        for a in range(self.field.q):
            fa = self.f_at(a)
            roots = self.field.sqrt(fa)
            if roots is None:
                continue
            for b in roots:
                places.append(Place.affine(self.field.element(a), b))
        places.append(Place.at_infinity())
        return places

    def select_distinct_x_places(self) -> list[Place]:
        """One affine place per x-coordinate that carries a point (smallest y kept)."""
        places = []
        for a in range(self.field.q):
            roots = self.field.sqrt(self.f_at(a))
            if roots is None:
                continue
            places.append(Place.affine(self.field.element(a), roots[0]))
        return places

    def to_dict(self) -> dict:
        return {
            "q": self.field.q,
            "roots": [r.value for r in self.roots],
            "d": self.d,
            "genus": self.genus,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "HyperellipticCurve":
        curve = cls(PrimeField(data["q"]), data["roots"])
        for key in ("d", "genus"):
            if key in data and data[key] != getattr(curve, key):
                raise ValueError(f"descriptor field {key}={data[key]} does not match the curve")
        return curve

    @classmethod
    def from_json(cls, text: str) -> "HyperellipticCurve":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"HyperellipticCurve(q={self.field.q}, d={self.d}, genus={self.genus})"


def make_curve(field: PrimeField, roots) -> HyperellipticCurve:
    """Build the curve y^2 = prod (x - r) over the given field."""
    return HyperellipticCurve(field, roots)
