"""Laurent polynomials over k((α₁))…((αₙ)) with the right-to-left lexicographic valuation.

Value vectors are written left-to-right in variable order, (e₁, …, eₙ), and
compared right-to-left: the outermost variable αₙ is most significant. So in a
two-variable tower (0, -1) < (0, 0) < (1, 0) < (0, 1).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import total_ordering
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .basefield import (
    BaseFieldDesc,
    BaseFieldElement,
    FieldError,
    artin_schreier_reduce,
    field_ops,
)

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


class LaurentError(ValueError):
    """Invalid tower, window or Laurent polynomial operation."""


def rtl_key(coords: Sequence[int]) -> tuple[int, ...]:
    """Sort key realising the right-to-left lexicographic order on ℤⁿ."""
    return tuple(reversed(coords))


@total_ordering
@dataclass(frozen=True)
class ValueVec:
    coords: tuple[int, ...]

    def __lt__(self, other: "ValueVec") -> bool:
        return rtl_key(self.coords) < rtl_key(other.coords)

    def __add__(self, other: "ValueVec") -> "ValueVec":
        return ValueVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ValueVec") -> "ValueVec":
        return ValueVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ValueVec":
        return ValueVec(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "ValueVec":
        return ValueVec(tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_negative(self) -> bool:
        return rtl_key(self.coords) < (0,) * len(self.coords)

    def is_positive(self) -> bool:
        return rtl_key(self.coords) > (0,) * len(self.coords)

    def mod(self, m: int) -> tuple[int, ...]:
        return tuple(a % m for a in self.coords)

    def divisible_by(self, m: int) -> bool:
        return all(a % m == 0 for a in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


@dataclass(frozen=True)
class FieldTower:
    """k((α₁))…((αₙ)); the last variable is the outermost one."""

    base: BaseFieldDesc
    n: int
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise LaurentError(f"variable count must be >= 0, got {self.n}")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"a{i}" for i in range(1, self.n + 1)))
        if len(self.names) != self.n:
            raise LaurentError(f"expected {self.n} variable names, got {len(self.names)}")
        if len(set(self.names)) != self.n:
            raise LaurentError(f"variable names must be distinct: {self.names}")

    @property
    def p(self) -> int:
        return self.base.p

    def residue(self) -> "FieldTower":
        """Residue field tower of the αₙ-adic valuation."""
        if self.n == 0:
            raise LaurentError("the base field has no outer valuation")
        return FieldTower(self.base, self.n - 1, self.names[:-1])

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, ())

    def one(self) -> "LaurentPoly":
        return self.monomial((0,) * self.n)

    def constant(self, c: BaseFieldElement | int) -> "LaurentPoly":
        return self.monomial((0,) * self.n, c)

    def monomial(self, exponents: Sequence[int], coeff: BaseFieldElement | int = 1) -> "LaurentPoly":
        exponents = tuple(exponents)
        if len(exponents) != self.n:
            raise LaurentError(f"monomial {exponents} does not fit a {self.n}-variable tower")
        raw = _raw_coeff(self.base, coeff)
        return LaurentPoly.from_terms(self, {exponents: raw})

    def variable(self, i: int) -> "LaurentPoly":
        """αᵢ, 1-based."""
        if not 1 <= i <= self.n:
            raise LaurentError(f"no variable a{i} in a {self.n}-variable tower")
        return self.monomial(unit_vector(self.n, i))

    def __str__(self) -> str:
        return str(self.base) + "".join(f"(({name}))" for name in self.names)


def unit_vector(n: int, i: int, scale: int = 1) -> Monomial:
    return tuple(scale if j == i else 0 for j in range(1, n + 1))


def _raw_coeff(base: BaseFieldDesc, coeff: BaseFieldElement | int) -> Any:
    if isinstance(coeff, BaseFieldElement):
        if coeff.desc != base:
            raise FieldError(f"coefficient in {coeff.desc}, tower over {base}")
        return coeff.raw
    return field_ops(base).from_int(coeff)


@dataclass(frozen=True)
class PrecisionWindow:
    """Per-variable exponent bounds lo ≤ e ≤ hi."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise LaurentError("window bounds differ in length")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise LaurentError(f"window lower bound {self.lo} exceeds upper bound {self.hi}")

    @classmethod
    def uniform(cls, n: int, lo: int, hi: int) -> "PrecisionWindow":
        return cls((lo,) * n, (hi,) * n)

    @property
    def n(self) -> int:
        return len(self.lo)

    def grown(self) -> "PrecisionWindow":
        return PrecisionWindow(self.lo, tuple(b + 1 for b in self.hi))

    def contains(self, exponents: Sequence[int]) -> bool:
        return all(a <= e <= b for a, e, b in zip(self.lo, exponents, self.hi))

    def monomials(self) -> list[Monomial]:
        """All monomials in the box, in increasing value order."""
        ranges = [range(a, b + 1) for a, b in zip(self.lo, self.hi)]
        return sorted(itertools.product(*ranges), key=rtl_key)

    def size(self) -> int:
        size = 1
        for a, b in zip(self.lo, self.hi):
            size *= b - a + 1
        return size

    def __str__(self) -> str:
        if len(set(self.lo)) <= 1 and len(set(self.hi)) <= 1 and self.n:
            return f"{self.lo[0]}..{self.hi[0]}"
        return f"{list(self.lo)}..{list(self.hi)}"


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c·α^e with nonzero raw coefficients, sorted by increasing value."""

    tower: FieldTower
    terms: tuple[tuple[Monomial, Any], ...]

    @classmethod
    def from_terms(cls, tower: FieldTower, terms: Mapping[Monomial, Any]) -> "LaurentPoly":
        ops = field_ops(tower.base)
        kept = [(m, c) for m, c in terms.items() if not ops.is_zero(c)]
        kept.sort(key=lambda item: rtl_key(item[0]))
        return cls(tower, tuple(kept))

    @property
    def ops(self):
        return field_ops(self.tower.base)

    # structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        """A single term c·α^e."""
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return self.is_zero() or (self.is_monomial() and not any(self.terms[0][0]))

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.terms]

    def coefficient(self, exponents: Sequence[int]) -> BaseFieldElement:
        exponents = tuple(exponents)
        for m, c in self.terms:
            if m == exponents:
                return BaseFieldElement(self.tower.base, c)
        return BaseFieldElement.zero(self.tower.base)

    def constant_term(self) -> BaseFieldElement:
        return self.coefficient((0,) * self.tower.n)

    def coefficients(self) -> Iterator[tuple[Monomial, BaseFieldElement]]:
        for m, c in self.terms:
            yield m, BaseFieldElement(self.tower.base, c)

    def free_of(self, i: int) -> bool:
        """No term involves αᵢ (1-based)."""
        return all(m[i - 1] == 0 for m, _ in self.terms)

    def variables_used(self) -> list[int]:
        return [i for i in range(1, self.tower.n + 1) if not self.free_of(i)]

    def _check(self, other: "LaurentPoly") -> None:
        if other.tower != self.tower:
            raise LaurentError(f"cannot combine elements of {self.tower} and {other.tower}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, BaseFieldElement)):
            return self.tower.constant(other)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ops = self.ops
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = ops.add(acc[m], c) if m in acc else c
        return LaurentPoly.from_terms(self.tower, acc)

    __radd__ = __add__

    def __neg__(self):
        ops = self.ops
        return LaurentPoly(self.tower, tuple((m, ops.neg(c)) for m, c in self.terms))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ops = self.ops
        acc: dict[Monomial, Any] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = ops.mul(c1, c2)
                acc[m] = ops.add(acc[m], prod) if m in acc else prod
        return LaurentPoly.from_terms(self.tower, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            if not self.is_monomial():
                raise LaurentError(f"({self})^{e}: only single terms invert exactly; use invert() with a window")
            return invert_monomial(self) ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * (other ** -1)

    def scale(self, c: BaseFieldElement) -> "LaurentPoly":
        return self * self.tower.constant(c)

    def map_exponents(self, fn) -> "LaurentPoly":
        ops = self.ops
        acc: dict[Monomial, Any] = {}
        for m, c in self.terms:
            new = tuple(fn(m))
            acc[new] = ops.add(acc[new], c) if new in acc else c
        return LaurentPoly.from_terms(self.tower, acc)

    def substitute_power(self, i: int, factor: int) -> "LaurentPoly":
        """Replace αᵢ by αᵢ^factor."""
        return self.map_exponents(lambda m: tuple(e * factor if j == i - 1 else e for j, e in enumerate(m)))

    def frobenius(self) -> "LaurentPoly":
        return self ** self.tower.p

    def as_map(self) -> "LaurentPoly":
        """℘(x) = x^p − x."""
        return self.frobenius() - self

    # valuation ------------------------------------------------------------
    def valuation(self) -> ValueVec:
        return valuation(self)

    def leading_monomial(self) -> Monomial:
        if self.is_zero():
            raise LaurentError("zero has no leading term")
        return self.terms[0][0]

    def leading_coeff(self) -> BaseFieldElement:
        return leading_coeff(self)

    # display --------------------------------------------------------------
    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.tower.names, m)
                if e
            )
            coeff = self.ops.to_str(c)
            if " " in coeff:
                coeff = f"({coeff})"
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def invert_monomial(x: LaurentPoly) -> LaurentPoly:
    (m, c), = x.terms
    return LaurentPoly.from_terms(x.tower, {tuple(-e for e in m): x.ops.inv(c)})


def valuation(x: LaurentPoly) -> ValueVec:
    """Minimum value among the monomials of x."""
    if x.is_zero():
        raise LaurentError("valuation of zero is undefined")
    return ValueVec(x.terms[0][0])


def leading_coeff(x: LaurentPoly) -> BaseFieldElement:
    """Coefficient of the value-minimal monomial."""
    if x.is_zero():
        raise LaurentError("zero has no leading coefficient")
    return BaseFieldElement(x.tower.base, x.terms[0][1])


def residue_outer(x: LaurentPoly) -> LaurentPoly:
    """Set αₙ = 0; x must lie in the αₙ-adic valuation ring."""
    residue = x.tower.residue()
    kept: dict[Monomial, Any] = {}
    for m, c in x.terms:
        if m[-1] < 0:
            raise LaurentError(f"{x} has a negative power of {x.tower.names[-1]}")
        if m[-1] == 0:
            kept[m[:-1]] = c
    return LaurentPoly.from_terms(residue, kept)


def invert(x: LaurentPoly, window: PrecisionWindow) -> LaurentPoly:
    """y with x·y − 1 supported outside the window; exact for single terms.

    Coefficients of y are solved in increasing value order of the window
    monomials ν: y_{ν−μ₀} = (δ_{ν,0} − Σ_{s≠μ₀} x_s·y_{ν−s}) / x_{μ₀}.
    """
    if x.is_zero():
        raise LaurentError("zero is not invertible")
    if x.is_monomial():
        return invert_monomial(x)
    n = x.tower.n
    if window.n != n:
        raise LaurentError(f"window has {window.n} coordinates, tower has {n}")
    origin = (0,) * n
    if not window.contains(origin):
        raise LaurentError(f"window {window} does not contain the constant term of x·y")
    ops = x.ops
    mu0, lead = x.terms[0]
    lead_inv = ops.inv(lead)
    tail = x.terms[1:]
    y: dict[Monomial, Any] = {}
    for nu in window.monomials():
        acc = ops.one if nu == origin else ops.zero
        for s, xs in tail:
            idx = tuple(a - b for a, b in zip(nu, s))
            if idx in y:
                acc = ops.sub(acc, ops.mul(xs, y[idx]))
        y[tuple(a - b for a, b in zip(nu, mu0))] = ops.mul(acc, lead_inv)
    return LaurentPoly.from_terms(x.tower, y)


def square_decompose(x: LaurentPoly) -> dict[tuple[int, ...], LaurentPoly]:
    """x = Σ_ε s_ε²·α^ε over parity classes ε ∈ {0,1}ⁿ (char 2, perfect k)."""
    tower = x.tower
    if tower.p != 2:
        raise LaurentError("square decomposition needs characteristic 2")
    if not tower.base.is_perfect:
        raise LaurentError(f"square decomposition needs a perfect base field, got {tower.base}")
    ops = x.ops
    parts: dict[tuple[int, ...], dict[Monomial, Any]] = {}
    for m, c in x.terms:
        eps = tuple(e % 2 for e in m)
        half = tuple((e - r) // 2 for e, r in zip(m, eps))
        parts.setdefault(eps, {})[half] = ops.pth_root(c)
    return {eps: LaurentPoly.from_terms(tower, parts[eps]) for eps in sorted(parts)}


def p_rank(tower: FieldTower) -> int:
    """log_p [F : F^p] = rank_p(k) + n."""
    return (0 if tower.base.is_perfect else 1) + tower.n


@dataclass(frozen=True)
class ASNormalization:
    """a = normalized + ℘(witness) + dropped, where v(dropped) > 0 so dropped ∈ ℘(F)."""

    normalized: LaurentPoly
    witness: LaurentPoly
    dropped: LaurentPoly


def as_normalize(a: LaurentPoly) -> ASNormalization:
    """Shorten an Artin–Schreier slot modulo ℘(F).

    Terms of positive value are dropped (Hensel), terms c·μ of negative value
    with μ ∈ pℤⁿ become c^{1/p}·μ/p while the p-th root exists, and the
    constant term is reduced in k.
    """
    tower = a.tower
    p = tower.p
    ops = a.ops
    perfect = tower.base.is_perfect
    dropped = LaurentPoly.from_terms(tower, {m: c for m, c in a.terms if ValueVec(m).is_positive()})
    current = a - dropped
    witness = tower.zero()
    while True:
        candidate = None
        for m, c in current.terms:
            value = ValueVec(m)
            if not value.is_negative():
                break
            if value.divisible_by(p) and (perfect or ops.is_pth_power(c)):
                candidate = (m, c)
                break
        if candidate is None:
            break
        m, c = candidate
        h = LaurentPoly.from_terms(tower, {tuple(e // p for e in m): ops.pth_root(c)})
        current = current - h.as_map()
        witness = witness + h
    constant = current.constant_term()
    if constant:
        reduction = artin_schreier_reduce(constant)
        if reduction.witness:
            h = tower.constant(reduction.witness)
            current = current - h.as_map()
            witness = witness + h
    logger.debug("as-normalize %s -> %s", a, current)
    return ASNormalization(current, witness, dropped)


def product_polys(polys: Iterable[LaurentPoly], tower: FieldTower) -> LaurentPoly:
    total = tower.one()
    for x in polys:
        total = total * x
    return total
