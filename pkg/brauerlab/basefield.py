"""Exact arithmetic over the supported base fields k and the Artin–Schreier map.

Supported fields are prime fields F_p, finite fields F_{p^d} given by an
irreducible modulus, and rational function fields F_{p^d}(t). Elements are
immutable `BaseFieldElement` values carrying a raw representation:

* finite fields: the galois integer representation (base-p digits of the
  coefficient vector in the polynomial basis);
* rational functions: a reduced fraction of coefficient tuples with a monic
  denominator.

The Artin–Schreier map is ℘(x) = x^p − x.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Iterator, Optional, Sequence, Union

import galois
import numpy as np

from .config import config

logger = logging.getLogger(__name__)

ALGEBRAICALLY_CLOSED = "algebraically-closed"
INFINITE = math.inf


class FieldError(ValueError):
    """Invalid base field, descriptor or arithmetic request."""


class IndependenceBudgetError(FieldError):
    """Too many elements for the exhaustive ℘-independence test."""


@dataclass(frozen=True)
class PrimeChar:
    """A prime characteristic p."""

    p: int

    def __post_init__(self):
        if self.p < 2 or not galois.is_prime(self.p):
            raise FieldError(f"characteristic must be prime, got {self.p}")

    def __int__(self) -> int:
        return self.p


class FieldKind(str, enum.Enum):
    PRIME = "PrimeField"
    FINITE = "FiniteField"
    RATFUNC = "RatFunc"


@dataclass(frozen=True)
class BaseFieldDesc:
    """Descriptor of a base field: F_p, F_{p^d} = F_p[w]/(modulus) or F_{p^d}(t).

    `modulus` holds the descending coefficients of a monic irreducible
    polynomial of degree d over F_p; it is empty when d = 1.
    """

    kind: FieldKind
    p: int
    d: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        PrimeChar(self.p)
        if self.d < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.d}")
        if self.kind is FieldKind.PRIME and self.d != 1:
            raise FieldError("a prime field has degree 1")
        if self.d == 1:
            if self.modulus:
                raise FieldError("degree-1 fields take no modulus")
            return
        if len(self.modulus) != self.d + 1 or self.modulus[0] != 1:
            raise FieldError(f"modulus must be monic of degree {self.d}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError(f"modulus coefficients must lie in 0..{self.p - 1}")
        if not galois.Poly(list(self.modulus), field=galois.GF(self.p)).is_irreducible():
            raise FieldError(f"modulus {_modulus_text(self.modulus, self.p)} is reducible over F{self.p}")

    @classmethod
    def prime(cls, p: int) -> "BaseFieldDesc":
        return cls(FieldKind.PRIME, p)

    @classmethod
    def finite(cls, p: int, d: int = 1, modulus: Optional[Sequence[int]] = None) -> "BaseFieldDesc":
        if d == 1:
            return cls.prime(p)
        return cls(FieldKind.FINITE, p, d, _default_modulus(p, d) if modulus is None else tuple(modulus))

    @classmethod
    def ratfunc(cls, p: int, d: int = 1, modulus: Optional[Sequence[int]] = None) -> "BaseFieldDesc":
        if d > 1 and modulus is None:
            modulus = _default_modulus(p, d)
        return cls(FieldKind.RATFUNC, p, d, tuple(modulus or ()))

    @property
    def order(self) -> int:
        """Order of the constant field F_{p^d}."""
        return self.p ** self.d

    @property
    def is_finite(self) -> bool:
        return self.kind is not FieldKind.RATFUNC

    @property
    def is_perfect(self) -> bool:
        return self.is_finite

    def constant_field(self) -> "BaseFieldDesc":
        """The finite field of constants (k itself when k is finite)."""
        if self.is_finite:
            return self
        return BaseFieldDesc.finite(self.p, self.d, self.modulus or None)

    def __str__(self) -> str:
        text = f"F{self.order}"
        if self.kind is FieldKind.RATFUNC:
            text += "(t)"
        if self.d > 1:
            text += ":" + _modulus_text(self.modulus, self.p)
        return text


def _default_modulus(p: int, d: int) -> tuple[int, ...]:
    return tuple(int(c) for c in galois.GF(p ** d).irreducible_poly.coeffs)


def _modulus_text(modulus: Sequence[int], p: int) -> str:
    poly = galois.Poly(list(modulus), field=galois.GF(p))
    return str(poly).replace(" ", "").replace("x", "w")


_DESCRIPTOR = re.compile(r"^F(\d+)(\(t\))?(?::(.+))?$")


def parse_descriptor(text: str) -> BaseFieldDesc:
    """Parse `F2`, `F4:w^2+w+1`, `F2(t)` or `F9(t):w^2+1`."""
    match = _DESCRIPTOR.match(text.replace(" ", ""))
    if not match:
        raise FieldError(f"malformed base field descriptor {text!r}")
    q = int(match.group(1))
    if q < 2 or not galois.is_prime_power(q):
        raise FieldError(f"{q} is not a prime power")
    (p,), (d,) = galois.factors(q)
    modulus = None
    if match.group(3):
        try:
            poly = galois.Poly.Str(match.group(3).replace("w", "x"), field=galois.GF(p))
        except (ValueError, TypeError) as e:
            raise FieldError(f"malformed modulus {match.group(3)!r}") from e
        if poly.degree != d:
            raise FieldError(f"modulus degree {poly.degree} does not match F{q}")
        modulus = tuple(int(c) for c in poly.coeffs)
    if match.group(2):
        return BaseFieldDesc.ratfunc(p, d, modulus)
    return BaseFieldDesc.finite(p, d, modulus)


def parse_base(text: str) -> Union[BaseFieldDesc, str]:
    """Descriptor parser that also accepts the symbolic algebraically-closed base."""
    if text.strip().lower() == ALGEBRAICALLY_CLOSED:
        return ALGEBRAICALLY_CLOSED
    return parse_descriptor(text)


# ---------------------------------------------------------------------------
# Raw arithmetic back ends
# ---------------------------------------------------------------------------

class FiniteFieldOps:
    """Arithmetic on the integer representation of F_{p^d}.

    Prime fields use modular integers; small extension fields use add/mul
    tables computed once with galois broadcasting; larger ones fall back to
    galois scalars.
    """

    def __init__(self, desc: BaseFieldDesc):
        self.desc = desc
        self.p = desc.p
        self.d = desc.d
        self.order = desc.order
        self.zero = 0
        self.one = 1
        if self.d == 1:
            self.gf = galois.GF(self.p)
        else:
            self.gf = galois.GF(self.order, irreducible_poly=galois.Poly(list(desc.modulus), field=galois.GF(self.p)))
        self._tables = self.d > 1 and self.order <= config.field_table_max_order
        if self._tables:
            elements = self.gf.elements
            self._add = (elements[:, None] + elements[None, :]).view(np.ndarray).tolist()
            self._mul = (elements[:, None] * elements[None, :]).view(np.ndarray).tolist()
            self._neg = (-elements).view(np.ndarray).tolist()
            self._inv = [0] + (elements[1:] ** -1).view(np.ndarray).tolist()
            self._root = (elements ** (self.order // self.p)).view(np.ndarray).tolist()
            self._trace = self._vector_trace(elements)
            logger.debug("built arithmetic tables for %s", desc)

    def _vector_trace(self, elements) -> list[int]:
        acc = elements.copy()
        power = elements.copy()
        for _ in range(1, self.d):
            power = power ** self.p
            acc = acc + power
        return acc.view(np.ndarray).tolist()

    # field axioms ---------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        if self._tables:
            return self._add[a][b]
        return int(self.gf(a) + self.gf(b))

    def neg(self, a: int) -> int:
        if self.d == 1:
            return -a % self.p
        if self._tables:
            return self._neg[a]
        return int(-self.gf(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return a * b % self.p
        if self._tables:
            return self._mul[a][b]
        return int(self.gf(a) * self.gf(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero")
        if self.d == 1:
            return pow(a, self.p - 2, self.p)
        if self._tables:
            return self._inv[a]
        return int(self.gf(a) ** -1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.d == 1:
            return pow(a, e, self.p)
        return int(self.gf(a) ** e)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def pth_root(self, a: int) -> int:
        if self.d == 1:
            return a
        if self._tables:
            return self._root[a]
        return int(self.gf(a) ** (self.order // self.p))

    def is_zero(self, a: int) -> bool:
        return a == 0

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.order)

    # Artin–Schreier ------------------------------------------------------
    def trace(self, a: int) -> int:
        """Absolute trace to F_p, as an integer in 0..p-1."""
        if self.d == 1:
            return a
        if self._tables:
            return self._trace[a]
        x = self.gf(a)
        acc, power = x, x
        for _ in range(1, self.d):
            power = power ** self.p
            acc = acc + power
        return int(acc)

    @cached_property
    def tau(self) -> int:
        """Smallest element (in integer order) with nonzero trace."""
        return next(a for a in self.elements() if self.trace(a) != 0)

    def as_map(self, a: int) -> int:
        return self.sub(self.frobenius(a), a)

    def reduce_as(self, a: int) -> tuple[int, int]:
        """Return (canonical, witness) with a = canonical + ℘(witness).

        The canonical complement of ℘(F_q) is {0, τ, 2τ, ..., (p−1)τ}.
        """
        tr_tau = self.trace(self.tau)
        lam = self.trace(a) * pow(tr_tau, self.p - 2, self.p) % self.p
        canonical = self.mul(self.from_int(lam), self.tau)
        return canonical, self._as_root(self.sub(a, canonical))

    def _as_root(self, c: int) -> int:
        # additive Hilbert 90: for Tr(c) = 0 and Tr(u) = 1,
        # x = −Σ_{i=1}^{d−1} (c + c^p + … + c^{p^{i−1}}) u^{p^i} solves x^p − x = c
        if c == 0:
            return 0
        u = self.mul(self.tau, self.from_int(pow(self.trace(self.tau), self.p - 2, self.p)))
        beta = 0
        partial = 0
        c_power, u_power = c, u
        for _ in range(1, self.d):
            partial = self.add(partial, c_power)
            c_power = self.frobenius(c_power)
            u_power = self.frobenius(u_power)
            beta = self.add(beta, self.mul(partial, u_power))
        return self.neg(beta)

    # display --------------------------------------------------------------
    def to_str(self, a: int) -> str:
        if self.d == 1:
            return str(a)
        digits = [(a // self.p ** i) % self.p for i in range(self.d)]
        terms = []
        for i in reversed(range(self.d)):
            c = digits[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "w" if i == 1 else f"w^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def generator(self) -> int:
        if self.d == 1:
            raise FieldError(f"{self.desc} has no generator w")
        return self.p


@dataclass(frozen=True)
class RatRaw:
    """Reduced fraction num/den of descending coefficient tuples, den monic."""

    num: tuple[int, ...]
    den: tuple[int, ...]


class RationalFunctionOps:
    """Arithmetic on F_q(t) with galois polynomials over the constant field."""

    def __init__(self, desc: BaseFieldDesc):
        self.desc = desc
        self.p = desc.p
        self.coeffs: FiniteFieldOps = field_ops(desc.constant_field())
        self.gf = self.coeffs.gf
        self.q = desc.order
        self.zero = RatRaw((0,), (1,))
        self.one = RatRaw((1,), (1,))

    # polynomial helpers -------------------------------------------------
    def _poly(self, coeffs: Sequence[int]) -> galois.Poly:
        return galois.Poly(list(coeffs), field=self.gf)

    def _const(self, c: int) -> galois.Poly:
        return galois.Poly([c], field=self.gf)

    @staticmethod
    def _is_zero_poly(poly: galois.Poly) -> bool:
        return poly.degree == 0 and int(poly.coeffs[0]) == 0

    @staticmethod
    def _coeff_tuple(poly: galois.Poly) -> tuple[int, ...]:
        return tuple(int(c) for c in poly.coeffs)

    def _make(self, num: galois.Poly, den: galois.Poly) -> RatRaw:
        if self._is_zero_poly(den):
            raise FieldError("division by zero")
        if self._is_zero_poly(num):
            return self.zero
        g = galois.gcd(num, den)
        num, den = num // g, den // g
        lead = int(den.coeffs[0])
        if lead != 1:
            scale = self._const(self.coeffs.inv(lead))
            num, den = num * scale, den * scale
        return RatRaw(self._coeff_tuple(num), self._coeff_tuple(den))

    def polys(self, a: RatRaw) -> tuple[galois.Poly, galois.Poly]:
        return self._poly(a.num), self._poly(a.den)

    # field axioms ---------------------------------------------------------
    def add(self, a: RatRaw, b: RatRaw) -> RatRaw:
        an, ad = self.polys(a)
        bn, bd = self.polys(b)
        return self._make(an * bd + bn * ad, ad * bd)

    def neg(self, a: RatRaw) -> RatRaw:
        an, ad = self.polys(a)
        return self._make(-an, ad)

    def sub(self, a: RatRaw, b: RatRaw) -> RatRaw:
        return self.add(a, self.neg(b))

    def mul(self, a: RatRaw, b: RatRaw) -> RatRaw:
        an, ad = self.polys(a)
        bn, bd = self.polys(b)
        return self._make(an * bn, ad * bd)

    def inv(self, a: RatRaw) -> RatRaw:
        if self.is_zero(a):
            raise FieldError("division by zero")
        an, ad = self.polys(a)
        return self._make(ad, an)

    def div(self, a: RatRaw, b: RatRaw) -> RatRaw:
        return self.mul(a, self.inv(b))

    def pow(self, a: RatRaw, e: int) -> RatRaw:
        if e < 0:
            return self.pow(self.inv(a), -e)
        an, ad = self.polys(a)
        return self._make(an ** e, ad ** e)

    def frobenius(self, a: RatRaw) -> RatRaw:
        return self.pow(a, self.p)

    def _poly_pth_root(self, poly: galois.Poly) -> galois.Poly:
        degrees = [int(e) for e in poly.nonzero_degrees]
        if any(e % self.p for e in degrees):
            raise FieldError("element is not a p-th power in the imperfect field F_q(t)")
        roots = [self.coeffs.pth_root(int(c)) for c in poly.nonzero_coeffs]
        return galois.Poly.Degrees([e // self.p for e in degrees], coeffs=roots, field=self.gf)

    def pth_root(self, a: RatRaw) -> RatRaw:
        if self.is_zero(a):
            return self.zero
        an, ad = self.polys(a)
        return self._make(self._poly_pth_root(an), self._poly_pth_root(ad))

    def is_pth_power(self, a: RatRaw) -> bool:
        try:
            self.pth_root(a)
        except FieldError:
            return False
        return True

    def is_zero(self, a: RatRaw) -> bool:
        return a.num == (0,)

    def from_int(self, n: int) -> RatRaw:
        return self.constant(self.coeffs.from_int(n))

    def constant(self, c: int) -> RatRaw:
        return RatRaw((c,), (1,)) if c else self.zero

    def variable(self) -> RatRaw:
        return RatRaw((1, 0), (1,))

    # Artin–Schreier ------------------------------------------------------
    def as_map(self, a: RatRaw) -> RatRaw:
        return self.sub(self.frobenius(a), a)

    def _subtract_as(self, current: RatRaw, witness: RatRaw, h: RatRaw) -> tuple[RatRaw, RatRaw]:
        return self.sub(current, self.as_map(h)), self.add(witness, h)

    def _finite_place_correction(self, a: RatRaw, pi: galois.Poly, e: int) -> Optional[RatRaw]:
        """Highest pole term c·π^{-j} with p | j, turned into g·π^{-j/p} with g^p ≡ c mod π."""
        num, den = self.polys(a)
        pi_e = pi ** e
        cofactor = den // pi_e
        _, s, _ = galois.egcd(cofactor, pi_e)
        remainder = (num * s) % pi_e
        digits = []
        for _ in range(e):
            digits.append(remainder % pi)
            remainder = remainder // pi
        # digits[i] is the coefficient of π^{i−e}
        residue_order = self.q ** pi.degree
        for j in range(e, 0, -1):
            c = digits[e - j]
            if j % self.p or self._is_zero_poly(c):
                continue
            g = pow(c, residue_order // self.p, pi)
            return self._make(g, pi ** (j // self.p))
        return None

    def reduce_as(self, a: RatRaw) -> tuple[RatRaw, RatRaw]:
        """Partial-fraction Artin–Schreier reduction.

        Pole terms of order divisible by p at every finite place and at
        infinity are removed top-down; the constant is reduced in F_q.
        """
        current, witness = a, self.zero
        while True:
            den = self._poly(current.den)
            correction = None
            if den.degree > 0:
                factors, multiplicities = den.factors()
                for pi, e in zip(factors, multiplicities):
                    correction = self._finite_place_correction(current, pi, int(e))
                    if correction is not None:
                        break
            if correction is None:
                break
            current, witness = self._subtract_as(current, witness, correction)

        while True:
            num, den = self.polys(current)
            polynomial_part = num // den
            terms = dict(zip((int(e) for e in polynomial_part.nonzero_degrees),
                             (int(c) for c in polynomial_part.nonzero_coeffs)))
            bad = [e for e in terms if e > 0 and e % self.p == 0]
            if not bad:
                break
            top = max(bad)
            root = self.coeffs.pth_root(terms[top])
            h = self._make(galois.Poly.Degrees([top // self.p], coeffs=[root], field=self.gf), self._const(1))
            current, witness = self._subtract_as(current, witness, h)

        constant = terms.get(0, 0)
        _, x = self.coeffs.reduce_as(constant)
        if x:
            current, witness = self._subtract_as(current, witness, self.constant(x))
        return current, witness

    # display --------------------------------------------------------------
    def _poly_str(self, coeffs: Sequence[int], shift: int = 0) -> str:
        degree = len(coeffs) - 1
        terms = []
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            e = degree - i - shift
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            coeff = self.coeffs.to_str(c)
            if self.coeffs.d > 1 and " " in coeff:
                coeff = f"({coeff})"
            if not mono:
                terms.append(coeff)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{coeff}*{mono}")
        return " + ".join(terms) if terms else "0"

    def to_str(self, a: RatRaw) -> str:
        if self.is_zero(a):
            return "0"
        den_degree = len(a.den) - 1
        if all(c == 0 for c in a.den[1:]):
            # monomial denominator: print as a Laurent polynomial in t
            return self._poly_str(a.num, shift=den_degree)
        num = self._poly_str(a.num)
        den = self._poly_str(a.den)
        if " " in num:
            num = f"({num})"
        return f"{num}*({den})^-1"


@lru_cache(maxsize=None)
def field_ops(desc: BaseFieldDesc) -> Union[FiniteFieldOps, RationalFunctionOps]:
    """Shared arithmetic back end for a descriptor."""
    if desc.is_finite:
        return FiniteFieldOps(desc)
    return RationalFunctionOps(desc)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseFieldElement:
    desc: BaseFieldDesc
    raw: Any

    @property
    def ops(self):
        return field_ops(self.desc)

    @classmethod
    def from_int(cls, desc: BaseFieldDesc, n: int) -> "BaseFieldElement":
        return cls(desc, field_ops(desc).from_int(n))

    @classmethod
    def zero(cls, desc: BaseFieldDesc) -> "BaseFieldElement":
        return cls(desc, field_ops(desc).zero)

    @classmethod
    def one(cls, desc: BaseFieldDesc) -> "BaseFieldElement":
        return cls(desc, field_ops(desc).one)

    @classmethod
    def generator(cls, desc: BaseFieldDesc) -> "BaseFieldElement":
        """The class w of the variable in F_p[w]/(modulus)."""
        if not desc.is_finite:
            ops = field_ops(desc)
            return cls(desc, ops.constant(ops.coeffs.generator()))
        return cls(desc, field_ops(desc).generator())

    @classmethod
    def variable(cls, desc: BaseFieldDesc) -> "BaseFieldElement":
        """The transcendental t of F_q(t)."""
        if desc.is_finite:
            raise FieldError(f"{desc} has no variable t")
        return cls(desc, field_ops(desc).variable())

    def _coerce(self, other) -> Any:
        if isinstance(other, BaseFieldElement):
            if other.desc != self.desc:
                raise FieldError(f"cannot combine elements of {self.desc} and {other.desc}")
            return other.raw
        if isinstance(other, int):
            return self.ops.from_int(other)
        return NotImplemented

    def __add__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return BaseFieldElement(self.desc, self.ops.add(self.raw, raw))

    __radd__ = __add__

    def __sub__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return BaseFieldElement(self.desc, self.ops.sub(self.raw, raw))

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return BaseFieldElement(self.desc, self.ops.neg(self.raw))

    def __mul__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return BaseFieldElement(self.desc, self.ops.mul(self.raw, raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return raw
        return BaseFieldElement(self.desc, self.ops.div(self.raw, raw))

    def __pow__(self, e: int):
        return BaseFieldElement(self.desc, self.ops.pow(self.raw, e))

    def __bool__(self) -> bool:
        return not self.ops.is_zero(self.raw)

    def is_zero(self) -> bool:
        return self.ops.is_zero(self.raw)

    def inverse(self) -> "BaseFieldElement":
        return BaseFieldElement(self.desc, self.ops.inv(self.raw))

    def pth_power(self) -> "BaseFieldElement":
        return BaseFieldElement(self.desc, self.ops.frobenius(self.raw))

    def pth_root(self) -> "BaseFieldElement":
        return BaseFieldElement(self.desc, self.ops.pth_root(self.raw))

    def __str__(self) -> str:
        return self.ops.to_str(self.raw)

    def __repr__(self) -> str:
        return f"BaseFieldElement({self.desc}, {self})"


def elements(desc: BaseFieldDesc) -> Iterator[BaseFieldElement]:
    """All elements of a finite field, in integer-representation order."""
    if not desc.is_finite:
        raise FieldError(f"{desc} is infinite")
    for raw in field_ops(desc).elements():
        yield BaseFieldElement(desc, raw)


def wp(x: BaseFieldElement) -> BaseFieldElement:
    """The Artin–Schreier map ℘(x) = x^p − x."""
    return BaseFieldElement(x.desc, x.ops.as_map(x.raw))


@dataclass(frozen=True)
class ArithmeticResults:
    add: BaseFieldElement
    sub: BaseFieldElement
    mul: BaseFieldElement
    div: Optional[BaseFieldElement]
    pth_power: BaseFieldElement
    pth_root: Optional[BaseFieldElement]


def arithmetic_suite(x: BaseFieldElement, y: BaseFieldElement) -> ArithmeticResults:
    """Field operations on x and y; division by zero raises, p-th roots are
    omitted over F_q(t) when x is not a p-th power."""
    if x.desc != y.desc:
        raise FieldError(f"cannot combine elements of {x.desc} and {y.desc}")
    root = None
    if x.desc.is_perfect or x.ops.is_pth_power(x.raw):
        root = x.pth_root()
    return ArithmeticResults(
        add=x + y,
        sub=x - y,
        mul=x * y,
        div=x / y,
        pth_power=x.pth_power(),
        pth_root=root,
    )


@dataclass(frozen=True)
class ASReduction:
    input: BaseFieldElement
    canonical: BaseFieldElement
    witness: BaseFieldElement
    in_image: bool


def artin_schreier_reduce(beta: BaseFieldElement) -> ASReduction:
    """Canonical representative of β modulo ℘(k), with β = canonical + ℘(witness)."""
    canonical, witness = beta.ops.reduce_as(beta.raw)
    result = ASReduction(
        input=beta,
        canonical=BaseFieldElement(beta.desc, canonical),
        witness=BaseFieldElement(beta.desc, witness),
        in_image=beta.ops.is_zero(canonical),
    )
    logger.debug("℘-reduce %s -> %s (witness %s)", beta, result.canonical, result.witness)
    return result


def _check_budget(betas: Sequence[BaseFieldElement], max_rank: Optional[int]) -> None:
    limit = config.as_independence_max_rank if max_rank is None else max_rank
    if len(betas) > limit:
        p = betas[0].desc.p
        raise IndependenceBudgetError(
            f"{p ** len(betas) - 1} combinations exceed the budget of {p ** limit - 1} (rank {limit})"
        )


def find_as_dependency(
    betas: Sequence[BaseFieldElement], max_rank: Optional[int] = None
) -> Optional[tuple[tuple[int, ...], ASReduction]]:
    """First nonzero F_p-combination of the βs lying in ℘(k), or None.

    Combinations are enumerated in `itertools.product` order over F_p^r.
    """
    if not betas:
        return None
    desc = betas[0].desc
    if any(b.desc != desc for b in betas):
        raise FieldError("all elements must lie in the same field")
    _check_budget(betas, max_rank)
    for coeffs in itertools.product(range(desc.p), repeat=len(betas)):
        if not any(coeffs):
            continue
        combination = BaseFieldElement.zero(desc)
        for c, beta in zip(coeffs, betas):
            if c:
                combination = combination + beta * c
        reduction = artin_schreier_reduce(combination)
        if reduction.in_image:
            return coeffs, reduction
    return None


def as_independent(betas: Sequence[BaseFieldElement], max_rank: Optional[int] = None) -> bool:
    """True iff no nonzero F_p-combination of the βs lies in ℘(k)."""
    return find_as_dependency(betas, max_rank) is None


def cokernel_dim(desc: Union[BaseFieldDesc, str]) -> Union[int, float]:
    """dim_{F_p} k/℘(k): 1 for finite fields, infinite for F_q(t), 0 when algebraically closed."""
    if desc == ALGEBRAICALLY_CLOSED:
        return 0
    if desc.is_finite:
        return 1
    return INFINITE
