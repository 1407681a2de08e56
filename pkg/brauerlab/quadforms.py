"""Characteristic-2 quadratic and bilinear Pfister forms over Laurent towers.

Conventions: ⟨⟨a₁,…,aₙ⟩⟩ = ⟨1, a₁⟩ ⊗ … ⊗ ⟨1, aₙ⟩ (so ⟨⟨⟩⟩ = ⟨1⟩), and the
symplectic block [1, w] is the binary quadratic form x² + xy + wy².
"""
from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .basefield import field_ops
from .gf2 import component_rank, fp_rank, span_intersection
from .laurent import (
    FieldTower,
    LaurentPoly,
    Monomial,
    PrecisionWindow,
    as_normalize,
    product_polys,
    rtl_key,
    unit_vector,
    valuation,
)

logger = logging.getLogger(__name__)


class FormError(ValueError):
    """Malformed form or unsupported form computation."""


class Anisotropy(str, enum.Enum):
    ANISOTROPIC = "Anisotropic"
    UNKNOWN = "Unknown"


def _require_char2(tower: FieldTower) -> None:
    if tower.p != 2:
        raise FormError(f"quadratic and bilinear Pfister forms here need characteristic 2, got {tower.p}")


def pfister_monomials(slots: Sequence[LaurentPoly], tower: FieldTower, include_one: bool = True) -> list[LaurentPoly]:
    """Products ∏ aᵢ^{eᵢ} for e ∈ {0,1}ⁿ, ordered by the binary integer of e (bit i ↔ slot i+1)."""
    start = 0 if include_one else 1
    return [
        product_polys((s for i, s in enumerate(slots) if mask >> i & 1), tower)
        for mask in range(start, 1 << len(slots))
    ]


@dataclass(frozen=True)
class BilPfister:
    tower: FieldTower
    slots: tuple[LaurentPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        for s in self.slots:
            if s.is_zero():
                raise FormError("bilinear Pfister slots must be nonzero")
            if s.tower != self.tower:
                raise FormError(f"slot {s} is not over {self.tower}")

    @property
    def n(self) -> int:
        return len(self.slots)

    def monomials(self) -> list[LaurentPoly]:
        """The 2ⁿ diagonal entries."""
        return pfister_monomials(self.slots, self.tower)

    def as_diagonal_form(self) -> "BlockForm":
        """The diagonal quadratic form Σ dᵢ zᵢ² (isotropic iff the bilinear form is)."""
        return BlockForm(self.tower, (), tuple(self.monomials()))

    def __str__(self) -> str:
        return "<<" + ", ".join(str(s) for s in self.slots) + ">>"


@dataclass(frozen=True)
class QuadPfister:
    """⟨⟨a₁,…,a_{n−1}, b]] = ⟨⟨a₁,…,a_{n−1}⟩⟩ ⊗ [1, b]."""

    tower: FieldTower
    bil_slots: tuple[LaurentPoly, ...]
    as_slot: LaurentPoly

    def __post_init__(self):
        _require_char2(self.tower)
        object.__setattr__(self, "bil_slots", tuple(self.bil_slots))
        for s in self.bil_slots:
            if s.is_zero():
                raise FormError("bilinear slots must be nonzero")
            if s.tower != self.tower:
                raise FormError(f"slot {s} is not over {self.tower}")
        if self.as_slot.tower != self.tower:
            raise FormError(f"slot {self.as_slot} is not over {self.tower}")

    @property
    def n(self) -> int:
        return len(self.bil_slots) + 1

    def as_block_form(self) -> "BlockForm":
        return BlockForm(self.tower, (Block(self.tower.one(), self.bil_slots, self.as_slot),))

    def __str__(self) -> str:
        return "<<" + ", ".join(str(s) for s in self.bil_slots) + "; " + str(self.as_slot) + "]]"


@dataclass(frozen=True)
class Block:
    """c·⟨⟨multiplier⟩⟩ ⊗ [1, w]."""

    scalar: LaurentPoly
    multiplier: tuple[LaurentPoly, ...]
    w: LaurentPoly

    def __post_init__(self):
        object.__setattr__(self, "multiplier", tuple(self.multiplier))
        if self.scalar.is_zero():
            raise FormError("block scalars must be nonzero")

    def __str__(self) -> str:
        parts = []
        if self.scalar != self.scalar.tower.one():
            scalar = str(self.scalar)
            parts.append(f"({scalar})" if " " in scalar else scalar)
        if self.multiplier:
            parts.append("<<" + ", ".join(str(s) for s in self.multiplier) + ">>")
        parts.append(f"[1, {self.w}]")
        return "*".join(parts)


@dataclass(frozen=True)
class BlockForm:
    """⊥ of blocks plus a diagonal part ⟨d₁, d₂, …⟩ (quadratic: Σ dᵢ zᵢ²)."""

    tower: FieldTower
    blocks: tuple[Block, ...] = ()
    diag: tuple[LaurentPoly, ...] = ()

    def __post_init__(self):
        _require_char2(self.tower)
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "diag", tuple(self.diag))
        for block in self.blocks:
            for x in (block.scalar, block.w, *block.multiplier):
                if x.tower != self.tower:
                    raise FormError(f"{x} is not over {self.tower}")
        for d in self.diag:
            if d.is_zero():
                raise FormError("diagonal entries must be nonzero")

    def pieces(self) -> list[tuple[LaurentPoly, LaurentPoly]]:
        """Binary pieces (c·m, w): one per block and multiplier monomial m."""
        return [
            (block.scalar * m, block.w)
            for block in self.blocks
            for m in pfister_monomials(block.multiplier, self.tower)
        ]

    @property
    def dimension(self) -> int:
        return 2 * len(self.pieces()) + len(self.diag)

    def evaluate(self, vector: Sequence[LaurentPoly]) -> LaurentPoly:
        """Q(v) with v laid out as (x₁, y₁, x₂, y₂, …, z₁, z₂, …)."""
        pieces = self.pieces()
        if len(vector) != 2 * len(pieces) + len(self.diag):
            raise FormError(f"vector of length {len(vector)} for a form of dimension {self.dimension}")
        total = self.tower.zero()
        for i, (c, w) in enumerate(pieces):
            x, y = vector[2 * i], vector[2 * i + 1]
            total = total + c * (x * x + x * y + w * y * y)
        offset = 2 * len(pieces)
        for j, d in enumerate(self.diag):
            z = vector[offset + j]
            total = total + d * z * z
        return total

    def __str__(self) -> str:
        parts = [str(b) for b in self.blocks]
        if self.diag:
            parts.append("<" + ", ".join(str(d) for d in self.diag) + ">")
        return " _|_ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class F2SpanGenSet:
    """The F²-span Σ F²·gᵢ."""

    tower: FieldTower
    generators: tuple[LaurentPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if any(g.is_zero() for g in self.generators):
            raise FormError("span generators must be nonzero")

    def __str__(self) -> str:
        return "{" + ", ".join(str(g) for g in self.generators) + "}"


# ---------------------------------------------------------------------------
# quadratic non-linkage
# ---------------------------------------------------------------------------

def witt_block_sum(u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
    """[1, u] ⊥ [1, v] is Witt equivalent to [1, u + v] ⊥ hyperbolic."""
    _require_char2(u.tower)
    return u + v


def quad_linkage_counterexample(n: int, tower: FieldTower) -> tuple[QuadPfister, QuadPfister, BlockForm]:
    """φ = ⟨⟨α₁..α_{n−1}, αₙ⁻¹]], ψ = ⟨⟨α₁..α_{n−2}, αₙ, α_{n+1}⁻¹]] and the form ω ~ φ ⊥ ψ."""
    if n < 2:
        raise FormError(f"n must be >= 2, got {n}")
    if tower.n != n + 1:
        raise FormError(f"need a tower with {n + 1} variables, got {tower.n}")
    _require_char2(tower)
    a = tower.variable
    inv = lambda i: tower.monomial(unit_vector(tower.n, i, -1))  # noqa: E731
    common = tuple(a(i) for i in range(1, n - 1))
    phi = QuadPfister(tower, common + (a(n - 1),), inv(n))
    psi = QuadPfister(tower, common + (a(n),), inv(n + 1))
    omega = BlockForm(tower, (
        Block(tower.one(), common, witt_block_sum(inv(n), inv(n + 1))),
        Block(a(n - 1), common, inv(n)),
        Block(a(n), common, inv(n + 1)),
    ))
    return phi, psi, omega


@dataclass(frozen=True)
class AnisotropyVerdict:
    status: Anisotropy
    classes: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...] = ()
    reason: str = ""


def _signature(x: LaurentPoly) -> tuple[int, ...]:
    return valuation(x).mod(2)


def anisotropic_by_values(form: BlockForm) -> AnisotropyVerdict:
    """Sufficient anisotropy criterion by value classes modulo 2Γ.

    Every binary piece c·[1, w] must be ramified (v(w) < 0 with an odd
    coordinate, values in the classes of c and c·w) or inert (w a constant
    outside ℘(k), values in the class of c); diagonal entries d contribute the
    class of d. When all classes are pairwise distinct, no cancellation of
    leading terms is possible and the form is anisotropic.
    """
    classes: list[tuple[str, tuple[tuple[int, ...], ...]]] = []
    for c, w in form.pieces():
        label = f"{c}*[1, {w}]"
        reduced = as_normalize(w).normalized
        if reduced.is_zero():
            return AnisotropyVerdict(Anisotropy.UNKNOWN, tuple(classes), f"{label} is hyperbolic")
        vw = valuation(reduced)
        sig_c = _signature(c)
        if vw.is_negative() and not vw.divisible_by(2):
            sig_w = vw.mod(2)
            classes.append((label, (sig_c, tuple((a + b) % 2 for a, b in zip(sig_c, sig_w)))))
        elif reduced.is_constant():
            classes.append((label, (sig_c,)))
        else:
            return AnisotropyVerdict(Anisotropy.UNKNOWN, tuple(classes), f"{label}: value {vw} of w is not ramified")
    for d in form.diag:
        classes.append((f"<{d}>", (_signature(d),)))
    seen: dict[tuple[int, ...], str] = {}
    for label, sigs in classes:
        for sig in sigs:
            if sig in seen:
                return AnisotropyVerdict(
                    Anisotropy.UNKNOWN, tuple(classes), f"value class {sig} shared by {seen[sig]} and {label}"
                )
            seen[sig] = label
    return AnisotropyVerdict(Anisotropy.ANISOTROPIC, tuple(classes), "all value classes distinct")


@dataclass(frozen=True)
class IsotropyResult:
    witness: Optional[tuple[LaurentPoly, ...]]
    evaluations: int
    exhausted: bool

    @property
    def message(self) -> str:
        if self.witness is not None:
            return "(" + ", ".join(str(x) for x in self.witness) + ")"
        if self.exhausted:
            return f"none found (budget {self.evaluations})"
        return "none found"


def _add_into(acc: dict[Monomial, Any], terms, ops) -> None:
    for m, c in terms:
        acc[m] = ops.add(acc[m], c) if m in acc else c


def brute_force_isotropy(form: BlockForm, window: PrecisionWindow, budget: int) -> IsotropyResult:
    """Search for an isotropic vector with entries supported in the window.

    Vectors are enumerated by support size, then over (entry, monomial) slots
    in order, then over nonzero coefficients. Window monomials are taken
    simplest first (by total degree, then value). In characteristic 2 the
    polar form vanishes on the diagonal, so Q(Σ sᵢ) is the sum of the Q(sᵢ)
    plus c·xy cross terms inside each binary piece.
    """
    tower = form.tower
    if not tower.base.is_finite:
        raise FormError(f"brute-force isotropy needs a finite base field, got {tower.base}")
    if budget < 1:
        raise FormError("budget must be >= 1")
    ops = field_ops(tower.base)
    pieces = form.pieces()
    dim = form.dimension
    monomials = sorted(window.monomials(), key=lambda m: (sum(abs(e) for e in m), rtl_key(m)))
    slots = [(entry, mono) for entry in range(dim) for mono in monomials]
    nonzero = list(range(1, ops.order))

    def entry_square_coeff(entry: int) -> LaurentPoly:
        if entry < 2 * len(pieces):
            c, w = pieces[entry // 2]
            return c if entry % 2 == 0 else c * w
        return form.diag[entry - 2 * len(pieces)]

    square_coeffs = [entry_square_coeff(e) for e in range(dim)]
    piece_scalars = [c for c, _ in pieces]

    def slot_term(slot: int, coeff: int) -> LaurentPoly:
        _, mono = slots[slot]
        return LaurentPoly.from_terms(tower, {mono: coeff})

    diagonal_cache: dict[tuple[int, int], tuple] = {}
    cross_cache: dict[tuple[int, int, int, int], tuple] = {}

    def diagonal(slot: int, coeff: int):
        key = (slot, coeff)
        if key not in diagonal_cache:
            s = slot_term(slot, coeff)
            diagonal_cache[key] = (square_coeffs[slots[slot][0]] * s * s).terms
        return diagonal_cache[key]

    def cross(i: int, ci: int, j: int, cj: int):
        key = (i, ci, j, cj)
        if key not in cross_cache:
            cross_cache[key] = (piece_scalars[slots[i][0] // 2] * slot_term(i, ci) * slot_term(j, cj)).terms
        return cross_cache[key]

    evaluations = 0
    for k in range(1, len(slots) + 1):
        for combo in itertools.combinations(range(len(slots)), k):
            pairs = [
                (a, b) for a, b in itertools.combinations(range(k), 2)
                if slots[combo[a]][0] < 2 * len(pieces)
                and slots[combo[a]][0] // 2 == slots[combo[b]][0] // 2
                and slots[combo[a]][0] != slots[combo[b]][0]
            ]
            for coeffs in itertools.product(nonzero, repeat=k):
                if evaluations >= budget:
                    logger.info("brute-force isotropy: budget %d exhausted", budget)
                    return IsotropyResult(None, evaluations, True)
                evaluations += 1
                acc: dict[Monomial, Any] = {}
                for pos in range(k):
                    _add_into(acc, diagonal(combo[pos], coeffs[pos]), ops)
                for a, b in pairs:
                    _add_into(acc, cross(combo[a], coeffs[a], combo[b], coeffs[b]), ops)
                if all(ops.is_zero(c) for c in acc.values()):
                    vector = [tower.zero()] * dim
                    for pos in range(k):
                        entry, _ = slots[combo[pos]]
                        vector[entry] = vector[entry] + slot_term(combo[pos], coeffs[pos])
                    logger.info("brute-force isotropy: witness after %d evaluations", evaluations)
                    return IsotropyResult(tuple(vector), evaluations, False)
    return IsotropyResult(None, evaluations, False)


# ---------------------------------------------------------------------------
# bilinear non-linkage
# ---------------------------------------------------------------------------

def _supported_slot(s: LaurentPoly) -> bool:
    one = field_ops(s.tower.base).one
    if s.is_monomial():
        return s.terms[0][1] == one
    if len(s.terms) == 2 and s.terms[0][0] == (0,) * s.tower.n:
        (_, c0), (m1, c1) = s.terms
        return c0 == one and c1 == one and sum(m1) == 1 and all(e in (0, 1) for e in m1)
    return False


def pure_subform_genset(phi: BilPfister) -> F2SpanGenSet:
    """Generators ∏ aᵢ^{eᵢ}, e ≠ 0, of the F²-space D(φ') ∪ {0}."""
    _require_char2(phi.tower)
    for s in phi.slots:
        if not _supported_slot(s):
            raise FormError(f"unsupported slot shape {s}: expected a monomial or a_j + 1")
    return F2SpanGenSet(phi.tower, tuple(pfister_monomials(phi.slots, phi.tower, include_one=False)))


@dataclass(frozen=True)
class SpanIntersection:
    dim_at_window: int
    stabilized: bool
    dim_grown: int
    window: str


def _windowed_rank(gensets: Sequence[F2SpanGenSet], window: PrecisionWindow, columns: dict[Monomial, int]) -> int:
    rows = []
    for genset in gensets:
        for g in genset.generators:
            for mu in window.monomials():
                square = tuple(2 * e for e in mu)
                rows.append([
                    columns.setdefault(tuple(a + b for a, b in zip(square, m)), len(columns))
                    for m in g.monomials()
                ])
    return component_rank(rows)


def _windowed_intersection(a: F2SpanGenSet, b: F2SpanGenSet, window: PrecisionWindow) -> int:
    columns: dict[Monomial, int] = {}
    rank_a = _windowed_rank([a], window, columns)
    rank_b = _windowed_rank([b], window, columns)
    rank_union = _windowed_rank([a, b], window, columns)
    return (rank_a + rank_b - rank_union) // window.size()


def f2span_intersection_dim(a: F2SpanGenSet, b: F2SpanGenSet, window: PrecisionWindow) -> SpanIntersection:
    """F²-dimension of span(a) ∩ span(b) with scalars supported in the window.

    Over F_2 squaring is linear on coefficient vectors, so the windowed spans
    are the F_2-spans of μ²·g for μ in the window; the F_2-dimension of their
    intersection divided by the window size is the F²-readout. The window is
    then grown by one in every upper bound to check that the readout is stable.
    """
    if a.tower != b.tower:
        raise FormError("generator sets lie in different towers")
    tower = a.tower
    if tower.base.order != 2:
        raise FormError(f"F²-span intersections need base field F2, got {tower.base}")
    if window.n != tower.n:
        raise FormError(f"window has {window.n} coordinates, tower has {tower.n}")
    if not window.contains((0,) * tower.n):
        raise FormError(f"window {window} does not contain the generators themselves (scalar 1)")
    dim = _windowed_intersection(a, b, window)
    grown = window.grown()
    dim_grown = _windowed_intersection(a, b, grown)
    logger.info("F²-span intersection: %d at window %s, %d at %s", dim, window, dim_grown, grown)
    return SpanIntersection(dim, dim == dim_grown, dim_grown, str(window))


def bilinear_linkage_counterexample(n: int, tower: FieldTower) -> tuple[BilPfister, BilPfister]:
    """φ = ⟨⟨α₁..α_{n−1}, αₙ⟩⟩ and ψ = ⟨⟨α₁..α_{n−2}, α_{n−1}+1, α_{n+1}⟩⟩."""
    if n < 2:
        raise FormError(f"n must be >= 2, got {n}")
    if tower.n < n + 1:
        raise FormError(f"need at least {n + 1} variables, got {tower.n}")
    _require_char2(tower)
    a = tower.variable
    common = tuple(a(i) for i in range(1, n - 1))
    phi = BilPfister(tower, common + (a(n - 1), a(n)))
    psi = BilPfister(tower, common + (a(n - 1) + tower.one(), a(n + 1)))
    return phi, psi


# ---------------------------------------------------------------------------
# characteristic ≠ 2 linkage and the 2-rank criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommonFactor:
    factor: Optional[tuple[Monomial, ...]]
    intersection_dim: int
    message: str

    @property
    def violated(self) -> bool:
        return self.factor is None


def charneq2_common_factor(phi_slots: Sequence[Monomial], psi_slots: Sequence[Monomial], n_vars: int) -> CommonFactor:
    """Common (n−1)-fold factor of two monomial n-fold Pfister forms via square classes in F₂^{n_vars}."""
    if len(phi_slots) != len(psi_slots):
        raise FormError(f"slot counts differ: {len(phi_slots)} and {len(psi_slots)}")
    for m in (*phi_slots, *psi_slots):
        if len(m) != n_vars:
            raise FormError(f"slot {m} does not have {n_vars} exponents")
    n = len(phi_slots)
    a = [tuple(e % 2 for e in m) for m in phi_slots]
    b = [tuple(e % 2 for e in m) for m in psi_slots]
    if fp_rank(a, 2) < n or fp_rank(b, 2) < n:
        return CommonFactor(None, 0, "anisotropy violated")
    common = span_intersection(a, b, n_vars, 2)
    if len(common) < n - 1:
        return CommonFactor(None, len(common), f"no common factor: intersection has dimension {len(common)} < {n - 1}")
    return CommonFactor(tuple(common[: n - 1]), len(common), f"common factor of {n - 1} slots")


def random_monomial_pfister(n: int, n_vars: int, rng) -> list[Monomial]:
    """n slots whose square classes are independent in F₂^{n_vars} (an anisotropic form)."""
    while True:
        slots = [tuple(int(e) for e in rng.integers(-3, 4, size=n_vars)) for _ in range(n)]
        if fp_rank([tuple(e % 2 for e in m) for m in slots], 2) == n:
            return slots


@dataclass(frozen=True)
class LinkageStatus:
    two_rank: int
    n: int
    linked: bool
    three_linked: bool
    reasons: tuple[str, ...]


def bilinear_linkage_status(two_rank: int, n: int) -> LinkageStatus:
    """Iⁿ F linked ⇔ 3-linked ⇔ the 2-rank of F equals n (given Iⁿ F ≠ 0)."""
    if n < 1:
        raise FormError(f"n must be >= 1, got {n}")
    if two_rank < n:
        raise FormError(f"2-rank {two_rank} < n = {n}: I^{n} F = 0")
    if two_rank == n:
        reasons = (
            f"2-rank = n = {n}",
            "linked and 3-linked by the cited 3-linkage result",
        )
        return LinkageStatus(two_rank, n, True, True, reasons)
    reasons = (
        f"2-rank {two_rank} >= n + 1: the pure-subform construction gives two forms without a common "
        f"{n - 1}-fold factor",
        "not linked, hence not 3-linked",
    )
    return LinkageStatus(two_rank, n, False, False, reasons)
