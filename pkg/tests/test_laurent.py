import numpy as np
import pytest
from hypothesis import given, settings

from brauerlab.basefield import BaseFieldDesc, BaseFieldElement, parse_descriptor
from brauerlab.laurent import (
    FieldTower,
    LaurentError,
    LaurentPoly,
    PrecisionWindow,
    ValueVec,
    as_normalize,
    invert,
    leading_coeff,
    p_rank,
    residue_outer,
    rtl_key,
    square_decompose,
    valuation,
)
from tests.strategies import laurent_polys, lift_outer, random_laurent, reassemble_squares

F2 = BaseFieldDesc.prime(2)
F3 = BaseFieldDesc.prime(3)
F4 = parse_descriptor("F4")
F2T = parse_descriptor("F2(t)")


class TestValueOrder:
    """Test the right-to-left lexicographic order on value vectors."""

    def test_outer_variable_dominates(self):
        """Test (0, -1) < (0, 0) < (1, 0) < (0, 1)."""
        chain = [ValueVec((0, -1)), ValueVec((0, 0)), ValueVec((1, 0)), ValueVec((0, 1))]
        assert chain == sorted(reversed(chain))

    def test_sign_helpers(self):
        """Test negativity follows the last nonzero coordinate."""
        assert ValueVec((5, -1)).is_negative()
        assert ValueVec((-5, 1)).is_positive()
        assert ValueVec((0, 0)).is_zero()
        assert str(ValueVec((0, -1))) == "(0, -1)"

    def test_rtl_key(self):
        """Test the sort key reverses coordinates."""
        assert rtl_key((1, 2, 3)) == (3, 2, 1)


class TestLaurentPoly:
    """Test construction, arithmetic and printing."""

    def setup_method(self):
        """Create a two-variable tower over F2."""
        self.tower = FieldTower(F2, 2)
        self.a1 = self.tower.variable(1)
        self.a2 = self.tower.variable(2)

    def test_terms_sorted_by_value(self):
        """Test terms print in increasing value order."""
        x = self.a1 + self.a2 ** -1
        assert str(x) == "a2^-1 + a1"
        assert valuation(x) == ValueVec((0, -1))
        assert leading_coeff(x) == BaseFieldElement.one(F2)

    def test_char2_cancellation(self):
        """Test x + x = 0 in characteristic 2."""
        x = self.a1 + self.a2
        assert (x + x).is_zero()

    def test_negative_power_of_sum_rejected(self):
        """Test that only single terms invert exactly."""
        with pytest.raises(LaurentError):
            (self.a1 + 1) ** -1

    def test_monomial_inverse(self):
        """Test a single term inverts exactly."""
        x = self.a1 * self.a2 ** 2
        assert x * x ** -1 == self.tower.one()

    def test_valuation_of_zero(self):
        """Test that zero has no valuation."""
        with pytest.raises(LaurentError):
            valuation(self.tower.zero())

    def test_towers_do_not_mix(self):
        """Test elements of different towers do not combine."""
        other = FieldTower(F2, 3).variable(1)
        with pytest.raises(LaurentError):
            self.a1 + other

    def test_coefficient_printing_char3(self):
        """Test coefficients in F3 print explicitly."""
        tower = FieldTower(F3, 1)
        assert str(-tower.variable(1)) == "2*a1"

    def test_compound_coefficient_printing(self):
        """Test compound coefficients are parenthesized."""
        tower = FieldTower(F4, 1)
        w = BaseFieldElement.generator(F4)
        assert str(tower.monomial((1,), w + 1)) == "(w + 1)*a1"

    def test_substitute_power(self):
        """Test replacing a1 by a1^2."""
        x = self.a1 ** -1 + self.a2
        assert x.substitute_power(1, 2) == self.a1 ** -2 + self.a2

    def test_free_of(self):
        """Test variable occurrence queries."""
        x = self.a1 + 1
        assert x.free_of(2)
        assert not x.free_of(1)
        assert x.variables_used() == [1]


class TestValuationProperties:
    """Test valuation properties on random samples."""

    def test_multiplicativity_seeded(self):
        """Test v(xy) = v(x) + v(y) on 10^4 random pairs."""
        tower = FieldTower(F4, 3)
        rng = np.random.default_rng(20240601)
        for _ in range(10_000):
            x = random_laurent(tower, rng)
            y = random_laurent(tower, rng)
            assert valuation(x * y) == valuation(x) + valuation(y)

    @settings(max_examples=100, deadline=None)
    @given(laurent_polys(FieldTower(F4, 2), nonzero=True), laurent_polys(FieldTower(F4, 2), nonzero=True))
    def test_ultrametric(self, x, y):
        """Test v(x + y) >= min(v(x), v(y)) whenever x + y is nonzero."""
        s = x + y
        if not s.is_zero():
            assert valuation(s) >= min(valuation(x), valuation(y))

    @settings(max_examples=100, deadline=None)
    @given(laurent_polys(FieldTower(F3, 2)), laurent_polys(FieldTower(F3, 2)), laurent_polys(FieldTower(F3, 2)))
    def test_ring_axioms(self, x, y, z):
        """Test distributivity and subtraction."""
        assert x * (y + z) == x * y + x * z
        assert (x + y) - y == x


class TestInvert:
    """Test windowed inversion."""

    def test_geometric_series(self):
        """Test 1/(1 + a1) agrees with the geometric series inside the window."""
        tower = FieldTower(F2, 1)
        x = tower.one() + tower.variable(1)
        y = invert(x, PrecisionWindow.uniform(1, 0, 5))
        assert y == sum((tower.variable(1) ** i for i in range(6)), tower.zero())

    @settings(max_examples=50, deadline=None)
    @given(laurent_polys(FieldTower(F3, 2), spread=2, nonzero=True))
    def test_product_is_one_inside_window(self, x):
        """Test x * invert(x) - 1 has no monomial in the shifted window."""
        window = PrecisionWindow.uniform(2, -3, 3)
        y = invert(x, window)
        error = x * y - x.tower.one()
        assert not any(window.contains(m) for m in error.monomials())

    def test_window_must_contain_origin(self):
        """Test windows away from the constant term are rejected."""
        tower = FieldTower(F2, 1)
        with pytest.raises(LaurentError):
            invert(tower.one() + tower.variable(1), PrecisionWindow.uniform(1, 1, 3))


class TestResidues:
    """Test passing to the residue tower."""

    def test_residue_drops_outer_terms(self):
        """Test a1 + a2 has residue a1."""
        tower = FieldTower(F2, 2)
        x = tower.variable(1) + tower.variable(2)
        residue = residue_outer(x)
        assert residue == tower.residue().variable(1)
        assert lift_outer(residue, tower) == tower.variable(1)

    def test_residue_of_pole_raises(self):
        """Test elements outside the valuation ring have no residue."""
        tower = FieldTower(F2, 2)
        with pytest.raises(LaurentError):
            residue_outer(tower.variable(2) ** -1)


class TestSquareDecomposition:
    """Test x = sum over parity classes of squares times monomials."""

    @settings(max_examples=100, deadline=None)
    @given(laurent_polys(FieldTower(F4, 3)))
    def test_round_trip(self, x):
        """Test reassembling the decomposition gives x back."""
        parts = square_decompose(x)
        assert reassemble_squares(parts, x.tower) == x
        assert all(all(e in (0, 1) for e in eps) for eps in parts)

    def test_imperfect_base_rejected(self):
        """Test F2(t) towers are rejected."""
        with pytest.raises(LaurentError):
            square_decompose(FieldTower(F2T, 1).variable(1))

    def test_odd_characteristic_rejected(self):
        """Test characteristic 3 is rejected."""
        with pytest.raises(LaurentError):
            square_decompose(FieldTower(F3, 1).variable(1))


class TestPRank:
    """Test log_p [F : F^p]."""

    def test_perfect_and_imperfect_bases(self):
        """Test the rank counts the variables plus one for F_q(t)."""
        assert p_rank(FieldTower(F2, 3)) == 3
        assert p_rank(FieldTower(F2T, 2)) == 3


class TestASNormalization:
    """Test shortening Artin-Schreier slots modulo the image."""

    def setup_method(self):
        """Create a two-variable tower over F2."""
        self.tower = FieldTower(F2, 2)

    def test_even_pole_halved(self):
        """Test a2^-2 normalizes to a2^-1."""
        a = self.tower.variable(2) ** -2
        result = as_normalize(a)
        assert result.normalized == self.tower.variable(2) ** -1
        assert result.witness == self.tower.variable(2) ** -1

    def test_positive_terms_dropped(self):
        """Test a1 lies in the image and is dropped."""
        result = as_normalize(self.tower.variable(1))
        assert result.normalized.is_zero()
        assert result.dropped == self.tower.variable(1)

    def test_constant_reduced_in_base(self):
        """Test 1 is in the image over F4 but not over F2."""
        assert as_normalize(self.tower.one()).normalized == self.tower.one()
        assert as_normalize(FieldTower(F4, 1).one()).normalized.is_zero()

    @settings(max_examples=100, deadline=None)
    @given(laurent_polys(FieldTower(F2, 2), spread=4))
    def test_decomposition_identity(self, a):
        """Test a = normalized + wp(witness) + dropped."""
        result = as_normalize(a)
        assert result.normalized + result.witness.as_map() + result.dropped == a
        assert all(ValueVec(m).is_negative() or not any(m) for m in result.normalized.monomials())


class TestWindows:
    """Test precision windows."""

    def test_monomials_in_value_order(self):
        """Test window monomials are listed by increasing value."""
        window = PrecisionWindow.uniform(2, 0, 1)
        assert window.monomials() == [(0, 0), (1, 0), (0, 1), (1, 1)]
        assert window.size() == 4
        assert str(window) == "0..1"

    def test_grown_window(self):
        """Test growing raises every upper bound."""
        assert PrecisionWindow.uniform(2, -1, 1).grown() == PrecisionWindow((-1, -1), (2, 2))

    def test_empty_window_rejected(self):
        """Test lo > hi is rejected."""
        with pytest.raises(LaurentError):
            PrecisionWindow.uniform(1, 2, 1)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_tower_names(n):
    """Test default variable names."""
    tower = FieldTower(F2, n)
    assert tower.names == tuple(f"a{i}" for i in range(1, n + 1))
    assert isinstance(tower.one(), LaurentPoly)


def test_duplicate_names_rejected():
    """Test variable names must be distinct."""
    with pytest.raises(LaurentError):
        FieldTower(F2, 2, ("x", "x"))
