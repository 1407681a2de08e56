import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauerlab.basefield import BaseFieldDesc, parse_descriptor
from brauerlab.laurent import FieldTower, PrecisionWindow
from brauerlab.parser import parse_block_form, parse_pfister
from brauerlab.quadforms import (
    Anisotropy,
    BilPfister,
    Block,
    BlockForm,
    FormError,
    anisotropic_by_values,
    bilinear_linkage_counterexample,
    bilinear_linkage_status,
    brute_force_isotropy,
    charneq2_common_factor,
    f2span_intersection_dim,
    pure_subform_genset,
    quad_linkage_counterexample,
    random_monomial_pfister,
    witt_block_sum,
)
from tests.strategies import laurent_polys, monomials

F2 = BaseFieldDesc.prime(2)
F3 = BaseFieldDesc.prime(3)
F4 = parse_descriptor("F4")


class TestForms:
    """Test Pfister form construction and printing."""

    def setup_method(self):
        """Create a three-variable tower over F2."""
        self.tower = FieldTower(F2, 3)

    def test_bilinear_monomials(self):
        """Test <<a1, a2>> has diagonal 1, a1, a2, a1*a2."""
        phi = parse_pfister("<<a1, a2>>", self.tower)
        assert [str(m) for m in phi.monomials()] == ["1", "a1", "a2", "a1*a2"]
        assert phi.as_diagonal_form().dimension == 4

    def test_quadratic_pfister(self):
        """Test <<a1; a2^-1]] is a four-dimensional block form."""
        phi = parse_pfister("<<a1; a2^-1]]", self.tower)
        assert phi.n == 2
        assert str(phi) == "<<a1; a2^-1]]"
        assert phi.as_block_form().dimension == 4

    def test_zero_slot_rejected(self):
        """Test Pfister slots must be nonzero."""
        with pytest.raises(FormError):
            BilPfister(self.tower, (self.tower.zero(),))

    def test_odd_characteristic_rejected(self):
        """Test block forms need characteristic 2."""
        tower = FieldTower(F3, 1)
        with pytest.raises(FormError):
            BlockForm(tower, (Block(tower.one(), (), tower.variable(1)),))

    def test_evaluate(self):
        """Test Q(x, y) = x^2 + xy + w y^2 on [1, a1]."""
        form = parse_block_form("[1, a1]", self.tower)
        one = self.tower.one()
        assert form.evaluate([one, one]) == self.tower.variable(1)
        with pytest.raises(FormError):
            form.evaluate([one])

    def test_witt_block_sum(self):
        """Test the symplectic slots add."""
        a = self.tower.variable
        assert witt_block_sum(a(1), a(2)) == a(1) + a(2)


class TestQuadraticNonLinkage:
    """Test the quadratic counterexample and its anisotropy."""

    def test_omega_n2(self):
        """Test the n = 2 forms and the printed omega."""
        tower = FieldTower(F2, 3)
        phi, psi, omega = quad_linkage_counterexample(2, tower)
        assert str(phi) == "<<a1; a2^-1]]"
        assert str(psi) == "<<a2; a3^-1]]"
        assert str(omega) == "[1, a3^-1 + a2^-1] _|_ a1*[1, a2^-1] _|_ a2*[1, a3^-1]"
        assert omega.dimension == 6

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_omega_anisotropic(self, n):
        """Test the value-class criterion proves omega anisotropic."""
        _, _, omega = quad_linkage_counterexample(n, FieldTower(F2, n + 1))
        verdict = anisotropic_by_values(omega)
        assert verdict.status is Anisotropy.ANISOTROPIC
        assert omega.dimension == 3 * 2 ** (n - 1)

    def test_omega_round_trip(self):
        """Test the printed omega parses back."""
        tower = FieldTower(F2, 4)
        _, _, omega = quad_linkage_counterexample(3, tower)
        assert parse_block_form(str(omega), tower) == omega

    def test_wrong_tower_size(self):
        """Test the tower must have n + 1 variables."""
        with pytest.raises(FormError):
            quad_linkage_counterexample(2, FieldTower(F2, 2))

    def test_hyperbolic_block_unknown(self):
        """Test [1, 1] over F4 is hyperbolic, so the criterion says nothing."""
        tower = FieldTower(F4, 1)
        form = parse_block_form("[1, 1]", tower)
        assert anisotropic_by_values(form).status is Anisotropy.UNKNOWN

    def test_shared_class_unknown(self):
        """Test two blocks with the same value classes."""
        tower = FieldTower(F2, 2)
        form = parse_block_form("[1, a2^-1] _|_ [1, a2^-1]", tower)
        verdict = anisotropic_by_values(form)
        assert verdict.status is Anisotropy.UNKNOWN
        assert "shared" in verdict.reason


class TestBruteForce:
    """Test the bounded isotropy search."""

    def test_finds_witness(self):
        """Test [1, 0] has the isotropic vector (0, 1)."""
        tower = FieldTower(F2, 1)
        form = BlockForm(tower, (Block(tower.one(), (), tower.zero()),))
        result = brute_force_isotropy(form, PrecisionWindow.uniform(1, -1, 1), 100)
        assert result.message == "(0, 1)"
        assert result.evaluations == 4

    def test_budget_exhausted(self):
        """Test an anisotropic form exhausts a small budget."""
        tower = FieldTower(F2, 3)
        _, _, omega = quad_linkage_counterexample(2, tower)
        result = brute_force_isotropy(omega, PrecisionWindow.uniform(3, -1, 1), 500)
        assert result.witness is None
        assert result.exhausted
        assert result.evaluations == 500

    def test_infinite_base_rejected(self):
        """Test the search needs a finite base."""
        tower = FieldTower(parse_descriptor("F2(t)"), 1)
        form = BlockForm(tower, (Block(tower.one(), (), tower.zero()),))
        with pytest.raises(FormError):
            brute_force_isotropy(form, PrecisionWindow.uniform(1, 0, 0), 10)

    @pytest.mark.slow
    def test_omega_million(self):
        """Test no isotropic vector of omega in 10^6 evaluations."""
        tower = FieldTower(F2, 3)
        _, _, omega = quad_linkage_counterexample(2, tower)
        result = brute_force_isotropy(omega, PrecisionWindow.uniform(3, -2, 2), 1_000_000)
        assert result.witness is None


@st.composite
def small_block_forms(draw, tower: FieldTower):
    """One or two blocks c*[1, w] with monomial c, plus up to two diagonal monomials."""
    blocks = draw(st.lists(
        st.builds(lambda c, w: Block(c, (), w), monomials(tower, spread=1), laurent_polys(tower, max_terms=2, spread=1)),
        min_size=1,
        max_size=2,
    ))
    diag = draw(st.lists(monomials(tower, spread=1), max_size=2))
    return BlockForm(tower, tuple(blocks), tuple(diag))


class TestAnisotropyAgainstSearch:
    """Test the value-class criterion is never contradicted by an isotropic vector."""

    def check(self, form: BlockForm):
        verdict = anisotropic_by_values(form)
        result = brute_force_isotropy(form, PrecisionWindow.uniform(form.tower.n, -1, 1), 300)
        if result.witness is not None:
            assert form.evaluate(result.witness).is_zero()
            assert verdict.status is not Anisotropy.ANISOTROPIC, f"{form}: isotropic at {result.message}"

    @settings(max_examples=40, deadline=None)
    @given(small_block_forms(FieldTower(F2, 2)))
    def test_f2(self, form):
        """Test random block forms over F2((a1))((a2))."""
        self.check(form)

    @settings(max_examples=25, deadline=None)
    @given(small_block_forms(FieldTower(F4, 1)))
    def test_f4(self, form):
        """Test random block forms over F4((a1))."""
        self.check(form)

    def test_hyperbolic_pair_is_found(self):
        """Test <1, 1> is isotropic and not certified anisotropic."""
        tower = FieldTower(F2, 2)
        form = BlockForm(tower, (), (tower.one(), tower.one()))
        self.check(form)
        assert brute_force_isotropy(form, PrecisionWindow.uniform(2, -1, 1), 300).witness is not None


class TestBilinearNonLinkage:
    """Test F^2-span intersections of pure subforms."""

    def test_counterexample_printing(self):
        """Test the n = 2 pair."""
        phi, psi = bilinear_linkage_counterexample(2, FieldTower(F2, 3))
        assert str(phi) == "<<a1, a2>>"
        assert str(psi) == "<<1 + a1, a3>>"

    @pytest.mark.parametrize("n", [2, 3, pytest.param(4, marks=pytest.mark.slow)])
    def test_intersection_dimension(self, n):
        """Test the intersection has dimension 2^(n-1) - 2."""
        tower = FieldTower(F2, n + 1)
        phi, psi = bilinear_linkage_counterexample(n, tower)
        result = f2span_intersection_dim(
            pure_subform_genset(phi), pure_subform_genset(psi), PrecisionWindow.uniform(n + 1, -1, 1)
        )
        assert result.dim_at_window == 2 ** (n - 1) - 2
        assert result.stabilized

    def test_self_intersection(self):
        """Test a pure subform meets itself in its full dimension."""
        tower = FieldTower(F2, 2)
        genset = pure_subform_genset(parse_pfister("<<a1, a2>>", tower))
        assert len(genset.generators) == 3
        result = f2span_intersection_dim(genset, genset, PrecisionWindow.uniform(2, 0, 1))
        assert result.dim_at_window == 3

    def test_unsupported_slot(self):
        """Test slots other than monomials and a_j + 1 are rejected."""
        tower = FieldTower(F2, 2)
        with pytest.raises(FormError):
            pure_subform_genset(parse_pfister("<<a1 + a2, a2>>", tower))

    def test_window_must_contain_origin(self):
        """Test the scalar 1 must be in the window."""
        tower = FieldTower(F2, 2)
        genset = pure_subform_genset(parse_pfister("<<a1, a2>>", tower))
        with pytest.raises(FormError):
            f2span_intersection_dim(genset, genset, PrecisionWindow.uniform(2, 1, 2))

    @pytest.mark.parametrize("two_rank, n, linked", [(2, 2, True), (3, 2, False), (4, 3, False), (5, 5, True)])
    def test_linkage_status(self, two_rank, n, linked):
        """Test linkage holds exactly when the 2-rank equals n."""
        status = bilinear_linkage_status(two_rank, n)
        assert status.linked is linked
        assert status.three_linked is linked

    def test_linkage_status_needs_nonzero_power(self):
        """Test 2-rank below n is rejected."""
        with pytest.raises(FormError):
            bilinear_linkage_status(1, 2)


class TestCommonFactor:
    """Test common factors of monomial Pfister forms away from characteristic 2."""

    def test_shared_slot(self):
        """Test <<a1, a2>> and <<a2, a3>> share <<a2>>."""
        result = charneq2_common_factor([(1, 0, 0), (0, 1, 0)], [(0, 1, 0), (0, 0, 1)], 3)
        assert result.factor == ((0, 1, 0),)
        assert result.intersection_dim == 1
        assert not result.violated

    def test_equal_spans(self):
        """Test a form meets itself in every slot."""
        result = charneq2_common_factor([(1, 0), (0, 1)], [(1, 0), (0, 1)], 2)
        assert result.factor == ((1, 0),)
        assert result.intersection_dim == 2

    def test_no_common_factor(self):
        """Test disjoint square classes in four variables."""
        result = charneq2_common_factor([(1, 0, 0, 0), (0, 1, 0, 0)], [(0, 0, 1, 0), (0, 0, 0, 1)], 4)
        assert result.violated
        assert result.intersection_dim == 0

    def test_dependent_slots(self):
        """Test dependent square classes are reported as an anisotropy violation."""
        result = charneq2_common_factor([(1, 0), (3, 2)], [(1, 0), (0, 1)], 2)
        assert result.message == "anisotropy violated"

    def test_random_forms_are_linked_in_three_variables(self):
        """Test random 2-fold forms in 3 variables always share a slot."""
        rng = np.random.default_rng(7)
        for _ in range(200):
            phi = random_monomial_pfister(2, 3, rng)
            psi = random_monomial_pfister(2, 3, rng)
            assert not charneq2_common_factor(phi, psi, 3).violated

    def test_shape_mismatch(self):
        """Test slot counts and widths must agree."""
        with pytest.raises(FormError):
            charneq2_common_factor([(1, 0)], [(1, 0), (0, 1)], 2)
        with pytest.raises(FormError):
            charneq2_common_factor([(1, 0, 0)], [(1, 0)], 2)
