import pytest

from plbc.bch import (
    bch_generator,
    bch_parity_check,
    cyclotomic_coset,
    cyclotomic_cosets,
    design_bch,
    field_for_length,
    minimal_polynomial,
)
from plbc.errors import ConstructionError
from plbc.gf2 import BitVector, poly_degree, poly_eval, poly_mul


class TestCosets:
    def test_cosets_n15(self):
        got = {c.leader: set(c.members) for c in cyclotomic_cosets(15)}
        assert got[0] == {0}
        assert got[1] == {1, 2, 4, 8}
        assert got[3] == {3, 6, 12, 9}
        assert got[5] == {5, 10}
        assert got[7] == {7, 14, 13, 11}
        assert set(got) == {0, 1, 3, 5, 7}

    def test_single_coset(self):
        c = cyclotomic_coset(5, 15)
        assert c.leader == 5
        assert set(c.members) == {5, 10}

    def test_partition(self):
        members = [j for c in cyclotomic_cosets(63) for j in c.members]
        assert sorted(members) == list(range(63))


class TestMinimalPolynomials:
    # frozen against hand reduction over GF(16) with x^4 + x + 1
    def test_frozen_m4(self):
        f = field_for_length(15)
        assert minimal_polynomial(1, f) == 0b10011   # x^4+x+1
        assert minimal_polynomial(3, f) == 0b11111   # x^4+x^3+x^2+x+1
        assert minimal_polynomial(5, f) == 0b111     # x^2+x+1
        assert minimal_polynomial(7, f) == 0b11001   # x^4+x^3+1

    def test_root_property(self):
        f = field_for_length(63)
        for j in (1, 3, 5, 9, 21):
            mp = minimal_polynomial(j, f)
            for member in cyclotomic_coset(j, 63).members:
                assert poly_eval(mp, f.alpha_pow(member), f) == 0

    def test_degree_equals_coset_size(self):
        f = field_for_length(31)
        for c in cyclotomic_cosets(31):
            if c.leader == 0:
                continue
            assert poly_degree(minimal_polynomial(c.leader, f)) == len(c.members)


class TestGenerator:
    def test_delta_one_is_trivial(self):
        assert bch_generator(15, 1) == 1

    def test_frozen_generators_n15(self):
        assert bch_generator(15, 3) == 19
        assert bch_generator(15, 5) == 465
        assert bch_generator(15, 7) == 1335
        # delta = 15 gives the repetition code generator (x^15-1)/(x-1)
        assert bch_generator(15, 15) == (1 << 15) - 1

    def test_product_structure(self):
        f = field_for_length(15)
        assert bch_generator(15, 5) == poly_mul(
            minimal_polynomial(1, f), minimal_polynomial(3, f)
        )

    def test_roots(self):
        f = field_for_length(63)
        g = bch_generator(63, 9)
        for j in range(1, 9):
            assert poly_eval(g, f.alpha_pow(j), f) == 0

    def test_divides_xn_minus_1(self):
        from plbc.gf2 import poly_divmod

        for delta in (3, 5, 7, 9, 11):
            g = bch_generator(63, delta)
            assert poly_divmod((1 << 63) | 1, g)[1] == 0

    def test_degrees_n1023(self):
        # every coset of 1..20 is full (size 10), so degrees step by 10
        degs = [poly_degree(bch_generator(1023, d)) for d in range(3, 22, 2)]
        assert degs == [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]

    def test_delta_validation(self):
        with pytest.raises(ValueError):
            bch_generator(15, 4)
        with pytest.raises(ValueError):
            bch_generator(15, 17)

    def test_length_validation(self):
        with pytest.raises(ValueError):
            field_for_length(14)


class TestParityCheck:
    def test_shape_and_rank(self):
        from plbc.gf2 import rank

        f = field_for_length(15)
        h = bch_parity_check(15, 5, f)
        assert (h.rows, h.cols) == (8, 15)
        assert rank(h) == 8

    def test_annihilates_code(self):
        f = field_for_length(15)
        g = bch_generator(15, 5, f)
        h = bch_parity_check(15, 5, f)
        for shift in range(15 - poly_degree(g)):
            c = BitVector.from_int(15, g << shift)
            assert h.matvec_parity(c).weight() == 0

    def test_flags_noncodeword(self):
        f = field_for_length(15)
        h = bch_parity_check(15, 5, f)
        assert h.matvec_parity(BitVector.from_indices(15, [0])).weight() > 0

    def test_short_coset_rejected(self):
        # delta = 7 at n = 63 pulls in the coset of 5 whose... all cosets of
        # 1..6 at n=63 are full; use n = 15, delta = 11: coset(5) has size 2,
        # so the row count cannot reach deg(g) in m-row blocks.
        f = field_for_length(15)
        with pytest.raises(ConstructionError):
            bch_parity_check(15, 11, f)


class TestDesign:
    def test_design_spec(self):
        spec = design_bch(15, 5)
        assert spec.n == 15
        assert spec.designed_distance == 5
        assert spec.generator == 465
        assert spec.parity_rows == 8
