import random

import pytest

from bozec.errors import DomainError
from bozec.freealg import FreeAlgebra
from bozec.modules import IRREDUCIBLE, HWModule
from bozec.scalars import Scalar, parse_scalar
from bozec.symmetries import (
    SymmetryOp,
    apply_module,
    braid_verify_module,
    intertwining_verify,
    inverse_op,
    prop_main_i_verify,
)
from bozec.ualg import LP, LPP, UAlgebra
from conftest import mixed_rank3, rank1_real, rank2_real


def s(t):
    return parse_scalar(t)


def make_ua(datum, window=8):
    return UAlgebra(FreeAlgebra(datum, height_budget=window), window=window)


@pytest.fixture(scope="module")
def ua_r1():
    return make_ua(rank1_real())


@pytest.fixture(scope="module")
def mod_r1(ua_r1):
    return HWModule(ua_r1, ua_r1.datum.fundamental_weight(0), 4, IRREDUCIBLE)


@pytest.fixture(scope="module")
def ua_a2():
    return make_ua(rank2_real(-1, -1))


@pytest.fixture(scope="module")
def mod_a2(ua_a2):
    lam = ua_a2.datum.weight_from_h_values({"i": 1, "j": 1})
    return HWModule(ua_a2, lam, 6, IRREDUCIBLE)


class TestApplyModule:
    def test_rank1_lowest_term(self, mod_r1):
        # L''_{i,-1}(v) = -q_i^-1 B_i v on the two-dimensional simple module
        m = mod_r1
        v = m.highest_vector()
        img = apply_module(SymmetryOp(LPP, 0, -1), v)
        expect = m.act_B(0, v).scale(-Scalar.q_power(-1))
        assert img == expect

    def test_fixed_vector_in_m0(self, ua_r1):
        m = HWModule(ua_r1, ua_r1.datum.zero_weight(), 2, IRREDUCIBLE)
        v = m.highest_vector()
        for variant in (LP, LPP):
            for e in (1, -1):
                assert apply_module(SymmetryOp(variant, 0, e), v) == v

    def test_inverse_property_random(self, mod_a2):
        m = mod_a2
        rng = random.Random(31)
        vecs = [
            m.basis_vector(beta, k)
            for beta in m.spaces
            if sum(beta) <= 3
            for k in range(m.dimension(beta))
        ]
        rng.shuffle(vecs)
        for v in vecs[:6]:
            for variant, e in ((LP, 1), (LP, -1), (LPP, 1), (LPP, -1)):
                op = SymmetryOp(variant, 0, e)
                inv = inverse_op(op)
                assert apply_module(inv, apply_module(op, v)) == v

    def test_weyl_weight_compatibility(self, mod_a2):
        # the symmetry maps M_mu into M_{r_i mu}
        m = mod_a2
        d = m.datum
        v = m.basis_vector((1, 1), 0)
        img = apply_module(SymmetryOp(LPP, 0, 1), v)
        mu = m.space((1, 1)).weight
        target = d.reflect_weight(0, mu)
        for beta in img.betas():
            assert m.space(beta).weight == target

    def test_braid_equivalent_words_agree(self, mod_a2):
        # (i,j,i) and (j,i,j) are reduced words of the same element
        m = mod_a2
        vecs = [m.basis_vector(beta, 0) for beta in m.spaces if m.dimension(beta) and sum(beta) <= 2]
        for v in vecs:
            for e in (1, -1):
                lhs = v
                for t in reversed((0, 1, 0)):
                    lhs = apply_module(SymmetryOp(LPP, t, e), lhs)
                rhs = v
                for t in reversed((1, 0, 1)):
                    rhs = apply_module(SymmetryOp(LPP, t, e), rhs)
                assert lhs == rhs


class TestVerifiers:
    def test_braid_orthogonal_pair(self):
        ua = make_ua(rank2_real(0, 0))
        lam = ua.datum.weight_from_h_values({"i": 1, "j": 1})
        m = HWModule(ua, lam, 4, IRREDUCIBLE)
        for e in (1, -1):
            rep = braid_verify_module(0, 1, e, m)
            assert rep["holds"] is True
            assert rep["params"]["m_ij"] == 2

    def test_braid_a2(self, mod_a2):
        for e in (1, -1):
            rep = braid_verify_module(0, 1, e, mod_a2)
            assert rep["holds"] is True
            assert rep["params"]["m_ij"] == 3

    def test_braid_infinite_rejected(self):
        ua = make_ua(rank2_real(-4, -1))
        lam = ua.datum.weight_from_h_values({"i": 1, "j": 0})
        m = HWModule(ua, lam, 3, IRREDUCIBLE)
        with pytest.raises(DomainError):
            braid_verify_module(0, 1, 1, m)

    def test_intertwining_qh_and_generators(self, mod_a2):
        ua = mod_a2.ua
        rng = random.Random(5)
        cases = [
            ua.q_h(ua.datum.coroot_h(0, 1)),
            ua.a_gen(0),
            ua.b_gen(1),
            ua.a_gen(1) * ua.b_gen(0),
        ]
        for u in cases:
            for variant, e in ((LP, 1), (LPP, -1)):
                rep = intertwining_verify(SymmetryOp(variant, 0, e), u, mod_a2, 5, rng)
                assert rep["holds"] is True, (u, variant, e)

    def test_prop_main_i(self, mod_a2):
        rng = random.Random(6)
        for n in (0, 1):
            for e in (1, -1):
                rep = prop_main_i_verify(0, 1, n, e, mod_a2, 5, rng)
                assert rep["holds"] is True, (n, e)

    def test_prop_main_i_mixed_datum(self):
        ua = make_ua(mixed_rank3())
        lam = ua.datum.weight_from_h_values({"i": 1, "j": 0, "k": 0})
        m = HWModule(ua, lam, 5, IRREDUCIBLE)
        rng = random.Random(7)
        for n in (1, 2):
            rep = prop_main_i_verify(0, 2, n, 1, m, 4, rng)
            assert rep["holds"] is True, n

    def test_algebra_module_consistency(self, mod_a2):
        # apply(op, u.z) == apply-algebra(op, u) . apply(op, z), the
        # operational Eq (2.4) form on weight vectors
        m = mod_a2
        ua = m.ua
        u = ua.a_gen(0) * ua.b_gen(1)
        op = SymmetryOp(LPP, 1, 1)
        v = m.basis_vector((1, 0), 0)
        lhs = apply_module(op, m.act_u(u, v))
        rhs = m.act_u(ua.symmetry(LPP, 1, 1, u), apply_module(op, v))
        assert lhs == rhs
