import pytest

from bozec.cartan import BorcherdsCartanDatum


def rank1_real(s=1, nu=None):
    return BorcherdsCartanDatum(["i"], [[2]], [s], nu=nu)


def rank1_isotropic(max_l=4, nu=None):
    return BorcherdsCartanDatum(["i"], [[0]], [1], nu=nu, max_l=max_l)


def rank1_imaginary(a_ii=-2, s=1, max_l=4, nu=None):
    return BorcherdsCartanDatum(["i"], [[a_ii]], [s], nu=nu, max_l=max_l)


def rank2_real(a_ij=-1, a_ji=-1, s=None):
    if s is None:
        # symmetrize automatically: s_i*a_ij = s_j*a_ji
        import math

        g = math.gcd(abs(a_ij), abs(a_ji)) if a_ij and a_ji else 1
        if a_ij == 0 and a_ji == 0:
            s = [1, 1]
        else:
            s = [abs(a_ji) // g, abs(a_ij) // g]
    return BorcherdsCartanDatum(["i", "j"], [[2, a_ij], [a_ji, 2]], s)


def real_imaginary(a_ij=-1, a_jj=0, max_l=2):
    # real index i, imaginary index j
    return BorcherdsCartanDatum(
        ["i", "j"], [[2, a_ij], [a_ij, a_jj]], [1, 1], max_l={"i": 1, "j": max_l}
    )


def mixed_rank3(a_ij=-1, a_ji=-1, a_kk=-2, max_l=2):
    # two real indices i, j plus one imaginary k attached to i
    return BorcherdsCartanDatum(
        ["i", "j", "k"],
        [[2, a_ij, -1], [a_ji, 2, 0], [-1, 0, a_kk]],
        [1, 1, 1],
        max_l={"i": 1, "j": 1, "k": max_l},
    )


@pytest.fixture(scope="session")
def d_rank1_real():
    return rank1_real()


@pytest.fixture(scope="session")
def d_iso():
    return rank1_isotropic()


@pytest.fixture(scope="session")
def d_imag():
    return rank1_imaginary()


@pytest.fixture(scope="session")
def d_a2():
    return rank2_real(-1, -1)


@pytest.fixture(scope="session")
def d_b2():
    return rank2_real(-2, -1)


@pytest.fixture(scope="session")
def d_g2():
    return rank2_real(-3, -1)


@pytest.fixture(scope="session")
def d_ri_iso():
    return real_imaginary(-1, 0)


@pytest.fixture(scope="session")
def d_ri_imag():
    return real_imaginary(-1, -2)


@pytest.fixture(scope="session")
def d_mixed():
    return mixed_rank3()
