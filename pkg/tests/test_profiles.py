from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgap.criteria import LatticeKind
from ffgap.profiles import (
    CoefficientProfile,
    ProfileError,
    euclid_c,
    is_valid,
    quadratic_d,
    validate_profile,
)
from ffgap.scalars import QuadraticScalar, qf_make
from ffgap.tuner import paper_lambda


def test_c_is_discrete_parabola():
    ell = 5
    c = euclid_c(ell)
    assert [int(x.a) for x in c] == [ell + (ell - 1) * j - j * j for j in range(ell)]
    assert c == c[::-1]


def test_d_endpoints_of_interpolation():
    ell = 4
    assert quadratic_d(ell, 0) == [QuadraticScalar(ell + 1 + ell * j - j * j) for j in range(ell + 1)]
    assert set(quadratic_d(ell, 1)) == {QuadraticScalar(Fraction((ell + 2) ** 2, 4))}


def test_uniform_is_valid():
    for ell in range(2, 10):
        assert is_valid(CoefficientProfile.uniform(ell))


@pytest.mark.parametrize("lattice", [LatticeKind.hypercubic(2), LatticeKind.honeycomb(), LatticeKind.triangular()])
def test_published_profiles_valid(lattice):
    for ell in range(3, 60):
        assert validate_profile(CoefficientProfile.from_lambda(ell, paper_lambda(lattice, ell))).ok


@given(st.integers(2, 30), st.fractions(min_value=-3, max_value=3, max_denominator=40))
def test_from_lambda_always_symmetric(ell, lam):
    rep = validate_profile(CoefficientProfile.from_lambda(ell, lam))
    assert rep.symmetric


def test_violations_are_located():
    p = CoefficientProfile(3, (1, 2, 1), (1, 2, 3, 1))
    rep = validate_profile(p)
    assert not rep.ok and not rep.symmetric
    assert rep.first_violation == ("symmetry", "d", 1)
    neg = validate_profile(CoefficientProfile(2, (1, 1), (0, 1, 0)))
    assert not neg.positive and neg.first_violation[0] == "positivity"
    dip = validate_profile(CoefficientProfile(4, (2, 1, 1, 2), (1, 1, 1, 1, 1)))
    assert not dip.monotone


def test_large_lambda_breaks_positivity():
    # far beyond the flat profile the ends of d go negative
    assert not validate_profile(CoefficientProfile.from_lambda(6, 5)).ok


def test_json_round_trip():
    p = CoefficientProfile.from_lambda(7, qf_make(Fraction(-2, 7), Fraction(2, 7), 2))
    q = CoefficientProfile.from_json(p.to_json())
    assert q == p and q.lam == p.lam and q.field == 2


def test_bad_inputs():
    with pytest.raises(ProfileError):
        CoefficientProfile(3, (1, 1), (1, 1, 1, 1))
    with pytest.raises(ProfileError):
        euclid_c(1)
