"""Tests for the twisted summation-identity verifier.

The coefficient oracle here is a *dense* expansion of ∏(1−q^j)^24 by plain
repeated polynomial multiplication — a different route than the module's
sparse cube-power passes, so a bug in either one shows up as a mismatch.
"""

from fractions import Fraction

import numpy as np
import pytest

from vorokit import hankel
from vorokit.hankel import make_bump
from vorokit.padic import satake_from_eigenvalue, QSqrt
from vorokit.voronoi import (
    DirichletCoeffs,
    TailNotConverged,
    TruncationTooSmall,
    VoronoiJob,
    _detect_min_valuation,
    coeffs_from_file,
    lhs_theta,
    multiplicativity_check,
    rhs_theta,
    tau_coefficients,
    voronoi_residual,
)

F = Fraction

W40 = make_bump(1.0, 40.0)
CO = tau_coefficients(2100)

# first values of the un-normalised integer coefficients, long since tabulated
TAU_SMALL = (1, -24, 252, -1472, 4830, -6048, -16744)


# ---- coefficient table ------------------------------------------------------


def test_tau_golden_values():
    assert CO.provenance == "tau"
    assert CO.exact[:7] == TAU_SMALL
    assert all(isinstance(t, int) for t in CO.exact[:50])
    # multiplicative at a coprime pair, on the integers themselves
    assert CO.exact[5] == CO.exact[1] * CO.exact[2]


def test_tau_against_dense_product():
    # independent oracle: ∏_{j<N}(1−q^j) densely, then 24th power by
    # repeated dense multiplication over Python ints
    N = 120
    eta = [0] * N
    eta[0] = 1
    for j in range(1, N):
        nxt = list(eta)
        for i in range(N - j):
            nxt[i + j] -= eta[i]
        eta = nxt
    prod = [0] * N
    prod[0] = 1
    for _ in range(24):
        nxt = [0] * N
        for i, c in enumerate(prod):
            if c:
                for j in range(N - i):
                    nxt[i + j] += c * eta[j]
        prod = nxt
    assert tau_coefficients(N).exact == tuple(prod)


def test_lambda_normalisation():
    assert CO.lam(1) == 1.0
    assert CO.lam(2) == pytest.approx(-24 / 2**5.5, rel=1e-15)
    assert CO.values.dtype == complex


def test_multiplicativity_check_exact():
    assert multiplicativity_check(CO, pairs=40, seed=7) == 0.0


def test_coeffs_file_roundtrip(tmp_path):
    path = tmp_path / "coeffs.csv"
    small = tau_coefficients(12)
    lines = ["n,lambda_re,lambda_im"]
    for n in (12, 3, 1, 7, 2, 11, 5, 4, 10, 6, 9, 8):  # any order is fine
        lines.append(f"{n},{float(small.values[n - 1].real)!r},0.0")
    path.write_text("\n".join(lines) + "\n")
    back = coeffs_from_file(path)
    assert back.provenance == "file" and back.exact is None
    assert np.allclose(back.values, small.values, rtol=0, atol=0)
    # a gap must be refused
    path.write_text("1,1.0,0.0\n3,0.5,0.0\n")
    with pytest.raises(ValueError):
        coeffs_from_file(path)


# ---- the direct side --------------------------------------------------------


def test_lhs_no_lattice_points_in_support():
    # bump on (1, 2): the only integers touching the closure are the
    # endpoints, where the bump vanishes identically
    job = VoronoiJob(a=0, c=1, w=make_bump(1.0, 2.0), n_trunc=8, coeffs=CO)
    assert lhs_theta(job) == 0j


def test_lhs_two_terms():
    w = make_bump(1.0, 4.0)
    job = VoronoiJob(a=0, c=1, w=w, n_trunc=16, coeffs=CO)
    want = CO.lam(2) * w(2.0) / np.sqrt(2.0) + CO.lam(3) * w(3.0) / np.sqrt(3.0)
    assert lhs_theta(job) == pytest.approx(want, rel=1e-14)


def test_lhs_twist_periodicity_and_conjugation():
    w = make_bump(1.0, 20.0)
    l1 = lhs_theta(VoronoiJob(a=1, c=5, w=w, n_trunc=64, coeffs=CO))
    l6 = lhs_theta(VoronoiJob(a=6, c=5, w=w, n_trunc=64, coeffs=CO))
    l4 = lhs_theta(VoronoiJob(a=4, c=5, w=w, n_trunc=64, coeffs=CO))
    assert l1 == l6  # only a mod c enters
    assert l4 == pytest.approx(np.conj(l1), rel=1e-15)  # real coefficients
    assert abs(l1.imag) > 1e-3


def test_job_validation():
    with pytest.raises(ValueError):
        VoronoiJob(a=2, c=4, w=W40, n_trunc=64)  # gcd ≠ 1
    two_sided = hankel.TestFunction(1.0, 2.0, lambda x: x, lambda x: x)
    with pytest.raises(ValueError):
        VoronoiJob(a=0, c=1, w=two_sided, n_trunc=64)
    with pytest.raises(ValueError):
        VoronoiJob(a=0, c=1, w=W40, n_trunc=0)
    with pytest.raises(ValueError):
        VoronoiJob(a=0, c=1, w=W40, n_trunc=64, tol=0.0)
    with pytest.raises(ValueError):
        VoronoiJob(a=0, c=1, w=W40, n_trunc=64, weight=1)


def test_truncation_guards():
    with pytest.raises(TruncationTooSmall):
        lhs_theta(VoronoiJob(a=0, c=1, w=W40, n_trunc=8, coeffs=CO))
    # table shorter than the requested truncation
    with pytest.raises(TruncationTooSmall):
        lhs_theta(VoronoiJob(a=0, c=1, w=W40, n_trunc=50, coeffs=tau_coefficients(10)))


# ---- ramified support detection ---------------------------------------------


def test_support_detection_at_five():
    sp = satake_from_eigenvalue(5, QSqrt(5, F(0), F(4830, 5**6)))
    assert _detect_min_valuation(sp, F(2, 5)) == -2
    assert _detect_min_valuation(sp, F(1, 5)) == -2
    assert _detect_min_valuation(sp, F(3)) == 0  # integral twist: no denominator
    assert _detect_min_valuation(sp, F(1, 25)) == -4


# ---- both sides against each other ------------------------------------------


def test_untwisted_identity():
    rep = voronoi_residual(VoronoiJob(a=0, c=1, w=W40, n_trunc=2048, tol=1e-6, coeffs=CO))
    assert rep["support"] == {}
    assert abs(rep["lhs"]) > 1e-4  # a real test, not 0 ≈ 0
    assert rep["rel_residual"] < 1e-6


def test_twisted_identity_c5():
    co = tau_coefficients(4000)
    rep = voronoi_residual(VoronoiJob(a=2, c=5, w=W40, n_trunc=4000, tol=1e-5, coeffs=co))
    assert rep["support"] == {5: -2}
    assert abs(rep["lhs"].imag) > 1e-2  # the twist makes the sides genuinely complex
    assert rep["rel_residual"] < 1e-4


def test_rhs_tolerance_stability():
    loose = rhs_theta(VoronoiJob(a=0, c=1, w=W40, n_trunc=2048, tol=1e-4, coeffs=CO))
    tight = rhs_theta(VoronoiJob(a=0, c=1, w=W40, n_trunc=2048, tol=1e-6, coeffs=CO))
    assert abs(loose - tight) < 5e-5


def test_tail_not_converged():
    with pytest.raises(TailNotConverged):
        rhs_theta(VoronoiJob(a=0, c=1, w=W40, n_trunc=64, tol=1e-8, coeffs=CO))
