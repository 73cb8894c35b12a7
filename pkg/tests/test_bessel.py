import cmath
import math
import os
import random

import numpy as np
import pytest
from scipy.special import jv

from vorokit.archimedean import (
    CharTwist,
    ComplexBlock,
    ComplexPlaceParams,
    DS2Block,
    GL1Block,
    RealPlaceParams,
    log_mb_gamma,
)
from vorokit.bessel import (
    KernelTable,
    bessel_complex,
    bessel_real,
    bessel_real_batch,
    kernel_eval,
    kernel_table,
)
from vorokit.contours import Contour, InfeasibleContour, build_contour, check_admissible

GL1R = RealPlaceParams((GL1Block(0, 0.0),))
DS11 = RealPlaceParams((DS2Block(11, 0.0),))
GL1C = ComplexPlaceParams((ComplexBlock(0.0, 0),))


# ---- contours --------------------------------------------------------------


def test_build_contour_ds2_example():
    c = build_contour(DS11)
    assert c.asymptote == pytest.approx(-0.25)
    assert c.nodes == ()
    check_admissible(c, DS11)


def test_build_contour_gl1_detours_around_origin():
    c = build_contour(GL1R)
    assert c.asymptote == pytest.approx(-0.75)
    assert c.nodes  # pole at s=0 sits right of the asymptote
    assert max(n.real for n in c.nodes) > 0
    check_admissible(c, GL1R)


def test_build_contour_complex_bound():
    c = build_contour(GL1C)
    assert c.asymptote < 0  # doubled-variable bound for (t, l) = (0, 0)
    check_admissible(c, GL1C)


def test_shifted_contour_still_admissible():
    for p in (GL1R, DS11):
        check_admissible(build_contour(p).shifted(-0.15), p)


def test_inadmissible_contours_rejected():
    with pytest.raises(InfeasibleContour):
        check_admissible(Contour(0.6), DS11)  # violates the decay bound
    with pytest.raises(InfeasibleContour):
        check_admissible(Contour(-0.75), GL1R)  # pole at 0 on the wrong side


# ---- real-place Bessel functions -------------------------------------------


def test_gl1_real_known_points():
    assert bessel_real(GL1R, 1.0) == pytest.approx(1.0, abs=1e-9)
    assert bessel_real(GL1R, 0.25) == pytest.approx(1j, abs=1e-9)
    assert bessel_real(GL1R, 0.5) == pytest.approx(-1.0, abs=1e-9)


def test_gl1_real_oracle_random():
    rng = random.Random(11)
    xs = [rng.uniform(0.05, 20) * rng.choice([-1, 1]) for _ in range(12)]
    vals, _ = bessel_real_batch(GL1R, xs, tol=1e-10)
    for x, v in zip(xs, vals):
        assert v == pytest.approx(cmath.exp(2j * math.pi * x), abs=2e-10)


def test_ds2_weight11_matches_classical_bessel():
    for x in (0.3, 1.0, 7.0, 40.0, 200.0):
        got = bessel_real(DS11, x, tol=1e-10)
        want = 2 * math.pi * jv(11, 4 * math.pi * math.sqrt(x))  # i^{l+1} = 1
        assert got == pytest.approx(want, abs=5e-10)
    assert bessel_real(DS11, -3.0) == 0.0  # parity sum cancels on x < 0


def test_contour_independence():
    rng = random.Random(2024)
    base = build_contour(DS11)
    shifted = base.shifted(-0.15)
    check_admissible(shifted, DS11)
    for _ in range(10):
        x = rng.uniform(0.05, 20)
        a = bessel_real(DS11, x, tol=1e-9, contour=base)
        b = bessel_real(DS11, x, tol=1e-9, contour=shifted)
        assert abs(a - b) < 2e-9


def test_integrand_tail_decay_on_asymptote():
    c = build_contour(DS11)
    x = 3.7
    T = 60.0
    mags = [
        abs(np.exp(log_mb_gamma(DS11, CharTwist(0), complex(c.asymptote, t)) - complex(c.asymptote, t) * math.log(x)))
        for t in (T, 2 * T, 4 * T)
    ]
    assert mags[0] > mags[1] > mags[2]


# ---- complex place ---------------------------------------------------------


def test_gl1_complex_plane_wave_oracle():
    # trace-character calibration: B(z) = exp(2πi(z + z̄))
    for z in (0.5 + 0.3j, 0.25, 0.17 - 0.4j):
        want = cmath.exp(2j * math.pi * (z + z.conjugate()))
        got = bessel_complex(GL1C, z, tol=1e-9)
        assert got == pytest.approx(want, abs=3e-8)
    z = complex(0.25, 0.31)  # z + z̄ = 1/2
    assert bessel_complex(GL1C, z, tol=1e-9) == pytest.approx(-1.0, abs=3e-8)


def test_complex_conjugation_symmetry():
    p = ComplexPlaceParams((ComplexBlock(0.0, 2),))
    pm = ComplexPlaceParams((ComplexBlock(0.0, -2),))
    z = 0.4 + 0.22j
    a = bessel_complex(p, z, tol=1e-9)
    b = bessel_complex(pm, z.conjugate(), tol=1e-9)
    assert a == pytest.approx(b, abs=1e-7)


# ---- kernels ---------------------------------------------------------------


def test_kernel_eval_identities():
    assert kernel_eval(GL1R, 4.0, tol=1e-9) == pytest.approx(2.0, abs=1e-8)
    x = 2.3
    assert kernel_eval(DS11, x, tol=1e-10) == pytest.approx(
        bessel_real(DS11, x, tol=1e-10) * math.sqrt(x), abs=1e-12
    )
    z = complex(0.25, 0.31) * (2 / abs(complex(0.25, 0.31)))  # |z| = 2, z+z̄ arbitrary
    got = kernel_eval(GL1C, z, tol=1e-8)
    want = bessel_complex(GL1C, z, tol=1e-8) * 4.0 ** 0.5 * 2 / 2  # |z|_ℂ^{1/2} = |z| = 2
    assert got == pytest.approx(want, abs=1e-9)


def test_kernel_table_roundtrip(tmp_path):
    t = kernel_table(GL1R, [1.0], tol=1e-8)
    assert t.values[0] == pytest.approx(1.0, abs=1e-7)
    assert t.achieved_tol <= 1e-8
    path = os.path.join(tmp_path, "table.csv")
    t.save(path)
    t2 = KernelTable.load(path)
    assert t2 == t  # bit-identical persistence

    with pytest.raises(ValueError):
        kernel_table(GL1R, [], tol=1e-8)
    with pytest.raises(ValueError):
        kernel_table(GL1R, [2.0, 1.0], tol=1e-8)


def test_kernel_table_signs_cover_grid():
    t = kernel_table(DS11, [0.5, 1.5], tol=1e-8)
    assert len(t.xs) == 4 and set(t.signs) == {1, -1}
    neg = [v for v, s in zip(t.values, t.signs) if s < 0]
    assert all(abs(v) < 1e-12 for v in neg)
