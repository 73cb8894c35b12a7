"""Desk-scale verification of the level-1 GL(2)/ℚ twisted summation identity.

One side is a plainly computable sum Σ e(−na/c)·λ(n)·n^{−1/2}·w(n) over the
Hecke eigenvalues of the weight-12 cusp form; the other reassembles the same
number from the dual side: the archimedean dual function w̃ (convolution
route), exact ramified local transforms at the primes dividing c, and the
untwisted dual coefficients everywhere else.  The two sides share *no* code
path beyond the coefficient table, which is what makes the residual a real
check and not a tautology.

Coefficients are exact integers (eta-product expansion over Python ints);
the ramified local factors are exact ring elements with rational phase turns,
converted to floating complex only inside the final α-sum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .archimedean import DS2Block, RealPlaceParams
from .hankel import TestFunction, hankel_convolution_batch
from .padic import QSqrt, ramified_transform_gl2, satake_from_eigenvalue, v_p
from .quadrature import ToleranceNotMet

__all__ = [
    "TruncationTooSmall",
    "TailNotConverged",
    "DirichletCoeffs",
    "tau_coefficients",
    "coeffs_from_file",
    "multiplicativity_check",
    "VoronoiJob",
    "lhs_theta",
    "rhs_theta",
    "voronoi_residual",
]


class TruncationTooSmall(ValueError):
    """The coefficient truncation does not cover the support of w."""


class TailNotConverged(ArithmeticError):
    """The dual α-sum failed to stabilise within the coefficient budget."""


# ---- weight-12 coefficient table -------------------------------------------


@dataclass(frozen=True, eq=False)
class DirichletCoeffs:
    """Hecke-normalised coefficients λ(1..n); exact integers kept when known.

    `exact` holds the un-normalised integer coefficients for provenance
    "tau" (so multiplicativity can be checked with no rounding at all);
    file-loaded tables carry floats only.
    """

    n: int
    values: np.ndarray
    provenance: str
    exact: tuple | None = None

    def lam(self, n: int) -> complex:
        return complex(self.values[n - 1])


def _eta_cube_sparse(nmax: int):
    """Exponent/coefficient pairs of Σ (−1)^k (2k+1) q^{k(k+1)/2} up to q^nmax."""
    out = []
    k = 0
    while k * (k + 1) // 2 <= nmax:
        out.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return out


def tau_coefficients(N: int) -> DirichletCoeffs:
    """λ(n) = τ(n)/n^{11/2} for n ≤ N, from the exact eta-product expansion.

    The 24th power of ∏(1−q^j) is built as the 8th power of the sparse
    triangular-number series for the cube, eight dense×sparse passes over
    Python ints — O(N^{3/2}) work, exact at every step.
    """
    if N < 1:
        raise ValueError("need at least one coefficient")
    sparse = _eta_cube_sparse(N - 1)
    d = np.zeros(N, dtype=object)
    d[0] = 1
    for _ in range(8):
        nd = np.zeros(N, dtype=object)
        for e, cth in sparse:
            nd[e:] = nd[e:] + cth * d[: N - e]
        d = nd
    tau = tuple(int(t) for t in d)
    ns = np.arange(1, N + 1, dtype=float)
    lam = np.array([float(t) for t in tau]) / ns**5.5
    return DirichletCoeffs(N, lam.astype(complex), "tau", tau)


def coeffs_from_file(path) -> DirichletCoeffs:
    """Read `n,lambda_re,lambda_im` rows (header optional, any order of n)."""
    rows = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.lower().startswith("n,"):
                continue
            parts = line.split(",")
            rows[int(parts[0])] = complex(float(parts[1]), float(parts[2]))
    if not rows or min(rows) != 1 or max(rows) != len(rows):
        raise ValueError("coefficient file must cover n = 1..N contiguously")
    values = np.array([rows[i] for i in range(1, len(rows) + 1)], dtype=complex)
    return DirichletCoeffs(len(rows), values, "file", None)


def multiplicativity_check(coeffs: DirichletCoeffs, pairs: int = 20, seed: int = 0) -> float:
    """Largest deviation |λ(mn) − λ(m)λ(n)| over random coprime pairs.

    Exactly zero for the integer-backed table (the check is then done on the
    integers themselves); small-but-nonzero for rounded file input.
    """
    import random

    rng = random.Random(seed)
    worst = 0.0
    for _ in range(pairs):
        while True:
            m = rng.randrange(2, max(3, int(math.isqrt(coeffs.n))))
            n = rng.randrange(2, max(3, coeffs.n // m + 1))
            if m * n <= coeffs.n and math.gcd(m, n) == 1:
                break
        if coeffs.exact is not None:
            dev = 0.0 if coeffs.exact[m * n - 1] == coeffs.exact[m - 1] * coeffs.exact[n - 1] else math.inf
        else:
            dev = abs(coeffs.lam(m * n) - coeffs.lam(m) * coeffs.lam(n))
        worst = max(worst, dev)
    return worst


# ---- the verification job ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class VoronoiJob:
    """One twisted-identity check: twist a/c, window w, truncation and tol."""

    a: int
    c: int
    w: TestFunction
    n_trunc: int
    tol: float = 1e-6
    weight: int = 12
    coeffs: DirichletCoeffs | None = None

    def __post_init__(self) -> None:
        if self.c < 1 or math.gcd(self.a, self.c) != 1:
            raise ValueError("need c ≥ 1 and gcd(a, c) = 1")
        if self.w.neg is not None or not self.w.a > 0:
            raise ValueError("w must be supported inside (0, ∞)")
        if self.n_trunc < 1 or not self.tol > 0:
            raise ValueError("need a positive truncation and tolerance")
        if self.weight < 2:
            raise ValueError("weight must be at least 2")


def _job_coeffs(job: VoronoiJob) -> DirichletCoeffs:
    co = job.coeffs if job.coeffs is not None else tau_coefficients(job.n_trunc)
    if co.n < job.n_trunc:
        raise TruncationTooSmall(f"coefficient table covers {co.n} < {job.n_trunc}")
    return co


def _factor(c: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d, left = 2, c
    while d * d <= left:
        while left % d == 0:
            out[d] = out.get(d, 0) + 1
            left //= d
        d += 1
    if left > 1:
        out[left] = out.get(left, 0) + 1
    return out


def _delta_satake(p: int, co: DirichletCoeffs):
    if co.exact is None:
        raise ValueError("ramified places need the exact integer coefficient table")
    if p > co.n:
        raise TruncationTooSmall(f"no coefficient at p = {p}")
    lam = QSqrt(p, Fraction(0), Fraction(co.exact[p - 1], p**6))
    return satake_from_eigenvalue(p, lam)


def _detect_min_valuation(sp, zeta: Fraction):
    """Deepest surviving α-shell of the local twisted factor, found exactly.

    Descends v = 0, −1, … evaluating the transform on every unit class that
    the character can distinguish; stops after two consecutive shells vanish
    identically.  Returns None if nothing survives at all.
    """
    p = sp.q
    r = -int(v_p(zeta, p))
    minv = None
    empty = 0
    v = 0
    while v >= -(2 * r + 3):
        kcl = max(1, -(v + r))
        mod = p**kcl
        found = False
        for u in range(1, mod):
            if u % p == 0:
                continue
            if not ramified_transform_gl2(sp, zeta, Fraction(u * p**v) if v >= 0 else Fraction(u, p**-v)).is_zero:
                found = True
                break
        if found:
            minv = v
            empty = 0
        else:
            empty += 1
            if empty == 2:
                return minv
        v -= 1
    return minv


# ---- the two sides ----------------------------------------------------------


def lhs_theta(job: VoronoiJob) -> complex:
    """Σ_{n ≤ N} e^{−2πi n a/c} λ(n) n^{−1/2} w(n): the direct side.

    w has compact support, so once N clears ⌈sup supp w⌉ the tail is zero
    identically — below that the request is refused rather than silently
    truncated.
    """
    need = math.ceil(job.w.b)
    if job.n_trunc < need:
        raise TruncationTooSmall(f"N = {job.n_trunc} < {need} = ⌈sup supp w⌉")
    co = _job_coeffs(job)
    n0 = max(1, math.ceil(job.w.a))
    n1 = min(job.n_trunc, math.floor(job.w.b))
    if n1 < n0:
        return 0j
    ns = np.arange(n0, n1 + 1)
    wn = job.w(ns.astype(float))
    phases = np.exp(-2j * np.pi * ((ns * job.a) % job.c) / job.c)
    return complex(np.sum(phases * co.values[ns - 1] * wn / np.sqrt(ns)))


def rhs_theta(job: VoronoiJob, full_output: bool = False):
    """The dual side: Σ over the detected support lattice of
    [∏_{p|c} exact local transform] · λ(m′) m′^{−1/2} · w̃(α).

    α runs over m/D with D the detected denominator (v_p ≥ −2v_p(c) in
    practice); the prime-to-c part m′ of m feeds the untwisted coefficient
    table.  w̃ comes from the convolution route in batches; the negative dual
    axis vanishes identically for these discrete-series parameters, so the
    sum is one-sided.  Windows of doubling width are accumulated until two
    consecutive ones fall below tol/10 in absolute value; running out of
    coefficients first raises TailNotConverged.
    """
    co = _job_coeffs(job)
    params = RealPlaceParams((DS2Block(job.weight - 1, 0.0),))
    fac = _factor(job.c)
    zeta = Fraction(job.a, job.c)
    sps = {}
    support = {}
    for p in fac:
        sp = _delta_satake(p, co)
        mv = _detect_min_valuation(sp, zeta)
        if mv is None:
            result = 0j
            return {"value": result, "support": {p: None}, "shells": []} if full_output else result
        sps[p] = sp
        support[p] = mv
    denom = 1
    for p in fac:
        denom *= p ** (-support[p])
    # per-point dual tolerance: floored so the far windows (whose kernel
    # arguments push the oscillatory engine toward its roundoff floor) are
    # not asked for more than double precision delivers; each window call
    # re-scales its internal budget by its own |α|^ν, so near windows come
    # out far more accurate than this anyway
    wtol = min(1e-7, max(2e-9, job.tol / 500.0))

    total = 0j
    shells = []
    small = 0
    converged = False
    m_lo = 1
    edge = 4.0
    while m_lo <= job.n_trunc:
        m_hi = min(job.n_trunc, int(math.floor(edge * denom)))
        if m_hi >= m_lo:
            ms = np.arange(m_lo, m_hi + 1)
            try:
                dual_vals, _ = hankel_convolution_batch(params, 2, job.w, ms / float(denom), tol=wtol)
            except ToleranceNotMet:
                # far windows carry negligible weight; a looser pass there
                # costs nothing against the tol/10 shell threshold
                dual_vals, _ = hankel_convolution_batch(params, 2, job.w, ms / float(denom), tol=8 * wtol)
            contrib = 0j
            for i in range(len(ms)):
                m = int(ms[i])
                mprime = m
                turns = Fraction(0)
                local = 1.0 + 0.0j
                dead = False
                for p in fac:
                    while mprime % p == 0:
                        mprime //= p
                    wv = ramified_transform_gl2(sps[p], zeta, Fraction(m, denom))
                    if wv.is_zero:
                        dead = True
                        break
                    turns += wv.turns
                    local *= complex(wv.coef) * sps[p].q ** (wv.half / 2)
                if dead:
                    continue
                if turns % 1:
                    local *= cmath.exp(2j * math.pi * float(turns % 1))
                contrib += local * co.values[mprime - 1] / math.sqrt(mprime) * dual_vals[i]
            total += contrib
            shells.append({"alpha_hi": edge, "m_range": (int(m_lo), int(m_hi)), "abs": abs(contrib)})
            small = small + 1 if abs(contrib) < job.tol / 10 else 0
            if small >= 2:
                converged = True
                break
            m_lo = m_hi + 1
        edge *= 2
    if not converged:
        raise TailNotConverged(
            f"α-sum still above tol/10 after m = {job.n_trunc} (last shells: "
            f"{[round(s['abs'], 12) for s in shells[-3:]]})"
        )
    if full_output:
        return {"value": total, "support": support, "shells": shells, "denominator": denom, "dual_tol": wtol}
    return total


def voronoi_residual(job: VoronoiJob) -> dict:
    """Evaluate both sides and report absolute/relative residuals."""
    lhs = lhs_theta(job)
    rep = rhs_theta(job, full_output=True)
    rhs = rep["value"]
    abs_residual = abs(lhs - rhs)
    rel_residual = abs_residual / max(abs(lhs), abs(rhs), 1e-30)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "abs_residual": abs_residual,
        "rel_residual": rel_residual,
        "zeta": f"{job.a}/{job.c}",
        "weight": job.weight,
        "n_trunc": job.n_trunc,
        "tol": job.tol,
        "support": rep.get("support", {}),
        "shells": rep.get("shells", []),
    }
