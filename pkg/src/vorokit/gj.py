"""Sharp-cutoff zeta kernels, their duals, and the pairings that probe L-zeros.

The kernel H_s(x) packages the partial sums of a Dirichlet series with the
power |x|^{s−1/2} (cuspidal) or |x|^{s−1} with a residue constant (the Tate
case over ℚ).  Between consecutive integers each kernel is a constant times a
power of |x|, so every pairing integral here is organised gap-by-gap: one
Dirichlet prefix sum per gap, one short quadrature of the smooth test factor.

Two global statements are made checkable this way.  The split identity writes
the full zeta integral of a test function as ⟨φ, H_s⟩ + ⟨F(φ), K_{1−s}⟩ and
compares it against an archimedean Mellin factor times an independently
computed L-value.  The Fourier-duality criterion pairs F(H_s) + K_{1−s}
against a fixed Schwartz function: the result vanishes precisely at zeros of
the underlying L-function, which for ζ is visible as a sharp dip of the
pairing magnitude at the first critical zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .archimedean import DS2Block, RealPlaceParams
from .hankel import TestFunction, hankel_convolution_batch, make_bump, signed_mellin
from .lseries import euler_product_l_delta, l_delta_smoothed, zeta_em
from .quadrature import ToleranceNotMet, gauss_nodes
from .voronoi import DirichletCoeffs, TailNotConverged, tau_coefficients

__all__ = [
    "CoeffRangeExceeded",
    "PoleAtOne",
    "KernelSpec",
    "PairingResult",
    "SchwartzGaussian",
    "unit_coeffs",
    "h_kernel",
    "k_dual_kernel",
    "clozel_tate_kernels",
    "DualGrid",
    "split_zeta_identity",
    "zero_criterion_pairing",
]

_POLE_DISK = 1e-8


class CoeffRangeExceeded(LookupError):
    """A kernel was evaluated past the end of its coefficient table."""


class PoleAtOne(ArithmeticError):
    """The Tate kernels carry the residue term κ/(1−s); s too close to the pole."""


def unit_coeffs(n: int) -> DirichletCoeffs:
    """a_n ≡ 1: the ζ_ℚ table (each ideal of norm n contributes once)."""
    if n < 1:
        raise ValueError("need at least one coefficient")
    return DirichletCoeffs(n, np.ones(n, dtype=complex), "unit", (1,) * n)


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family: coefficient table, the complex parameter s, and variant.

    variant "cuspidal" uses the |x|^{s−1/2} normalisation and vanishes
    identically on |x| < 1; variant "tate" is Clozel's ζ_ℚ kernel with
    κ = 1, D = 1 baked in (other number fields are out of scope).  Dual
    coefficients default to the table itself (level-1 self-duality; for ζ
    the dual series is again all ones).
    """

    coeffs: DirichletCoeffs
    s: complex
    variant: str = "cuspidal"
    dual_coeffs: DirichletCoeffs | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("cuspidal", "tate"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "tate" and abs(1 - self.s) < _POLE_DISK:
            raise PoleAtOne(f"s = {self.s} is within {_POLE_DISK:g} of the pole at 1")

    @property
    def dual(self) -> DirichletCoeffs:
        return self.dual_coeffs if self.dual_coeffs is not None else self.coeffs


def _partial_sum(coeffs: DirichletCoeffs, x: float, z: complex) -> complex:
    n = int(math.floor(x))
    if n < 1:
        return 0j
    if n > coeffs.n:
        raise CoeffRangeExceeded(f"need coefficients to {n}, table holds {coeffs.n}")
    ns = np.arange(1, n + 1, dtype=float)
    return complex(np.sum(coeffs.values[:n] * ns ** (-z)))


def h_kernel(spec: KernelSpec, x: float) -> complex:
    """H_s at a nonzero real x: |x|^{s−1/2} Σ_{n≤|x|} a_n n^{−s} (cuspidal),
    or |x|^{s−1} Σ_{n≤|x|} a_n n^{−s} − 1/(1−s) (tate)."""
    ax = abs(float(x))
    if ax == 0.0:
        raise ValueError("kernels live on ℝ^×; x = 0 is not allowed")
    s = spec.s
    if spec.variant == "cuspidal":
        if ax < 1.0:
            return 0j
        return ax ** (s - 0.5) * _partial_sum(spec.coeffs, ax, s)
    return ax ** (s - 1.0) * _partial_sum(spec.coeffs, ax, s) - 1.0 / (1.0 - s)


def k_dual_kernel(spec: KernelSpec, x: float) -> complex:
    """The dual kernel: same partial-sum shape over the dual coefficients.

    Over ℚ the Tate dual sums over the inverse different ℤ itself, so it
    coincides with h_kernel; the cuspidal level-1 case is self-dual as well,
    unless an explicit dual table says otherwise.
    """
    ax = abs(float(x))
    if ax == 0.0:
        raise ValueError("kernels live on ℝ^×; x = 0 is not allowed")
    s = spec.s
    if spec.variant == "cuspidal":
        if ax < 1.0:
            return 0j
        return ax ** (s - 0.5) * _partial_sum(spec.dual, ax, s)
    return ax ** (s - 1.0) * _partial_sum(spec.dual, ax, s) - 1.0 / (1.0 - s)


def clozel_tate_kernels(s: complex, x: float, n_coeffs: int | None = None):
    """(H_s(x), K_s(x)) for ζ_ℚ; the pair is equal here because D = 1."""
    if n_coeffs is None:
        n_coeffs = max(1, int(math.floor(abs(float(x)))))
    spec = KernelSpec(unit_coeffs(n_coeffs), complex(s), "tate")
    return h_kernel(spec, x), k_dual_kernel(spec, x)


# ---- Schwartz test family for the Tate pairing ------------------------------


@dataclass(frozen=True)
class SchwartzGaussian:
    """(c0 + c2·x²)·e^{−πx²}: closed under the additive Fourier transform."""

    c0: float = 1.0
    c2: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return (self.c0 + self.c2 * x * x) * np.exp(-math.pi * x * x)

    def fourier(self) -> "SchwartzGaussian":
        # F(e^{−πx²}) = e^{−πξ²};  F(x²e^{−πx²}) = (1/(2π) − ξ²)e^{−πξ²}
        return SchwartzGaussian(self.c0 + self.c2 / (2 * math.pi), -self.c2)

    def integral(self) -> float:
        """∫_ℝ φ(x) dx, in closed form."""
        return self.c0 + self.c2 / (2 * math.pi)

    @property
    def label(self) -> str:
        if self.c2 == 0.0:
            return "gaussian" if self.c0 == 1.0 else f"{self.c0:g}·gaussian"
        return f"({self.c0:g}{self.c2:+g}·x²)·gaussian"


def _completed_zeta(s: complex) -> complex:
    """π^{−s/2} Γ(s/2) ζ(s) — what the Gaussian Tate pairing resums to."""
    s = complex(s)
    return cmath.exp(complex(loggamma(s / 2)) - 0.5 * s * math.log(math.pi)) * zeta_em(s)


def _tate_pairing(s: complex, phi: SchwartzGaussian, gmax: int = 9) -> complex:
    """⟨H_s, φ̂⟩ + ⟨K_{1−s}, φ⟩ with the additive pairing ∫_ℝ · dx.

    Both kernels are even and piecewise x^power between integers, and the
    partial-sum coefficient on (0,1) is zero, so the whole integral is the
    residue constants against ∫φ plus short per-gap quadratures on [1, gmax).
    """
    s = complex(s)
    if min(abs(s), abs(1 - s)) < _POLE_DISK:
        raise PoleAtOne(f"pairing has poles at 0 and 1; s = {s}")
    phih = phi.fourier()
    total = -phih.integral() / (1.0 - s) - phi.integral() / s
    c_s = 0j
    c_d = 0j
    height = abs(s.imag)
    for g in range(1, gmax):
        c_s += g ** (-s)
        c_d += g ** (s - 1.0)  # Σ m^{−(1−s)}
        cnt = min(48, 12 + 3 * int(height * math.log1p(1.0 / g)))
        u, v = gauss_nodes(cnt)
        xs = g + 0.5 + 0.5 * u
        wts = 0.5 * v
        total += 2.0 * c_s * np.sum(wts * xs ** (s - 1.0) * phih(xs))
        total += 2.0 * c_d * np.sum(wts * xs ** (-s) * phi(xs))
    return complex(total)


# ---- split identity for the weight-12 form ----------------------------------


def _default_params() -> RealPlaceParams:
    return RealPlaceParams((DS2Block(11, 0.0),))


class DualGrid:
    """Dual-function samples on gap-wise quadrature nodes, octave by octave.

    Building w̃ is the expensive part of the K-side integral and depends only
    on the test function, so one grid is shared across every s in a scan.
    Octaves [2^j, 2^{j+1}) are built on demand; each node carries its d×x
    weight and the integer gap it lies in.
    """

    def __init__(self, w: TestFunction, params: RealPlaceParams | None = None, tol: float = 1e-7):
        self.w = w
        self.params = params if params is not None else _default_params()
        # floored like the α-sum: the oscillatory engine bottoms out ~3e-13
        self.wtol = min(1e-7, max(2e-9, tol / 100.0))
        self.octaves: list[dict] = []
        self._hi = 1

    def ensure(self, upto: int) -> None:
        while self._hi < upto:
            lo, hi = self._hi, 2 * self._hi
            xs_l, wt_l, gap_l = [], [], []
            for g in range(lo, hi):
                swing = 2.0 * math.pi * math.sqrt(self.w.b / g)  # dual phase across the gap
                cnt = min(48, 10 + 3 * int(swing))
                u, v = gauss_nodes(cnt)
                xs = g + 0.5 + 0.5 * u
                xs_l.append(xs)
                wt_l.append(0.5 * v / xs)  # d×x = dx/x
                gap_l.append(np.full(cnt, g, dtype=int))
            xs = np.concatenate(xs_l)
            try:
                vals, _ = hankel_convolution_batch(self.params, 2, self.w, xs, tol=self.wtol)
            except ToleranceNotMet:
                vals, _ = hankel_convolution_batch(self.params, 2, self.w, xs, tol=8 * self.wtol)
            self.octaves.append(
                {"lo": lo, "hi": hi, "xs": xs, "wts": np.concatenate(wt_l),
                 "gaps": np.concatenate(gap_l), "vals": vals}
            )
            self._hi = hi


def split_zeta_identity(
    w: TestFunction,
    s: complex,
    coeffs: DirichletCoeffs | None = None,
    *,
    params: RealPlaceParams | None = None,
    tol: float = 1e-7,
    grid: DualGrid | None = None,
    euler_pbound: int = 10000,
) -> dict:
    """Check ⟨w, H_s⟩ + ⟨w̃, K_{1−s}⟩ = Z_∞(s, w)·L(s) for the weight-12 form.

    The two sides are computed with disjoint machinery: the left by gap-wise
    quadrature against the kernel partial sums (w̃ from the convolution
    route), the right by a signed Mellin integral times an L-value oracle —
    Euler product for Re s > 3/2, the smoothed incomplete-Γ sum otherwise.
    """
    s = complex(s)
    if w.neg is not None or not w.a > 0:
        raise ValueError("the test function must be supported inside (0, ∞)")
    if coeffs is None:
        coeffs = tau_coefficients(1024)
    params = params if params is not None else _default_params()
    if math.floor(w.b) > coeffs.n:
        raise CoeffRangeExceeded(f"support reaches {w.b}, table holds {coeffs.n}")

    # direct side: Σ_g C_g(s) ∫_gap w(x) x^{s−1/2} d×x; the prefix runs from
    # g = 1 even when the support starts higher
    lam = coeffs.values
    i1 = 0j
    c_run = 0j
    u24, v24 = gauss_nodes(24)
    for g in range(1, math.ceil(w.b)):
        c_run += lam[g - 1] * g ** (-s)
        a_clip, b_clip = max(float(g), w.a), min(float(g + 1), w.b)
        if b_clip <= a_clip:
            continue
        xs = 0.5 * (a_clip + b_clip) + 0.5 * (b_clip - a_clip) * u24
        wts = 0.5 * (b_clip - a_clip) * v24 / xs
        i1 += c_run * np.sum(wts * w(xs) * xs ** (s - 0.5))

    # dual side: octaves of ⟨w̃, K_{1−s}⟩ until two in a row are negligible
    grid = grid if grid is not None else DualGrid(w, params, tol)
    sd = 1.0 - s
    i2 = 0j
    small = 0
    oct_idx = 0
    prefix = np.zeros(1, dtype=complex)  # C_g(1−s), filled as octaves arrive
    while True:
        if oct_idx >= len(grid.octaves):
            if grid._hi > coeffs.n:
                raise TailNotConverged(
                    f"K-side still above tol/10 at x = {grid._hi} with {coeffs.n} coefficients"
                )
            grid.ensure(2 * grid._hi)
        oc = grid.octaves[oct_idx]
        if oc["hi"] > coeffs.n + 1:
            raise TailNotConverged(
                f"K-side still above tol/10 at x = {oc['lo']} with {coeffs.n} coefficients"
            )
        if len(prefix) < oc["hi"]:
            old = len(prefix)
            ns = np.arange(old, oc["hi"], dtype=float)
            ext = np.cumsum(lam[old - 1 : oc["hi"] - 1] * ns ** (-sd))
            prefix = np.concatenate([prefix, prefix[-1] + ext])
        contrib = complex(np.sum(oc["wts"] * oc["vals"] * oc["xs"] ** (sd - 0.5) * prefix[oc["gaps"]]))
        i2 += contrib
        small = small + 1 if abs(contrib) < tol / 10 else 0
        oct_idx += 1
        if small >= 2:
            break

    z_arch = signed_mellin(w, 0, s - 0.5, tol=min(1e-12, tol / 10))
    if s.real > 1.5:
        l_value, l_route = euler_product_l_delta(s, pbound=euler_pbound), "euler-product"
    else:
        l_value, l_route = l_delta_smoothed(s), "smoothed-sum"
    value = i1 + i2
    reference = z_arch * l_value
    defect = abs(value - reference)
    return {
        "s": s,
        "i1": i1,
        "i2": i2,
        "value": value,
        "z_arch": z_arch,
        "l_value": l_value,
        "l_route": l_route,
        "reference": reference,
        "defect": defect,
        "rel_defect": defect / max(abs(reference), 1e-30),
        "x_max": grid.octaves[oct_idx - 1]["hi"] if oct_idx else 1,
        "tol": tol,
    }


# ---- zero criterion ---------------------------------------------------------


@dataclass(frozen=True)
class PairingResult:
    """One point of a zero scan: the pairing value, its reference, the defect.

    For the tate variant the defect *is* |value| — vanishing of the pairing
    is the criterion — and reference carries the completed-ζ resummation.
    For the cuspidal variant value is the L-proxy (I₁+I₂)/Z_∞ and defect its
    distance to the oracle.  `phi` records which test function witnessed it.
    """

    s: complex
    value: complex
    reference: complex
    defect: float
    variant: str
    phi: str


def zero_criterion_pairing(
    variant: str,
    s_list,
    *,
    phi: SchwartzGaussian | None = None,
    w: TestFunction | None = None,
    coeffs: DirichletCoeffs | None = None,
    params: RealPlaceParams | None = None,
    tol: float = 1e-7,
) -> list[PairingResult]:
    """Evaluate the zero-detecting pairing on a list of s values.

    tate: ⟨F(H_s) + K_{1−s}, φ⟩ against a Gaussian-family φ (closed-form
    Fourier transform); cuspidal: the split-identity L-proxy against the
    L-value oracle, sharing one dual grid across the whole scan.
    """
    if variant == "tate":
        phi = phi if phi is not None else SchwartzGaussian()
        out = []
        for s in s_list:
            val = _tate_pairing(complex(s), phi)
            out.append(PairingResult(complex(s), val, _completed_zeta(complex(s)), abs(val), "tate", phi.label))
        return out
    if variant != "cuspidal":
        raise ValueError(f"unknown variant {variant!r}")
    w = w if w is not None else make_bump(1.0, 40.0)
    coeffs = coeffs if coeffs is not None else tau_coefficients(1024)
    grid = DualGrid(w, params, tol)
    out = []
    for s in s_list:
        rep = split_zeta_identity(w, complex(s), coeffs, params=params, tol=tol, grid=grid)
        proxy = rep["value"] / rep["z_arch"]
        out.append(
            PairingResult(complex(s), proxy, rep["l_value"], abs(proxy - rep["l_value"]),
                          "cuspidal", f"bump({w.a:g},{w.b:g})")
        )
    return out
