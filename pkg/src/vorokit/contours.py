"""Mellin–Barnes integration contours.

A contour is an upward-directed path used for the inverse Mellin integrals
defining the Bessel functions: outside a finite detour section it is the
vertical line Re s = σ′, and the detour (an axis-aligned rectangle bulge to
the right) walks the path around any Γ-poles of the integrand that sit to the
right of the asymptote.  Admissibility means

  (1) σ′ < 1/2 + (Re Σ n_j t_j − 1)/n  (real place; the analogous bound in
      the doubled variable over ℂ),
  (2) every integrand pole lies strictly left of the path with clearance
      ≥ 0.1,
  (3) the path is the vertical line outside the node section.

The pole sets are, per block and with the twist folded in:

  real GL1(δ, t):  t − ℕ      (union over both character parities)
  real DS2(l, t):  t − l/2 − ℕ
  complex (t, l):  2t − |l+m| − 2ℕ   (doubled variable w = 2s)

``build_contour`` places the asymptote at the admissibility bound minus 1/4
and bulges right of any poles within 1/4 of it, so all clearances are ≥ 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .archimedean import (
    CharTwist,
    ComplexPlaceParams,
    DS2Block,
    GL1Block,
    PlaceParams,
    RealPlaceParams,
)

__all__ = ["Contour", "InfeasibleContour", "build_contour", "pole_starts", "check_admissible"]

CLEARANCE = 0.25  # build target; the admissibility requirement itself is 0.1
_MIN_CLEARANCE = 0.1


class InfeasibleContour(ValueError):
    """Pole clearance cannot be met (degenerate user-supplied parameters)."""


@dataclass(frozen=True)
class Contour:
    """Piecewise-linear Mellin–Barnes path, directed upward.

    ``nodes`` is the finite detour section (possibly empty); away from it the
    path is the vertical line Re s = ``asymptote``.  For complex-place
    parameters the path lives in the doubled variable.
    """

    asymptote: float
    nodes: tuple = field(default_factory=tuple)
    direction: str = "up"

    def shifted(self, dx: float) -> "Contour":
        """Parallel-translate the asymptote (detour nodes keep their bulge)."""
        return Contour(self.asymptote + dx, tuple(n + dx for n in self.nodes), self.direction)


def pole_starts(params: PlaceParams, twist: CharTwist) -> list[tuple[complex, int]]:
    """Rightmost pole and spacing, per block: [(start, step), ...].

    Poles of block j are start_j − step_j·k, k = 0, 1, 2, …
    """
    out: list[tuple[complex, int]] = []
    if isinstance(params, RealPlaceParams):
        for b in params.blocks:
            if isinstance(b, GL1Block):
                out.append((complex(b.t), 1))  # both parities together
            else:
                out.append((complex(b.t) - b.l / 2, 1))
    else:
        m = twist.value
        for b in params.blocks:
            out.append((2 * complex(b.t) - abs(b.l + m), 2))
    return out


def _asymptote_bound(params: PlaceParams) -> float:
    if isinstance(params, RealPlaceParams):
        n = params.rank
        tsum = sum(
            (1 if isinstance(b, GL1Block) else 2) * complex(b.t).real for b in params.blocks
        )
        return 0.5 + (tsum - 1.0) / n
    n = params.rank
    tsum = sum(complex(b.t).real for b in params.blocks)
    # doubled variable: twice the natural bound of the undoubled one
    return 1.0 + (tsum - 1.0) / n


def build_contour(params: PlaceParams, twist: CharTwist = CharTwist(0)) -> Contour:
    key = (params, twist)
    return _build_contour_cached(key)


@lru_cache(maxsize=256)
def _build_contour_cached(key) -> Contour:
    params, twist = key
    sigma = _asymptote_bound(params) - CLEARANCE
    bulged: list[complex] = []
    for start, step in pole_starts(params, twist):
        p = start
        guard = 0
        while p.real > sigma - CLEARANCE:
            bulged.append(p)
            p -= step
            guard += 1
            if guard > 1000:
                raise InfeasibleContour(
                    f"more than {guard} poles right of the asymptote {sigma}"
                )
    if not bulged:
        return Contour(sigma)
    rho = max(p.real for p in bulged) + CLEARANCE
    height = max(abs(p.imag) for p in bulged) + 1.0
    nodes = (
        complex(sigma, -height),
        complex(rho, -height),
        complex(rho, height),
        complex(sigma, height),
    )
    return Contour(sigma, nodes)


# ---- admissibility verification -------------------------------------------


def _dist_to_segment(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(p - a)
    t = ((p - a).real * ab.real + (p - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def _path_segments(c: Contour, halfheight: float) -> list[tuple[complex, complex]]:
    if c.nodes:
        pts = [complex(c.asymptote, -halfheight), *c.nodes, complex(c.asymptote, halfheight)]
    else:
        pts = [complex(c.asymptote, -halfheight), complex(c.asymptote, halfheight)]
    return list(zip(pts[:-1], pts[1:]))


def check_admissible(contour: Contour, params: PlaceParams, twist: CharTwist = CharTwist(0)) -> None:
    """Raise InfeasibleContour if any admissibility requirement fails."""
    bound = _asymptote_bound(params)
    if not contour.asymptote < bound:
        raise InfeasibleContour(
            f"asymptote {contour.asymptote} violates the decay bound {bound}"
        )
    rho = max((n.real for n in contour.nodes), default=contour.asymptote)
    det_span = max((abs(n.imag) for n in contour.nodes), default=0.0)
    for start, step in pole_starts(params, twist):
        p = start
        while p.real > contour.asymptote - 2 * CLEARANCE - 1.0:
            # strictly-left check at the pole's own height
            if contour.nodes and abs(p.imag) <= det_span:
                if p.real >= rho:
                    raise InfeasibleContour(f"pole {p} not enclosed by the detour")
            elif p.real >= contour.asymptote:
                raise InfeasibleContour(f"pole {p} lies right of the line Re s = {contour.asymptote}")
            extent = max(det_span, abs(p.imag)) + 5.0
            d = min(_dist_to_segment(p, a, b) for a, b in _path_segments(contour, extent))
            if d < _MIN_CLEARANCE:
                raise InfeasibleContour(f"pole {p} at distance {d:.3g} < {_MIN_CLEARANCE}")
            p -= step
