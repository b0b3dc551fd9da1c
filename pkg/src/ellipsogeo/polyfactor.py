"""Self-inversive polynomials nonnegative on the unit circle.

A polynomial P of degree 2m with coefficients satisfying
c_k = conj(c_{2m-k}) takes values with P(zeta) / zeta^m real on
|zeta| = 1.  When that real value is also nonnegative, P factors as

    P(zeta) = r * prod_k (zeta - a_k) (1 - conj(a_k) zeta),   r > 0,

with every a_k in the closed unit disc.  Roots off the circle come in
reflected pairs (b, 1/conj(b)); roots on the circle have even
multiplicity.  This module expands such products, recovers (r, {a_k})
from coefficients, and rebuilds the coefficient band from boundary
samples of a map divided by known inner zeros.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CircleRationalForm",
    "FactorError",
    "SelfInversivePoly",
    "check_self_inversive",
    "expand_circle_product",
    "factor",
    "reconstruct_from_boundary",
]


class FactorError(ValueError):
    """Input polynomial is not in the factorable class (within tolerance)."""


def check_self_inversive(coeffs) -> float:
    """Max |c_k - conj(c_{2m-k})| over k, for ascending coefficients.

    The array length must be odd (degree 2m); an even length cannot carry
    the symmetry and is rejected outright.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size % 2 != 1:
        raise ValueError(
            f"need an odd number of coefficients (degree 2m), got {c.size}"
        )
    return float(np.max(np.abs(c - np.conj(c[::-1]))))


@dataclass(frozen=True)
class SelfInversivePoly:
    """Degree-2m polynomial with the symmetry c_k = conj(c_{2m-k}).

    Coefficients are ascending; construction verifies the symmetry with
    the given tolerance (relative to the largest coefficient).
    """

    coefficients: tuple[complex, ...]
    tol: float = 1e-9

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        res = check_self_inversive(c)
        scale = max(float(np.max(np.abs(c))), 1e-300)
        if res > self.tol * scale:
            raise ValueError(
                f"coefficients are not self-inversive: residual {res:.3e} "
                f"exceeds {self.tol:.1e} * scale"
            )
        object.__setattr__(self, "coefficients", tuple(complex(x) for x in c))

    @property
    def m(self) -> int:
        return (len(self.coefficients) - 1) // 2

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        # ascending coefficients, so reverse for polyval
        return np.polyval(np.asarray(self.coefficients)[::-1], zeta)


@dataclass(frozen=True)
class CircleRationalForm:
    """Factored data (r, {a_k}) with r > 0 and all |a_k| <= 1.

    Optionally carries the boundary divisor points sigma used during a
    reconstruction; empty when the object came straight from factoring.
    """

    scale: float
    zeros: tuple[complex, ...]
    sigma: tuple[complex, ...] = ()

    def __post_init__(self):
        if not (self.scale > 0):
            raise ValueError(f"scale must be positive, got {self.scale}")
        zs = tuple(complex(a) for a in self.zeros)
        for a in zs:
            if abs(a) > 1 + 1e-9:
                raise ValueError(f"zero {a} lies outside the closed disc")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "sigma", tuple(complex(s) for s in self.sigma))

    @property
    def m(self) -> int:
        return len(self.zeros)

    def expand(self) -> np.ndarray:
        return expand_circle_product(self.scale, self.zeros)


def expand_circle_product(scale: float, zeros) -> np.ndarray:
    """Ascending coefficients of scale * prod_k (z - a_k)(1 - conj(a_k) z)."""
    c = np.array([complex(scale)])
    for a in zeros:
        a = complex(a)
        c = np.convolve(c, np.array([-a, 1.0]))
        c = np.convolve(c, np.array([1.0, -np.conj(a)]))
    return c


def _polish_roots(coeffs_desc: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """One Newton step per root against the original polynomial.

    Skipped for roots where |P'| is small (clustered or multiple roots),
    where the step is unstable and cluster averaging is used instead.
    """
    dcoeffs = np.polyder(coeffs_desc)
    p = np.polyval(coeffs_desc, roots)
    dp = np.polyval(dcoeffs, roots)
    scale = np.max(np.abs(coeffs_desc))
    safe = np.abs(dp) > 1e-8 * scale
    out = roots.copy()
    step = np.zeros_like(roots)
    step[safe] = p[safe] / dp[safe]
    small = np.abs(step) < 1e-3
    out[safe & small] -= step[safe & small]
    return out


def _cluster_circle_roots(roots: list[complex], gap: float) -> list[list[complex]]:
    """Group near-coincident unimodular roots by angular sweep."""
    if not roots:
        return []
    order = np.argsort(np.angle(np.asarray(roots)))
    sorted_roots = [roots[i] for i in order]
    clusters = [[sorted_roots[0]]]
    for b in sorted_roots[1:]:
        if abs(b - clusters[-1][-1]) <= gap:
            clusters[-1].append(b)
        else:
            clusters.append([b])
    # the sweep may split one angular cluster across the branch cut
    if len(clusters) > 1 and abs(clusters[0][0] - clusters[-1][-1]) <= gap:
        clusters[0].extend(clusters.pop())
    return clusters


def _pair_attempt(roots, m, n_zero, collar, tol, c, vals, grid):
    """One classification attempt at a given circle collar width.

    Returns (residual, scale, zeros) for the best clustering at this
    collar, or (None, message) when classification cannot proceed.
    """
    on_circle = [complex(b) for b in roots if abs(abs(b) - 1.0) <= collar]
    inside = [complex(b) for b in roots if abs(b) < 1.0 - collar]
    outside = [complex(b) for b in roots if abs(b) > 1.0 + collar]

    if len(inside) != len(outside):
        return None, (f"unbalanced off-circle roots at collar {collar:.0e}: "
                      f"{len(inside)} inside, {len(outside)} outside")

    paired: list[complex] = [0.0] * n_zero
    remaining = list(outside)
    for b in inside:
        target = 1.0 / np.conj(b)
        dists = [abs(t - target) for t in remaining]
        i_best = int(np.argmin(dists)) if dists else -1
        pair_tol = max(tol, collar) * (1.0 + 1.0 / abs(b) ** 2)
        if i_best < 0 or dists[i_best] > pair_tol:
            return None, f"no reflected partner for root {b} within {pair_tol:.2e}"
        partner = remaining.pop(i_best)
        # b and 1/conj(partner) estimate the same zero; average them
        paired.append(0.5 * (b + 1.0 / np.conj(partner)))
    if remaining:
        return None, f"{len(remaining)} outside roots left unpaired"

    best = None
    msg = "odd multiplicity on the circle"
    for gap in (max(2 * collar, 1e-6), 3e-3, 3e-2):
        clusters = _cluster_circle_roots(on_circle, gap)
        if any(len(cl) % 2 != 0 for cl in clusters):
            continue
        zeros = list(paired)
        for cl in clusters:
            mean = np.mean(cl)
            mean = mean / abs(mean)  # snap the cluster mean to the circle
            zeros.extend([complex(mean)] * (len(cl) // 2))
        if len(zeros) != m:
            msg = f"recovered {len(zeros)} zeros, expected {m}"
            continue
        # scale estimate from the grid point farthest from every zero
        prods = np.ones(grid.size)
        for a in zeros:
            prods *= np.abs(grid - a) ** 2
        i_far = int(np.argmax(prods))
        r = float(vals.real[i_far] / prods[i_far])
        if r <= 0:
            msg = f"scale {r:.3e} is not positive"
            continue
        back = expand_circle_product(r, zeros)
        err = float(np.max(np.abs(back - c)))
        if best is None or err < best[0]:
            best = (err, r, zeros)
    if best is None:
        return None, msg
    return best, None


def factor(poly: SelfInversivePoly, tol: float = 1e-6) -> CircleRationalForm:
    """Recover (r, {a_k}) from a circle-nonnegative self-inversive polynomial.

    Strategy: strip zero factors signalled by vanishing end coefficients,
    take companion-matrix roots of the rest, polish simple roots by one
    Newton step, then pair reflected roots across the circle and average
    even-multiplicity circle clusters.  Computed copies of a k-fold
    circle root scatter by roughly eps^(1/k), so the on-circle collar is
    widened progressively and each attempt is verified by re-expansion;
    the tightest collar that re-expands to the input wins.

    Raises FactorError when the polynomial is not self-inversive, takes
    negative values on the circle, or its roots cannot be paired within
    tolerance (odd circle multiplicities, unmatched reflections).
    """
    c = np.asarray(poly.coefficients, dtype=complex)
    m = poly.m
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise FactorError("zero polynomial")
    sym = check_self_inversive(c)
    if sym > max(tol, poly.tol) * scale:
        raise FactorError(f"self-inversive symmetry residual {sym:.3e} too large")

    # sign check on a fixed circle grid: P(zeta) / zeta^m must be >= 0
    grid = np.exp(2j * np.pi * np.arange(1024) / 1024)
    vals = np.polyval(c[::-1], grid) * grid ** (-m)
    if float(np.min(vals.real)) < -max(tol, 1e-8) * scale:
        raise FactorError(
            f"polynomial is negative on the circle (min {np.min(vals.real):.3e})"
        )

    # strip a_k = 0 factors: each contributes a plain zeta factor, so the
    # two end coefficients vanish together
    n_zero = 0
    work = c.copy()
    while (work.size > 1
           and abs(work[0]) <= max(tol, 1e-10) * scale
           and abs(work[-1]) <= max(tol, 1e-10) * scale):
        work = work[1:-1]
        n_zero += 1

    if work.size == 1:
        r = work[0].real
        if r <= 0:
            raise FactorError(f"scale {r:.3e} is not positive")
        return CircleRationalForm(r, (0.0,) * n_zero)

    roots = np.roots(work[::-1])
    roots = _polish_roots(work[::-1].copy(), roots)

    best = None
    last_msg = "no classification attempted"
    # widest rung sized for an m-fold circle zero, which is a 2m-fold
    # polynomial root scattering like eps^(1/2m) under np.roots; no
    # early exit, because near a high-multiplicity root every pairing
    # re-expands to roundoff and only the widest collar clusters the
    # scattered copies so their mean cancels the first-order error
    for collar in (max(tol, 1e-7), 1e-5, 1e-3, 1e-2, 3e-2, 6e-2):
        attempt, msg = _pair_attempt(roots, m, n_zero, collar, tol, c, vals, grid)
        if attempt is None:
            last_msg = msg
            continue
        if best is None or attempt[0] < best[0]:
            best = attempt
    if best is None:
        raise FactorError(f"root pairing failed: {last_msg}")
    err, r, zeros = best
    if err > max(tol, 1e-7) * scale * 10:
        raise FactorError(
            f"re-expansion residual {err:.3e} exceeds tolerance "
            f"({last_msg})"
        )
    return CircleRationalForm(r, tuple(zeros))


def reconstruct_from_boundary(
    samples,
    sigma,
    tol: float = 1e-8,
) -> CircleRationalForm:
    """Rebuild (r, {a_k}) from circle samples of P(zeta) / prod(1 - conj(s) zeta).

    `samples` holds values on the uniform M-point circle grid
    zeta_i = exp(2 pi i i_grid / M) of a function known a priori to have
    the form P(zeta) / prod_k (1 - conj(sigma_k) zeta) with P
    self-inversive of degree 2m, m = len(sigma), and nonnegative on the
    circle after dividing by zeta^m.  Multiplying the samples by the
    denominator and taking an FFT exposes the coefficient band 0..2m;
    everything outside that band (negative frequencies included, which
    alias to the top of the spectrum) must vanish within tol relative to
    the coefficient scale, otherwise the data is rejected.
    """
    v = np.asarray(samples, dtype=complex)
    if v.ndim != 1:
        raise ValueError("samples must be a 1-d array")
    sig = np.asarray(sigma, dtype=complex)
    m = sig.size
    M = v.size
    if M < max(8 * m, 8):
        raise ValueError(f"need at least {max(8 * m, 8)} samples, got {M}")
    if not np.all(np.isfinite(v)):
        raise ValueError("samples contain non-finite values")
    if np.any(np.abs(sig) >= 1.0):
        raise ValueError("divisor points sigma must lie in the open disc")

    grid = np.exp(2j * np.pi * np.arange(M) / M)
    mult = v.copy()
    for s in sig:
        mult *= 1.0 - np.conj(s) * grid

    coef = np.fft.fft(mult) / M  # index k -> coefficient of zeta^k (mod M)
    scale = max(float(np.max(np.abs(coef))), 1e-300)
    band = coef[: 2 * m + 1].copy()
    out_of_band = coef[2 * m + 1:]
    if out_of_band.size:
        worst = float(np.max(np.abs(out_of_band)))
        if worst > tol * scale:
            raise FactorError(
                f"out-of-band coefficient {worst:.3e} exceeds tolerance; "
                "data is not a band-limited circle-nonnegative form"
            )

    poly = SelfInversivePoly(tuple(band), tol=max(tol, 1e-8))
    form = factor(poly, tol=max(tol, 1e-7))
    return CircleRationalForm(form.scale, form.zeros, tuple(sig))
