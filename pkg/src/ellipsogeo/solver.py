"""Solvers for extremal disc problems in an ellipsoid.

Two problem kinds are supported, both with band degree 1:

  * two-point: find the family member through phi(0) = z, phi(sigma) = w
    with the smallest sigma in (0, 1);
  * point-direction: find the member with phi(0) = z, phi'(0) = t X and
    the largest stretch t > 0.

The unknown vector stacks log-moduli and phases of the a_j, the
per-component zeros, the tied zero, and the scalar (sigma or t); the
interpolation conditions plus the three real tying equations make the
system square, and a damped Newton iteration with full flag-pattern
enumeration and seeded multistart hunts for roots.  Candidates are
re-validated from scratch (interpolation, tying identity, boundary
closeness) before they are allowed to compete on the scalar.

Independent references: a closed-form oracle for dimension 1, a
closed-form oracle for the p = (1, ..., 1) ball, and a certified
brute-force upper bound that optimizes rational competitor discs of a
given numerator degree with denominators zero-free on the closed disc.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .ellipsoid import Ellipsoid, PointClass
from . import extremal_map
from .extremal_map import ExtremalMapParams

__all__ = [
    "BruteForceError",
    "BruteForceResult",
    "PointDirectionProblem",
    "ResidualReport",
    "SolveDiagnostics",
    "SolveError",
    "SolveResult",
    "SolverConfig",
    "TwoPointProblem",
    "ball_oracle",
    "brute_force_disc",
    "mobius_oracle",
    "solve_point_direction",
    "solve_two_point",
]


class SolveError(RuntimeError):
    """No validated family member was found for the problem."""


class BruteForceError(RuntimeError):
    """No feasible competitor disc exists at the requested degree."""


@dataclass(frozen=True)
class TwoPointProblem:
    z: tuple[complex, ...]
    w: tuple[complex, ...]

    def __post_init__(self):
        z = tuple(complex(v) for v in self.z)
        w = tuple(complex(v) for v in self.w)
        if len(z) != len(w):
            raise ValueError("z and w must have the same length")
        if z == w:
            raise ValueError("z and w must be distinct")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class PointDirectionProblem:
    z: tuple[complex, ...]
    X: tuple[complex, ...]

    def __post_init__(self):
        z = tuple(complex(v) for v in self.z)
        X = tuple(complex(v) for v in self.X)
        if len(z) != len(X):
            raise ValueError("z and X must have the same length")
        if all(v == 0 for v in X):
            raise ValueError("direction X must be nonzero")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "X", X)


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the Newton search and the brute-force competitor.

    Tolerances are post-hoc validation gates, recomputed on assembled
    parameter sets; the Newton iteration itself always aims at
    newton_tol in the max norm.
    """

    seed: int = 0
    starts: int = 8                  # random perturbations per flag pattern
    newton_max_iter: int = 70
    newton_tol: float = 1e-12
    interpolation_tol: float = 1e-9
    constraint_tol: float = 1e-9
    boundary_tol: float = 1e-8
    boundary_grid: int = 512
    max_patterns_dim: int = 6        # refuse 2^n enumeration beyond this n
    brute_grid: int = 256
    brute_cert_grid: int = 8192
    brute_margin: float = 1e-6
    brute_tol: float = 5e-7
    brute_starts: int = 3
    brute_maxiter: int = 400


@dataclass(frozen=True)
class ResidualReport:
    """Post-hoc residuals of a candidate, recomputed from its parameters."""

    interpolation: float
    constraint: float
    boundary: float
    boundary_grid: int


@dataclass(frozen=True)
class SolveDiagnostics:
    pattern: tuple[int, ...]
    patterns_tried: int
    starts_tried: int
    newton_iterations: int
    candidates: tuple[tuple[tuple[int, ...], float], ...]
    elapsed: float


@dataclass(frozen=True)
class SolveResult:
    """A validated extremal candidate with its certification status.

    `params` lives in the sliced ellipsoid over `active` indices;
    components listed in `dropped` are identically zero and were removed
    before solving.  `certified` is True exactly when the ellipsoid is
    convex, where the first-order conditions are known to be sufficient;
    otherwise the result is only a stationary candidate.
    """

    kind: str
    scalar: float
    params: ExtremalMapParams
    residuals: ResidualReport
    certified: bool
    label: str
    active: tuple[int, ...]
    dropped: tuple[int, ...]
    alternates: tuple[tuple[tuple[int, ...], float], ...]
    diagnostics: SolveDiagnostics


def _interior_point(ellipsoid: Ellipsoid, v, name: str) -> None:
    cls = ellipsoid.classify(np.asarray(v, dtype=complex), tol=1e-12)
    if cls.kind is not PointClass.INSIDE:
        raise ValueError(f"{name} is not strictly inside the ellipsoid "
                         f"(u = {cls.value:.3e})")


def _mobius_sigma(a: complex, b: complex) -> float:
    return abs((b - a) / (1.0 - np.conj(a) * b))


# ---------------------------------------------------------------------------
# damped Newton on a square real system


def _numeric_jacobian(F, x, fx):
    d = x.size
    J = np.empty((fx.size, d))
    for i in range(d):
        h = 1e-7 * (1.0 + abs(x[i]))
        xp = x.copy()
        xp[i] += h
        J[:, i] = (F(xp) - fx) / h
    return J


def _damped_newton(F, x0, guard, max_iter: int, tol: float):
    """Newton with backtracking line search and a regularized fallback.

    Returns (x, iterations) on convergence, (None, iterations) on
    failure.  `guard` rejects out-of-box iterates before F is called.
    """
    x = np.array(x0, dtype=float)
    if not guard(x):
        return None, 0
    fx = F(x)
    nrm = float(np.max(np.abs(fx)))
    for it in range(max_iter):
        if nrm < tol:
            return x, it
        J = _numeric_jacobian(F, x, fx)
        step, *_ = np.linalg.lstsq(J, -fx, rcond=None)
        accepted = False
        t = 1.0
        while t >= 1e-12:
            xn = x + t * step
            if guard(xn):
                fn = F(xn)
                nn = float(np.max(np.abs(fn)))
                if nn <= (1.0 - 1e-4 * t) * nrm or nn < tol:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            lam = 1e-6 * (1.0 + nrm)
            for _ in range(8):
                A = J.T @ J + lam * np.eye(x.size)
                step = np.linalg.solve(A, -J.T @ fx)
                xn = x + step
                if guard(xn):
                    fn = F(xn)
                    nn = float(np.max(np.abs(fn)))
                    if nn < nrm:
                        accepted = True
                        break
                lam *= 10.0
            if not accepted:
                return None, it + 1
        x, fx, nrm = xn, fn, nn
    return (x, max_iter) if nrm < tol else (None, max_iter)


# ---------------------------------------------------------------------------
# the band-degree-1 residual systems


def _phi_deg1(a, alpha, alpha0, rpat, p, lam):
    """Family values at one interior point for band degree 1."""
    num = 1.0 - np.conj(alpha) * lam
    den = 1.0 - np.conj(alpha0) * lam
    h = np.exp((np.log(num) - np.log(den)) / p)
    mob = np.where(rpat == 1, (lam - alpha) / num, 1.0)
    return a * mob * h


def _dphi0_deg1(a, alpha, alpha0, rpat, p):
    """Family derivative at lam = 0 for band degree 1."""
    hp = (np.conj(alpha0) - np.conj(alpha)) / p
    full = (1.0 - np.abs(alpha) ** 2) + (-alpha) * hp
    return a * np.where(rpat == 1, full, hp)


def _unpack(x, n):
    rho = x[:n]
    psi = x[n: 2 * n]
    alpha = x[2 * n: 4 * n: 2] + 1j * x[2 * n + 1: 4 * n: 2]
    alpha0 = x[4 * n] + 1j * x[4 * n + 1]
    scalar = x[4 * n + 2]
    return rho, psi, alpha, alpha0, scalar


def _tie_residuals(w, alpha, alpha0):
    c1 = np.sum(w * alpha) - alpha0
    c2 = float(np.sum(w * (1.0 + np.abs(alpha) ** 2))
               - (1.0 + abs(alpha0) ** 2))
    return c1, c2


def _two_point_F(z, w_target, rpat, p):
    n = z.size

    def F(x):
        rho, psi, alpha, alpha0, sigma = _unpack(x, n)
        a = np.exp(rho + 1j * psi)
        wgt = np.exp(2.0 * p * rho)
        phi0 = a * np.where(rpat == 1, -alpha, 1.0)
        phis = _phi_deg1(a, alpha, alpha0, rpat, p, sigma)
        c1, c2 = _tie_residuals(wgt, alpha, alpha0)
        e0 = phi0 - z
        es = phis - w_target
        return np.concatenate([
            e0.real, e0.imag, es.real, es.imag,
            [c1.real, c1.imag, c2],
        ])

    return F


def _point_direction_F(z, X, rpat, p):
    n = z.size

    def F(x):
        rho, psi, alpha, alpha0, t = _unpack(x, n)
        a = np.exp(rho + 1j * psi)
        wgt = np.exp(2.0 * p * rho)
        phi0 = a * np.where(rpat == 1, -alpha, 1.0)
        dphi = _dphi0_deg1(a, alpha, alpha0, rpat, p)
        c1, c2 = _tie_residuals(wgt, alpha, alpha0)
        e0 = phi0 - z
        ed = dphi - t * X
        return np.concatenate([
            e0.real, e0.imag, ed.real, ed.imag,
            [c1.real, c1.imag, c2],
        ])

    return F


def _make_guard(n, scalar_hi):
    def guard(x):
        if not np.all(np.isfinite(x)):
            return False
        rho, _, alpha, alpha0, scalar = _unpack(x, n)
        if np.any(np.abs(rho) > 30.0):
            return False
        if np.any(np.abs(alpha) > 1.0 - 1e-12):
            return False
        if abs(alpha0) > 1.0 - 1e-9:
            return False
        return 1e-8 < scalar < scalar_hi

    return guard


def _seed_two_point(z, w_target, rpat, p):
    n = z.size
    beta = np.angle((w_target - z) / (1.0 - np.conj(z) * w_target))
    alpha = np.where(rpat == 1, -z * np.exp(-1j * beta),
                     0.05 + 0.05j * np.ones(n))
    rho = np.where(rpat == 1, 0.0,
                   np.log(np.maximum(np.abs(z), 1e-8)))
    psi = np.where(rpat == 1, beta, np.angle(np.where(z == 0, 1.0, z)))
    wgt = np.exp(2.0 * p * rho)
    alpha0 = np.sum(wgt * alpha)
    if abs(alpha0) > 0.9:
        alpha0 = 0.9 * alpha0 / abs(alpha0)
    sigma0 = float(np.clip(1.05 * max(
        _mobius_sigma(z[j], w_target[j]) for j in range(n)), 0.05, 0.95))
    return _pack(rho, psi, alpha, alpha0, sigma0)


def _seed_point_direction(z, X, rpat, p):
    n = z.size
    beta = np.angle(np.where(X == 0, 1.0, X))
    alpha = np.where(rpat == 1, -z * np.exp(-1j * beta),
                     0.05 + 0.05j * np.ones(n))
    rho = np.where(rpat == 1, 0.0,
                   np.log(np.maximum(np.abs(z), 1e-8)))
    psi = np.where(rpat == 1, beta, np.angle(np.where(z == 0, 1.0, z)))
    wgt = np.exp(2.0 * p * rho)
    alpha0 = np.sum(wgt * alpha)
    if abs(alpha0) > 0.9:
        alpha0 = 0.9 * alpha0 / abs(alpha0)
    caps = [(1.0 - abs(z[j]) ** 2) / abs(X[j])
            for j in range(n) if X[j] != 0]
    t0 = 0.8 * min(caps)
    return _pack(rho, psi, alpha, alpha0, t0)


def _pack(rho, psi, alpha, alpha0, scalar):
    n = rho.size
    x = np.empty(4 * n + 3)
    x[:n] = rho
    x[n: 2 * n] = psi
    x[2 * n: 4 * n: 2] = np.real(alpha)
    x[2 * n + 1: 4 * n: 2] = np.imag(alpha)
    x[4 * n] = np.real(alpha0)
    x[4 * n + 1] = np.imag(alpha0)
    x[4 * n + 2] = scalar
    return x


def _perturb(x, rng, n, scalar_hi):
    y = x.copy()
    y[:n] += 0.3 * rng.standard_normal(n)
    y[n: 2 * n] += 0.5 * rng.standard_normal(n)
    y[2 * n: 4 * n] += 0.15 * rng.standard_normal(2 * n)
    y[4 * n: 4 * n + 2] += 0.1 * rng.standard_normal(2)
    y[4 * n + 2] = np.clip(
        y[4 * n + 2] + 0.1 * scalar_hi * rng.standard_normal(),
        1e-4, scalar_hi * 0.999)
    alpha = y[2 * n: 4 * n: 2] + 1j * y[2 * n + 1: 4 * n: 2]
    big = np.abs(alpha) > 0.97
    alpha[big] = 0.9 * alpha[big] / np.abs(alpha[big])
    y[2 * n: 4 * n: 2] = alpha.real
    y[2 * n + 1: 4 * n: 2] = alpha.imag
    a0 = y[4 * n] + 1j * y[4 * n + 1]
    if abs(a0) > 0.97:
        a0 = 0.9 * a0 / abs(a0)
        y[4 * n], y[4 * n + 1] = a0.real, a0.imag
    return y


def _assemble(x, n, rpat) -> ExtremalMapParams:
    rho, psi, alpha, alpha0, _ = _unpack(x, n)
    return ExtremalMapParams(
        m=1, n=n,
        a=np.exp(rho + 1j * psi),
        alpha0=np.array([alpha0]),
        alpha=alpha.reshape(1, n),
        r=np.asarray(rpat, dtype=int).reshape(1, n),
    )


def _validate(params, ellipsoid, kind, z, target, scalar, config):
    """Recompute every gate from the assembled parameters."""
    params.check_box()
    p0 = extremal_map.evaluate(params, ellipsoid, 0.0)
    if kind == "two-point":
        pt = extremal_map.evaluate(params, ellipsoid, scalar)
        interp = max(float(np.max(np.abs(p0 - z))),
                     float(np.max(np.abs(pt - target))))
    else:
        dv = extremal_map.derivative(params, ellipsoid, 0.0)
        interp = max(float(np.max(np.abs(p0 - z))),
                     float(np.max(np.abs(dv - scalar * target))))
    cres = extremal_map.constraint_residual(params, ellipsoid)
    bdef = extremal_map.boundary_defect(params, ellipsoid, config.boundary_grid)
    report = ResidualReport(interp, cres, bdef, config.boundary_grid)
    ok = (interp <= config.interpolation_tol
          and cres <= config.constraint_tol
          and bdef <= config.boundary_tol)
    return ok, report


def _patterns(n, z, forced):
    """Flag patterns to try; components pinned to zero at 0 need flag 1."""
    if forced is not None:
        pats = [tuple(int(c) for c in forced)]
    else:
        pats = list(itertools.product((1, 0), repeat=n))
    out = []
    for pat in pats:
        if len(pat) != n or any(c not in (0, 1) for c in pat):
            raise ValueError(f"bad flag pattern {pat}")
        if any(z[j] == 0 and pat[j] == 0 for j in range(n)):
            continue  # phi_j(0) = a_j != 0 cannot meet z_j = 0
        out.append(pat)
    return out


def _solve_core(ellipsoid, kind, z_full, target_full, config, r_pattern):
    t_start = time.monotonic()
    z_all = np.asarray(z_full, dtype=complex)
    tg_all = np.asarray(target_full, dtype=complex)
    drop = [j for j in range(z_all.size)
            if z_all[j] == 0 and tg_all[j] == 0]
    active = tuple(j for j in range(z_all.size) if j not in drop)
    if not active:
        raise ValueError("all components are identically zero")
    if r_pattern is not None and len(drop) > 0:
        r_pattern = "".join(r_pattern[j] for j in active)
    z = z_all[list(active)]
    tg = tg_all[list(active)]
    p = np.asarray(ellipsoid.exponents)[list(active)]
    sub = Ellipsoid(tuple(p))
    n = z.size
    if n > config.max_patterns_dim:
        raise SolveError(
            f"flag enumeration over {n} components is too large "
            f"(limit {config.max_patterns_dim})")

    if kind == "two-point":
        scalar_hi = 1.0 - 1e-9
        make_F = lambda rpat: _two_point_F(z, tg, rpat, p)
        seed = lambda rpat: _seed_two_point(z, tg, rpat, p)
        better = lambda s, best: s < best
        init_best = float("inf")
    else:
        caps = [(1.0 - abs(z[j]) ** 2) / abs(tg[j])
                for j in range(n) if tg[j] != 0]
        scalar_hi = 10.0 * min(caps) if caps else 1e6
        make_F = lambda rpat: _point_direction_F(z, tg, rpat, p)
        seed = lambda rpat: _seed_point_direction(z, tg, rpat, p)
        better = lambda s, best: s > best
        init_best = 0.0

    rng = np.random.default_rng(config.seed)
    guard = _make_guard(n, scalar_hi)
    best = None
    best_scalar = init_best
    candidates = []
    patterns = _patterns(n, z, r_pattern)
    if not patterns:
        raise SolveError("no admissible flag pattern "
                         "(zero components need flag 1)")
    starts_tried = 0
    newton_iters = 0
    for pat in patterns:
        rpat = np.asarray(pat)
        F = make_F(rpat)
        x_base = seed(rpat)
        found_for_pattern = False
        for trial in range(config.starts + 1):
            x0 = x_base if trial == 0 else _perturb(x_base, rng, n, scalar_hi)
            starts_tried += 1
            x, iters = _damped_newton(F, x0, guard,
                                      config.newton_max_iter,
                                      config.newton_tol)
            newton_iters += iters
            if x is None:
                continue
            scalar = float(x[4 * n + 2])
            params = _assemble(x, n, rpat)
            try:
                ok, report = _validate(params, sub, kind, z, tg,
                                       scalar, config)
            except (ValueError, extremal_map.ParameterError):
                continue
            if not ok:
                continue
            candidates.append((pat, scalar))
            found_for_pattern = True
            if best is None or better(scalar, best_scalar):
                best = (params, report, pat, scalar)
                best_scalar = scalar
            if found_for_pattern:
                break
    elapsed = time.monotonic() - t_start
    if best is None:
        raise SolveError(
            f"no validated solution after {starts_tried} starts over "
            f"{len(patterns)} flag patterns")
    params, report, pat, scalar = best
    alternates = tuple((q, s) for q, s in candidates
                       if (q, s) != (pat, scalar)
                       and abs(s - scalar) <= 1e-7)
    label = ("geodesic (convex domain: stationarity is sufficient)"
             if ellipsoid.is_convex
             else "extremal candidate (stationarity only: domain not convex)")
    diag = SolveDiagnostics(
        pattern=pat,
        patterns_tried=len(patterns),
        starts_tried=starts_tried,
        newton_iterations=newton_iters,
        candidates=tuple(candidates),
        elapsed=elapsed,
    )
    return SolveResult(
        kind=kind,
        scalar=scalar,
        params=params,
        residuals=report,
        certified=ellipsoid.is_convex,
        label=label,
        active=active,
        dropped=tuple(drop),
        alternates=alternates,
        diagnostics=diag,
    )


def solve_two_point(ellipsoid: Ellipsoid, problem: TwoPointProblem,
                    config: SolverConfig = SolverConfig(),
                    r_pattern: str | None = None) -> SolveResult:
    """Smallest sigma in (0,1) with a family member phi(0) = z, phi(sigma) = w."""
    z = np.asarray(problem.z, dtype=complex)
    w = np.asarray(problem.w, dtype=complex)
    if z.size != ellipsoid.dim:
        raise ValueError("problem dimension does not match the ellipsoid")
    _interior_point(ellipsoid, z, "z")
    _interior_point(ellipsoid, w, "w")
    return _solve_core(ellipsoid, "two-point", z, w, config, r_pattern)


def solve_point_direction(ellipsoid: Ellipsoid, problem: PointDirectionProblem,
                          config: SolverConfig = SolverConfig(),
                          r_pattern: str | None = None) -> SolveResult:
    """Largest t > 0 with a family member phi(0) = z, phi'(0) = t X."""
    z = np.asarray(problem.z, dtype=complex)
    X = np.asarray(problem.X, dtype=complex)
    if z.size != ellipsoid.dim:
        raise ValueError("problem dimension does not match the ellipsoid")
    _interior_point(ellipsoid, z, "z")
    return _solve_core(ellipsoid, "point-direction", z, X, config, r_pattern)


# ---------------------------------------------------------------------------
# closed-form oracles


def mobius_oracle(problem) -> tuple[float, ExtremalMapParams]:
    """Dimension-1 closed form: disc automorphisms solve both problems.

    For two points the scalar is |(w - z) / (1 - conj(z) w)|; for a
    point and direction the stretch is (1 - |z|^2) / |X|.  The returned
    parameter set uses a unimodular a, one full circle factor, and tied
    zero equal to the component zero, which satisfies the tying identity
    exactly for every exponent.
    """
    if isinstance(problem, TwoPointProblem):
        if len(problem.z) != 1:
            raise ValueError("mobius oracle requires dimension 1")
        z, w = problem.z[0], problem.w[0]
        if abs(z) >= 1 or abs(w) >= 1:
            raise ValueError("points must lie in the unit disc")
        num = (w - z) / (1.0 - np.conj(z) * w)
        sigma = abs(num)
        beta = float(np.angle(num))
        alpha = -z * np.exp(-1j * beta)
        params = ExtremalMapParams(
            m=1, n=1,
            a=np.array([np.exp(1j * beta)]),
            alpha0=np.array([alpha]),
            alpha=np.array([[alpha]]),
            r=np.array([[1]]),
        )
        return float(sigma), params
    if isinstance(problem, PointDirectionProblem):
        if len(problem.z) != 1:
            raise ValueError("mobius oracle requires dimension 1")
        z, X = problem.z[0], problem.X[0]
        if abs(z) >= 1:
            raise ValueError("base point must lie in the unit disc")
        if X == 0:
            raise ValueError("direction must be nonzero")
        t = (1.0 - abs(z) ** 2) / abs(X)
        beta = float(np.angle(X))
        alpha = -z * np.exp(-1j * beta)
        params = ExtremalMapParams(
            m=1, n=1,
            a=np.array([np.exp(1j * beta)]),
            alpha0=np.array([alpha]),
            alpha=np.array([[alpha]]),
            r=np.array([[1]]),
        )
        return float(t), params
    raise TypeError(f"unsupported problem type {type(problem).__name__}")


def ball_oracle(ellipsoid: Ellipsoid, problem: TwoPointProblem) -> float:
    """Exact two-point scalar for the round ball (all exponents 1).

    Moves z to the origin by the standard ball automorphism and returns
    the norm of the image of w, which is the extremal sigma.
    """
    if any(p != 1.0 for p in ellipsoid.exponents):
        raise ValueError("ball oracle requires all exponents equal to 1")
    z = np.asarray(problem.z, dtype=complex)
    w = np.asarray(problem.w, dtype=complex)
    if z.size != ellipsoid.dim:
        raise ValueError("problem dimension does not match the ellipsoid")
    _interior_point(ellipsoid, z, "z")
    _interior_point(ellipsoid, w, "w")
    if np.all(z == 0):
        return float(np.linalg.norm(w))
    zz = float(np.vdot(z, z).real)
    wz = complex(np.vdot(z, w))  # <w, z> with conjugation on z
    s = math.sqrt(1.0 - zz)
    proj = (wz / zz) * z
    orth = w - proj
    img = (z - proj - s * orth) / (1.0 - wz)
    return float(np.linalg.norm(img))


# ---------------------------------------------------------------------------
# brute-force competitor discs


@dataclass(frozen=True)
class BruteForceResult:
    """Certified bound from rational competitor discs.

    The witness disc g = N / q interpolates the data exactly by
    construction; `certified_sup_u` is the maximum of u over the dense
    certification grid (strictly negative means the disc stays inside).
    """

    kind: str
    value: float
    degree: int
    numerator: tuple[tuple[complex, ...], ...]
    denominator_zeros: tuple[complex, ...]
    certified_sup_u: float
    bisection_levels: int
    feasibility_calls: int


_SQUASH = 0.95


def _brute_objective(p, z, tg, kind, scalar, degree, margin, zeta):
    """Hinge-penalty objective at a fixed scalar; returns (cost_grad, build).

    The penalty sum of max(u + margin, 0)^2 over the circle grid comes
    with its exact gradient: the disc depends on the free numerator
    coefficients holomorphically and on the denominator zeros only
    through their conjugates, so Wirtinger chain rules give every
    partial in closed form.  Finite differences are useless here; close
    to the feasible set the cost sits at roundoff level and a noisy
    gradient stalls the line search far from the sharp minimum.
    """
    n = z.size
    d = degree
    ncf = 2 * n * (d - 1)
    nfree = ncf + 2 * d

    def split(x):
        if d >= 2:
            raw = x[:ncf]
            chigh = (raw[0::2] + 1j * raw[1::2]).reshape(n, d - 1)
        else:
            chigh = np.zeros((n, 0), dtype=complex)
        vraw = x[ncf:]
        v = vraw[0::2] + 1j * vraw[1::2]
        absv = np.abs(v)
        beta = _SQUASH * v / (1.0 + absv)
        return chigh, v, absv, beta

    def assemble(chigh, beta):
        bc = np.conj(beta)
        fac = 1.0 - bc[:, None] * zeta[None, :]          # (d, M)
        q = np.prod(fac, axis=0)                         # (M,)
        if kind == "two-point":
            qs_fac = 1.0 - bc * scalar                   # (d,)
            qs = complex(np.prod(qs_fac))
            powers = scalar ** np.arange(2, d + 1)
            c1 = (tg * qs - z - chigh @ powers) / scalar
        else:
            qs_fac = None
            c1 = scalar * tg + z * (-np.sum(bc))
        coeffs = np.concatenate([z[:, None], c1[:, None], chigh], axis=1)
        num = np.stack([np.polyval(coeffs[j, ::-1], zeta) for j in range(n)])
        return coeffs, fac, q, qs_fac, num / q[None, :]

    def build(x):
        chigh, _, _, beta = split(x)
        coeffs, _, _, _, g = assemble(chigh, beta)
        return coeffs, beta, g

    def cost_grad(x):
        chigh, v, absv, beta = split(x)
        _, fac, q, qs_fac, g = assemble(chigh, beta)
        absg = np.abs(g)
        u = np.sum(absg ** (2.0 * p[:, None]), axis=0) - 1.0
        viol = np.maximum(u + margin, 0.0)
        cost = float(np.sum(viol * viol))
        grad = np.zeros(nfree)
        if cost == 0.0:
            return cost, grad
        # weight per (component, grid point); clip keeps p < 1 finite at g = 0
        T = (2.0 * viol[None, :] * 2.0 * p[:, None]
             * np.maximum(absg, 1e-150) ** (2.0 * p[:, None] - 2.0)
             * np.conj(g))                              # (n, M)
        zq = zeta / q                                   # (M,)
        # free numerator coefficients c_{ij}, i = 2..d
        for i in range(2, d + 1):
            if kind == "two-point":
                D = (zeta ** i - scalar ** (i - 1) * zeta) / q
            else:
                D = zeta ** i / q
            for j in range(n):
                S = T[j] * D
                col = 2 * ((i - 2) + j * (d - 1))
                grad[col] = float(np.sum(S.real))
                grad[col + 1] = float(-np.sum(S.imag))
        # denominator parameters v_i through beta conjugates
        for i in range(d):
            if absv[i] > 0:
                unit = v[i] / absv[i]
                db_re = _SQUASH * ((1.0 + absv[i]) - v[i] * unit.real) \
                    / (1.0 + absv[i]) ** 2
                db_im = _SQUASH * (1j * (1.0 + absv[i]) - v[i] * unit.imag) \
                    / (1.0 + absv[i]) ** 2
            else:
                db_re = _SQUASH
                db_im = 1j * _SQUASH
            if kind == "two-point":
                dc1 = -tg * complex(np.prod(qs_fac)) / qs_fac[i]  # (n,)
            else:
                dc1 = -z
            # dg_j / d(conj beta_i) = zeta dc1_j / q + g_j zeta / fac_i
            dq_ratio = zeta / fac[i]
            acc = 0j
            for j in range(n):
                dg = dc1[j] * zq + g[j] * dq_ratio
                acc += np.sum(T[j] * dg)
            grad[ncf + 2 * i] = float((acc * np.conj(db_re)).real)
            grad[ncf + 2 * i + 1] = float((acc * np.conj(db_im)).real)
        return cost, grad

    return cost_grad, build


def _brute_feasible(p, z, tg, kind, scalar, degree, x0_list, config, zeta,
                    zeta_polish=None):
    """Multistart hinge-penalty feasibility test; returns (ok, x, build).

    The coarse grid only pins u at its nodes; between nodes u can
    overshoot the margin by grid_spacing^2 times the curvature, so a
    coarse success is polished on `zeta_polish` (the certification grid)
    before it counts.  Without the polish the bisection silently treats
    near-extremal feasible levels as infeasible and returns a bound that
    is too loose by orders of magnitude.
    """
    cost_grad, build = _brute_objective(p, z, tg, kind, scalar, degree,
                                        config.brute_margin, zeta)
    opts = {"maxiter": config.brute_maxiter, "ftol": 1e-30, "gtol": 1e-30}
    best = None
    for x0 in x0_list:
        res = minimize(cost_grad, x0, method="L-BFGS-B", jac=True,
                       options=opts)
        if best is None or res.fun < best[0]:
            best = (float(res.fun), res.x)
        if res.fun == 0.0:
            break
    if best is None:
        best = (float("inf"), np.zeros(2 * len(z) * (degree - 1) + 2 * degree))
    ok = best[0] < 1e-20
    if ok and zeta_polish is not None:
        fine_cg, fine_build = _brute_objective(p, z, tg, kind, scalar, degree,
                                               config.brute_margin,
                                               zeta_polish)
        res = minimize(fine_cg, best[1], method="L-BFGS-B", jac=True,
                       options=opts)
        if res.fun < 1e-20:
            return True, res.x, fine_build
        return False, best[1], build
    return ok, best[1], build


def brute_force_disc(ellipsoid: Ellipsoid, problem, degree: int,
                     config: SolverConfig = SolverConfig()) -> BruteForceResult:
    """Certified competitor bound over rational discs of a given degree.

    Competitors are g = N / q with per-component numerators of degree at
    most `degree` and a shared denominator q(lam) = prod (1 - conj(b) lam),
    |b| < 0.95, which is zero-free on the closed disc; the class contains
    every polynomial disc of the same degree (b = 0) and the closed-form
    extremals of round balls.  Interpolation at the base point and the
    second datum is imposed exactly by coefficient elimination, so the
    search only fights the membership constraint, penalized through a
    hinged max(u + margin, 0)^2 sum on a circle grid.  The scalar is
    bisected (downward on sigma, upward on t) with warm starts, and
    every accepted level is re-certified on a dense grid before it may
    tighten the bracket.

    Raises BruteForceError when no feasible disc is found at all.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    z_all = np.asarray(problem.z, dtype=complex)
    if isinstance(problem, TwoPointProblem):
        kind = "two-point"
        tg_all = np.asarray(problem.w, dtype=complex)
    elif isinstance(problem, PointDirectionProblem):
        kind = "point-direction"
        tg_all = np.asarray(problem.X, dtype=complex)
    else:
        raise TypeError(f"unsupported problem type {type(problem).__name__}")
    if z_all.size != ellipsoid.dim:
        raise ValueError("problem dimension does not match the ellipsoid")
    _interior_point(ellipsoid, z_all, "z")
    keep = [j for j in range(z_all.size)
            if not (z_all[j] == 0 and tg_all[j] == 0)]
    z = z_all[keep]
    tg = tg_all[keep]
    p = np.asarray(ellipsoid.exponents)[keep]
    n = z.size
    zeta = np.exp(2j * np.pi * np.arange(config.brute_grid) / config.brute_grid)
    zeta_cert = np.exp(2j * np.pi * np.arange(config.brute_cert_grid)
                       / config.brute_cert_grid)
    rng = np.random.default_rng(config.seed + 77)
    nfree = 2 * n * (degree - 1) + 2 * degree

    def starts(warm):
        xs = []
        if warm is not None:
            xs.append(warm)
        xs.append(np.zeros(nfree))
        while len(xs) < config.brute_starts + 1:
            xs.append(0.3 * rng.standard_normal(nfree))
        return xs

    def certify(build, x):
        coeffs, beta, _ = build(x)
        q = np.prod(1.0 - np.conj(beta)[:, None] * zeta_cert[None, :], axis=0)
        num = np.stack([np.polyval(coeffs[j, ::-1], zeta_cert)
                        for j in range(n)])
        g = num / q[None, :]
        u = np.sum(np.abs(g) ** (2.0 * p[:, None]), axis=0) - 1.0
        return coeffs, beta, float(np.max(u))

    calls = 0
    levels = 0
    if kind == "two-point":
        lo = max(1e-6, 0.999 * max(_mobius_sigma(z[j], tg[j])
                                   for j in range(n)))
        witness = None
        hi = None
        warm = None
        for sig in (min(max(lo * 1.01, 0.99), 0.9995), 0.995, 0.999):
            ok, x, build = _brute_feasible(p, z, tg, kind, sig, degree,
                                           starts(None), config, zeta,
                                           zeta_cert)
            calls += 1
            if ok:
                coeffs, beta, supu = certify(build, x)
                if supu <= 0.0:
                    hi, witness, warm = sig, (coeffs, beta, supu), x
                    break
        if hi is None:
            raise BruteForceError(
                f"no feasible competitor disc at degree {degree}")
        while hi - lo > config.brute_tol:
            mid = 0.5 * (hi + lo)
            ok, x, build = _brute_feasible(p, z, tg, kind, mid, degree,
                                           starts(warm), config, zeta,
                                           zeta_cert)
            calls += 1
            levels += 1
            if ok:
                coeffs, beta, supu = certify(build, x)
                if supu <= 0.0:
                    hi, witness, warm = mid, (coeffs, beta, supu), x
                    continue
            lo = mid
        coeffs, beta, supu = witness
        value = hi
    else:
        caps = [(1.0 - abs(z[j]) ** 2) / abs(tg[j])
                for j in range(n) if tg[j] != 0]
        cap = min(caps)
        lo = cap * 1e-3
        ok, x, build = _brute_feasible(p, z, tg, kind, lo, degree,
                                       starts(None), config, zeta,
                                       zeta_cert)
        calls += 1
        if not ok:
            raise BruteForceError(
                f"no feasible competitor disc at degree {degree}")
        coeffs, beta, supu = certify(build, x)
        if supu > 0.0:
            raise BruteForceError(
                f"no certifiable competitor disc at degree {degree}")
        witness, warm = (coeffs, beta, supu), x
        hi = cap * 1.001
        while hi - lo > config.brute_tol * cap:
            mid = 0.5 * (hi + lo)
            ok, x, build = _brute_feasible(p, z, tg, kind, mid, degree,
                                           starts(warm), config, zeta,
                                           zeta_cert)
            calls += 1
            levels += 1
            if ok:
                coeffs, beta, supu = certify(build, x)
                if supu <= 0.0:
                    lo, witness, warm = mid, (coeffs, beta, supu), x
                    continue
            hi = mid
        coeffs, beta, supu = witness
        value = lo
    return BruteForceResult(
        kind=kind,
        value=float(value),
        degree=degree,
        numerator=tuple(tuple(row) for row in coeffs),
        denominator_zeros=tuple(beta),
        certified_sup_u=supu,
        bisection_levels=levels,
        feasibility_calls=calls,
    )
