"""Independent cross-checks: quadrature inner products, direct eigenvalue
formulas, a finite-difference pencil, and the half-line bound-state probe.

Nothing in here reuses the closed-form inner products or the limit ladder;
that is the point. Agreement between these routines and the analytic path
is what the acceptance checks certify.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, linalg

from .defect import HalfLine, Interval
from .errors import DomainError, RankError, ToleranceError

__all__ = [
    "QuadratureSpec",
    "quad_inner",
    "l1_eigenvalues_direct",
    "l2_eigenvalues_fd",
    "fd_observed_order",
    "k1_bound_state_check",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Error budget for quadrature comparisons.

    halfline_cutoff_digits sets the truncation point of half-line integrals:
    the slowest-decaying exponential is cut where it falls below
    10**-digits.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    halfline_cutoff_digits: float = 16.0


def _quad_complex(fun, lo, hi, spec):
    re, re_err = integrate.quad(lambda x: fun(x).real, lo, hi,
                                epsabs=spec.abs_tol * 0.1,
                                epsrel=spec.rel_tol * 0.1, limit=200)
    im, im_err = integrate.quad(lambda x: fun(x).imag, lo, hi,
                                epsabs=spec.abs_tol * 0.1,
                                epsrel=spec.rel_tol * 0.1, limit=200)
    return complex(re, im), re_err + im_err


def quad_inner(f, g, spec=None):
    """<f, g> by adaptive quadrature, dispatching on the common domain.

    f and g are exponential sums; the integrand is f(x) conj(g(x)).
    ToleranceError when the estimated total error (quadrature plus half-line
    truncation) exceeds the requested budget.
    """
    if spec is None:
        spec = QuadratureSpec()
    if f.domain != g.domain:
        raise DomainError(f"mismatched domains {f.domain!r} and {g.domain!r}")
    integrand = lambda x: f(x) * np.conj(g(x))
    if isinstance(f.domain, Interval):
        a = f.domain.a
        value, err = _quad_complex(integrand, -a, a, spec)
        tail = 0.0
    elif isinstance(f.domain, HalfLine):
        decay = (min(-r.real for _, r in f.terms)
                 + min(-r.real for _, r in g.terms))
        cutoff = spec.halfline_cutoff_digits * math.log(10.0) / decay
        value, err = _quad_complex(integrand, 0.0, cutoff, spec)
        amp = (sum(abs(c) for c, _ in f.terms)
               * sum(abs(c) for c, _ in g.terms))
        tail = amp * math.exp(-decay * cutoff) / decay
    else:
        raise DomainError(f"unknown domain {f.domain!r}")
    budget = spec.abs_tol + spec.rel_tol * abs(value)
    if err + tail > budget:
        raise ToleranceError(
            f"quadrature error estimate {err + tail:.3e} exceeds budget {budget:.3e}"
        )
    return value


def l1_eigenvalues_direct(beta, a, n_range):
    """Eigenvalues of i d/dx under f(a) = beta f(-a), computed directly.

    The eigenfunction exp(-i s x) satisfies the condition iff
    exp(-2 i s a) = beta, so s_n = -(arg beta + 2 pi n)/(2a).
    """
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > 1e-10:
        raise DomainError(f"coupling must be unimodular, |beta| = {abs(beta):.6f}")
    a = float(a)
    if a <= 0:
        raise DomainError("interval half-length must be positive")
    theta = cmath.phase(beta)
    if isinstance(n_range, tuple) and len(n_range) == 2:
        n_range = range(int(n_range[0]), int(n_range[1]) + 1)
    return sorted(-(theta + 2.0 * math.pi * n) / (2.0 * a) for n in n_range)


def _fd_pencil(bm, a, npts):
    """Second-order pencil for -y'' = s y with the bm boundary rows."""
    h = 2.0 * a / (npts - 1)
    amat = np.zeros((npts, npts), dtype=complex)
    bmat = np.zeros((npts, npts), dtype=complex)
    for i in range(1, npts - 1):
        amat[i, i - 1] = amat[i, i + 1] = -1.0 / h ** 2
        amat[i, i] = 2.0 / h ** 2
        bmat[i, i] = 1.0
    # one-sided second-order endpoint derivatives
    dl = np.zeros(npts, dtype=complex)
    dl[0], dl[1], dl[2] = -3.0 / (2 * h), 4.0 / (2 * h), -1.0 / (2 * h)
    dr = np.zeros(npts, dtype=complex)
    dr[-1], dr[-2], dr[-3] = 3.0 / (2 * h), -4.0 / (2 * h), 1.0 / (2 * h)
    for row, slot in ((0, 0), (1, npts - 1)):
        vec = np.zeros(npts, dtype=complex)
        vec[0] += bm.beta_a[row, 0]
        vec += bm.beta_a[row, 1] * dl
        vec[-1] += bm.beta_b[row, 0]
        vec += bm.beta_b[row, 1] * dr
        amat[slot] = vec
        bmat[slot] = 0.0
    return amat, bmat


def _fd_raw(bm, a, npts, window):
    amat, bmat = _fd_pencil(bm, a, npts)
    vals = linalg.eig(amat, bmat, right=False)
    out = []
    for v in vals:
        if not np.isfinite(v):
            continue
        if abs(v.imag) > 1e-6 * max(1.0, abs(v.real)):
            continue
        if window[0] <= v.real <= window[1]:
            out.append(v.real)
    return sorted(out)


def _pair_nearest(coarse, fine):
    """Match each fine eigenvalue to its nearest coarse partner, if close."""
    pairs = []
    coarse = list(coarse)
    for v in fine:
        if not coarse:
            pairs.append((None, v))
            continue
        j = int(np.argmin([abs(c - v) for c in coarse]))
        if abs(coarse[j] - v) < 0.1 * (1.0 + abs(v)):
            pairs.append((coarse.pop(j), v))
        else:
            pairs.append((None, v))
    return pairs


def l2_eigenvalues_fd(bm, a, window, grid_points=300):
    """Interval eigenvalues of -d^2/dx^2 under bm, finite differences.

    Runs the second-order pencil on grid_points and 2*grid_points - 1 nodes
    (exact mesh halving) and Richardson-extrapolates matched eigenvalues,
    (4 v_fine - v_coarse)/3. Multiple eigenvalues appear with multiplicity.
    RankError when bm fails the self-adjointness validation; grid_points
    must be at least 200 for the error model to hold.
    """
    from .extensions import validate_sa_matrices

    if grid_points < 200:
        raise DomainError(f"grid_points = {grid_points} below the supported minimum 200")
    if not validate_sa_matrices(bm):
        raise RankError("boundary matrices do not define a self-adjoint problem")
    a = float(a)
    pad = 0.05 * (window[1] - window[0]) + 1.0
    wide = (window[0] - pad, window[1] + pad)
    coarse = _fd_raw(bm, a, grid_points, wide)
    fine = _fd_raw(bm, a, 2 * grid_points - 1, wide)
    out = []
    for c, f in _pair_nearest(coarse, fine):
        v = f if c is None else (4.0 * f - c) / 3.0
        if window[0] <= v <= window[1]:
            out.append(v)
    return sorted(out)


def fd_observed_order(bm, a, window, grid_points=200):
    """Median convergence order across three nested meshes.

    Pairs raw eigenvalues on n, 2n-1, 4n-3 nodes and returns the median of
    log2((v_n - v_2n)/(v_2n - v_4n)); a healthy second-order scheme sits
    near 2.
    """
    lists = [_fd_raw(bm, float(a), m, window)
             for m in (grid_points, 2 * grid_points - 1, 4 * grid_points - 3)]
    orders = []
    for v2 in lists[1]:
        close = 0.1 * (1.0 + abs(v2))
        v1 = min(lists[0], key=lambda x: abs(x - v2), default=None)
        v3 = min(lists[2], key=lambda x: abs(x - v2), default=None)
        if v1 is None or v3 is None:
            continue
        if abs(v1 - v2) > close or abs(v3 - v2) > close:
            continue
        num, den = abs(v1 - v2), abs(v2 - v3)
        if den > 1e-13 and num > 1e-13:
            orders.append(math.log2(num / den))
    if not orders:
        raise RankError("no matched eigenvalue triples in the window")
    return float(np.median(orders))


def k1_bound_state_check(b, c):
    """Bound state of the half-line Robin condition b f(0) + c f'(0) = 0.

    The decaying solution exp(-sigma x) satisfies the condition iff
    sigma = b/c > 0, giving a negative eigenvalue at -sigma^2. Returns
    (location, weight) with the weight computed through the perturbation
    measure at the mapped parameter, or None when no bound state exists.
    """
    from .clark import point_mass
    from .extensions import alpha_from_bc_k1
    from .models import k1_livsic

    alpha = alpha_from_bc_k1(b, c)   # also validates admissibility
    b, c = complex(b), complex(c)
    if abs(c) < 1e-14 * max(abs(b), 1.0):
        return None                   # Dirichlet ray: no decaying solution
    sigma = b / c
    if abs(sigma.imag) > 1e-10 * (1.0 + abs(sigma)):
        raise DomainError("Robin ratio is not real")
    sigma = sigma.real
    if sigma <= 0:
        return None
    location = -sigma * sigma
    mass = point_mass(k1_livsic, alpha, location)
    return location, float(np.real(mass[0, 0]))
