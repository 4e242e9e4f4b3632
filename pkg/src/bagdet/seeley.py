"""Resolvent-expansion coefficients for the disk Dirac operator.

The interior coefficients c_{-1}, c_{-2} solve the symbol equation
``sum a_{1-j} o sum c_{-1-j} = Id`` order by order; the boundary
coefficient d_{-1} solves the normal ODE

    (-lambda I - xi gamma_theta + i gamma_t d/dt) d_{-1} = 0,
    b0 d_{-1} = b0 c_{-1} at t = 0,   d_{-1} -> 0 as t -> infinity,

and its tilde transform replaces the normal covariable tau by a second
normal distance u through a closed tau-contour integral.  The square root
s = sqrt(xi^2 - lambda^2) is always the principal branch with Re s > 0,
which is what the decay requirement selects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as _spec

from .clifford import GammaRep, gamma_t, polar_gammas
from .errors import BranchError, SingularSymbolError
from .quadrature import integrate_adaptive

__all__ = [
    "GaugeField",
    "SymbolFn",
    "decay_root",
    "a1_matrix",
    "c_minus1",
    "c_minus2",
    "a1_symbol",
    "a0_symbol",
    "c_minus1_symbol",
    "c_minus2_symbol",
    "d_minus1",
    "d_tilde_minus1",
    "d_tilde_minus1_contour",
    "compose_symbols_check",
    "m_coefficient",
    "k_nu",
    "k_nu_bessel",
]

_SING_TOL = 1e-12


@dataclass(frozen=True)
class GaugeField:
    """Radial gauge profile on a disk of radius R.

    The potential is fixed by a single smooth function phi(r):
    A_r = 0 and A_theta(r) = -phi'(r), so the total flux is
    -2 pi R phi'(R).  Both phi and its analytic derivative must be
    supplied; nothing here differentiates numerically.
    """

    phi: Callable[[float], float]
    dphi: Callable[[float], float]
    R: float
    name: str = ""

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("disk radius must be positive")

    def a_theta(self, r):
        return -self.dphi(r)


@dataclass(frozen=True)
class SymbolFn:
    """Matrix-valued symbol with a declared homogeneity degree.

    ``eval(x, t, xi, tau, lam)`` returns the k x k value.  Interior
    symbols (kind ``interior_c``) are homogeneous of ``degree`` in
    (xi, tau, lambda); boundary symbols (kind ``boundary_d``) are
    homogeneous in (1/t, xi, tau, lambda).  Optional analytic derivative
    callables feed the composition check.
    """

    degree: int
    eval: Callable
    kind: str = "interior_c"
    dxi_eval: Callable | None = None
    dx_eval: Callable | None = None


def decay_root(xi, lam) -> complex:
    """Principal square root s = sqrt(xi^2 - lambda^2) with Re s > 0.

    Raises
    ------
    BranchError
        If the argument falls on the cut (Re s = 0), where no decaying
        normal solution exists.
    """
    z = complex(xi) ** 2 - complex(lam) ** 2
    s = np.sqrt(z)
    if s.real <= 0.0:
        raise BranchError(
            f"sqrt(xi^2 - lambda^2) = {s} has no positive real part; "
            "decaying solution undefined")
    return complex(s)


def _xi_slash(theta: float, xi, tau) -> np.ndarray:
    _, g_theta = polar_gammas(theta)
    return xi * g_theta + tau * gamma_t(theta)


def a1_matrix(rep: GammaRep, xi, tau, lam, theta: float = 0.0) -> np.ndarray:
    """Degree-one symbol -xislash - lambda Id in the polar collar frame."""
    return -_xi_slash(theta, xi, tau) - lam * np.eye(rep.k, dtype=complex)


def c_minus1(rep: GammaRep, xi, tau, lam, theta: float = 0.0) -> np.ndarray:
    """Leading interior coefficient (xislash - lambda Id)/(lambda^2 - xi^2 - tau^2).

    This is the exact inverse of the degree-one symbol.
    """
    denom = complex(lam) ** 2 - xi * xi - tau * tau
    scale = abs(lam) ** 2 + xi * xi + tau * tau
    if abs(denom) <= _SING_TOL * max(scale, 1.0):
        raise SingularSymbolError(
            f"lambda^2 - xi^2 - tau^2 = {denom} is singular")
    return (_xi_slash(theta, xi, tau)
            - lam * np.eye(rep.k, dtype=complex)) / denom


def c_minus2(rep: GammaRep, a_theta, xi, tau, lam, alpha,
             theta: float = 0.0) -> np.ndarray:
    """Next interior coefficient, linear in the gauge potential.

    With xi.A = xi A_theta (the potential has no normal component) and the
    covector norm xi^2 + tau^2 appearing throughout,

        c_{-2} = alpha/(lambda^2 - xi^2 - tau^2)^2
                 (2 lambda xi A_theta Id - (lambda^2 - xi^2 - tau^2) Aslash
                  - 2 xi A_theta xislash).

    Equivalently c_{-2} = -alpha c_{-1} Aslash c_{-1}, homogeneous of
    degree -2 in (xi, tau, lambda).
    """
    denom = complex(lam) ** 2 - xi * xi - tau * tau
    scale = abs(lam) ** 2 + xi * xi + tau * tau
    if abs(denom) <= _SING_TOL * max(scale, 1.0):
        raise SingularSymbolError(
            f"lambda^2 - xi^2 - tau^2 = {denom} is singular")
    _, g_theta = polar_gammas(theta)
    eye = np.eye(rep.k, dtype=complex)
    xi_dot_a = xi * a_theta
    a_slash = a_theta * g_theta
    num = (2.0 * lam * xi_dot_a * eye - denom * a_slash
           - 2.0 * xi_dot_a * _xi_slash(theta, xi, tau))
    return alpha * num / denom ** 2


def a1_symbol(rep: GammaRep) -> SymbolFn:
    """a_1 as a SymbolFn; x is the boundary angle theta."""
    return SymbolFn(
        degree=1,
        eval=lambda x, t, xi, tau, lam: a1_matrix(rep, xi, tau, lam, theta=x),
        kind="interior_c")


def a0_symbol(rep: GammaRep, gauge: GaugeField, alpha: float) -> SymbolFn:
    """a_0 = alpha Aslash evaluated at radius r = R - t."""

    def ev(x, t, xi, tau, lam):
        _, g_theta = polar_gammas(x)
        return alpha * gauge.a_theta(gauge.R - t) * g_theta

    return SymbolFn(degree=0, eval=ev, kind="interior_c")


def c_minus1_symbol(rep: GammaRep) -> SymbolFn:
    return SymbolFn(
        degree=-1,
        eval=lambda x, t, xi, tau, lam: c_minus1(rep, xi, tau, lam, theta=x),
        kind="interior_c")


def c_minus2_symbol(rep: GammaRep, gauge: GaugeField, alpha: float) -> SymbolFn:
    def ev(x, t, xi, tau, lam):
        return c_minus2(rep, gauge.a_theta(gauge.R - t), xi, tau, lam, alpha,
                        theta=x)

    return SymbolFn(degree=-2, eval=ev, kind="interior_c")


def _d_denominator(xi, lam, w, s):
    den = w * lam + 1j * xi + 1j * s
    if abs(den) <= 1e-12 * max(abs(lam), abs(xi), abs(s), 1.0):
        raise SingularSymbolError(
            "w lambda + i xi + i sqrt(xi^2 - lambda^2) = 0: boundary "
            "condition not solvable along this direction")
    return den


def d_minus1(theta: float, t: float, xi, tau, lam, w) -> np.ndarray:
    """Boundary coefficient d_{-1}(theta, t; xi, tau; lambda) for b0 = (1, w e^{-i theta}).

    Solves (-lambda - xi gamma_theta + i gamma_t d_t) d = 0 with
    b0 d = b0 c_{-1} at t = 0 and exponential decay in t.  Closed form:

        d_{-1} = e^{-t s} / ((xi^2 + tau^2 - lambda^2)(w lam + i xi + i s))
                 [[ i (xi+s)(lam - w(i xi - tau)),
                    i e^{-i theta}(xi+s)(w lam + i xi + tau) ],
                  [ lam e^{i theta}(lam - w(i xi - tau)),
                    lam (w lam + i xi + tau) ]].
    """
    s = decay_root(xi, lam)
    denom = xi * xi + tau * tau - complex(lam) ** 2
    scale = abs(lam) ** 2 + xi * xi + tau * tau
    if abs(denom) <= _SING_TOL * max(scale, 1.0):
        raise SingularSymbolError(
            f"xi^2 + tau^2 - lambda^2 = {denom} is singular")
    bden = _d_denominator(xi, lam, w, s)
    em = np.exp(-1j * theta)
    ep = np.exp(1j * theta)
    left = lam - w * (1j * xi - tau)
    right = w * lam + 1j * xi + tau
    mat = np.array([
        [1j * (xi + s) * left, 1j * em * (xi + s) * right],
        [lam * ep * left, lam * right],
    ], dtype=complex)
    return np.exp(-t * s) / (denom * bden) * mat


def d_tilde_minus1(theta: float, t: float, u: float, xi, lam, w) -> np.ndarray:
    """Tilde transform of d_{-1}: the tau covariable replaced by a second
    normal distance u.

    Closed form (rank one, proportional to e^{-(u+t) s}):

        pi i e^{-(u+t)s} / (s (i w lam - xi - s))
        [[ (xi+s)(i lam + w(xi+s)),  e^{-i theta}(xi+s)(i w lam - xi + s) ],
         [ -i lam e^{i theta}(i lam + w(xi+s)), -i lam (i w lam - xi + s) ]].

    Matches the closed tau-contour transform of d_{-1} (see
    :func:`d_tilde_minus1_contour`).
    """
    s = decay_root(xi, lam)
    bden = 1j * w * lam - xi - s          # = i (w lam + i xi + i s)
    if abs(bden) <= 1e-12 * max(abs(lam), abs(xi), abs(s), 1.0):
        raise SingularSymbolError(
            "i w lambda - xi - s = 0: boundary condition not solvable")
    em = np.exp(-1j * theta)
    ep = np.exp(1j * theta)
    col = 1j * lam + w * (xi + s)
    row = 1j * w * lam - xi + s
    mat = np.array([
        [(xi + s) * col, em * (xi + s) * row],
        [-1j * lam * ep * col, -1j * lam * row],
    ], dtype=complex)
    return (np.pi * 1j) * np.exp(-(u + t) * s) / (s * bden) * mat


def d_tilde_minus1_contour(theta: float, t: float, u: float, xi, lam, w,
                           n_nodes: int = 512) -> np.ndarray:
    """Tilde transform by numerical tau-contour quadrature (the oracle).

    d_{-1} is rational in tau with simple poles at tau = +- i s.  The
    transform is the closed integral

        -oint e^{-i tau u} d_{-1}(theta, t; xi, tau; lambda) dtau

    taken counterclockwise around the pole tau = -i s, the one that pairs
    the e^{-i tau u} kernel with decay in u.
    """
    s = decay_root(xi, lam)
    pole = -1j * s
    radius = 0.5 * abs(s)
    phis = 2 * np.pi * np.arange(n_nodes) / n_nodes
    taus = pole + radius * np.exp(1j * phis)
    dtau = 1j * radius * np.exp(1j * phis) * (2 * np.pi / n_nodes)
    total = np.zeros((2, 2), dtype=complex)
    for tau_k, dk in zip(taus, dtau):
        total += np.exp(-1j * tau_k * u) * d_minus1(theta, t, xi, tau_k,
                                                    lam, w) * dk
    return -total


def compose_symbols_check(a_list, c_list, order: int, samples) -> float:
    """Residual of the graded symbol composition at the given order.

    Products a_i c_j with deg(a_i) + deg(c_j) = order are summed; when
    both factors carry analytic derivative callables the first-order
    derivative term (d_xi a)(D_x c) is included, otherwise it is taken at
    a point where the coefficients are locally constant and drops out.
    Returns the maximum deviation (from Id at order 0, from 0 below) over
    the samples.
    """
    worst = 0.0
    for x, t, xi, tau, lam in samples:
        acc = None
        for a_sym in a_list:
            for c_sym in c_list:
                if a_sym.degree + c_sym.degree == order:
                    term = a_sym.eval(x, t, xi, tau, lam) @ \
                        c_sym.eval(x, t, xi, tau, lam)
                    acc = term if acc is None else acc + term
                if (a_sym.degree + c_sym.degree - 1 == order
                        and a_sym.dxi_eval is not None
                        and c_sym.dx_eval is not None):
                    term = a_sym.dxi_eval(x, t, xi, tau, lam) @ \
                        (-1j * c_sym.dx_eval(x, t, xi, tau, lam))
                    acc = term if acc is None else acc + term
        if acc is None:
            continue
        if order == 0:
            acc = acc - np.eye(acc.shape[0], dtype=complex)
        worst = max(worst, float(np.max(np.abs(acc))))
    return worst


def m_coefficient(symbol, x, t, n_nodes: int = 256) -> np.ndarray:
    """Angular average of a degree -nu symbol over the unit covector circle.

    Computes (1/(2 pi)) int_{|(xi,tau)|=1} c(x, t; xi, tau; 0) dsigma by
    the trapezoid rule (spectrally accurate for the trigonometric
    integrands at hand).  ``symbol`` is a SymbolFn or a bare callable with
    the same signature.
    """
    ev = getattr(symbol, "eval", symbol)
    phis = 2 * np.pi * np.arange(n_nodes) / n_nodes
    acc = None
    for phi in phis:
        val = ev(x, t, np.cos(phi), np.sin(phi), 0.0)
        acc = val if acc is None else acc + val
    return acc / n_nodes


_EULER_GAMMA = float(np.euler_gamma)


def k_nu(nu: int) -> float:
    """Boundary-layer constant K_nu = ln 2 - gamma/2 + psi(nu/2)/2."""
    if nu < 2:
        raise ValueError("nu must be at least 2")
    return float(np.log(2.0) - 0.5 * _EULER_GAMMA
                 + 0.5 * _spec.digamma(nu / 2.0))


def k_nu_bessel(nu: int, tol: float = 1e-9) -> float:
    """K_nu from its Bessel-integral form (independent quadrature route).

        K_nu = 2^{nu/2-1} Gamma(nu/2) *
               ( int_0^1 rho^{-nu/2} [J_{nu/2-1}(rho)
                   - rho^{nu/2-1} / (2^{nu/2-1} Gamma(nu/2))] drho
               + int_1^inf rho^{-nu/2} J_{nu/2-1}(rho) drho ).

    The prefactor is the reciprocal of the small-argument coefficient of
    J_{nu/2-1}; it converts the raw integral (whose logarithm carries
    that coefficient) to the constant accompanying a unit logarithm.  It
    equals 1 at nu = 2.  The oscillatory second integral is rotated onto
    1 + i v where the outgoing Hankel function decays exponentially.
    """
    if nu < 2:
        raise ValueError("nu must be at least 2")
    m = nu / 2.0 - 1.0
    norm = 1.0 / (2.0 ** m * _spec.gamma(nu / 2.0))

    def head(rho: float) -> float:
        return rho ** (-nu / 2.0) * (_spec.jv(m, rho) - norm * rho ** m)

    part1 = integrate_adaptive(head, 0.0, 1.0, tol=tol)

    def tail(v: float) -> complex:
        z = 1.0 + 1j * v
        return 1j * z ** (-nu / 2.0) * _spec.hankel1(m, z)

    part2 = integrate_adaptive(tail, 0.0, np.inf, tol=tol)
    return float((part1.value.real + part2.value.real) / norm)
