"""Closed-form Green functions on the disk, their residual checks, and the
zero-mode analysis.

The bag-condition Green function is built from the free kernel by the
method of images: a homogeneous solution sourced at the inverted point
y R^2/rho^2 is added so that (1, w e^{-i theta}) G_B vanishes identically
on |x| = R.  In complex notation X = r e^{i theta}, Y = rho e^{i phi}:

    G_B(x, y) = (1/2 pi i)
      [[ R w e^{a(phi(r)+phi(rho)-2 phi(R))} / (X Y* - R^2),
         e^{a(phi(r)-phi(rho))} / (X - Y) ],
       [ e^{-a(phi(r)-phi(rho))} / (X - Y)*,
         R e^{-a(phi(r)+phi(rho)-2 phi(R))} / (w (X Y* - R^2)*) ]]

with a the coupling alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import polar_gammas
from .errors import DomainError, SingularityError
from .seeley import GaugeField

__all__ = [
    "PlanePoint",
    "DiskProblem",
    "free_green",
    "disk_green",
    "image_decomposition",
    "boundary_residual",
    "random_boundary_samples",
    "pde_residual",
    "gauge_vector",
    "zero_mode_scan",
    "ZeroModeReport",
    "diagonal_singularity_coefficient",
]

_COINCIDENCE_TOL = 1e-8


@dataclass(frozen=True)
class PlanePoint:
    """Point of the plane in polar coordinates."""

    r: float
    theta: float

    @property
    def X(self) -> complex:
        return self.r * np.exp(1j * self.theta)

    @property
    def xy(self):
        return np.array([self.r * np.cos(self.theta),
                         self.r * np.sin(self.theta)])

    @classmethod
    def from_xy(cls, x0: float, x1: float) -> "PlanePoint":
        return cls(r=float(np.hypot(x0, x1)), theta=float(np.arctan2(x1, x0)))


@dataclass(frozen=True)
class DiskProblem:
    """Full data of the boundary problem: radius, bag parameter w,
    coupling alpha and the radial gauge profile."""

    R: float
    w: complex
    alpha: float
    gauge: GaugeField

    def __post_init__(self):
        if self.R <= 0:
            raise DomainError("radius must be positive")
        if self.w == 0:
            raise DomainError("w = 0 does not define an elliptic problem")
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError("alpha must lie in [0, 1]")
        if abs(self.gauge.R - self.R) > 1e-12 * self.R:
            raise DomainError("gauge profile radius differs from disk radius")


def free_green(x: PlanePoint, y: PlanePoint) -> np.ndarray:
    """Free kernel (1/2 pi i) (xslash - yslash)/(x - y)^2.

    In complex form the only nonzero entries are
    (1,2) = (1/2 pi i)/(X - Y) and (2,1) = (1/2 pi i)/(X - Y)*.
    """
    dX = x.X - y.X
    scale = max(x.r, y.r, 1.0)
    if abs(dX) < _COINCIDENCE_TOL * scale:
        raise SingularityError("free kernel evaluated at coincident points")
    pref = 1.0 / (2j * np.pi)
    return np.array([[0.0, pref / dX],
                     [pref / np.conj(dX), 0.0]], dtype=complex)


def disk_green(p: DiskProblem, x: PlanePoint, y: PlanePoint) -> np.ndarray:
    """Green function of the coupled operator under the bag condition."""
    if x.r > p.R * (1 + 1e-12) or y.r > p.R * (1 + 1e-12):
        raise DomainError("points must lie in the closed disk")
    X, Y = x.X, y.X
    dX = X - Y
    if abs(dX) < _COINCIDENCE_TOL * p.R:
        raise SingularityError("Green function evaluated at coincident points")
    img = X * np.conj(Y) - p.R ** 2
    if abs(img) < _COINCIDENCE_TOL * p.R ** 2:
        raise SingularityError(
            "image denominator X Y* - R^2 vanishes (both points on the "
            "boundary at the same angle)")
    a = p.alpha
    ph_x = p.gauge.phi(x.r)
    ph_y = p.gauge.phi(y.r)
    ph_R = p.gauge.phi(p.R)
    pref = 1.0 / (2j * np.pi)
    g11 = p.R * p.w * np.exp(a * (ph_x + ph_y - 2.0 * ph_R)) / img
    g12 = np.exp(a * (ph_x - ph_y)) / dX
    g21 = np.exp(-a * (ph_x - ph_y)) / np.conj(dX)
    g22 = p.R * np.exp(-a * (ph_x + ph_y - 2.0 * ph_R)) / (p.w * np.conj(img))
    return pref * np.array([[g11, g12], [g21, g22]], dtype=complex)


def image_decomposition(p: DiskProblem, x: PlanePoint, y: PlanePoint) -> np.ndarray:
    """G_B rebuilt as e^{a gamma5 phi(r)} (G_0 + G_0(x, ytilde) H(y))
    e^{a gamma5 phi(rho)} with ytilde = y R^2/rho^2.

    Used as a consistency check of ``disk_green``; the two must agree
    entrywise.
    """
    if y.r < _COINCIDENCE_TOL * p.R:
        raise SingularityError("image point undefined for y at the origin")
    y_img = PlanePoint(r=p.R ** 2 / y.r, theta=y.theta)
    g0 = free_green(x, y)
    g0_img = free_green(x, y_img)
    gamma_rho, _ = polar_gammas(y.theta)
    a = p.alpha
    chir = np.diag([np.exp(2.0 * a * p.gauge.phi(p.R)),
                    np.exp(-2.0 * a * p.gauge.phi(p.R))])
    mix = np.diag([1.0 / p.w, p.w])
    h = g0_img @ (chir @ mix @ gamma_rho) * (p.R / y.r)
    left = np.diag([np.exp(a * p.gauge.phi(x.r)),
                    np.exp(-a * p.gauge.phi(x.r))])
    right = np.diag([np.exp(a * p.gauge.phi(y.r)),
                     np.exp(-a * p.gauge.phi(y.r))])
    return left @ (g0 + h) @ right


def boundary_residual(p: DiskProblem, samples) -> float:
    """Largest norm of (1, w e^{-i theta}) G_B(x, .) over boundary samples.

    ``samples`` is a sequence of (theta_x, y) pairs with y an interior
    PlanePoint; x is taken on |x| = R at angle theta_x.
    """
    worst = 0.0
    for theta_x, y in samples:
        x = PlanePoint(r=p.R, theta=theta_x)
        row = np.array([1.0, p.w * np.exp(-1j * theta_x)], dtype=complex)
        g = disk_green(p, x, y)
        worst = max(worst, float(np.max(np.abs(row @ g))))
    return worst


def random_boundary_samples(p: DiskProblem, n: int, seed: int = 0):
    """n random (theta_x, interior y) pairs, reproducible by seed."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        theta_x = rng.uniform(0.0, 2 * np.pi)
        y = PlanePoint(r=p.R * rng.uniform(0.05, 0.9),
                       theta=rng.uniform(0.0, 2 * np.pi))
        out.append((theta_x, y))
    return out


def gauge_vector(gauge: GaugeField, x: PlanePoint):
    """Cartesian components (A_0, A_1) of the potential at x.

    A_mu = eps_{mu nu} d_nu phi gives A_0 = phi'(r) sin(theta) and
    A_1 = -phi'(r) cos(theta); equivalently A_theta = -phi'(r), A_r = 0.
    """
    dp = gauge.dphi(x.r)
    return np.array([dp * np.sin(x.theta), -dp * np.cos(x.theta)])


def pde_residual(p: DiskProblem, x: PlanePoint, y: PlanePoint,
                 h: float | None = None) -> float:
    """Finite-difference residual of the operator applied to G_B in x.

    Applies i gamma_mu d_mu + alpha Aslash with fourth-order central
    stencils of step h (default 1e-4 R); away from x = y the residual is
    pure truncation error.
    """
    if h is None:
        h = 1e-4 * p.R
    x0, x1 = x.xy

    def g_at(a0: float, a1: float) -> np.ndarray:
        return disk_green(p, PlanePoint.from_xy(a0, a1), y)

    def d4(fm2, fm1, fp1, fp2):
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)

    d0 = d4(g_at(x0 - 2 * h, x1), g_at(x0 - h, x1),
            g_at(x0 + h, x1), g_at(x0 + 2 * h, x1))
    d1 = d4(g_at(x0, x1 - 2 * h), g_at(x0, x1 - h),
            g_at(x0, x1 + h), g_at(x0, x1 + 2 * h))
    g0 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    g1 = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
    a0c, a1c = gauge_vector(p.gauge, x)
    residual = 1j * (g0 @ d0 + g1 @ d1) \
        + p.alpha * (a0c * g0 + a1c * g1) @ disk_green(p, x, y)
    return float(np.max(np.abs(residual)))


@dataclass
class ZeroModeReport:
    """Outcome of the angular-mode kernel scan."""

    entries: list = field(default_factory=list)
    kernel_dimension: int = 0


def zero_mode_scan(p: DiskProblem, n_range) -> ZeroModeReport:
    """Show that no normalizable solution of the homogeneous problem exists.

    Angular mode n carries the candidate pair
    phi_n(r) = a_n r^n e^{alpha phi(r)}, chi_n(r) = b_n r^{-n} e^{-alpha phi(r)}.
    Normalizability at the origin forces a_n = 0 for n < 0 and b_n = 0 for
    n > 0; the boundary condition couples the survivors through
    b_{n+1} = -(a_n / w) R^{2n+1} e^{2 alpha phi(R)}, which kills them all.
    """
    report = ZeroModeReport()
    coupling = np.exp(2.0 * p.alpha * p.gauge.phi(p.R)) / p.w
    survivors = 0
    for n in n_range:
        a_allowed = 2 * n + 1 > -1          # int_0 r^{2n} r dr finite
        b_allowed = -2 * n + 1 > -1
        # a nonzero a_n sources b_{n+1}, admissible only for n + 1 <= 0
        partner_allowed = -2 * (n + 1) + 1 > -1
        a_survives = a_allowed and partner_allowed
        # b_n is fixed by its source a_{n-1}, itself forced to vanish
        source_survives = (2 * (n - 1) + 1 > -1) and b_allowed
        b_survives = b_allowed and source_survives
        coupling_coeff = complex(-coupling * p.R ** (2 * n + 1))
        report.entries.append({
            "n": n,
            "a_allowed_at_origin": bool(a_allowed),
            "b_allowed_at_origin": bool(b_allowed),
            "boundary_coupling_b_{n+1}_per_a_n": coupling_coeff,
            "a_forced_zero": bool(not a_survives),
            "b_forced_zero": bool(not b_survives),
        })
        survivors += int(a_survives) + int(b_survives)
    report.kernel_dimension = survivors
    return report


def diagonal_singularity_coefficient(p: DiskProblem, r: float, theta: float,
                                     delta0: float = 1e-2, levels: int = 3):
    """Pole coefficient of G_B at equal radii as the angles merge.

    Richardson-extrapolates delta * G_B(theta, r, theta - delta, r) in the
    angle separation delta; the limit is gamma_theta / (2 pi i r).

    Returns
    -------
    (estimate, target, rel_err)
    """
    seq = []
    d = delta0
    for _ in range(levels + 1):
        y = PlanePoint(r=r, theta=theta - d)
        seq.append(d * disk_green(p, PlanePoint(r=r, theta=theta), y))
        d *= 0.5
    for _ in range(levels):
        seq = [2.0 * seq[i + 1] - seq[i] for i in range(len(seq) - 1)]
    estimate = seq[0]
    _, g_theta = polar_gammas(theta)
    target = g_theta / (2j * np.pi * r)
    rel = float(np.max(np.abs(estimate - target)) / np.max(np.abs(target)))
    return estimate, target, rel
