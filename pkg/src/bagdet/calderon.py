"""Principal symbols of the boundary projector, ellipticity rank checks,
spectral-parameter cones, and the four-dimensional chiral obstruction.

The projector symbol of a first-order elliptic operator D is

    q(x; xi) = 1/2 (Id + i xislash nslash / |xi|),

an idempotent of trace k/2.  A local boundary condition with symbol
b(x; xi) is elliptic when rank(b q) = rank(q) for all |xi| >= 1.  With a
spectral parameter the projector becomes a Riesz contour integral

    q(lambda)(x; xi) = (1/2 pi i) oint_Gamma (a1^{-1}(x,0;0,1;0)
                        a1(x,0;xi,0;lambda) - z)^{-1} dz

over a clockwise contour enclosing the eigenvalues with negative
imaginary part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Callable, Sequence

import numpy as np

from .clifford import GammaRep, slash
from .errors import ContourError, DomainError, SingularSymbolError

__all__ = [
    "CotangentPoint",
    "BoundaryCondition",
    "EllipticityReport",
    "AgmonConeReport",
    "q_principal",
    "q_lambda_contour",
    "disk_q_lambda",
    "disk_boundary_condition",
    "disk_q_symbol",
    "q_chiral",
    "chiral_obstruction_witness",
    "chiral_boundary_condition",
    "check_ellipticity",
    "check_agmon_cone",
    "imaginary_axis_cone",
    "numerical_rank",
]

RANK_REL_TOL = 1e-9


@dataclass(frozen=True)
class CotangentPoint:
    """A cotangent sample (xi, tau, lambda) used in symbol evaluation."""

    xi: object
    tau: float | None = None
    lam: complex | None = None

    def is_nonzero(self) -> bool:
        parts = [np.linalg.norm(np.atleast_1d(self.xi))]
        if self.tau is not None:
            parts.append(abs(self.tau))
        if self.lam is not None:
            parts.append(abs(self.lam))
        return max(parts) > 0.0


@dataclass(frozen=True)
class BoundaryCondition:
    """Local boundary condition of target rank r.

    ``b(x, xi)`` returns the r x k symbol matrix; it must be homogeneous of
    degree zero in xi for |xi| >= 1 (for multiplication operators it simply
    ignores xi).
    """

    r: int
    b: Callable[[object, object], np.ndarray]


def disk_boundary_condition(w: complex) -> BoundaryCondition:
    """Bag-like condition (1, w e^{-i theta}) on the disk boundary.

    ``w = 0`` is accepted here so the failing case can be fed to the
    checks; it does not define an elliptic problem.
    """
    w = complex(w)

    def b(theta, xi):
        return np.array([[1.0, w * np.exp(-1j * theta)]], dtype=complex)

    return BoundaryCondition(r=1, b=b)


def chiral_boundary_condition(beta1: complex, beta2: complex) -> BoundaryCondition:
    """Constant row (beta1, beta2) acting on the 2-component chiral block."""

    def b(x, xi):
        return np.array([[beta1, beta2]], dtype=complex)

    return BoundaryCondition(r=1, b=b)


def q_principal(rep: GammaRep, n, xi) -> np.ndarray:
    """Projector symbol 1/2 (Id + i xislash nslash / |xi|).

    Parameters
    ----------
    rep : GammaRep
    n : array_like
        Unit outward normal (length rep.nu).
    xi : array_like
        Cotangent vector orthogonal to n, nonzero.
    """
    n = np.asarray(n, dtype=float)
    xi = np.asarray(xi, dtype=float)
    norm_xi = np.linalg.norm(xi)
    if norm_xi == 0.0:
        raise DomainError("xi must be nonzero")
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise DomainError("n must be a unit vector")
    if abs(np.dot(n, xi)) > 1e-10 * norm_xi:
        raise DomainError("xi must be orthogonal to n")
    eye = np.eye(rep.k, dtype=complex)
    return 0.5 * (eye + 1j * slash(rep.gammas, xi / norm_xi)
                  @ slash(rep.gammas, n))


def _riesz_projector_contour(a_mat: np.ndarray, circle=None, n_nodes: int = 256,
                             tol: float = 1e-8) -> np.ndarray:
    """Clockwise Riesz integral (1/2 pi i) oint (A - z)^{-1} dz around the
    eigenvalues of A with Im < 0."""
    eigs = np.linalg.eigvals(a_mat)
    selected = eigs[eigs.imag < 0.0]
    excluded = eigs[eigs.imag >= 0.0]
    if selected.size == 0:
        raise ContourError("no eigenvalues with negative imaginary part")
    if circle is None:
        center = selected.mean()
        spread = np.max(np.abs(selected - center)) if selected.size > 1 else 0.0
        radius = 1.5 * spread
        if excluded.size:
            gap = np.min(np.abs(excluded - center))
            radius = max(radius, 0.5 * gap) if radius == 0.0 else radius
            if radius >= gap:
                radius = 0.5 * (spread + gap)
        if radius == 0.0:
            radius = 0.5 * max(abs(center), 1.0)
    else:
        center, radius = circle
    dists = np.abs(np.abs(eigs - center) - radius)
    if np.min(dists) < tol * radius:
        raise ContourError(
            f"eigenvalue within {tol:g} x radius of the contour; "
            "adjust the circle")
    k = a_mat.shape[0]
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    z = center + radius * np.exp(-1j * theta)          # clockwise
    dz = -1j * radius * np.exp(-1j * theta) * (2 * np.pi / n_nodes)
    total = np.zeros((k, k), dtype=complex)
    eye = np.eye(k, dtype=complex)
    for zk, dzk in zip(z, dz):
        total += np.linalg.solve(a_mat - zk * eye, eye) * dzk
    return total / (2j * np.pi)


def q_lambda_contour(a1, x, xi, lam: complex, circle=None,
                     n_nodes: int = 256) -> np.ndarray:
    """Spectral-parameter projector symbol by numerical contour quadrature.

    ``a1`` is the degree-one symbol, called as ``a1(x, t, xi, tau, lam)``
    (a SymbolFn works).  The integrand matrix is
    ``a1(x,0;0,1;0)^{-1} a1(x,0;xi,0;lam)`` and the contour is a clockwise
    circle around its eigenvalues with negative imaginary part.
    """
    eval_a1 = getattr(a1, "eval", a1)
    normal = np.linalg.inv(eval_a1(x, 0.0, 0.0, 1.0, 0.0))
    a_mat = normal @ eval_a1(x, 0.0, xi, 0.0, lam)
    return _riesz_projector_contour(a_mat, circle=circle, n_nodes=n_nodes)


def disk_q_lambda(theta: float, xi: float, lam: complex) -> np.ndarray:
    """Closed-form projector symbol of the disk Dirac operator.

    Returns

        1/(2 s) [[xi + s, -i lam e^{-i theta}],
                 [-i lam e^{i theta}, -xi + s]],   s = sqrt(xi^2 - lam^2),

    with the principal branch (Re s > 0).  Idempotent wherever defined.
    """
    z = xi * xi - complex(lam) ** 2
    if z.real <= 0.0 and abs(z.imag) <= 1e-14 * (abs(z.real) + 1.0):
        raise SingularSymbolError(
            f"xi^2 - lambda^2 = {z} lies on the branch cut")
    s = np.sqrt(complex(z))
    em = np.exp(-1j * theta)
    ep = np.exp(1j * theta)
    return np.array([[xi + s, -1j * lam * em],
                     [-1j * lam * ep, -xi + s]], dtype=complex) / (2.0 * s)


def disk_q_symbol(w: complex | None = None):
    """q(lambda) of the disk as a plain callable (x, xi, lam) -> matrix."""

    def q(theta, xi, lam=0.0):
        return disk_q_lambda(theta, xi, lam)

    return q


def q_chiral(xi) -> np.ndarray:
    """Chiral projector block 1/2 (Id + xi . sigma / |xi|) for xi in R^3."""
    xi = np.asarray(xi, dtype=float)
    norm = np.linalg.norm(xi)
    if norm == 0.0:
        raise DomainError("xi must be nonzero")
    x1, x2, x3 = xi / norm
    return 0.5 * np.array([[1.0 + x3, x1 - 1j * x2],
                           [x1 + 1j * x2, 1.0 - x3]], dtype=complex)


def chiral_obstruction_witness(beta1: complex, beta2: complex) -> np.ndarray:
    """Direction xi where the constant condition (beta1, beta2) fails.

    Returns the unit vector

        xi = ( -2 b1 b2 / (b1^2 + b2^2), 0, (b2^2 - b1^2) / (b1^2 + b2^2) ),

    at which (beta1, beta2) q_ch(xi) vanishes identically, exhibiting the
    topological obstruction to local conditions for the chiral block.
    """
    b1 = complex(beta1)
    b2 = complex(beta2)
    denom = b1 * b1 + b2 * b2
    if abs(denom) < 1e-14 * max(abs(b1), abs(b2), 1.0) ** 2:
        raise DomainError("beta1^2 + beta2^2 vanishes; witness undefined")
    xi = np.array([-2.0 * b1 * b2 / denom, 0.0, (b2 * b2 - b1 * b1) / denom])
    if np.max(np.abs(xi.imag)) > 1e-12:
        raise DomainError(
            "witness direction is not real for these parameters")
    return xi.real


def numerical_rank(m: np.ndarray, scale: float | None = None,
                   rel_tol: float = RANK_REL_TOL) -> int:
    """Rank by singular values against a threshold tied to a problem scale.

    ``scale`` should be the product of the norms of the factors whose
    product ``m`` is (so that an analytically-zero product of O(1) factors
    reports rank 0).  Defaults to the largest singular value of ``m``.
    """
    svals = np.linalg.svd(np.atleast_2d(m), compute_uv=False)
    if svals.size == 0:
        return 0
    ref = float(scale) if scale is not None else float(svals[0])
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(svals > rel_tol * ref))


def _matrix_scale(m: np.ndarray) -> float:
    s = np.linalg.svd(np.atleast_2d(m), compute_uv=False)
    return float(s[0]) if s.size else 0.0


@dataclass
class EllipticityReport:
    """Per-sample rank comparison rank(b q) vs rank(q)."""

    rank_rel_tol: float
    entries: list = field(default_factory=list)
    passed: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=_json_default, indent=2)


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def check_ellipticity(bc: BoundaryCondition, q_fn, samples: Sequence,
                      rank_rel_tol: float = RANK_REL_TOL) -> EllipticityReport:
    """Rank test rank(b(x;xi) q(x;xi)) = rank(q(x;xi)) over samples.

    ``q_fn(x, xi)`` returns the projector symbol; samples are (x, xi)
    pairs with |xi| >= 1.  Ranks use the scale of the factors, so an
    exactly-degenerate product reports a reduced rank.
    """
    if len(samples) == 0:
        raise ValueError("empty sample set")
    report = EllipticityReport(rank_rel_tol=rank_rel_tol)
    for x, xi in samples:
        q = np.asarray(q_fn(x, xi), dtype=complex)
        b = np.asarray(bc.b(x, xi), dtype=complex)
        bq = b @ q
        rank_q = numerical_rank(q, rel_tol=rank_rel_tol)
        rank_bq = numerical_rank(bq, scale=_matrix_scale(b) * _matrix_scale(q),
                                 rel_tol=rank_rel_tol)
        ok = rank_bq == rank_q
        report.entries.append({
            "x": x if np.isscalar(x) else np.asarray(x).tolist(),
            "xi": xi if np.isscalar(xi) else np.asarray(xi).tolist(),
            "rank_bq": rank_bq,
            "rank_q": rank_q,
            "ok": bool(ok),
        })
        report.passed = report.passed and ok
    return report


def imaginary_axis_cone(half_width: float = 0.35):
    """Two sectors around the +i and -i directions."""
    return [(np.pi / 2, half_width), (-np.pi / 2, half_width)]


def _angle_in_sector(angle: float, center: float, half_width: float) -> bool:
    d = (angle - center + np.pi) % (2 * np.pi) - np.pi
    return abs(d) <= half_width


def _in_cone(lam: complex, sectors) -> bool:
    if lam == 0:
        return False
    ang = np.angle(lam)
    return any(_angle_in_sector(ang, c, h) for c, h in sectors)


@dataclass
class AgmonConeReport:
    """Sampled verification of the two cone conditions."""

    sectors: list
    condition1_passed: bool
    condition2_passed: bool
    eigenvalue_witnesses: list
    rank_witnesses: list
    lambda_grid: list
    xi_grid: list

    @property
    def passed(self) -> bool:
        return self.condition1_passed and self.condition2_passed

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=_json_default, indent=2)


def check_agmon_cone(bc: BoundaryCondition, disk, sectors,
                     xi_samples: Sequence[float] = (1.0, -1.0, 2.0, -2.0),
                     n_interior: int = 32,
                     lambda_radii: Sequence[float] = (0.5, 1.0, 2.0, 5.0),
                     n_ray_angles: int = 9,
                     rank_rel_tol: float = RANK_REL_TOL) -> AgmonConeReport:
    """Sampled check of a spectral cone for the disk problem.

    Condition 1: no eigenvalue of the interior principal symbol (which are
    +-|xi|, real) lies in the cone.  Condition 2: rank(b q(lambda)) equals
    rank(q(lambda)) for sampled lambda in the cone (the lambda = 0 face is
    included) and tangential |xi| >= 1.  A sampled check, not a proof; the
    grids are recorded in the report.

    ``disk`` is accepted for interface symmetry with the other checks and
    may be None: the principal symbol family of the disk operator does
    not depend on the problem data, only the condition ``bc`` does.
    """
    rng = np.random.default_rng(7)
    cond1 = True
    eig_witnesses = []
    for _ in range(n_interior):
        xi_bar = rng.normal(size=2)
        norm = np.linalg.norm(xi_bar)
        if norm < 1e-12:
            continue
        for ev in (norm, -norm):       # eigenvalues of the interior symbol
            if _in_cone(ev, sectors):
                cond1 = False
                eig_witnesses.append({"xi_bar": xi_bar.tolist(),
                                      "eigenvalue": ev})

    cond2 = True
    rank_witnesses = []
    lam_grid = [0.0]
    for center, half in sectors:
        for ang in np.linspace(center - half, center + half, n_ray_angles):
            for rho in lambda_radii:
                lam_grid.append(rho * np.exp(1j * ang))
    theta0 = 0.3
    for lam in lam_grid:
        for xi in xi_samples:
            try:
                q = disk_q_lambda(theta0, xi, lam)
            except SingularSymbolError:
                continue
            b = np.asarray(bc.b(theta0, xi), dtype=complex)
            bq = b @ q
            rank_q = numerical_rank(q, rel_tol=rank_rel_tol)
            rank_bq = numerical_rank(
                bq, scale=_matrix_scale(b) * _matrix_scale(q),
                rel_tol=rank_rel_tol)
            if rank_bq != rank_q:
                cond2 = False
                rank_witnesses.append({
                    "lambda": complex(lam), "xi": xi,
                    "rank_bq": rank_bq, "rank_q": rank_q})
    return AgmonConeReport(
        sectors=[list(s) for s in sectors],
        condition1_passed=cond1,
        condition2_passed=cond2,
        eigenvalue_witnesses=eig_witnesses,
        rank_witnesses=rank_witnesses,
        lambda_grid=[complex(v) for v in lam_grid],
        xi_grid=list(xi_samples),
    )
