"""Construction and classification of surface ends.

Ends come in three kinds.  Catenoidal ends have Weierstrass exponents
with mu + nu = -1 and carry a growth 1 - mu and an axis (a pair of
boundary points).  Horospherical ends have nu = -2 and integer mu >= 2
and carry a single boundary point plus a coefficient kappa.  The
horosphere itself is a separate exact frame.

Frames are built by solving the entry ODEs with the Frobenius method.
The indicial roots always differ by a positive integer; for admissible
data the resonance obstruction vanishes and the lower-root solution
gains a free parameter instead of a logarithm.  A nonzero obstruction
is reported as a LogTermRequiredError: it means the coefficient data
violates the admissibility constraints, not that the solver gave up.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .bryant import BryantFrame, WeierstrassData, one_forms, transform_frame
from .errors import ConsistencyError, DomainError, LogTermRequiredError
from .geometry import (INF, ExtendedComplex, IsometrySL2, boundary_eq, is_inf,
                       standardizing_isometry)
from .series import (DEFAULT_ORDER, GeneralizedSeries, differentiate,
                     radius_estimate, residue)

_MU_ONE_TOL = 1e-8


# -- end descriptors --------------------------------------------------------

@dataclass(frozen=True)
class Catenoidal:
    """A catenoidal end: growth 1 - mu, axis from ``axis_from`` to ``boundary``."""

    mu: float
    axis_from: ExtendedComplex
    boundary: ExtendedComplex

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError("catenoidal end needs mu > 0")
        if abs(self.mu - 1.0) <= _MU_ONE_TOL:
            raise DomainError("mu = 1 has growth zero (horosphere limit), "
                              "not a catenoidal end")
        if boundary_eq(self.axis_from, self.boundary):
            raise DomainError("axis endpoints of a catenoidal end are distinct")

    @property
    def growth(self) -> float:
        return 1.0 - self.mu


@dataclass(frozen=True)
class Horospherical:
    """A horospherical end at ``boundary`` with flux coefficient kappa."""

    boundary: ExtendedComplex
    kappa: complex


@dataclass(frozen=True)
class Horosphere:
    """The totally umbilic horosphere; all its fluxes vanish."""


EndDescriptor = Union[Catenoidal, Horospherical, Horosphere]


# -- Frobenius machinery ----------------------------------------------------

@dataclass(frozen=True)
class FrobeniusProblem:
    """The entry ODE X'' - (q'/q) X' - mu h z^m X = 0 with q = z^s h.

    ``coupling`` is the exponent m (m = -2 for catenoidal columns, where
    the coupling term joins the indicial equation; m = mu - 3 for
    horospherical columns).  ``resonance`` is the free coefficient of
    the lower-root solution at the resonance order.
    """

    s: float
    coupling: int
    mu: float
    h: GeneralizedSeries
    resonance: complex = 0.0
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.h.offset != 0.0 or abs(self.h.coeffs[0]) == 0.0:
            raise DomainError("ODE coefficient h must be holomorphic with h(0) != 0")
        if self.coupling < -2:
            raise DomainError("coupling exponent below -2 is an irregular "
                              "singularity, out of scope")

    @property
    def indicial_roots(self) -> Tuple[float, float]:
        """(sigma1, sigma2) with sigma1 < sigma2, sigma2 - sigma1 a positive integer."""
        c0 = self.mu * complex(self.h.coeffs[0]) if self.coupling == -2 else 0.0
        b = 1.0 + self.s
        disc = cmath.sqrt(b * b + 4.0 * c0)
        r1, r2 = (b - disc) / 2.0, (b + disc) / 2.0
        if abs(r1.imag) > 1e-9 or abs(r2.imag) > 1e-9:
            raise DomainError("indicial roots are not real for this data")
        lo, hi = sorted((r1.real, r2.real))
        gap = hi - lo
        if abs(gap - round(gap)) > 1e-9 or round(gap) < 1:
            raise DomainError("indicial roots must differ by a positive integer "
                              "(got gap %g)" % gap)
        return lo, hi


def _log_derivative_coeffs(hc: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of h'/h as a power series, length n."""
    pc = np.zeros(n, dtype=complex)
    for k in range(n):
        acc = (k + 1) * (hc[k + 1] if k + 1 < len(hc) else 0.0)
        for j in range(k):
            acc -= pc[j] * hc[k - j]
        pc[k] = acc / hc[0]
    return pc


def _solve_at_root(prob: FrobeniusProblem, sigma: float, gap: Optional[int],
                   pc: np.ndarray, hc: np.ndarray) -> GeneralizedSeries:
    """Run the recurrence at one indicial root.

    ``gap`` is the resonance order when solving at the lower root, None
    at the upper root (where the indicial polynomial never revisits 0).
    """
    lo, hi = prob.indicial_roots
    d = prob.coupling + 2
    K = prob.order
    x = np.zeros(K + 1, dtype=complex)
    x[0] = 1.0
    ks = np.arange(K + 1, dtype=float)
    for n in range(1, K + 1):
        rhs = np.dot(pc[:n][::-1], (sigma + ks[:n]) * x[:n])
        kmax = n - d if d > 0 else n - 1
        if kmax >= 0:
            rhs += prob.mu * np.dot(hc[n - d - kmax:n - d + 1][::-1], x[:kmax + 1])
        if gap is not None and n == gap:
            scale = max(1.0, float(np.max(np.abs(x[:n]))))
            if abs(rhs) > 1e-9 * scale:
                raise LogTermRequiredError(
                    "resonance obstruction %.3e at order %d: the data admits "
                    "no pure power-series solution" % (abs(rhs), n))
            x[n] = prob.resonance
        else:
            x[n] = rhs / ((sigma + n - lo) * (sigma + n - hi))
    return GeneralizedSeries(sigma, x)


def frobenius_solve(prob: FrobeniusProblem):
    """Both basis solutions, as (lower-root series, upper-root series).

    The upper-root solution has unit leading coefficient and is unique;
    the lower-root one has unit leading coefficient and carries the
    problem's resonance parameter as its free coefficient.
    """
    lo, hi = prob.indicial_roots
    gap = round(hi - lo)
    hc = np.zeros(prob.order + 1, dtype=complex)
    hc[:min(len(prob.h.coeffs), prob.order + 1)] = \
        prob.h.coeffs[:prob.order + 1]
    pc = _log_derivative_coeffs(hc, prob.order)
    small = _solve_at_root(prob, lo, gap, pc, hc)
    big = _solve_at_root(prob, hi, None, pc, hc)
    return small, big


def ode_residual(prob: FrobeniusProblem, sol: GeneralizedSeries) -> float:
    """Max coefficient of X'' - (q'/q)X' - mu h z^m X for a candidate X."""
    hc = np.zeros(prob.order + 1, dtype=complex)
    hc[:min(len(prob.h.coeffs), prob.order + 1)] = prob.h.coeffs[:prob.order + 1]
    pc = _log_derivative_coeffs(hc, prob.order)
    xp = differentiate(sol)
    xpp = differentiate(xp)
    term_s = GeneralizedSeries(xp.offset - 1.0, prob.s * xp.coeffs)
    term_p = GeneralizedSeries(0.0, pc) * xp if len(pc) else xp * 0.0
    term_c = prob.mu * (GeneralizedSeries(float(prob.coupling), hc) * sol)
    r = xpp - term_s - term_p - term_c
    # The top two coefficients lie beyond the recurrence window.
    core = r.coeffs[:-2] if r.order >= 2 else r.coeffs
    return float(np.max(np.abs(core))) if len(core) else 0.0


# -- catenoidal construction ------------------------------------------------

def _catenoidal_offsets(mu: float):
    lam1, lam2 = (-1.0 - mu) / 2.0, (1.0 - mu) / 2.0
    r1, r2 = (mu - 1.0) / 2.0, (mu + 1.0) / 2.0
    return lam1, lam2, r1, r2


def catenoid_cousin_frame(mu: float, order: int = DEFAULT_ORDER) -> BryantFrame:
    """Exact rotational frame: all four entries are single powers of z."""
    if not mu > 0:
        raise DomainError("catenoid cousin needs mu > 0")
    if abs(mu - 1.0) <= _MU_ONE_TOL:
        raise DomainError("mu = 1 is the horosphere limit, not a catenoid cousin")
    lam1, lam2, r1, r2 = _catenoidal_offsets(mu)
    return BryantFrame(
        A=GeneralizedSeries.monomial(lam2, 1.0, order),
        B=GeneralizedSeries.monomial(r2, (mu - 1.0) / (mu + 1.0), order),
        C=GeneralizedSeries.monomial(lam1, (mu * mu - 1.0) / (4.0 * mu), order),
        D=GeneralizedSeries.monomial(r1, (1.0 + mu) ** 2 / (4.0 * mu), order),
        validity_radius=math.inf,
    )


def _check_omega_relation(frame: BryantFrame, nu: float,
                          h: GeneralizedSeries, tol: float = 1e-8):
    """A dC - C dA must reproduce the one-form z^nu h dz."""
    omega = frame.A * differentiate(frame.C) - frame.C * differentiate(frame.A)
    target = GeneralizedSeries(nu, h.coeffs)
    diff = omega - target
    defect = float(np.max(np.abs(diff.coeffs[:-1]))) if diff.order >= 1 else \
        float(np.max(np.abs(diff.coeffs)))
    if defect > tol:
        raise ConsistencyError(
            "frame violates omega = A dC - C dA (defect %.3e)" % defect)


def _validity_from_entries(entries) -> float:
    r = math.inf
    for e in entries:
        est = radius_estimate(e)
        if est < r:
            r = est
    return r if math.isinf(r) else 0.5 * r


def canonical_catenoidal_frame(mu: float, h: GeneralizedSeries,
                               axis_param: complex,
                               order: int = DEFAULT_ORDER) -> BryantFrame:
    """Frame of the catenoidal end with axis (axis_param, infinity).

    Requires h(0) = (1 - mu^2)/(4 mu) and h'(0) = 0.  The one free
    constant in the D entry is fixed by matching the unit-determinant
    identity in least squares over all retained orders.
    """
    if not mu > 0 or abs(mu - 1.0) <= _MU_ONE_TOL:
        raise DomainError("catenoidal construction needs mu > 0, mu != 1")
    h0_target = (1.0 - mu * mu) / (4.0 * mu)
    if abs(complex(h.coeffs[0]) - h0_target) > 1e-10:
        raise DomainError(
            "h(0) must equal (1-mu^2)/(4mu) = %g for a catenoidal end" % h0_target)
    h1 = complex(h.coeffs[1]) if h.order >= 1 else 0.0
    if abs(h1) > 1e-10:
        raise DomainError("catenoidal data requires h'(0) = 0")
    zres = 4.0 * mu * complex(axis_param) / (mu * mu - 1.0)

    f1, f2 = frobenius_solve(FrobeniusProblem(
        s=-1.0 - mu, coupling=-2, mu=mu, h=h, resonance=zres, order=order))
    g_prob = FrobeniusProblem(s=-1.0 + mu, coupling=-2, mu=mu, h=h, order=order)

    A = f2
    B = ((mu - 1.0) / (mu + 1.0)) * frobenius_solve(g_prob)[1]
    C = ((mu * mu - 1.0) / (4.0 * mu)) * f1
    scale_d = (1.0 + mu) ** 2 / (4.0 * mu)

    def det_residual(t):
        g1 = frobenius_solve(FrobeniusProblem(
            s=-1.0 + mu, coupling=-2, mu=mu, h=h, resonance=t, order=order))[0]
        D = scale_d * g1
        det = A * D - B * C
        res = det.coeffs.copy()
        res[0] -= 1.0
        return D, res

    _, r0 = det_residual(0.0)
    _, r1c = det_residual(1.0)
    delta = r1c - r0
    denom = np.vdot(delta, delta)
    t_best = (-np.vdot(delta, r0) / denom) if abs(denom) > 0 else 0.0
    D, res = det_residual(complex(t_best))
    if np.max(np.abs(res[:-1])) > 1e-8:
        raise ConsistencyError(
            "determinant matching failed (residual %.3e); the supplied h does "
            "not define a catenoidal end" % float(np.max(np.abs(res[:-1]))))

    frame = BryantFrame(A, B, C, D,
                        validity_radius=_validity_from_entries((A, B, C, D)))
    _check_omega_relation(frame, -1.0 - mu, h)
    return frame


# -- horospherical construction ---------------------------------------------

def canonical_horospherical_frame(mu, h: GeneralizedSeries,
                                  order: int = DEFAULT_ORDER) -> BryantFrame:
    """Frame of the horospherical end with boundary at infinity.

    mu is an integer >= 2.  The compatibility constraint on h is
    h'(0) = 2 h(0)^2 when mu = 2 and h'(0) = 0 when mu >= 3; it is
    exactly the condition killing the resonance obstruction of the
    first-column ODE.  The constants b and the D-entry free coefficient
    are fixed jointly by least-squares determinant matching.
    """
    m = round(float(mu))
    if abs(float(mu) - m) > 1e-9 or m < 2:
        raise DomainError("horospherical construction needs integer mu >= 2")
    h0 = complex(h.coeffs[0])
    h1 = complex(h.coeffs[1]) if h.order >= 1 else 0.0
    if m == 2:
        if abs(h1 - 2.0 * h0 * h0) > 1e-10 * max(1.0, abs(h0) ** 2):
            raise DomainError("mu = 2 requires h'(0) = 2 h(0)^2")
    elif abs(h1) > 1e-10:
        raise DomainError("mu >= 3 requires h'(0) = 0")
    c = -h0

    f_prob = FrobeniusProblem(s=-2.0, coupling=m - 3, mu=float(m), h=h,
                              order=order)
    f1, f2 = frobenius_solve(f_prob)
    g_s = 2.0 * m - 2.0

    A = f2
    C = c * f1
    g2 = frobenius_solve(FrobeniusProblem(
        s=g_s, coupling=m - 3, mu=float(m), h=h, order=order))[1]

    def residual(b, t):
        g1 = frobenius_solve(FrobeniusProblem(
            s=g_s, coupling=m - 3, mu=float(m), h=h, resonance=t,
            order=order))[0]
        B = b * g2
        det = A * g1 - B * C
        res = det.coeffs.copy()
        res[0] -= 1.0
        return g1, B, res

    _, _, r00 = residual(0.0, 0.0)
    _, _, r10 = residual(1.0, 0.0)
    _, _, r01 = residual(0.0, 1.0)
    M = np.column_stack((r10 - r00, r01 - r00))
    sol, *_ = np.linalg.lstsq(M, -r00, rcond=None)
    b_best, t_best = complex(sol[0]), complex(sol[1])
    g1, B, res = residual(b_best, t_best)
    if np.max(np.abs(res[:-1])) > 1e-8:
        raise ConsistencyError(
            "determinant matching failed (residual %.3e) for horospherical data"
            % float(np.max(np.abs(res[:-1]))))
    D = g1

    f2p = complex(f2.coeffs[1])
    g1p = complex(g1.coeffs[1])
    if abs(h1 + 2.0 * c * f2p) > 1e-8:
        raise ConsistencyError("post-check h'(0) = -2 c f2'(0) failed")
    if abs(f2p + g1p) > 1e-8:
        raise ConsistencyError("post-check f2'(0) + g1'(0) = 0 failed")

    frame = BryantFrame(A, B, C, D,
                        validity_radius=_validity_from_entries((A, B, C, D)))
    _check_omega_relation(frame, -2.0, h)
    return frame


def horosphere_frame(order: int = DEFAULT_ORDER) -> BryantFrame:
    """The exact frame [[1, 0], [z^-1, 1]]; immersion (1/z, 1)."""
    return BryantFrame(
        A=GeneralizedSeries.monomial(0.0, 1.0, order),
        B=GeneralizedSeries.zero(0.0, order),
        C=GeneralizedSeries.monomial(-1.0, 1.0, order),
        D=GeneralizedSeries.monomial(0.0, 1.0, order),
        validity_radius=math.inf,
    )


# -- axis extraction and classification -------------------------------------

def extract_axis(frame: BryantFrame):
    """(axis_from, boundary) of a catenoidal-shaped frame.

    Writing the first column as (z^lam1 a(z), z^lam1 c(z)) with a, c
    holomorphic, the axis is (c'(0)/a'(0), c(0)/a(0)); a vanishing
    denominator gives the point at infinity.
    """
    a_ser = frame.A.normalized()
    c_ser = frame.C.normalized()
    lam1 = min(a_ser.offset, c_ser.offset)
    ka = round(a_ser.offset - lam1)
    kc = round(c_ser.offset - lam1)

    def first_two(ser, k):
        vals = [0.0 + 0.0j, 0.0 + 0.0j]
        for i in (0, 1):
            j = i - k
            if 0 <= j <= ser.order:
                vals[i] = complex(ser.coeffs[j])
        return vals

    a0, a1 = first_two(a_ser, ka)
    c0, c1 = first_two(c_ser, kc)
    scale = max(abs(a0), abs(a1), abs(c0), abs(c1))
    if scale < 1e-13:
        raise DomainError("degenerate frame: both a and c vanish to order 2")
    tol = 1e-12 * max(1.0, scale)
    axis_from = INF if abs(a1) <= tol else c1 / a1
    boundary = INF if abs(a0) <= tol else c0 / a0
    return axis_from, boundary


def classify_end(weier: WeierstrassData) -> str:
    """'catenoidal' or 'horospherical' from the Weierstrass exponents."""
    d = weier.degree_sum
    if d == -1:
        if abs(weier.mu - 1.0) <= _MU_ONE_TOL:
            raise DomainError("mu = 1 is excluded: the end degenerates to a "
                              "horosphere")
        return "catenoidal"
    if round(weier.nu) != -2 or abs(weier.nu + 2.0) > 1e-9:
        raise DomainError("mu + nu >= 0 requires nu = -2")
    m = round(weier.mu)
    if abs(weier.mu - m) > 1e-9 or m < 2:
        raise DomainError("mu + nu >= 0 requires integer mu >= 2")
    return "horospherical"


# -- end-spec assembly -------------------------------------------------------

def _perturbed_h(h0: complex, perturbation, order: int) -> GeneralizedSeries:
    """h(z) = h0 (1 + sum_k p_k z^k), p given from the z^1 coefficient up."""
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = 1.0
    for k, p in enumerate(perturbation, start=1):
        if k > order:
            break
        coeffs[k] = p
    return GeneralizedSeries(0.0, h0 * coeffs)


def _parse_boundary(obj) -> ExtendedComplex:
    if obj == "inf":
        return INF
    re, im = obj
    return complex(re, im)


def _kappa_from_frame(frame: BryantFrame, boundary: ExtendedComplex) -> complex:
    fb, _, fd = one_forms(frame)
    if is_inf(boundary):
        return -4.0 * np.pi * residue(fd) / (2.0 * np.pi)
    return -4.0 * np.pi * residue(fb) / (2.0 * np.pi)


def build_end(spec: dict, order: int = DEFAULT_ORDER):
    """(frame, descriptor) from an end-spec mapping (the JSON interface).

    Catenoidal specs carry "mu", "axis": [A, B] and an optional
    "h_perturbation" (coefficients p_k of h = h(0)(1 + sum p_k z^k),
    starting at z^1); h(0) is forced by mu.  Horospherical specs carry
    "mu", "boundary" and optionally "h0" (default 1) plus the same
    perturbation convention.  The constraint on the z^1 coefficient is
    the caller's responsibility and violations are rejected.
    """
    kind = spec.get("type")
    order = int(spec.get("order", order))
    pert = spec.get("h_perturbation", [])
    pert = [complex(p[0], p[1]) if not isinstance(p, (int, float, complex))
            else complex(p) for p in pert]
    if kind == "catenoidal":
        mu = float(spec["mu"])
        a = _parse_boundary(spec["axis"][0])
        b = _parse_boundary(spec["axis"][1])
        if boundary_eq(a, b):
            raise DomainError("catenoidal axis endpoints must be distinct")
        h = _perturbed_h((1.0 - mu * mu) / (4.0 * mu), pert, order)
        if is_inf(b):
            frame = canonical_catenoidal_frame(mu, h, complex(a), order=order)
        else:
            base = canonical_catenoidal_frame(mu, h, 0.0, order=order)
            p = standardizing_isometry(a, b).inverse()
            frame = transform_frame(p, base)
        return frame, Catenoidal(mu, a, b)
    if kind == "horospherical":
        mu = float(spec["mu"])
        b = _parse_boundary(spec["boundary"])
        h0 = spec.get("h0", [1.0, 0.0])
        h = _perturbed_h(complex(h0[0], h0[1]), pert, order)
        frame = canonical_horospherical_frame(mu, h, order=order)
        if not is_inf(b):
            # move the boundary from infinity to b; any second anchor works
            aux = complex(b) + 1.0
            p = standardizing_isometry(aux, b).inverse()
            frame = transform_frame(p, frame)
        return frame, Horospherical(b, _kappa_from_frame(frame, b))
    if kind == "horosphere":
        return horosphere_frame(order), Horosphere()
    raise DomainError("unknown end type %r" % (kind,))
