"""Holomorphic horospherical projection on the crown and its consequences.

On the crown, the torus component of the complexified horospherical
decomposition admits a holomorphic logarithm normalized to vanish at the
base point: with zeta^2 = (z1 - z2)/(2i) the radicand has positive real
part everywhere on the crown, so log a_C(z) = (1/2) Log zeta^2 with the
principal branch *is* the continuous branch, globally.  Its imaginary part
fills exactly [-phi, phi] along the rotation orbit of exp(i phi h) x0
(complex convexity), which the scan below verifies by sweeping the orbit.

The trace invariant p cuts out the domains swept by torus orbits: the
doubled domain is the slit plane C minus (-inf, -2], and the escape curve
connects p = 2 to p = -2 inside [-2, 2] once the angle leaves the crown
band, which quantifies why spherical functions blow up there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .crown import crown_contains
from .errors import BranchCut, DomainError, NotInCrown
from .liecore import GroupElement
from .pairmodel import PairPoint

OMEGA_RADIUS = math.pi / 4.0


@dataclass(frozen=True)
class HoroProjection:
    """Value of log a_C as the coefficient of h; zero at the base point."""

    value: complex

    def torus_parameter(self) -> complex:
        """The A_C/M representative exp(value)."""
        return cmath.exp(self.value)


def _log_ac_raw(z1: complex, z2: complex) -> complex:
    zeta_sq = (z1 - z2) / 2j
    return 0.5 * cmath.log(zeta_sq)


def log_aC(z: PairPoint) -> HoroProjection:
    """Continuous holomorphic logarithm of the torus projection on the crown.

    The principal branch realizes the continuous one since Re zeta^2 =
    Im(z1 - z2)/2 > 0 on the crown; at real points this reduces to the
    real horospherical coordinate log t.
    """
    if not crown_contains(z):
        raise NotInCrown(f"{z} is outside the crown")
    z1, z2 = z.finite()
    zeta_sq = (z1 - z2) / 2j
    if zeta_sq.real <= 0.0:
        raise BranchCut("radicand left the right half plane inside the crown")
    return HoroProjection(0.5 * cmath.log(zeta_sq))


def log_aC_orbit(z: PairPoint, thetas: np.ndarray) -> np.ndarray:
    """log a_C along the rotation orbit k_theta z, vectorized over theta.

    Uses g(z) - g(w) = (z - w)/((cz + d)(cw + d)) so the affine chart is
    never left; valid while the rotated radicand stays off the cut.
    """
    z1, z2 = z.finite()
    c = np.cos(thetas)
    s = np.sin(thetas)
    zeta0_sq = (z1 - z2) / 2j
    denom = (c - s * z1) * (c - s * z2)
    zeta_sq = zeta0_sq / denom
    return 0.5 * np.log(zeta_sq)


def aC_closed_form(theta: float, phi: float) -> complex:
    """Torus parameter of k_theta exp(i phi h) x0 in closed form.

    zeta^2 = e^{2i phi} / (cos^2 theta + e^{4i phi} sin^2 theta); the
    radicand traverses the right half plane, so the principal square root
    is the branch continuous in theta from theta = 0, where it equals
    e^{i phi}.
    """
    if abs(phi) >= OMEGA_RADIUS:
        raise DomainError(f"|phi| = {abs(phi)} not < pi/4")
    c, s = math.cos(theta), math.sin(theta)
    zeta_sq = cmath.exp(2j * phi) / (c * c + cmath.exp(4j * phi) * s * s)
    if zeta_sq.real <= 0.0 and abs(zeta_sq.imag) < 1e-14:
        raise BranchCut(f"radicand {zeta_sq} crossed the negative axis")
    return cmath.sqrt(zeta_sq)


@dataclass(frozen=True)
class ConvexityScan:
    min_im: float
    max_im: float
    endpoint_gap: float  # distance of the attained extremes to +-phi
    violation: float     # overshoot beyond [-phi, phi], 0 if contained


def convexity_scan(phi: float, n_samples: int) -> ConvexityScan:
    """Sweep Im log a_C over the rotation orbit of exp(i phi h) x0.

    Complex convexity predicts the exact range [-phi, phi]; the scan
    reports the observed extremes, the attainment gap, and any overshoot.
    """
    if abs(phi) >= OMEGA_RADIUS:
        raise DomainError(f"|phi| = {abs(phi)} not < pi/4")
    if n_samples < 2:
        raise ValueError("need at least two samples")
    thetas = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    c, s = np.cos(thetas), np.sin(thetas)
    d = c * c + np.exp(4j * phi) * s * s
    ims = 0.5 * (2.0 * phi - np.angle(d))
    lo, hi = float(np.min(ims)), float(np.max(ims))
    band = abs(phi)
    gap = max(abs(lo + band), abs(hi - band))
    violation = max(0.0, hi - band, -band - lo)
    return ConvexityScan(lo, hi, gap, violation)


@dataclass(frozen=True)
class TraceDomainSpec:
    """Symmetric torus segment (-b, b) h, optionally doubled.

    The image of p on A exp(i omega) x0 is parameterized by
    cos(2 phi)(t^2 + t^-2) + i sin(2 phi)(t^2 - t^-2), t > 0, |phi| < b.
    """

    omega_bound: float
    doubled: bool = False

    def __post_init__(self):
        if not 0.0 < self.omega_bound <= OMEGA_RADIUS:
            raise ValueError("omega_bound must lie in (0, pi/4]")


FULL_OMEGA = TraceDomainSpec(OMEGA_RADIUS)
DOUBLED_OMEGA = TraceDomainSpec(OMEGA_RADIUS, doubled=True)


def minimal_trace_angle(value: complex) -> float:
    """Smallest |phi| with value in the image of the (-phi, phi) torus tube.

    Eliminating t from the parameterization leaves
    x^2/cos^2(2 phi) - y^2/sin^2(2 phi) = 4, strictly increasing in |phi|,
    so the threshold angle solves a quadratic in cos^2(2 phi).
    """
    x, y = float(value.real), float(value.imag)
    if x <= 0.0:
        return math.inf
    if y == 0.0:
        return 0.0 if x >= 2.0 else 0.5 * math.acos(x / 2.0)
    s_sum = 4.0 + x * x + y * y
    disc = max(s_sum * s_sum - 16.0 * x * x, 0.0)
    c_sq = (s_sum - math.sqrt(disc)) / 8.0
    c_sq = min(max(c_sq, 0.0), 1.0)
    return 0.5 * math.acos(math.sqrt(c_sq))


def trace_domain_contains(spec: TraceDomainSpec, value: complex,
                          tol: float = 1e-6) -> bool:
    """Membership of a trace value in the torus-tube image.

    Doubled domains are the slit plane C minus (-inf, -2]; undoubled ones
    use the closed-form threshold angle with a small tolerance margin.
    """
    value = complex(value)
    if spec.doubled:
        on_slit = (abs(value.imag) <= tol and value.real <= -2.0 + tol)
        return not on_slit
    return minimal_trace_angle(value) < spec.omega_bound + tol


@dataclass(frozen=True)
class EscapeSample:
    g: GroupElement
    sigma: float

    def __iter__(self):
        yield self.g
        yield self.sigma


def escape_curve(phi: float, s: float) -> EscapeSample:
    """Point on the curve driving the trace from 2 down to -2.

    For pi/4 < |phi| < pi/2 the trace of the full torus orbit through the
    angle phi reaches the slit tip -2.  The curve runs in two legs: the
    first sweeps the angle from 0 to phi at the identity (trace
    2 cos(4 s phi), from 2 at the base point), the second boosts along
    upper triangular gamma(u) = [[a, b], [0, 1/a]] with
    a(u) = (sqrt(-cos 2 phi) + u (1 - sqrt(-cos 2 phi)))/sqrt(-cos 2 phi)
    and b = sqrt(a^2 - a^-2), for which the trace is 2 a(u)^2 cos(2 phi),
    reaching exactly -2 at u = 1.  sigma is real and strictly decreasing
    along the whole curve.
    """
    aphi = abs(phi)
    if not OMEGA_RADIUS < aphi < math.pi / 2.0:
        raise DomainError(f"|phi| = {aphi} outside (pi/4, pi/2)")
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s = {s} outside [0, 1]")
    c2 = math.cos(2.0 * phi)  # negative in the band
    if s <= 0.5:
        angle = 2.0 * s * phi
        sigma = 2.0 * math.cos(2.0 * angle)
        return EscapeSample(GroupElement(np.eye(2)), sigma)
    u = 2.0 * s - 1.0
    root = math.sqrt(-c2)
    a = (root + u * (1.0 - root)) / root
    b = math.sqrt(max(a * a - 1.0 / (a * a), 0.0))
    g = GroupElement(np.array([[a, b], [0.0, 1.0 / a]]))
    sigma = 2.0 * a * a * c2
    return EscapeSample(g, sigma)


def escape_point(phi: float, s: float) -> PairPoint:
    """The actual point gamma(s) exp(i phi(s) h) x0 traced by the curve."""
    if s <= 0.5:
        angle = 2.0 * s * phi
        w = cmath.exp(2j * angle) * 1j
        return PairPoint(w, -w)
    g = escape_curve(phi, s).g
    w = cmath.exp(2j * phi) * 1j
    return PairPoint(w, -w).apply(g.m)


@dataclass(frozen=True)
class BlowupSample:
    s: float
    sigma: float
    value: float
    saturated: bool


_BLOWUP_CAP = 1e12
_EPS_FLOOR = 1e-12  # continuation integrand magnitude ~ 1/eps hits the cap


def phi_blowup_scan(lam: float, phi: float, s_values) -> list[BlowupSample]:
    """Spherical-function values along the escape curve.

    The trace determines the value through the doubled torus orbit: for
    sigma = 2 cos(2 psi) the extension satisfies
    Phi(sigma) = || pi(exp(i psi/2 h)) v_K ||^2, a positive quantity that
    grows without bound as sigma approaches the slit tip -2.  Near s = 1
    the integrand magnitude is capped at 1e12 and saturation is reported
    instead of a fabricated value.
    """
    from .repn import SpectralParam, continue_vK, rep_norm

    out = []
    for s in s_values:
        sigma = escape_curve(phi, s).sigma
        psi = 0.5 * math.acos(max(min(sigma / 2.0, 1.0), -1.0))
        eps = OMEGA_RADIUS - 0.5 * psi
        if eps <= _EPS_FLOOR or sigma <= -2.0 + 1e-13:
            out.append(BlowupSample(s, sigma, _BLOWUP_CAP, True))
            continue
        vec = continue_vK(SpectralParam(lam), eps)
        value = rep_norm(vec) ** 2
        out.append(BlowupSample(s, sigma, value, value >= _BLOWUP_CAP))
    return out
