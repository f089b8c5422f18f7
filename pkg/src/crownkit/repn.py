"""Spherical unitary principal series on L^2(R) and its holomorphic extension.

The unitary action at tempered parameter lam is
    [pi(g) f](x) = |c x + d|^(-1 + i lam) f((a x + b)/(c x + d)),
    (a, b; c, d) = g^{-1},
with spherical vector v_K(x) = (1/sqrt(pi)) (1 + x^2)^(-(1 - i lam)/2).
Conjugating v_K by the elliptic torus element diag(e^{i(pi/4-eps)}, .)
continues to
    c(eps, lam) (1 + e^{-i(pi - 4 eps)} x^2)^(-(1 - i lam)/2),
whose quadratic stays strictly below the real axis for eps in (0, pi/4),
so the principal branch is the continuation from the real point
eps = pi/4.  Its squared norm grows like |log eps|, with logarithmic mass
concentrating at x = +-1.

The spherical function is the K-average of the horospherical character,
phi(z) = (1/2 pi) int exp((1 + i lam) log a_C(k_theta z)) d theta, and on
doubled torus orbits it factors as a pairing of two half-continued
vectors, which keeps it positive there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, NotInCrown, SampleUnderflow,
                     StepTooSmall)
from .liecore import GroupElement, LieVector, exp_lie
from .numerics import (GridFunction, QuadratureConfig,
                       REPRESENTATION_CFG, integrate, integrate_periodic,
                       l2_norm)
from .pairmodel import PairPoint
from .vectors import (FlowPulled, MobiusPulled, QuadraticPower, SmoothVector,
                      _leibniz, _poly_jets)

OMEGA_RADIUS = math.pi / 4.0
SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class SpectralParam:
    """Tempered spherical parameter; the class is invariant under lam -> -lam."""

    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError("spectral parameter must be finite")

    @property
    def vector_exponent(self) -> complex:
        return -0.5 * (1.0 - 1j * self.lam)


def v_K(param: SpectralParam) -> QuadraticPower:
    """Normalized spherical vector; unit L^2 norm for every real lam."""
    return QuadraticPower(1.0 / SQRT_PI, (1.0, 0.0, 1.0),
                          param.vector_exponent)


def continue_vK(param: SpectralParam, eps: float) -> QuadraticPower:
    """Analytic continuation of the orbit map at the elliptic torus element
    with angle pi/4 - eps; eps = pi/4 returns v_K itself.

    The quadratic 1 + e^{-i(pi - 4 eps)} x^2 has strictly negative
    imaginary part for x != 0, so the principal power is the branch
    continuous in eps from the real group element.
    """
    if not 0.0 < eps <= OMEGA_RADIUS + 1e-15:
        raise DomainError(f"eps = {eps} outside (0, pi/4]")
    zeta_log = 1j * (OMEGA_RADIUS - eps)
    kappa = cmath.exp((-1.0 + 1j * param.lam) * zeta_log) / SQRT_PI
    w = cmath.exp(-1j * (math.pi - 4.0 * eps))
    hints = (-1.0, 1.0) if eps < 0.1 else ()
    return QuadraticPower(kappa, (1.0, 0.0, w), param.vector_exponent,
                          hints=hints)


def apply_pi(param: SpectralParam, g: GroupElement, f):
    """Unitary action of a real group element on a representation vector."""
    if not g.is_real:
        raise ValueError("apply_pi handles real group elements; use "
                         "apply_pi_complex for continued ones")
    if isinstance(f, GridFunction):
        return _apply_pi_grid(param, g, f)
    return MobiusPulled(f, g.inverse().m, param.lam)


def apply_pi_flow(param: SpectralParam, direction: LieVector, w: complex,
                  f: QuadraticPower) -> SmoothVector:
    """Value-only action of exp(w * direction) for complex flow time w.

    Branches are continued along the flow from the identity, which corrects
    the principal branch by the actual winding of the pulled quadratic.
    """
    def flow(sigma: float):
        return exp_lie(direction, sigma * w).inverse().m

    return FlowPulled(f, flow, param.lam)


def _apply_pi_grid(param, g, f: GridFunction) -> GridFunction:
    a, b, c, d = g.inverse().m.real.ravel()
    x = f.nodes
    pulled = (a * x + b) / (c * x + d)
    inside = (pulled >= x[0]) & (pulled <= x[-1])
    if f.tail_exponent is None and np.count_nonzero(inside) < x.size // 2:
        raise SampleUnderflow("pullback left the sampled range; rebuild grid")
    vals = np.abs(c * x + d) ** complex(-1.0, param.lam) * f(pulled)
    return GridFunction(x, vals, f.tail_exponent)


def rep_norm(vec, cfg: QuadratureConfig = REPRESENTATION_CFG) -> float:
    """L^2 norm of a representation vector."""
    if isinstance(vec, GridFunction):
        return l2_norm(vec)
    lo, hi = vec.support if vec.support is not None else (-math.inf, math.inf)
    res = integrate(lambda x: np.abs(vec.value(x)) ** 2, lo, hi,
                    cfg.with_hints(vec.hints))
    return math.sqrt(max(res.value.real, 0.0))


def rep_pairing(u, v, cfg: QuadratureConfig = REPRESENTATION_CFG) -> complex:
    """Hermitian pairing <u, v> = int u(x) conj(v(x)) dx."""
    sup_u = u.support if u.support is not None else (-math.inf, math.inf)
    sup_v = v.support if v.support is not None else (-math.inf, math.inf)
    lo, hi = max(sup_u[0], sup_v[0]), min(sup_u[1], sup_v[1])
    if lo >= hi:
        return 0.0 + 0.0j
    hints = tuple(sorted(set(u.hints) | set(v.hints)))
    res = integrate(lambda x: u.value(x) * np.conj(v.value(x)), lo, hi,
                    cfg.with_hints(hints))
    return res.value


@dataclass(frozen=True)
class NormGrowthSample:
    eps: float
    norm: float

    @property
    def log_ratio_sq(self) -> float:
        """norm^2 / |log eps|; stabilizes as eps -> 0."""
        return self.norm ** 2 / abs(math.log(self.eps))


def norm_growth(param: SpectralParam, eps_list) -> list[NormGrowthSample]:
    """Norms of the continued spherical vector along an eps grid.

    The squared norm diverges like |log eps| with mass near x = +-1;
    quadrature is hinted there.
    """
    out = []
    for eps in eps_list:
        vec = continue_vK(param, float(eps))
        out.append(NormGrowthSample(float(eps), rep_norm(vec)))
    return out


# derived action in the basis h, e, f, u = e - f, and e + f:
# each direction acts as alpha(x) f + beta(x) f'
def _direction_polys(param: SpectralParam, direction: str):
    il = 1j * param.lam
    table = {
        "h": ((il - 1.0,), (0.0, -2.0)),
        "e": ((0.0,), (-1.0,)),
        "f": ((0.0, 1.0 - il), (0.0, 0.0, 1.0)),
        "u": ((0.0, il - 1.0), (-1.0, 0.0, -1.0)),
        "e+f": ((0.0, 1.0 - il), (-1.0, 0.0, 1.0)),
    }
    if direction not in table:
        raise ValueError(f"unknown direction {direction!r}")
    return table[direction]


class DPi(SmoothVector):
    """First-order derived-action operator alpha(x) f + beta(x) f'."""

    def __init__(self, child: SmoothVector, alpha_poly, beta_poly):
        self.child = child
        self.alpha = np.asarray(alpha_poly, dtype=complex)
        self.beta = np.asarray(beta_poly, dtype=complex)
        self.support = child.support
        self.hints = child.hints
        self.decay_power = child.decay_power

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        cj = self.child.jet(x, order + 1)
        aj = _poly_jets(self.alpha, x, order)
        bj = _poly_jets(self.beta, x, order)
        return _leibniz(aj, cj[:order + 1]) + _leibniz(bj, cj[1:])


def d_pi(param: SpectralParam, direction: str, f: SmoothVector) -> DPi:
    """Derived representation along h, e, f, u = e - f, or e + f.

    In this realization: h acts by (i lam - 1) - 2x d/dx, e by -d/dx,
    f by (1 - i lam)x + x^2 d/dx, u by (i lam - 1)x - (1 + x^2) d/dx and
    e + f by (1 - i lam)x - (1 - x^2) d/dx.  The rotation and hyperbolic
    directions degenerate at their fixed circles x = 0/inf resp. x = +-1.
    """
    alpha, beta = _direction_polys(param, direction)
    return DPi(f, alpha, beta)


def _orbit_log_ac(z1: complex, z2: complex, thetas: np.ndarray) -> np.ndarray:
    zeta0_sq = (z1 - z2) / 2j
    c = np.cos(thetas)
    s = np.sin(thetas)
    return 0.5 * np.log(zeta0_sq / ((c - s * z1) * (c - s * z2)))


def _boundary_theta_hints(z1, z2):
    """Angles where a real coordinate is rotated through infinity."""
    hints = []
    for w in (z1, z2):
        if abs(w.imag) < 1e-9:
            t = math.atan2(1.0, w.real) % math.pi
            hints += [t, t + math.pi]
    return hints


def phi_lambda(param: SpectralParam, z: PairPoint) -> complex:
    """Holomorphically extended spherical function at a crown point.

    Real points of X are the degenerate case, where the value is real and
    positive.  Points on the closed crown whose trace stays off the slit
    (-inf, -2] are admitted too: the rotation integrand then acquires
    integrable inverse-square-root spikes, handled by hinted adaptive
    quadrature.
    """
    z1, z2 = z.finite()
    margin = min(z1.imag, -z2.imag)
    if margin < -1e-12:
        raise NotInCrown(f"{z} lies outside the closed crown")
    exponent = 1.0 + 1j * param.lam

    if margin > 1e-9:
        res = integrate_periodic(
            lambda th: np.exp(exponent * _orbit_log_ac(z1, z2, th)))
        return res.value / (2.0 * math.pi)

    hints = _boundary_theta_hints(z1, z2)
    cfg = REPRESENTATION_CFG.with_hints(hints)
    res = integrate(lambda th: np.exp(exponent * _orbit_log_ac(z1, z2, th)),
                    0.0, 2.0 * math.pi, cfg)
    return res.value / (2.0 * math.pi)


@dataclass(frozen=True)
class DoublingResult:
    lhs: complex
    rhs: complex

    @property
    def gap(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs), 1e-300)
        return abs(self.lhs - self.rhs) / scale


def doubling_check(param: SpectralParam, a: GroupElement,
                   phi: float) -> DoublingResult:
    """Spherical function at a exp(2 i phi h) x0 against the split pairing
    < pi(a exp(i phi h)) v_K, pi(exp(i phi h)) v_K >."""
    if abs(phi) >= OMEGA_RADIUS:
        raise DomainError(f"|phi| = {abs(phi)} not < pi/4")
    if not a.is_real:
        raise ValueError("doubling check expects a real torus element")
    w = cmath.exp(4j * phi) * 1j
    point = PairPoint(w, -w).apply(a.m)
    lhs = phi_lambda(param, point)
    half = continue_vK(param, OMEGA_RADIUS - abs(phi))
    rhs = rep_pairing(apply_pi(param, a, half), half)
    return DoublingResult(lhs, rhs)


# -- H-invariant functionals ------------------------------------------------

class HFunctional:
    """Functionals fixed by the hyperbolic rotation subgroup.

    eta1 and eta2 are supported on the two open orbits |x| < 1 and
    |x| > 1 of the boundary circle; v_H and its conjugate are the
    intertwining-natural combinations obtained as boundary limits of the
    continued spherical vector.  `convention` picks the phase bookkeeping:
    'derived' uses exp(-+ i pi/4 (1 - i lam)), the limit of the
    continuation prefactors; 'printed' uses exp(-+ i pi/4 (1 - lam)).
    """

    def __init__(self, kind: str, param: SpectralParam,
                 convention: str = "derived"):
        if kind not in ("eta1", "eta2", "v_H", "v_H_bar"):
            raise ValueError(f"unknown functional kind {kind!r}")
        if convention not in ("derived", "printed"):
            raise ValueError("convention must be 'derived' or 'printed'")
        self.kind = kind
        self.param = param
        self.convention = convention
        self.hints = (-1.0, 1.0)

    def coefficients(self) -> tuple[complex, complex]:
        """(eta1, eta2) coefficients; (1, 0) and (0, 1) for the etas."""
        if self.kind == "eta1":
            return 1.0, 0.0
        if self.kind == "eta2":
            return 0.0, 1.0
        lam = self.param.lam
        arg = 1.0 - 1j * lam if self.convention == "derived" else 1.0 - lam
        c1 = cmath.exp(-1j * math.pi / 4.0 * arg)
        c2 = cmath.exp(1j * math.pi / 4.0 * arg)
        if self.kind == "v_H_bar":
            c1, c2 = c1.conjugate(), c2.conjugate()
        return c1, c2

    def value(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        sig = self.param.vector_exponent
        out = np.zeros(x.size, dtype=complex)
        c1, c2 = self.coefficients()
        inner = np.abs(x) < 1.0
        outer = np.abs(x) > 1.0
        if c1 != 0 and np.any(inner):
            out[inner] = c1 / SQRT_PI * np.exp(sig * np.log1p(-x[inner] ** 2))
        if c2 != 0 and np.any(outer):
            out[outer] = c2 / SQRT_PI * np.exp(sig * np.log(x[outer] ** 2 - 1.0))
        return out


def h_functional_eval(hf: HFunctional, psi: SmoothVector,
                      cfg: QuadratureConfig = REPRESENTATION_CFG) -> complex:
    """<psi, hf>: regularized pairing with hints at the endpoint
    singularities x = +-1 (integrable, of inverse-square-root modulus)."""
    hints = tuple(sorted(set(hf.hints) | set(psi.hints)))
    lo, hi = psi.support if psi.support is not None else (-math.inf, math.inf)
    res = integrate(lambda x: psi.value(x) * np.conj(hf.value(x)), lo, hi,
                    cfg.with_hints(hints))
    return res.value


def h_limit_gap(param: SpectralParam, psi: SmoothVector, eps: float,
                convention: str = "derived") -> float:
    """| <pi(a_eps) v_K, psi> - <v_H, psi> | at one eps."""
    vec = continue_vK(param, eps)
    lim = rep_pairing(vec, psi)
    target = np.conj(h_functional_eval(HFunctional("v_H", param, convention),
                                       psi))
    return abs(lim - complex(target))


# -- plurisubharmonicity of the norm ---------------------------------------

def group_disc(param: SpectralParam, phi0: float, direction: LieVector):
    """Holomorphic disc w |-> pi(exp(w D) exp(i phi0 h)) v_K through the
    crown point exp(i phi0 h) x0 (real frames drop from norms)."""
    if not 0.0 <= phi0 < OMEGA_RADIUS:
        raise DomainError("phi0 must lie in [0, pi/4)")
    anchor = continue_vK(param, OMEGA_RADIUS - phi0)

    def curve(w: complex) -> SmoothVector:
        if w == 0:
            return anchor
        return apply_pi_flow(param, direction, w, anchor)

    return curve


def levi_check(param: SpectralParam, curve, w0: complex = 0.0,
               step: float = 1e-2) -> float:
    """Discrete Laplacian of w |-> log ||pi(c(w)) v_K||^2 at w0.

    Positive values witness subharmonicity along the disc, the testable
    form of strict plurisubharmonicity of the squared-norm potential.
    """
    def F(w):
        return 2.0 * math.log(rep_norm(curve(w)))

    center = F(w0)
    stencil = [F(w0 + step), F(w0 - step), F(w0 + 1j * step),
               F(w0 - 1j * step)]
    spread = max(abs(v - center) for v in stencil)
    if spread < 1e-12 * max(1.0, abs(center)):
        raise StepTooSmall(f"stencil spread {spread:.2e} lost to cancellation")
    return (sum(stencil) - 4.0 * center) / step ** 2
