"""Closed-form vectors with exact derivative jets.

Everything the representation-theoretic modules integrate is built from a
small expression algebra whose nodes evaluate Taylor jets (f, f', ...,
f^(n)) at arrays of real points.  The key node is the complex power of a
quadratic, kappa * q(x)^sigma, whose derivatives obey the polynomial
recurrence R_{n+1} = R_n' q + (sigma - n) R_n q'; this covers the
spherical vector, all of its analytic continuations, and their images
under the group action, with no finite-difference noise anywhere.

Branch discipline: a quadratic power is only admitted when q(R) avoids the
cut (-inf, 0], in which case the principal branch is the continuous one.
Group translates of continued vectors stay in the algebra because the
pulled-back quadratic (c x + d)^2 q(m(x)) again avoids the cut and the
modulus factors of the unitary action cancel the leftover real-linear
powers exactly.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BranchCut

_MAX_ORDER = 5


def _binom(n, k):
    return math.comb(n, k)


def _leibniz(aj: np.ndarray, bj: np.ndarray) -> np.ndarray:
    """Jets of a product from jets of the factors."""
    n = min(aj.shape[0], bj.shape[0]) - 1
    out = np.zeros((n + 1,) + aj.shape[1:], dtype=complex)
    for k in range(n + 1):
        for j in range(k + 1):
            out[k] += _binom(k, j) * aj[j] * bj[k - j]
    return out


def _compose_jets(fj: np.ndarray, mj: np.ndarray) -> np.ndarray:
    """Jets of f o m from jets of f at m(x) and jets of m at x (order <= 4)."""
    n = min(fj.shape[0], mj.shape[0]) - 1
    out = np.zeros((n + 1,) + fj.shape[1:], dtype=complex)
    out[0] = fj[0]
    if n >= 1:
        out[1] = fj[1] * mj[1]
    if n >= 2:
        out[2] = fj[2] * mj[1] ** 2 + fj[1] * mj[2]
    if n >= 3:
        out[3] = (fj[3] * mj[1] ** 3 + 3.0 * fj[2] * mj[1] * mj[2]
                  + fj[1] * mj[3])
    if n >= 4:
        out[4] = (fj[4] * mj[1] ** 4 + 6.0 * fj[3] * mj[1] ** 2 * mj[2]
                  + fj[2] * (4.0 * mj[1] * mj[3] + 3.0 * mj[2] ** 2)
                  + fj[1] * mj[4])
    if n >= 5:
        raise ValueError("jet composition implemented up to order 4")
    return out


def _poly_jets(coeffs, x: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros((order + 1, x.size), dtype=complex)
    c = np.asarray(coeffs, dtype=complex)
    for k in range(order + 1):
        out[k] = P.polyval(x, c) if c.size else 0.0
        c = P.polyder(c)
    return out


def _offcut_ok(q, allow_touch: bool = False) -> bool:
    """True when the quadratic's values on R avoid the cut (-inf, 0]."""
    q2, q1, q0 = complex(q[2]), complex(q[1]), complex(q[0])
    # real zeros of Im q(x); there Re q must be positive
    candidates = []
    a, b, c = q2.imag, q1.imag, q0.imag
    if abs(a) > 1e-300:
        disc = b * b - 4.0 * a * c
        if disc >= 0:
            r = math.sqrt(disc)
            candidates += [(-b + r) / (2 * a), (-b - r) / (2 * a)]
    elif abs(b) > 1e-300:
        candidates.append(-c / b)
    else:
        if abs(c) > 1e-300:
            return True  # Im q is a nonzero constant: never on the real cut
        # q is real: need q(x) > 0 (or >= 0 when touching is allowed)
        ar, br, cr = q2.real, q1.real, q0.real
        if abs(ar) < 1e-300:
            if abs(br) < 1e-300:
                return cr > 0 or (allow_touch and cr >= 0)
            return False
        mn = cr - br * br / (4.0 * ar) if ar > 0 else -math.inf
        return mn > 0 or (allow_touch and mn >= -1e-300)
    for x in candidates:
        val = (q2 * x + q1) * x + q0
        if val.real <= 0 and not (allow_touch and abs(val) < 1e-300):
            return False
    return True


class SmoothVector:
    """Base class: complex-valued function on R with jets up to order 4.

    support None means the whole line; decay_power p models |f| ~ |x|^-p
    at infinity and is None for compactly supported vectors.
    """

    support: tuple[float, float] | None = None
    hints: tuple[float, ...] = ()
    decay_power: float | None = None

    def jet(self, x: np.ndarray, order: int) -> np.ndarray:
        raise NotImplementedError

    def value(self, x):
        return self.jet(np.atleast_1d(np.asarray(x, dtype=float)), 0)[0]

    def __call__(self, x):
        scalar = np.isscalar(x)
        v = self.value(x)
        return complex(v[0]) if scalar else v


class QuadraticPower(SmoothVector):
    """kappa * (q2 x^2 + q1 x + q0)^sigma with the principal branch."""

    def __init__(self, kappa: complex, q, sigma: complex, *,
                 allow_touch_zero: bool = False, hints=()):
        q = np.asarray(q, dtype=complex)  # ascending: (q0, q1, q2)
        if q.shape != (3,):
            raise ValueError("quadratic needs three ascending coefficients")
        if not _offcut_ok((q[2], q[1], q[0]), allow_touch_zero):
            raise BranchCut(f"quadratic {q} meets the cut (-inf, 0] on R")
        self.kappa = complex(kappa)
        self.q = q
        self.sigma = complex(sigma)
        self.hints = tuple(hints)
        self.decay_power = -2.0 * self.sigma.real if q[2] != 0 else (
            -self.sigma.real if q[1] != 0 else 0.0)
        self._r_polys = [np.array([1.0 + 0.0j])]

    def _r_poly(self, n: int) -> np.ndarray:
        while len(self._r_polys) <= n:
            k = len(self._r_polys) - 1
            rk = self._r_polys[-1]
            nxt = P.polyadd(P.polymul(P.polyder(rk), self.q),
                            (self.sigma - k) * P.polymul(rk, P.polyder(self.q)))
            self._r_polys.append(nxt)
        return self._r_polys[n]

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x))
        qv = P.polyval(x, self.q)
        logq = np.log(qv)  # principal; valid by the off-cut invariant
        out = np.zeros((order + 1, x.size), dtype=complex)
        for n in range(order + 1):
            rn = P.polyval(x, self._r_poly(n))
            out[n] = self.kappa * rn * np.exp((self.sigma - n) * logq)
        return out

    def value_complex(self, z: np.ndarray) -> np.ndarray:
        """Value at complex arguments; caller owns branch validity."""
        qv = P.polyval(np.asarray(z, dtype=complex), self.q)
        if np.any((qv.real <= 0) & (np.abs(qv.imag) < 1e-300)):
            raise BranchCut("complex argument drove the quadratic to the cut")
        return self.kappa * np.exp(self.sigma * np.log(qv))


class PolyVector(SmoothVector):
    def __init__(self, coeffs, hints=()):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.hints = tuple(hints)
        self.decay_power = float(-(self.coeffs.size - 1))

    def jet(self, x, order):
        return _poly_jets(self.coeffs, np.atleast_1d(np.asarray(x)), order)


class ExpPoly(SmoothVector):
    """kappa * p(x) * exp(-(a x^2 + b x + c)) with Re a > 0 (Schwartz type)."""

    def __init__(self, kappa: complex, poly, quad):
        quad = np.asarray(quad, dtype=complex)  # ascending (c, b, a)
        if quad.shape != (3,) or quad[2].real <= 0:
            raise ValueError("Gaussian needs Re(leading coefficient) > 0")
        self.kappa = complex(kappa)
        self.quad = quad
        self._polys = [np.asarray(poly, dtype=complex)]
        self.decay_power = math.inf

    def _p(self, n):
        dq = P.polyder(self.quad)
        while len(self._polys) <= n:
            pk = self._polys[-1]
            self._polys.append(P.polysub(P.polyder(pk), P.polymul(pk, dq)))
        return self._polys[n]

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x))
        gauss = np.exp(-P.polyval(x, self.quad))
        out = np.zeros((order + 1, x.size), dtype=complex)
        for n in range(order + 1):
            out[n] = self.kappa * P.polyval(x, self._p(n)) * gauss
        return out


class Sum(SmoothVector):
    def __init__(self, terms):
        """terms: iterable of (coefficient, SmoothVector)."""
        self.terms = [(complex(c), v) for c, v in terms]
        sups = [v.support for _, v in self.terms]
        if any(s is None for s in sups):
            self.support = None
        else:
            self.support = (min(s[0] for s in sups), max(s[1] for s in sups))
        self.hints = tuple(sorted({h for _, v in self.terms for h in v.hints}))
        decays = [v.decay_power for _, v in self.terms]
        self.decay_power = None if any(d is None for d in decays) else min(decays)

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x))
        out = np.zeros((order + 1, x.size), dtype=complex)
        for c, v in self.terms:
            out += c * v.jet(x, order)
        return out


class Product(SmoothVector):
    def __init__(self, u: SmoothVector, v: SmoothVector):
        self.u, self.v = u, v
        if u.support is not None and v.support is not None:
            lo = max(u.support[0], v.support[0])
            hi = min(u.support[1], v.support[1])
            self.support = (lo, hi) if lo < hi else (lo, lo)
        else:
            self.support = u.support if u.support is not None else v.support
        self.hints = tuple(sorted(set(u.hints) | set(v.hints)))
        if u.decay_power is None or v.decay_power is None:
            self.decay_power = None
        else:
            self.decay_power = u.decay_power + v.decay_power

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x))
        return _leibniz(self.u.jet(x, order), self.v.jet(x, order))


class DilatedArg(SmoothVector):
    """prefactor * child(alpha x + beta), real affine argument."""

    def __init__(self, child: SmoothVector, alpha: float, beta: float = 0.0,
                 prefactor: complex = 1.0):
        if alpha == 0:
            raise ValueError("alpha must be nonzero")
        self.child = child
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.prefactor = complex(prefactor)
        if child.support is not None:
            a = (child.support[0] - beta) / alpha
            b = (child.support[1] - beta) / alpha
            self.support = (min(a, b), max(a, b))
        self.hints = tuple(sorted((h - beta) / alpha for h in child.hints))
        self.decay_power = child.decay_power

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x))
        cj = self.child.jet(self.alpha * x + self.beta, order)
        scale = self.prefactor * self.alpha ** np.arange(order + 1)
        return cj * scale[:, None]


def _interval_preimage(lo, hi, ginv):
    """Preimage of [lo, hi] under the Mobius map of ginv, or None if the
    pole falls inside (the preimage then wraps around infinity)."""
    a, b, c, d = (float(ginv[0, 0].real), float(ginv[0, 1].real),
                  float(ginv[1, 0].real), float(ginv[1, 1].real))
    def inv(y):  # inverse of (a y + b)/(c y + d)
        den = -c * y + a
        return math.inf if den == 0 else (d * y - b) / den
    p1, p2 = inv(lo), inv(hi)
    if math.isinf(p1) or math.isinf(p2):
        return None
    lo2, hi2 = min(p1, p2), max(p1, p2)
    if c != 0:
        pole = -d / c
        if lo2 <= pole <= hi2:
            return None
    return (lo2, hi2)


class MobiusPulled(SmoothVector):
    """Unitary principal-series action of a real group element.

    f(x) = |c x + d|^(-1 + i lam) child((a x + b)/(c x + d)) where
    (a, b; c, d) is the *inverse* of the acting element.  Jets combine the
    closed-form derivatives of the Mobius map, order-4 composition, and
    the modulus factor |u|^nu with u = c x + d.
    """

    def __init__(self, child: SmoothVector, ginv: np.ndarray, lam: float):
        ginv = np.asarray(ginv, dtype=complex)
        if np.max(np.abs(ginv.imag)) > 1e-12:
            raise ValueError("real action requires a real group element")
        self.child = child
        self.gi = ginv.real
        self.nu = complex(-1.0, lam)
        a, b, c, d = self.gi.ravel()
        if child.support is not None:
            self.support = _interval_preimage(*child.support, self.gi)
        hints = []
        for h in child.hints:
            den = -c * h + a
            if den != 0:
                hints.append((d * h - b) / den)
        if c != 0:
            hints.append(-d / c)
        self.hints = tuple(sorted(hints))
        if c == 0:
            self.decay_power = child.decay_power
        else:
            self.decay_power = 1.0  # modulus factor decay; child tends to f(a/c)

    def _mobius_jets(self, x, order):
        a, b, c, d = self.gi.ravel()
        u = c * x + d
        mj = np.zeros((order + 1, x.size), dtype=complex)
        mj[0] = (a * x + b) / u
        sign = 1.0
        fact = 1.0
        for n in range(1, order + 1):
            # m^(n) = (-1)^(n-1) n! c^(n-1) u^(-n-1)
            mj[n] = sign * fact * c ** (n - 1) * u ** (-(n + 1))
            sign = -sign
            fact *= (n + 1)
        return mj

    def _modulus_jets(self, x, order):
        a, b, c, d = self.gi.ravel()
        u = c * x + d
        au = np.abs(u)
        sgn = np.sign(u)
        out = np.zeros((order + 1, x.size), dtype=complex)
        coeff = 1.0 + 0.0j
        for n in range(order + 1):
            out[n] = coeff * (c * sgn) ** n * au ** (self.nu - n)
            coeff *= (self.nu - n)
        return out

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        mj = self._mobius_jets(x, order)
        fj_at_m = self.child.jet(mj[0].real, order)
        comp = _compose_jets(fj_at_m, mj)
        return _leibniz(self._modulus_jets(x, order), comp)


class FlowPulled(SmoothVector):
    """Value-only analytic continuation of the action along a one-parameter
    flow exp(sigma * W), sigma in [0, 1], applied to a quadratic power.

    Because the multiplier exponent of the unitary action equals the
    vector's own exponent, the continued value telescopes to
    kappa * P(sigma; x)^sigma with the pole-free polynomial carrier
        P = (c x + d)^2 q0 + (a x + b)(c x + d) q1 + (a x + b)^2 q2,
    whose argument is accumulated stepwise from the identity; the
    principal branch is thus corrected by the actual winding instead of
    being trusted pointwise.  Only the order-zero jet is provided.
    """

    def __init__(self, child: "QuadraticPower", flow_matrix_fn, lam: float,
                 n_steps: int = 32):
        if not isinstance(child, QuadraticPower):
            raise TypeError("flow continuation is defined on quadratic powers")
        if abs(child.sigma - 0.5 * complex(-1.0, lam)) > 1e-12:
            raise ValueError("flow continuation needs the unitary exponent")
        self.child = child
        self.flow = flow_matrix_fn  # sigma in [0,1] -> inverse group matrix
        self.n_steps = int(n_steps)
        self.decay_power = 1.0
        self.hints = ()

    def _carrier(self, x: np.ndarray, sigma: float) -> np.ndarray:
        a, b, c, d = np.asarray(self.flow(sigma), dtype=complex).ravel()
        q0, q1, q2 = self.child.q
        top = a * x + b
        bot = c * x + d
        return bot * bot * q0 + top * bot * q1 + top * top * q2

    def jet(self, x, order):
        if order > 0:
            raise ValueError("flow continuation provides values only")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        n_steps = self.n_steps
        for attempt in range(6):
            carrier = self._carrier(x, 0.0)
            arg = np.angle(carrier)
            ok = True
            for k in range(1, n_steps + 1):
                nxt = self._carrier(x, k / n_steps)
                if np.any(np.abs(nxt) < 1e-280):
                    raise BranchCut("flow continuation met a carrier zero")
                step = np.angle(nxt / carrier)
                if np.max(np.abs(step)) > 2.0:
                    ok = False
                    break
                arg += step
                carrier = nxt
            if ok:
                log_p = np.log(np.abs(carrier)) + 1j * arg
                return (self.child.kappa
                        * np.exp(self.child.sigma * log_p))[None, :]
            n_steps *= 4
        raise BranchCut("flow winding did not resolve under refinement")


class WeightedDeriv(SmoothVector):
    """p(x) * child^(order_shift); used for radial operators x^j d^j/dx^j."""

    def __init__(self, child: SmoothVector, poly, order_shift: int):
        self.child = child
        self.poly = np.asarray(poly, dtype=complex)
        self.shift = int(order_shift)
        self.support = child.support
        self.hints = child.hints
        self.decay_power = child.decay_power

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        cj = self.child.jet(x, order + self.shift)
        pj = _poly_jets(self.poly, x, order)
        return _leibniz(pj, cj[self.shift:])


def _glue_jets(t: np.ndarray, order: int) -> np.ndarray:
    """Jets of exp(-1/t) for t > 0 (zero extended for t <= 0)."""
    t = np.asarray(t, dtype=float)
    pos = t > 0
    out = np.zeros((order + 1, t.size), dtype=complex)
    if not np.any(pos):
        return out
    tp = t[pos]
    u = 1.0 / tp
    e = np.exp(-u)
    poly = np.array([0.0, 0.0, 1.0])  # p_1(u) = u^2 after one derivative
    out[0][pos] = e
    pk = np.array([1.0])
    for n in range(1, order + 1):
        # d/dt [e^{-1/t} p(1/t)] = e^{-1/t} u^2 (p(u) - p'(u))
        pk = P.polymul(poly, P.polysub(pk, P.polyder(pk)))
        out[n][pos] = e * P.polyval(u, pk)
    return out


class RadialStep(SmoothVector):
    """Smooth even cutoff: 1 for |x| <= a, 0 for |x| >= b.

    The transition uses s(t) = g(t)/(g(t) + g(1-t)) with g(t) = exp(-1/t),
    evaluated at t = (b - |x|)/(b - a); all derivatives vanish at both
    transition endpoints.
    """

    def __init__(self, a: float, b: float):
        if not 0 < a < b:
            raise ValueError("need 0 < a < b")
        self.a = float(a)
        self.b = float(b)
        self.support = (-b, b)
        self.hints = (-b, -a, a, b)
        self.decay_power = None

    def jet(self, x, order):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        ax = np.abs(x)
        out = np.zeros((order + 1, x.size), dtype=complex)
        out[0][ax <= self.a] = 1.0
        trans = (ax > self.a) & (ax < self.b)
        if not np.any(trans):
            return out
        width = self.b - self.a
        t = (self.b - ax[trans]) / width
        g1 = _glue_jets(t, order)
        g2 = _glue_jets(1.0 - t, order)
        denom = g1 + g2 * (-1.0) ** np.arange(order + 1)[:, None]
        # quotient jets s = g1 / (g1 + g(1-t)) via Leibniz on s * denom = g1
        sj = np.zeros_like(g1)
        sj[0] = g1[0] / denom[0]
        for n in range(1, order + 1):
            acc = g1[n].copy()
            for j in range(n):
                acc -= _binom(n, j) * sj[j] * denom[n - j]
            sj[n] = acc / denom[0]
        # chain through t(x) = (b - |x|)/width, dt/dx = -sign(x)/width
        slope = -np.sign(x[trans]) / width
        for n in range(order + 1):
            out[n][trans] = sj[n] * slope ** n
        return out
