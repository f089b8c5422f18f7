"""Matrix models of SL(2,R), SL(2,C), their standard subgroups, and the
decompositions used throughout the package.

Conventions:
    a_t   = diag(t, 1/t), t > 0            (split torus A)
    a_z   = diag(z, 1/z), z in C*          (complexified torus)
    n_x   = [[1, x], [0, 1]]               (unipotent N, complex x allowed)
    k_th  = [[cos, sin], [-sin, cos]]      (rotation group K)
    b_t   = diag(1/sqrt(t), sqrt(t))       (dilation used in dyadic estimates)
    h, e, f = sl(2) basis with u = e - f spanning Lie(K)

The complexified horospherical decomposition writes an affine point
(z1, z2), z1 != z2, as n_w a_zeta K_C with w = (z1+z2)/2 and
zeta^2 = (z1-z2)/(2i); zeta is defined modulo the two-group M = {+-1} and
the stored representative has argument in (-pi/2, pi/2].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagonalPoint, PointAtInfinity
from .pairmodel import PairPoint, is_infinity, mobius_apply

_DET_TOL = 1e-12

H_MAT = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
E_MAT = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
F_MAT = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
U_MAT = E_MAT - F_MAT


class GroupElement:
    """2x2 complex matrix of determinant one, with a real-entries flag."""

    __slots__ = ("m", "is_real")

    def __init__(self, m, *, check: bool = True):
        m = np.asarray(m, dtype=complex).reshape(2, 2)
        if check:
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if abs(det - 1.0) > 1e-9:
                raise ValueError(f"determinant {det} != 1")
        self.m = m
        self.is_real = bool(np.max(np.abs(m.imag)) < _DET_TOL)

    # -- group structure ---------------------------------------------------

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.m @ other.m, check=False)

    def inverse(self) -> "GroupElement":
        a, b, c, d = self.m.ravel()
        return GroupElement(np.array([[d, -b], [-c, a]]), check=False)

    def transpose(self) -> "GroupElement":
        return GroupElement(self.m.T, check=False)

    def det(self) -> complex:
        return self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0]

    # -- actions -------------------------------------------------------------

    def act(self, z):
        """Fractional linear action on a point of P1(C)."""
        return mobius_apply(self.m, z)

    def act_pair(self, p: PairPoint) -> PairPoint:
        return p.apply(self.m)

    def pair_point(self) -> PairPoint:
        """Image of the base point: g |-> (g(i), g(-i))."""
        return PairPoint(self.act(1j), self.act(-1j))

    def isclose(self, other: "GroupElement", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.m - other.m)) <= tol)

    def __repr__(self):
        return f"GroupElement({self.m.tolist()})"


IDENTITY = GroupElement(np.eye(2))


def a_t(t: float) -> GroupElement:
    if not t > 0:
        raise ValueError("a_t needs t > 0")
    return GroupElement(np.diag([t, 1.0 / t]), check=False)


def a_z(z: complex) -> GroupElement:
    if z == 0:
        raise ValueError("a_z needs z != 0")
    return GroupElement(np.diag([z, 1.0 / z]), check=False)


def n_x(x: complex) -> GroupElement:
    return GroupElement(np.array([[1.0, x], [0.0, 1.0]]), check=False)


def nbar_x(x: complex) -> GroupElement:
    return GroupElement(np.array([[1.0, 0.0], [x, 1.0]]), check=False)


def k_theta(theta: float) -> GroupElement:
    c, s = math.cos(theta), math.sin(theta)
    return GroupElement(np.array([[c, s], [-s, c]]), check=False)


def b_t(t: float) -> GroupElement:
    """diag(1/sqrt t, sqrt t); contracts toward the origin for t < 1."""
    if not t > 0:
        raise ValueError("b_t needs t > 0")
    r = math.sqrt(t)
    return GroupElement(np.diag([1.0 / r, r]), check=False)


def a_eps(eps: float) -> GroupElement:
    """diag(exp(i(pi/4 - eps)), exp(-i(pi/4 - eps))); a_eps -> z_H as eps -> 0."""
    return a_z(cmath.exp(1j * (math.pi / 4.0 - eps)))


Z_H = a_eps(0.0)
K0 = GroupElement(np.array([[1.0, 1.0], [-1.0, 1.0]]) / math.sqrt(2.0))


@dataclass(frozen=True)
class LieVector:
    """Element c_h*h + c_e*e + c_f*f of sl(2), coefficients real or complex."""

    c_h: complex = 0.0
    c_e: complex = 0.0
    c_f: complex = 0.0

    def matrix(self) -> np.ndarray:
        return self.c_h * H_MAT + self.c_e * E_MAT + self.c_f * F_MAT

    def weyl(self) -> "LieVector":
        """Weyl group action on the torus direction: c_h -> -c_h."""
        return LieVector(-self.c_h, self.c_e, self.c_f)

    # -- the three convexity domains --------------------------------------

    def in_omega(self, tol: float = 0.0) -> bool:
        """Diagonal segment: c_e = c_f = 0 and |c_h| < pi/4."""
        if abs(self.c_e) > 1e-14 or abs(self.c_f) > 1e-14:
            return False
        if abs(complex(self.c_h).imag) > 1e-14:
            return False
        return abs(complex(self.c_h).real) < math.pi / 4.0 - tol

    def in_lambda(self, tol: float = 0.0) -> bool:
        """Nilpotent segment: c_h = c_f = 0 and |c_e| < 1."""
        if abs(self.c_h) > 1e-14 or abs(self.c_f) > 1e-14:
            return False
        if abs(complex(self.c_e).imag) > 1e-14:
            return False
        return abs(complex(self.c_e).real) < 1.0 - tol

    def in_omega_hat(self, tol: float = 0.0) -> bool:
        """Symmetric traceless with spectrum inside (-pi/4, pi/4)."""
        m = self.matrix()
        if np.max(np.abs(m.imag)) > 1e-14:
            return False
        if abs(m[0, 1] - m[1, 0]) > 1e-14:
            return False
        radius = math.sqrt(float(m[0, 0].real) ** 2
                           + float(m[0, 1].real) * float(m[1, 0].real))
        return radius < math.pi / 4.0 - tol


H_VEC = LieVector(c_h=1.0)
E_VEC = LieVector(c_e=1.0)
F_VEC = LieVector(c_f=1.0)
U_VEC = LieVector(c_e=1.0, c_f=-1.0)


def exp_lie(v: LieVector, scale: complex = 1.0) -> GroupElement:
    """Matrix exponential of scale * v, in closed form.

    For traceless 2x2 matrices M with M^2 = delta^2 * Id this is
    cosh(delta) Id + sinh(delta)/delta * M, which is exact.
    """
    m = complex(scale) * v.matrix()
    delta_sq = m[0, 0] * m[0, 0] + m[0, 1] * m[1, 0]
    delta = cmath.sqrt(delta_sq)
    if abs(delta) < 1e-8:
        # series fallback; error O(|delta|^8) below double precision here
        c = 1.0 + delta_sq / 2.0 + delta_sq ** 2 / 24.0
        s = 1.0 + delta_sq / 6.0 + delta_sq ** 2 / 120.0
    else:
        c = cmath.cosh(delta)
        s = cmath.sinh(delta) / delta
    return GroupElement(c * np.eye(2) + s * m, check=False)


@dataclass(frozen=True)
class HalfPlaneDecomposition:
    """Real horospherical coordinates: g x0 = n_x a_t x0 with x+iy = g(i)."""

    n_part: float
    a_part: float

    def reassemble(self) -> GroupElement:
        return n_x(self.n_part) @ a_t(self.a_part)


def iwasawa_na(g: GroupElement) -> HalfPlaneDecomposition:
    """Unique (x, t) with g x0 = n_x a_t x0; acting on i reproduces g(i)."""
    if not g.is_real:
        raise ValueError("iwasawa_na needs a real group element")
    w = g.act(1j)
    if is_infinity(w):
        raise PointAtInfinity("real group element cannot send i to infinity")
    return HalfPlaneDecomposition(float(w.real), math.sqrt(float(w.imag)))


@dataclass(frozen=True)
class ComplexNADecomposition:
    """N_C A_C component of an affine point, torus part defined mod {+-1}.

    a_part is the representative with argument in (-pi/2, pi/2]; the flag
    records that -a_part describes the same coset.
    """

    n_part: complex
    a_part: complex
    sign_ambiguity: bool = True

    def reassemble(self) -> PairPoint:
        sq = self.a_part * self.a_part
        return PairPoint(1j * sq + self.n_part, -1j * sq + self.n_part)


def complex_na_decompose(z: PairPoint) -> ComplexNADecomposition:
    """Split an affine point as (i zeta^2 + w, -i zeta^2 + w).

    Raises PointAtInfinity off the affine chart and DiagonalPoint when the
    coordinates coincide.
    """
    if is_infinity(z.first) or is_infinity(z.second):
        raise PointAtInfinity(f"{z} has a coordinate at infinity")
    diff = z.first - z.second
    if diff == 0:
        raise DiagonalPoint("coordinates coincide")
    w = 0.5 * (z.first + z.second)
    zeta_sq = diff / 2j
    zeta = cmath.sqrt(zeta_sq)  # principal: argument in (-pi/2, pi/2]
    return ComplexNADecomposition(n_part=w, a_part=zeta)


def sym_model(g: GroupElement) -> np.ndarray:
    """Image of g in the symmetric-matrix model: g |-> g g^T (det 1)."""
    return g.m @ g.m.T


def p_invariant(g: GroupElement) -> complex:
    """Trace of the symmetric model; generates the K_C-invariants."""
    s = sym_model(g)
    return s[0, 0] + s[1, 1]


def p_of_pair(z: PairPoint) -> complex:
    """Trace invariant evaluated directly on an affine pair point.

    With zeta^2 = (z1-z2)/(2i) and w = (z1+z2)/2 the symmetric model of
    n_w a_zeta is [[zeta^2 + w^2/zeta^2, w/zeta^2], [w/zeta^2, 1/zeta^2]].
    """
    dec = complex_na_decompose(z)
    a = dec.a_part * dec.a_part
    w = dec.n_part
    return a + (w * w + 1.0) / a
