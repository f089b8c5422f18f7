"""crownkit: numerics for the crown domain of the upper half plane.

Structure theory of SL(2,R) and its complexification, the crown domain in
the pair model with its parameterizations and boundary strata, the
holomorphic horospherical projection and complex convexity, analytically
continued spherical principal series with Sobolev-norm machinery, the
spherical transform with Parseval/orbital identities, invariant
reproducing kernels, and the decay pipeline for periodic eigenfunction
coefficients.
"""

__version__ = "0.1.0"
