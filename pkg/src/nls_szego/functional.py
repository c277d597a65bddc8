"""Gagliardo-Nirenberg-type quotients, their gradients, and elliptic residuals.

The central object is

    I(f) = (||f'||^m ||f||^{m+2} + gamma |||D|^{1/2} f||^{2m} ||f||^2)
           / ||f||_{L^{2m+2}}^{2m+2}

over nonzero Hardy fields (or general fields for the gamma = 0 comparison,
where the half-derivative factor uses |k|^{1/2}).  The quotient is invariant
under amplitude scaling, phase rotation and translation.

``first_variation`` returns the Wirtinger gradient g = dI/d(conj f), so a
central difference of I along any direction h satisfies

    (I(f + eps h) - I(f - eps h)) / (2 eps)  ->  2 Re <g, h>.

Setting g = 0 and clearing denominators reproduces the traveling-wave
Euler-Lagrange equation term for term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as _sfft

from .errors import InvalidArgumentError
from .field import (
    HardyField,
    SpectralField,
    _pad_factor,
    _padded_samples,
    _truncate_modes,
    hs_norm,
    inner_product,
    l2_norm_sq,
)

_ZERO_FLOOR = 1e-12


@dataclass(frozen=True)
class FunctionalParams:
    """Degree and momentum weight of the quotient functional."""
    m: int = 2
    gamma: float = 2.0

    def __post_init__(self):
        if self.m < 2 or self.m != int(self.m):
            raise InvalidArgumentError(
                "m must be an integer >= 2 (polynomial nonlinearity required)")
        if self.gamma < 0:
            raise InvalidArgumentError("gamma must be nonnegative")


def _norm_parts(f: SpectralField, m: int):
    """(A, B, C, S) = (||f'||^2, ||f||^2, |||D|^{1/2}f||^2, ||f||_{2m+2}^{2m+2})

    plus the padded workspace needed to reuse the fine samples.
    """
    g = f.grid
    c = f.coefficients
    dens = c.real ** 2 + c.imag ** 2
    B = float(np.sum(dens) / g.length)
    A = float(np.sum(g.k ** 2 * dens) / g.length)
    C = float(np.sum(np.abs(g.k) * dens) / g.length)
    factor = _pad_factor(2 * m + 1)
    w, N = _padded_samples(c, g.n, factor)
    dxN = g.length / N
    r2 = w.real * w.real + w.imag * w.imag
    S = float(np.sum(r2 ** (m + 1)) * dxN / dxN ** (2 * m + 2))
    return A, B, C, S, (w, r2, N, dxN)


def evaluate_functional(f: SpectralField, params: FunctionalParams) -> float:
    """Value of the quotient functional at a nonzero field."""
    if l2_norm_sq(f) <= _ZERO_FLOOR ** 2:
        raise InvalidArgumentError("functional undefined at (numerically) zero fields")
    m = params.m
    A, B, C, S, _ = _norm_parts(f, m)
    return (A ** (m / 2) * B ** ((m + 2) / 2) + params.gamma * C ** m * B) / S


def first_variation(f: SpectralField, params: FunctionalParams,
                    _with_value: bool = False):
    """Projected Wirtinger gradient of the quotient at f.

    For Hardy inputs the result is again a Hardy field (the gradient is
    projected); for general fields the |D|-term uses |k| and no projection
    is applied.
    """
    if l2_norm_sq(f) <= _ZERO_FLOOR ** 2:
        raise InvalidArgumentError("gradient undefined at (numerically) zero fields")
    m = params.m
    g = f.grid
    c = f.coefficients
    hardy = isinstance(f, HardyField)
    A, B, C, S, (w, r2, N, dxN) = _norm_parts(f, m)
    I = (A ** (m / 2) * B ** ((m + 2) / 2) + params.gamma * C ** m * B) / S

    v = r2 ** m * w
    cv = _sfft.fft(v, overwrite_x=True)
    nl = _truncate_modes(cv, g.n)
    nl *= dxN ** (-2 * m)
    if hardy:
        nl[g.negative_modes] = 0.0

    gc = ((m / 2) * A ** (m / 2 - 1) * B ** ((m + 2) / 2) * (g.k ** 2 * c)
          + (((m + 2) / 2) * A ** (m / 2) * B ** (m / 2)
             + params.gamma * C ** m) * c
          + params.gamma * m * C ** (m - 1) * B * (np.abs(g.k) * c)) / S \
        - ((m + 1) * I / S) * nl
    if hardy:
        gc[g.negative_modes] = 0.0
        out = HardyField(g, coefficients=gc)
    else:
        out = SpectralField(g, coefficients=gc)
    if _with_value:
        return out, I, (A, B, C, S)
    return out


def elliptic_residual(Q: HardyField, omega: float, c: float, m: int = 2) -> float:
    """Relative misfit of dxx Q + Pi(|Q|^{2m} Q) - omega Q - c D Q.

    Returns ||residual||_{L2} / ||Q||_{H1}.
    """
    if l2_norm_sq(Q) <= _ZERO_FLOOR ** 2:
        raise InvalidArgumentError("residual undefined at zero fields")
    from .field import projected_nonlinearity
    g = Q.grid
    coef = Q.coefficients
    resid = (-g.k ** 2 * coef
             + projected_nonlinearity(Q, m).coefficients
             - omega * coef - c * g.k * coef)
    l2 = np.sqrt(np.sum(resid.real ** 2 + resid.imag ** 2) / g.length)
    return float(l2 / hs_norm(Q, 1.0))


def fit_elliptic_multipliers(Q: HardyField, m: int = 2):
    """Least-squares (omega, c) over span{Q, DQ} for the elliptic misfit.

    Minimizes ||(dxx Q + Pi(|Q|^{2m} Q)) - omega Q - c D Q||_{L2}; returns
    (omega, c).  By optimality the fitted residual is no larger than the
    residual at any other multiplier pair.
    """
    from .field import projected_nonlinearity, spectral_derivative
    rhs = SpectralField(Q.grid, coefficients=(
        -Q.grid.k ** 2 * Q.coefficients
        + projected_nonlinearity(Q, m).coefficients))
    dq = spectral_derivative(Q, 1, signed=True)
    g11 = l2_norm_sq(Q)
    g22 = l2_norm_sq(dq)
    g12 = inner_product(Q, dq)  # real for Hardy fields: sum k |c|^2 / L
    b1 = inner_product(rhs, Q)
    b2 = inner_product(rhs, dq)
    gram = np.array([[g11, g12.real], [g12.real, g22]])
    rhsv = np.array([b1.real, b2.real])
    omega, c = np.linalg.solve(gram, rhsv)
    return float(omega), float(c)
