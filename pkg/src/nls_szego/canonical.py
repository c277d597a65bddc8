"""Canonical representatives of the symmetry orbit of a Hardy field.

Ground states of the quotient functional admit a representative whose
Fourier coefficients are nonnegative with linear phase; the operations here
extract it: ``positive_rearrangement`` replaces every coefficient by its
modulus (preserving all homogeneous Sobolev norms and never decreasing the
L^{2m+2} norm), ``linear_phase_fit`` measures how close the coefficient
phases are to linear in k, and ``canonicalize`` quotients out translation,
phase rotation and the rearrangement in one deterministic step.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .field import HardyField, l2_norm_sq, mass_center, phase_rotate, translate

_FLOOR = 1e-12


def positive_rearrangement(f: HardyField) -> HardyField:
    """Replace every Fourier coefficient by its modulus."""
    return HardyField(f.grid, coefficients=np.abs(f.coefficients).astype(np.complex128))


def linear_phase_fit(f: HardyField):
    """Weighted least-squares fit of the coefficient phases to a linear law.

    Fits arg u_hat(k) ~ -a*k + b over modes with |u_hat| above a relative
    floor, using weights |u_hat|^2, and returns ``(a, b, residual)``: the
    spatial offset a (so translating by a centers the phase), the constant
    phase b in [0, 2 pi), and the weighted RMS phase deviation in radians.
    """
    if l2_norm_sq(f) <= _FLOOR ** 2:
        raise InvalidArgumentError("phase fit undefined at zero fields")
    c = f.coefficients
    mags = np.abs(c)
    mask = mags > _FLOOR * mags.max()
    k = f.grid.k[mask]
    order = np.argsort(k)
    k = k[order]
    if k.size < 3:
        raise InvalidArgumentError("fewer than 3 participating modes")
    phases = np.unwrap(np.angle(c[mask][order]))
    wts = mags[mask][order] ** 2
    # weighted linear regression of phase against k
    W = wts / wts.sum()
    kbar = np.sum(W * k)
    pbar = np.sum(W * phases)
    denom = np.sum(W * (k - kbar) ** 2)
    if denom <= 0:
        raise InvalidArgumentError("degenerate mode distribution for the fit")
    slope = np.sum(W * (k - kbar) * (phases - pbar)) / denom
    intercept = pbar - slope * kbar
    resid = np.sqrt(np.sum(W * (phases - slope * k - intercept) ** 2))
    return float(-slope), float(intercept % (2 * np.pi)), float(resid)


def canonicalize(f: HardyField) -> HardyField:
    """Deterministic orbit representative of a nonzero Hardy field.

    Applies the positive rearrangement, recenters the mass-weighted mean
    position to 0, then rotates the global phase so the coefficient at the
    smallest positive participating wavenumber is real and positive.
    Idempotent up to roundoff, and invariant (up to amplitude) under
    lambda e^{i theta} translate(f, y).
    """
    if l2_norm_sq(f) <= _FLOOR ** 2:
        raise InvalidArgumentError("cannot canonicalize a zero field")
    g = positive_rearrangement(f)
    g = translate(g, mass_center(g))
    c = g.coefficients
    mags = np.abs(c)
    participating = (f.grid.k > 0) & (mags > _FLOOR * mags.max())
    if not participating.any():
        return g  # k = 0 only; already real positive after rearrangement
    k_min_idx = np.nonzero(participating)[0][np.argmin(f.grid.k[participating])]
    g = phase_rotate(g, -float(np.angle(c[k_min_idx])))
    return g
