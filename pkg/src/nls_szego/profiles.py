"""Closed-form reference profiles sampled onto a grid.

Lorentzian-type Hardy profiles (``qplus``, ``qc``) are built in Fourier space
by sampling their line transforms at the grid wavenumbers; everything else is
sampled in physical space.  Because a one-sided Lorentzian transform jumps at
k = 0, the zero mode needs a policy:

``"line"``
    the true transform value at 0, i.e. the principal-value integral of the
    profile.  This is exactly the Fourier data of the periodized profile, so
    samples stay pointwise faithful, but quadratic/sextic functionals inherit
    an O(1/L) bias from the one-sided jump.
``"corrected"``
    zero mode with the trapezoid half-weight modulus and the line-value
    imaginary part.  First-order quadrature effects cancel and the advertised
    norms and functionals of the profile reproduce their line values to
    O(1/L^2); the samples acquire a real offset of size pi*amp/L.

``periodic_soliton`` constructs the traveling wave that is *exact* for the
discrete flow: a geometric one-sided spectrum b p^j which solves the discrete
elliptic equation to machine precision, with speed matched exactly and
frequency omega = (3 - 2*theta/c - 5*(theta/c)^2) c^2/8 approaching 3c^2/8 as
the domain grows (theta = 2*pi/L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .field import HardyField, SpectralField, szego_project
from .grid import Grid


def _one_sided_lorentzian(grid: Grid, amp: complex, decay: float, zero_mode: str) -> HardyField:
    """Hardy field with line transform amp * (-2 pi i) e^{-decay * k}, k > 0."""
    k = grid.k
    coef = np.zeros(grid.n, dtype=np.complex128)
    pos = k > 0
    coef[pos] = amp * (-2j * np.pi) * np.exp(-decay * k[pos])
    if zero_mode == "line":
        coef[0] = amp * (-1j * np.pi)
    elif zero_mode == "corrected":
        coef[0] = amp * (np.pi - 1j * np.pi)
    elif zero_mode == "zero":
        coef[0] = 0.0
    else:
        raise InvalidArgumentError(f"unknown zero_mode {zero_mode!r}")
    return HardyField(grid, coefficients=coef)


def qplus(grid: Grid, scale: float = 1.0, zero_mode: str = "line") -> HardyField:
    """The Hardy profile x -> 1/(scale*x + i), built spectrally.

    ``scale`` dilates the profile (a member of the same symmetry orbit).
    """
    if scale <= 0:
        raise InvalidArgumentError("scale must be positive")
    # 1/(sx + i) = (1/s) / (x + i/s): transform -(2 pi i/s) e^{-k/s}
    return _one_sided_lorentzian(grid, 1.0 / scale, 1.0 / scale, zero_mode)


def traveling_qc(grid: Grid, c: float, zero_mode: str = "line") -> HardyField:
    """The line traveling-wave profile x -> 2 (2 c^2)^{1/4} / (c x + 2i)."""
    if c <= 0:
        raise InvalidArgumentError("speed c must be positive")
    amp = 2 * (2 * c * c) ** 0.25 / c
    return _one_sided_lorentzian(grid, amp, 2.0 / c, zero_mode)


def weinstein_r(grid: Grid, scale: float = 1.0) -> SpectralField:
    """Weinstein's real ground state 3^{1/4}/sqrt(cosh(2x)), sampled in space."""
    if scale <= 0:
        raise InvalidArgumentError("scale must be positive")
    arg = np.clip(2.0 * scale * grid.x, -700, 700)
    samples = 3 ** 0.25 / np.sqrt(np.cosh(arg))
    return SpectralField(grid, samples=samples)


def gaussian_hardy(grid: Grid, sigma: float) -> HardyField:
    """Szego projection of the Gaussian e^{-(x/sigma)^2}."""
    if sigma <= 0:
        raise InvalidArgumentError("sigma must be positive")
    samples = np.exp(-((grid.x / sigma) ** 2))
    return szego_project(SpectralField(grid, samples=samples))


@dataclass(frozen=True)
class PeriodicSoliton:
    """Exact traveling wave of the discrete quintic flow.

    ``field`` solves dxx Q + Pi(|Q|^4 Q) = omega Q + c D Q on its grid to
    machine precision, and e^{i omega t} Q(x + c t) solves the evolution.
    """
    field: HardyField
    omega: float
    c: float
    p: float
    b: float


def periodic_soliton(grid: Grid, c: float) -> PeriodicSoliton:
    """Geometric-spectrum traveling wave with exact speed c on this grid.

    Requires c > 3*theta with theta = 2*pi/length; below that the domain is
    too small to carry the wave.
    """
    theta = 2 * np.pi / grid.length
    if c <= 3 * theta:
        raise InvalidArgumentError(
            f"speed c={c} must exceed 3*(2*pi/length)={3 * theta:.6g}")
    p2 = (c - 3 * theta) / (c + theta)
    p = math.sqrt(p2)
    b = (2 * theta ** 2 * (1 - p2) ** 2) ** 0.25
    omega = 2 * theta ** 2 * (1 + 2 * p2) / (1 - p2) ** 2
    j = np.rint(grid.k / theta).astype(np.int64)
    coef = np.zeros(grid.n, dtype=np.complex128)
    pos = j >= 0
    # torus Fourier-series coefficient b p^j corresponds to hat value L b p^j
    coef[pos] = grid.length * b * np.power(p, j[pos], dtype=np.float64)
    return PeriodicSoliton(HardyField(grid, coefficients=coef),
                           float(omega), float(c), float(p), float(b))


def zero_mean_soliton(grid: Grid, width: float, mass: float = 1.0) -> HardyField:
    """Member of the zero-mean geometric family b p^j (j >= 1) at a given width.

    ``width`` is the spatial scale (spectral decay e^{-width*k}); the result
    is rescaled to the requested L^2 mass.  Used as a dynamics-friendly
    representative of computed ground-state shapes.
    """
    if width <= 0:
        raise InvalidArgumentError("width must be positive")
    theta = 2 * np.pi / grid.length
    p = math.exp(-width * theta)
    j = np.rint(grid.k / theta).astype(np.int64)
    coef = np.zeros(grid.n, dtype=np.complex128)
    pos = j >= 1
    coef[pos] = np.power(p, j[pos], dtype=np.float64)
    f = HardyField(grid, coefficients=coef)
    current = np.sum(np.abs(f.coefficients) ** 2) / grid.length
    return HardyField(grid, coefficients=f.coefficients * math.sqrt(mass / current))


_KINDS = {
    "qplus": lambda grid, **kw: qplus(grid, scale=kw.get("scale", 1.0),
                                      zero_mode=kw.get("zero_mode", "line")),
    "qc": lambda grid, **kw: traveling_qc(grid, kw["c"],
                                          zero_mode=kw.get("zero_mode", "line")),
    "qc_exact": lambda grid, **kw: periodic_soliton(grid, kw["c"]).field,
    "weinstein": lambda grid, **kw: weinstein_r(grid, scale=kw.get("scale", 1.0)),
    "gaussian": lambda grid, **kw: gaussian_hardy(grid, kw.get("sigma", 2.0)),
}


def reference_profile(kind: str, grid: Grid, **params) -> SpectralField:
    """Construct a named reference profile on the grid.

    Kinds: qplus, qc (requires c), qc_exact (requires c), weinstein,
    gaussian (sigma, default 2).
    """
    try:
        builder = _KINDS[kind]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown profile kind {kind!r}; expected one of {sorted(_KINDS)}") from None
    try:
        return builder(grid, **params)
    except KeyError as exc:
        raise InvalidArgumentError(f"profile {kind!r} missing parameter {exc}") from None
