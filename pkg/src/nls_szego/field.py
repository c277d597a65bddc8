"""Complex spectral fields on a periodized line and the core operations.

A field carries both a sample representation u(x_j) and discrete Fourier
coefficients approximating the line transform

    u_hat(k) = integral u(x) e^{-ikx} dx  ~  sum_j u(x_j) e^{-ik x_j} dx,

with inverse u(x) = (1/2pi) integral u_hat e^{ikx} dk.  Discrete norms built
from these weights approximate line norms without rescaling:

    ||u||_{L2}^2 = sum_j |u_j|^2 dx = (1/L) sum_k |u_hat(k)|^2.

Hardy fields have no content at strictly negative wavenumbers; the k = 0 mode
is kept in full, matching the periodic Hardy-space convention (half-weighting
it would break idempotence of the projector).
"""

from __future__ import annotations

import io
import math

import numpy as np
import scipy.fft as _fft

from .errors import InvalidArgumentError
from .grid import Grid

_MAX_PADDED_SIZE = 1 << 26


class SpectralField:
    """Immutable complex field with cached sample/coefficient representations.

    Either representation may be supplied; the other is derived on demand.
    Arrays handed in are copied and frozen.
    """

    __slots__ = ("grid", "_samples", "_coeffs")

    def __init__(self, grid: Grid, samples=None, coefficients=None):
        if samples is None and coefficients is None:
            raise InvalidArgumentError("need samples or coefficients")
        self.grid = grid
        self._samples = self._own(grid, samples)
        self._coeffs = self._own(grid, coefficients)

    @staticmethod
    def _own(grid, arr):
        if arr is None:
            return None
        arr = np.asarray(arr, dtype=np.complex128)
        if arr.shape != (grid.n,):
            raise InvalidArgumentError(
                f"array of shape {arr.shape} does not match grid n={grid.n}")
        arr = arr.copy()
        arr.flags.writeable = False
        return arr

    @classmethod
    def from_samples(cls, grid: Grid, samples) -> "SpectralField":
        return cls(grid, samples=samples)

    @classmethod
    def from_coefficients(cls, grid: Grid, coefficients) -> "SpectralField":
        return cls(grid, coefficients=coefficients)

    @property
    def samples(self) -> np.ndarray:
        if self._samples is None:
            s = _fft.ifft(self._coeffs * self.grid.offset_phase) / self.grid.dx
            s.flags.writeable = False
            self._samples = s
        return self._samples

    @property
    def coefficients(self) -> np.ndarray:
        if self._coeffs is None:
            c = self.grid.dx * self.grid.offset_phase * _fft.fft(self._samples)
            c.flags.writeable = False
            self._coeffs = c
        return self._coeffs

    # -- derived constructors ------------------------------------------------

    def with_coefficients(self, coefficients) -> "SpectralField":
        return type(self)(self.grid, coefficients=coefficients)

    def copy_as_hardy(self) -> "HardyField":
        """Reinterpret as a Hardy field; negative modes must already vanish."""
        return HardyField(self.grid, coefficients=self.coefficients)

    def __repr__(self):
        return f"{type(self).__name__}(grid={self.grid!r})"


class HardyField(SpectralField):
    """Field with no negative-wavenumber content (discrete Hardy space)."""

    __slots__ = ()

    def __init__(self, grid: Grid, samples=None, coefficients=None):
        if coefficients is None:
            coefficients = grid.dx * grid.offset_phase * _fft.fft(
                np.asarray(samples, dtype=np.complex128))
            samples = None
        coefficients = np.array(coefficients, dtype=np.complex128)
        bad = np.abs(coefficients[grid.negative_modes]).max() if grid.n else 0.0
        scale = np.abs(coefficients).max()
        if bad > 1e-10 * max(scale, 1.0):
            raise InvalidArgumentError(
                f"negative-mode content {bad:.3e} too large for a Hardy field")
        coefficients[grid.negative_modes] = 0.0
        super().__init__(grid, samples=samples, coefficients=coefficients)


# ---------------------------------------------------------------------------
# padding helpers (shared by dealiased products and L^p quadrature)

def _pad_factor(power: int) -> int:
    """Zero-padding factor making a product of `power` fields alias-free."""
    if power <= 7:          # quintic and below share the power-of-two factor
        return 4
    return 2 * math.ceil((power + 1) / 2)


def _padded_samples(coeffs: np.ndarray, n: int, factor: int):
    """Band-limited resample onto a factor-times finer grid.

    Returns scaled samples w = dx_fine * u(x'_j + L/2); pointwise quantities
    |w| are dx_fine * |u| on the fine grid, which is all the callers need.
    """
    N = factor * n
    if N > _MAX_PADDED_SIZE:
        raise InvalidArgumentError(
            f"padded transform of size {N} exceeds limit {_MAX_PADDED_SIZE}")
    half = n // 2
    big = np.zeros(N, dtype=np.complex128)
    big[:half] = coeffs[:half]
    big[N - half:] = coeffs[half:]
    return _fft.ifft(big, overwrite_x=True), N


def _truncate_modes(big: np.ndarray, n: int) -> np.ndarray:
    N = big.shape[0]
    half = n // 2
    out = np.empty(n, dtype=np.complex128)
    out[:half] = big[:half]
    out[half:] = big[N - half:]
    return out


def resample(f: SpectralField, factor: int) -> np.ndarray:
    """Samples of f on a factor-times refined grid (same domain)."""
    if factor < 1 or (factor & (factor - 1)) != 0:
        raise InvalidArgumentError("refinement factor must be a power of two")
    n = f.grid.n
    w, N = _padded_samples(f.coefficients, n, factor)
    # undo the half-domain shift and the dx_fine scaling of _padded_samples
    return np.roll(w, N // 2) / (f.grid.length / N)


# ---------------------------------------------------------------------------
# operations

def szego_project(f: SpectralField) -> HardyField:
    """Project onto nonnegative wavenumbers (discrete Szego projector)."""
    c = f.coefficients.copy()
    c[f.grid.negative_modes] = 0.0
    return HardyField(f.grid, coefficients=c)


def spectral_derivative(f: SpectralField, s: float, signed: bool = False) -> SpectralField:
    """Apply |D|^s (signed=False) or the operator D = -i d/dx (signed=True).

    The signed form is only defined for s = 1, where D acts as multiplication
    by k on the spectrum.
    """
    if signed:
        if s != 1:
            raise InvalidArgumentError("signed derivative requires s = 1")
        mult = f.grid.k
    else:
        if s < 0:
            raise InvalidArgumentError("derivative order must be nonnegative")
        mult = np.abs(f.grid.k) ** s if s != 0 else None
    if mult is None:
        return f
    return type(f)(f.grid, coefficients=f.coefficients * mult)


def translate(f: SpectralField, y: float) -> SpectralField:
    """Return x -> f(x + y); y need not be a grid multiple."""
    if y == 0:
        return f
    return type(f)(f.grid, coefficients=f.coefficients * np.exp(1j * f.grid.k * y))


def phase_rotate(f: SpectralField, theta: float) -> SpectralField:
    """Multiply the field by the global phase e^{i theta}."""
    if theta == 0:
        return f
    return type(f)(f.grid, coefficients=f.coefficients * np.exp(1j * theta))


def time_reflect(f: SpectralField) -> SpectralField:
    """Return x -> conj(f(-x)), the conjugation that preserves Hardy fields."""
    return type(f)(f.grid, coefficients=np.conj(f.coefficients))


def l2_norm_sq(f: SpectralField) -> float:
    return float(np.sum(np.abs(f.coefficients) ** 2) / f.grid.length)


def lp_norm(f: SpectralField, p) -> float:
    """L^p norm for p in {2, even integers >= 4, inf}.

    p = 2 is evaluated spectrally (Parseval); finite p > 2 by rectangle-rule
    quadrature of |u|^p on a zero-padded refinement (the integrand is then a
    trigonometric polynomial the rule integrates exactly); p = inf as the max
    of |u| over the refined samples.
    """
    g = f.grid
    if p == 2:
        return math.sqrt(l2_norm_sq(f))
    if p == np.inf or p == math.inf:
        w, N = _padded_samples(f.coefficients, g.n, 4)
        return float(np.abs(w).max() / (g.length / N))
    p = float(p)
    if p < 4 or p != int(p) or int(p) % 2 != 0:
        raise InvalidArgumentError(f"unsupported exponent p={p}")
    p = int(p)
    factor = _pad_factor(p - 1)
    w, N = _padded_samples(f.coefficients, g.n, factor)
    dxN = g.length / N
    total = np.sum((w.real * w.real + w.imag * w.imag) ** (p // 2)) * dxN
    return float(total ** (1.0 / p) / dxN)


def hs_norm(f: SpectralField, s: float) -> float:
    """Inhomogeneous Sobolev norm with weight (1 + k^2)^s."""
    c = f.coefficients
    w = (1.0 + f.grid.k ** 2) ** s if s != 0 else 1.0
    return math.sqrt(float(np.sum(w * (c.real ** 2 + c.imag ** 2)) / f.grid.length))


def hdot_norm(f: SpectralField, s: float) -> float:
    """Homogeneous seminorm |||D|^s f||_{L2}."""
    c = f.coefficients
    w = np.abs(f.grid.k) ** (2 * s) if s != 0 else 1.0
    return math.sqrt(float(np.sum(w * (c.real ** 2 + c.imag ** 2)) / f.grid.length))


def inner_product(f: SpectralField, g: SpectralField) -> complex:
    """Discrete L^2 pairing <f, g> = sum f conj(g) dx."""
    if f.grid != g.grid:
        raise InvalidArgumentError("fields live on different grids")
    return complex(np.sum(f.coefficients * np.conj(g.coefficients)) / f.grid.length)


def momentum(f: HardyField) -> float:
    """Momentum <Df, f> = |||D|^{1/2} f||^2, nonnegative on Hardy fields."""
    c = f.coefficients
    val = float(np.sum(f.grid.k * (c.real ** 2 + c.imag ** 2)) / f.grid.length)
    return max(val, 0.0)


def projected_nonlinearity(f: HardyField, m: int) -> HardyField:
    """Dealiased Pi(|f|^{2m} f) evaluated on a zero-padded grid."""
    if m < 1 or m != int(m):
        raise InvalidArgumentError(f"nonlinearity degree m={m!r} must be a positive integer")
    m = int(m)
    g = f.grid
    factor = _pad_factor(2 * m + 1)
    w, N = _padded_samples(f.coefficients, g.n, factor)
    dxN = g.length / N
    v = (w.real * w.real + w.imag * w.imag) ** m * w
    big = _fft.fft(v, overwrite_x=True)
    out = _truncate_modes(big, g.n)
    out *= dxN ** (-2 * m)
    out[g.negative_modes] = 0.0
    return HardyField(g, coefficients=out)


def mass_center(f: SpectralField) -> float:
    """Mass-weighted circular mean position of |f|^2 on the periodic domain."""
    u = f.samples
    dens = u.real ** 2 + u.imag ** 2
    z = np.sum(dens * np.exp(2j * np.pi * f.grid.x / f.grid.length))
    if z == 0:
        return 0.0
    return float(np.angle(z) * f.grid.length / (2 * np.pi))


# ---------------------------------------------------------------------------
# snapshot files

_SNAPSHOT_HEADER = "# nls-szego field v1"


def write_snapshot(f: SpectralField, path, t: float = 0.0) -> None:
    """Write the field samples to a version-tagged text snapshot."""
    g = f.grid
    u = f.samples
    with open(path, "w") as fh:
        fh.write(_SNAPSHOT_HEADER + "\n")
        fh.write(f"n={g.n} length={g.length:.17g} t={t:.17g}\n")
        for xj, uj in zip(g.x, u):
            fh.write(f"{xj:.17g} {uj.real:.17g} {uj.imag:.17g}\n")


def read_snapshot(path):
    """Read a field snapshot; returns (field, t).

    Rejects files whose version line differs from the one this code writes.
    """
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != _SNAPSHOT_HEADER:
            raise InvalidArgumentError(f"unsupported snapshot version line: {header!r}")
        meta = fh.readline().split()
        kv = dict(item.split("=", 1) for item in meta)
        n = int(kv["n"])
        length = float(kv["length"])
        t = float(kv["t"])
        data = np.loadtxt(io.StringIO(fh.read()))
    if data.shape != (n, 3):
        raise InvalidArgumentError("snapshot sample block has the wrong shape")
    grid = Grid(n, length)
    samples = data[:, 1] + 1j * data[:, 2]
    return SpectralField(grid, samples=samples), t
