"""Periodized discretization of the real line.

The line is truncated to the interval [-L/2, L/2) with periodic wrap-around,
sampled on n equispaced points.  Wavenumbers follow the usual FFT layout
2*pi*[0, 1, ..., n/2-1, -n/2, ..., -1]/L, so the set contains 0 and is
symmetric except for the unpaired index -n/2.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError


class Grid:
    """Immutable sample/wavenumber layout for one periodic domain.

    Attributes:
        n: number of sample points (power of two, >= 16).
        length: domain length L.
        dx: sample spacing L/n.
        x: sample points x_j = -L/2 + j*dx.
        k: angular wavenumbers in FFT order.
        dk: wavenumber spacing 2*pi/L.
    """

    __slots__ = ("n", "length", "dx", "x", "k", "dk", "_neg", "_phase")

    def __init__(self, n: int, length: float):
        if not isinstance(n, (int, np.integer)) or n < 16 or (n & (n - 1)) != 0:
            raise InvalidArgumentError(f"n must be a power of two >= 16, got {n!r}")
        length = float(length)
        if not np.isfinite(length) or length <= 0:
            raise InvalidArgumentError(f"length must be positive, got {length!r}")
        self.n = int(n)
        self.length = length
        self.dx = length / n          # exact in binary arithmetic (n is a power of two)
        self.x = np.arange(n) * self.dx - length / 2
        self.k = 2 * np.pi * np.fft.fftfreq(n, d=self.dx)
        self.dk = 2 * np.pi / length
        self._neg = self.k < 0
        # e^{i k L/2} = (-1)^j accounts for the domain starting at -L/2
        self._phase = (-1.0) ** np.arange(n)
        for arr in (self.x, self.k, self._neg, self._phase):
            arr.flags.writeable = False

    @property
    def negative_modes(self) -> np.ndarray:
        """Boolean mask of strictly negative wavenumbers."""
        return self._neg

    @property
    def offset_phase(self) -> np.ndarray:
        """Per-mode phase factor relating FFT output to transform values."""
        return self._phase

    def __eq__(self, other):
        return (isinstance(other, Grid) and other.n == self.n
                and other.length == self.length)

    def __hash__(self):
        return hash((self.n, self.length))

    def __repr__(self):
        return f"Grid(n={self.n}, length={self.length})"


def make_grid(n: int, length: float) -> Grid:
    """Build a periodic grid with n samples on a domain of the given length."""
    return Grid(n, length)
