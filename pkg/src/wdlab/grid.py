"""Periodic grid, spectral differentiation, and elliptic inversions.

All fields are real arrays sampled at the n uniform nodes x_j = j*L/n of a
circle of length L.  Transforms use the real half-spectrum (rfft); the
Nyquist mode of odd-order derivatives is zeroed so derivatives stay real.
"""

import numpy as np

from .errors import IncompatibleMean

MEAN_COMPAT_TOL = 1e-10


class PeriodicGrid:
    """Uniform discretization of a circle of length L with n nodes.

    n must be even and at least 16 so the 2/3 dealiasing band is nonempty.
    """

    def __init__(self, n, L=1.0):
        n = int(n)
        if n < 16 or n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 16, got n={n}")
        if not L > 0:
            raise ValueError(f"domain length must be positive, got L={L}")
        self.n = n
        self.L = float(L)
        self.dx = self.L / n
        self.x = self.dx * np.arange(n)
        # physical wavenumbers of the real half-spectrum, k_phys = 2*pi*k/L
        self.k = 2.0 * np.pi * np.fft.rfftfreq(n, d=self.dx)
        self._kidx = np.arange(n // 2 + 1)
        self._keep = self._kidx <= n // 3

    def __eq__(self, other):
        return (
            isinstance(other, PeriodicGrid)
            and self.n == other.n
            and self.L == other.L
        )

    def __repr__(self):
        return f"PeriodicGrid(n={self.n}, L={self.L})"

    def check_field(self, f):
        f = np.asarray(f, dtype=float)
        if f.shape != (self.n,):
            raise ValueError(f"field shape {f.shape} does not match grid n={self.n}")
        return f

    def mean(self, f):
        """Spatial average (1/L) * integral of f; the paper's mu when L = 1."""
        return float(np.mean(f))

    def deriv(self, f, order=1):
        """Derivative of the trigonometric interpolant of f."""
        if order not in (1, 2, 3):
            raise ValueError(f"unsupported derivative order {order}")
        fh = np.fft.rfft(f)
        fh *= (1j * self.k) ** order
        if order % 2 == 1:
            fh[-1] = 0.0  # Nyquist mode has no well-defined odd derivative
        return np.fft.irfft(fh, n=self.n)

    def dealias(self, f):
        """Zero every mode with index |k| > n/3 (two-thirds rule)."""
        fh = np.fft.rfft(f)
        fh[~self._keep] = 0.0
        return np.fft.irfft(fh, n=self.n)

    # -- elliptic inversions ------------------------------------------------

    def helmholtz(self, v):
        """Forward operator v - v_xx."""
        return v - self.deriv(v, 2)

    def helmholtz_inverse(self, m):
        """Solve v - v_xx = m."""
        mh = np.fft.rfft(m)
        mh /= 1.0 + self.k**2
        return np.fft.irfft(mh, n=self.n)

    def mu_helmholtz(self, v):
        """Forward operator mean(v) - v_xx."""
        return self.mean(v) - self.deriv(v, 2)

    def mu_helmholtz_inverse(self, m):
        """Solve mean(v) - v_xx = m.

        The zero mode passes through unchanged since mean(m) = mean(v).
        """
        mh = np.fft.rfft(m)
        mh[1:] /= self.k[1:] ** 2
        return np.fft.irfft(mh, n=self.n)

    def neg_laplacian(self, v):
        """Forward operator -v_xx."""
        return -self.deriv(v, 2)

    def neg_laplacian_inverse(self, m, gauge_mean=0.0):
        """Solve -v_xx = m with mean(v) = gauge_mean.

        Raises IncompatibleMean when m has a nonzero mean: -v_xx always
        averages to zero, so such an m signals corrupted momentum.
        """
        mbar = self.mean(m)
        if abs(mbar) > MEAN_COMPAT_TOL:
            raise IncompatibleMean(
                f"momentum mean {mbar:.3e} exceeds {MEAN_COMPAT_TOL:.0e}"
            )
        mh = np.fft.rfft(m)
        mh[0] = gauge_mean * self.n
        mh[1:] /= self.k[1:] ** 2
        return np.fft.irfft(mh, n=self.n)

    # -- auxiliary spectral utilities --------------------------------------

    def cumulative_integral(self, f):
        """Samples of F(x) = integral of f from 0 to x.

        The mean part integrates to mean*x; the zero-mean remainder is
        integrated mode-wise (division by i*k), which handles the periodic
        part with spectral accuracy.
        """
        fh = np.fft.rfft(f)
        a = fh[0].real / self.n  # mean of f
        fh[0] = 0.0
        fh[1:] /= 1j * self.k[1:]
        fh[-1] = 0.0
        P = np.fft.irfft(fh, n=self.n)
        return a * self.x + (P - P[0])

    def translate(self, f, a):
        """Samples of f(x + a) via a Fourier phase shift."""
        fh = np.fft.rfft(f)
        fh *= np.exp(1j * self.k * a)
        fh[-1] = fh[-1].real  # keep the shifted field real
        return np.fft.irfft(fh, n=self.n)
