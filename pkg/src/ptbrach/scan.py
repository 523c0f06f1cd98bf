"""Dense-grid root location for complex amplitudes."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq


def first_zero(amplitude, t_max: float, n_steps: int, t_min: float = 0.0,
               threshold: float = 1e-3) -> float | None:
    """First root of a complex amplitude that passes transversally through 0.

    The amplitude is scanned on a uniform grid; a local minimum of its modulus
    below ``threshold`` brackets the root, and the real projection
    ``Re(A(t) conj(A(t_left)))``, which changes sign across the root, is
    refined with Brent's method.
    """
    ts = np.linspace(t_min, t_max, n_steps + 1)
    values = np.asarray(amplitude(ts))
    mags = np.abs(values)
    for i in range(1, len(ts) - 1):
        if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1] and mags[i] < threshold:
            left, right = ts[i - 1], ts[i + 1]
            ref = np.conj(values[i - 1])

            def proj(t, ref=ref):
                return float(np.real(np.asarray(amplitude(np.array([t])))[0] * ref))

            g_left, g_mid, g_right = proj(left), proj(ts[i]), proj(right)
            if g_mid == 0.0:
                return float(ts[i])
            if g_left * g_mid < 0:
                return float(brentq(proj, left, ts[i], xtol=1e-15, rtol=1e-15))
            if g_mid * g_right < 0:
                return float(brentq(proj, ts[i], right, xtol=1e-15, rtol=1e-15))
    return None
