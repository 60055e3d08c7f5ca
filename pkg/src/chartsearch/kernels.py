"""Numeric kernels: sRGB→LAB conversion, ΔE, Pearson r, cosine lookup.

Each kernel has a pure-numpy implementation and a numba-compiled twin.
The active backend is chosen once at import from the CHARTSEARCH_NUMBA
environment variable ("0"/"false"/"no"/"off" forces numpy) and can be
switched at runtime with configure(); both paths compute the same math
so results agree to floating-point noise.
"""

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install-time dependency
    _HAVE_NUMBA = False

# D65 reference white, 2 degree observer, XYZ scaled to Y=100.
_WHITE_X = 95.047
_WHITE_Y = 100.0
_WHITE_Z = 108.883

# CIE thresholds: epsilon = (6/29)^3, kappa = (29/3)^3.
_EPS = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0


def _srgb_to_lab_np(rgb: np.ndarray) -> np.ndarray:
    """Vectorized sRGB (n,3) in 0..255 → CIE-LAB (n,3)."""
    c = rgb.astype(np.float64) / 255.0
    lin = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    r, g, b = lin[:, 0], lin[:, 1], lin[:, 2]
    x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) * 100.0 / _WHITE_X
    y = (0.2126729 * r + 0.7151522 * g + 0.0721750 * b) * 100.0 / _WHITE_Y
    z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) * 100.0 / _WHITE_Z
    xyz = np.stack([x, y, z], axis=1)
    f = np.where(xyz > _EPS, np.cbrt(xyz), (_KAPPA * xyz + 16.0) / 116.0)
    lab = np.empty_like(f)
    lab[:, 0] = 116.0 * f[:, 1] - 16.0
    lab[:, 1] = 500.0 * (f[:, 0] - f[:, 1])
    lab[:, 2] = 200.0 * (f[:, 1] - f[:, 2])
    return lab


def _delta_e_np(lab_a: np.ndarray, lab_b: np.ndarray) -> np.ndarray:
    """Rowwise CIE76 ΔE between two (n,3) LAB arrays."""
    diff = lab_a - lab_b
    return np.sqrt(np.sum(diff * diff, axis=1))


def _pearson_np(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation; nan when either side has zero variance."""
    n = x.shape[0]
    mx = x.sum() / n
    my = y.sum() / n
    dx = x - mx
    dy = y - my
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return float("nan")
    return float(np.dot(dx, dy)) / float(np.sqrt(sxx) * np.sqrt(syy))


def _cosine_to_np(matrix: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Dot products of unit rows against one unit vector."""
    return matrix @ vec


if _HAVE_NUMBA:

    @njit(cache=True)
    def _srgb_to_lab_nb(rgb):
        """Loop form of the sRGB → LAB conversion."""
        n = rgb.shape[0]
        out = np.empty((n, 3), dtype=np.float64)
        for i in range(n):
            lin = np.empty(3, dtype=np.float64)
            for j in range(3):
                c = rgb[i, j] / 255.0
                if c <= 0.04045:
                    lin[j] = c / 12.92
                else:
                    lin[j] = ((c + 0.055) / 1.055) ** 2.4
            x = (0.4124564 * lin[0] + 0.3575761 * lin[1] + 0.1804375 * lin[2]) * 100.0 / _WHITE_X
            y = (0.2126729 * lin[0] + 0.7151522 * lin[1] + 0.0721750 * lin[2]) * 100.0 / _WHITE_Y
            z = (0.0193339 * lin[0] + 0.1191920 * lin[1] + 0.9503041 * lin[2]) * 100.0 / _WHITE_Z
            fx = x ** (1.0 / 3.0) if x > _EPS else (_KAPPA * x + 16.0) / 116.0
            fy = y ** (1.0 / 3.0) if y > _EPS else (_KAPPA * y + 16.0) / 116.0
            fz = z ** (1.0 / 3.0) if z > _EPS else (_KAPPA * z + 16.0) / 116.0
            out[i, 0] = 116.0 * fy - 16.0
            out[i, 1] = 500.0 * (fx - fy)
            out[i, 2] = 200.0 * (fy - fz)
        return out

    @njit(cache=True)
    def _delta_e_nb(lab_a, lab_b):
        """Rowwise Euclidean distance."""
        n = lab_a.shape[0]
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            dl = lab_a[i, 0] - lab_b[i, 0]
            da = lab_a[i, 1] - lab_b[i, 1]
            db = lab_a[i, 2] - lab_b[i, 2]
            out[i] = np.sqrt(dl * dl + da * da + db * db)
        return out

    @njit(cache=True)
    def _pearson_nb(x, y):
        """Two-pass Pearson correlation with sequential sums."""
        n = x.shape[0]
        mx = 0.0
        my = 0.0
        for i in range(n):
            mx += x[i]
            my += y[i]
        mx /= n
        my /= n
        sxy = 0.0
        sxx = 0.0
        syy = 0.0
        for i in range(n):
            dx = x[i] - mx
            dy = y[i] - my
            sxy += dx * dy
            sxx += dx * dx
            syy += dy * dy
        if sxx == 0.0 or syy == 0.0:
            return np.nan
        return sxy / (np.sqrt(sxx) * np.sqrt(syy))

    @njit(cache=True)
    def _cosine_to_nb(matrix, vec):
        """Row-by-row dot products."""
        n = matrix.shape[0]
        d = matrix.shape[1]
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            acc = 0.0
            for j in range(d):
                acc += matrix[i, j] * vec[j]
            out[i] = acc
        return out


_BACKENDS = {
    "numpy": {
        "srgb_to_lab": _srgb_to_lab_np,
        "delta_e": _delta_e_np,
        "pearson": _pearson_np,
        "cosine_to": _cosine_to_np,
    }
}
if _HAVE_NUMBA:
    _BACKENDS["numba"] = {
        "srgb_to_lab": _srgb_to_lab_nb,
        "delta_e": _delta_e_nb,
        "pearson": _pearson_nb,
        "cosine_to": _cosine_to_nb,
    }


def _env_wants_numba() -> bool:
    flag = os.environ.get("CHARTSEARCH_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


_active = "numpy"


def configure(backend: str | None = None) -> str:
    """Select the kernel backend: "numba", "numpy", or None to re-read env."""
    global _active
    if backend is None:
        backend = "numba" if (_HAVE_NUMBA and _env_wants_numba()) else "numpy"
    if backend not in _BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; have {sorted(_BACKENDS)}")
    _active = backend
    return _active


def backend() -> str:
    return _active


configure()


def srgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """Convert (n,3) sRGB components in 0..255 to (n,3) CIE-LAB (D65)."""
    arr = np.ascontiguousarray(rgb, dtype=np.float64)
    return _BACKENDS[_active]["srgb_to_lab"](arr)


def delta_e(lab_a: np.ndarray, lab_b: np.ndarray) -> np.ndarray:
    """Rowwise CIE76 color difference between (n,3) LAB arrays."""
    a = np.ascontiguousarray(lab_a, dtype=np.float64)
    b = np.ascontiguousarray(lab_b, dtype=np.float64)
    return _BACKENDS[_active]["delta_e"](a, b)


def pearson(x, y) -> float:
    """Pearson r of two equal-length sequences; nan on zero variance."""
    xa = np.ascontiguousarray(x, dtype=np.float64)
    ya = np.ascontiguousarray(y, dtype=np.float64)
    if xa.shape[0] != ya.shape[0] or xa.shape[0] < 2:
        return float("nan")
    return float(_BACKENDS[_active]["pearson"](xa, ya))


def cosine_to(matrix: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Cosines of unit-row matrix against one unit vector."""
    m = np.ascontiguousarray(matrix, dtype=np.float64)
    v = np.ascontiguousarray(vec, dtype=np.float64)
    return _BACKENDS[_active]["cosine_to"](m, v)
