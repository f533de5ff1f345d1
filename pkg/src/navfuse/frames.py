"""Reference frames, rotations, and the Earth model.

All angles are radians and all rotation matrices are body-to-NED
direction cosine matrices unless stated otherwise.  Every function
broadcasts over leading batch dimensions: vectors are ``(..., 3)`` and
matrices ``(..., 3, 3)``, so the same code serves a single navigation
state and a Monte-Carlo bank of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GimbalLockError

_DCM_ORTHO_TOL = 1e-9
_GIMBAL_TOL = 1e-9


@dataclass(frozen=True)
class EarthModel:
    """Reference ellipsoid constants and local gravity magnitude.

    Parameters
    ----------
    rate : float
        Earth rotation rate in rad/s.
    semi_major_axis : float
        Ellipsoid semi-major axis in meters.
    eccentricity_sq : float
        Squared first eccentricity of the ellipsoid.
    gravity : float
        Magnitude of the local gravity vector in m/s^2 (points down).
    """

    rate: float = 7.29e-5
    semi_major_axis: float = 6378137.0
    eccentricity_sq: float = 6.69437999014e-3
    gravity: float = 9.80665


WGS84 = EarthModel()


@dataclass(frozen=True)
class GeodeticPosition:
    """Latitude/longitude in radians, ellipsoidal height in meters."""

    lat: float
    lon: float
    h: float

    def __post_init__(self):
        if not abs(self.lat) <= np.pi / 2:
            raise ValueError(f"latitude {self.lat} outside [-pi/2, pi/2]")
        lon = wrap_angle(self.lon)
        object.__setattr__(self, "lon", lon)


@dataclass(frozen=True)
class EulerAngles:
    """Roll, pitch, yaw in radians (ZYX convention)."""

    roll: float
    pitch: float
    yaw: float


def wrap_angle(a):
    """Wrap an angle (or array of angles) to (-pi, pi]."""
    wrapped = -np.remainder(-np.asarray(a, dtype=float) + np.pi, 2 * np.pi) + np.pi
    return wrapped if np.ndim(a) else float(wrapped)


def skew(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric (cross-product) matrix of ``v``, ``(..., 3) -> (..., 3, 3)``."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def euler_to_dcm(e: EulerAngles | np.ndarray) -> np.ndarray:
    """Body-to-NED rotation matrix from roll/pitch/yaw.

    Accepts an :class:`EulerAngles` or an array ``(..., 3)`` of
    ``[roll, pitch, yaw]`` stacks.
    """
    if isinstance(e, EulerAngles):
        rpy = np.array([e.roll, e.pitch, e.yaw])
    else:
        rpy = np.asarray(e, dtype=float)
    cr, sr = np.cos(rpy[..., 0]), np.sin(rpy[..., 0])
    cp, sp = np.cos(rpy[..., 1]), np.sin(rpy[..., 1])
    cy, sy = np.cos(rpy[..., 2]), np.sin(rpy[..., 2])
    C = np.empty(rpy.shape[:-1] + (3, 3))
    C[..., 0, 0] = cp * cy
    C[..., 0, 1] = -cr * sy + sr * sp * cy
    C[..., 0, 2] = sr * sy + cr * sp * cy
    C[..., 1, 0] = cp * sy
    C[..., 1, 1] = cr * cy + sr * sp * sy
    C[..., 1, 2] = -sr * cy + cr * sp * sy
    C[..., 2, 0] = -sp
    C[..., 2, 1] = sr * cp
    C[..., 2, 2] = cr * cp
    return C


def dcm_to_euler(C: np.ndarray) -> EulerAngles:
    """Roll/pitch/yaw from a body-to-NED rotation matrix.

    Raises
    ------
    GimbalLockError
        When ``|C[2, 0]| >= 1 - 1e-9`` (pitch at +-90 deg).
    """
    C = np.asarray(C, dtype=float)
    if C.ndim != 2:
        raise ValueError("dcm_to_euler expects a single 3x3 matrix")
    if abs(C[2, 0]) >= 1.0 - _GIMBAL_TOL:
        raise GimbalLockError("pitch at +-90 deg: Euler angles undefined")
    return EulerAngles(
        roll=float(np.arctan2(C[2, 1], C[2, 2])),
        pitch=float(-np.arcsin(C[2, 0])),
        yaw=float(np.arctan2(C[1, 0], C[0, 0])),
    )


def reorthonormalize(C: np.ndarray) -> np.ndarray:
    """One symmetric orthonormalization step ``C <- C (3I - C^T C) / 2``."""
    C = np.asarray(C, dtype=float)
    CtC = np.swapaxes(C, -1, -2) @ C
    return C @ ((3.0 * np.eye(3) - CtC) / 2.0)


def dcm_defect(C: np.ndarray) -> float:
    """Frobenius norm of ``C^T C - I`` (worst case over any batch)."""
    C = np.asarray(C, dtype=float)
    d = np.swapaxes(C, -1, -2) @ C - np.eye(3)
    return float(np.max(np.sqrt(np.sum(d * d, axis=(-2, -1)))))


def rotvec_to_dcm(phi: np.ndarray) -> np.ndarray:
    """Rodrigues map: rotation vector ``(..., 3)`` to rotation matrix."""
    phi = np.asarray(phi, dtype=float)
    angle = np.linalg.norm(phi, axis=-1, keepdims=True)
    small = angle[..., 0] < 1e-12
    with np.errstate(invalid="ignore", divide="ignore"):
        axis = np.where(angle > 0, phi / angle, 0.0)
    K = skew(axis)
    a = angle[..., None]
    C = (
        np.eye(3)
        + np.sin(a) * K
        + (1.0 - np.cos(a)) * (K @ K)
    )
    if np.any(small):
        C = np.where(small[..., None, None], np.eye(3) + skew(phi), C)
    return C


def dcm_to_rotvec(C: np.ndarray) -> np.ndarray:
    """Log map: rotation matrix to rotation vector ``(..., 3)``.

    Accurate for rotations up to just below pi; intended for the small
    misalignments this toolkit works with.
    """
    C = np.asarray(C, dtype=float)
    tr = np.clip((np.trace(C, axis1=-2, axis2=-1) - 1.0) / 2.0, -1.0, 1.0)
    angle = np.arccos(tr)
    w = np.stack(
        [
            C[..., 2, 1] - C[..., 1, 2],
            C[..., 0, 2] - C[..., 2, 0],
            C[..., 1, 0] - C[..., 0, 1],
        ],
        axis=-1,
    )
    sin_a = np.sin(angle)
    scale = np.where(sin_a[..., None] > 1e-7, angle[..., None] / np.where(sin_a[..., None] > 0, 2.0 * sin_a[..., None], 1.0), 0.5)
    return scale * w


def radii_of_curvature(lat, earth: EarthModel = WGS84):
    """Meridian and prime-vertical radii of curvature ``(M, N)`` at ``lat``."""
    s2 = np.sin(lat) ** 2
    den = 1.0 - earth.eccentricity_sq * s2
    N = earth.semi_major_axis / np.sqrt(den)
    M = earth.semi_major_axis * (1.0 - earth.eccentricity_sq) / den**1.5
    return M, N


def earth_rates(lat, v_ned: np.ndarray, h=0.0, earth: EarthModel = WGS84):
    """Earth-rotation and transport rates resolved in NED.

    Parameters
    ----------
    lat : float or array
        Geodetic latitude in radians.
    v_ned : array, (..., 3)
        NED velocity in m/s.
    h : float or array
        Ellipsoidal height in meters.

    Returns
    -------
    omega_ie : array, (..., 3)
        Earth rotation rate in the navigation frame.
    omega_en : array, (..., 3)
        Transport rate of the navigation frame.
    """
    v_ned = np.asarray(v_ned, dtype=float)
    lat = np.asarray(lat, dtype=float)
    M, N = radii_of_curvature(lat, earth)
    lat_dot = v_ned[..., 0] / (M + h)
    lon_dot = v_ned[..., 1] / ((N + h) * np.cos(lat))
    omega_ie = np.stack(
        [
            earth.rate * np.cos(lat) * np.ones_like(v_ned[..., 0]),
            np.zeros_like(v_ned[..., 0]),
            -earth.rate * np.sin(lat) * np.ones_like(v_ned[..., 0]),
        ],
        axis=-1,
    )
    omega_en = np.stack(
        [lon_dot * np.cos(lat), -lat_dot, -lon_dot * np.sin(lat)], axis=-1
    )
    return omega_ie, omega_en


def earth_geometry(pos: GeodeticPosition, earth: EarthModel = WGS84):
    """Radii of curvature and gravity vector at a geodetic position.

    Returns ``(M, N, g_ned)`` with gravity along +D.
    """
    M, N = radii_of_curvature(pos.lat, earth)
    g = np.array([0.0, 0.0, earth.gravity])
    return float(M), float(N), g
