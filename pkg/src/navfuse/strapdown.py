"""Strapdown mechanization: dead reckoning from IMU specific force and rate.

A navigation state is propagated with one explicit Euler step per IMU
sample (100 Hz nominal).  The rate functions broadcast over leading
batch dimensions; :func:`strapdown_step` wraps them for a single
:class:`NavState`, and the filter engine calls the same functions on
stacked states.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import PolarSingularityError
from .frames import (
    EarthModel,
    GeodeticPosition,
    WGS84,
    dcm_defect,
    earth_rates,
    radii_of_curvature,
    reorthonormalize,
    skew,
)

_COS_LAT_MIN = 1e-12


@dataclass
class NavState:
    """Full navigation solution plus estimated IMU biases.

    Attributes
    ----------
    pos : GeodeticPosition
    vel : array (3,)
        NED velocity in m/s.
    att : array (3, 3)
        Body-to-NED rotation matrix.
    b_a : array (3,)
        Accelerometer bias estimate in m/s^2.
    b_g : array (3,)
        Gyroscope bias estimate in rad/s.
    """

    pos: GeodeticPosition
    vel: np.ndarray
    att: np.ndarray
    b_a: np.ndarray = field(default_factory=lambda: np.zeros(3))
    b_g: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def validate(self, tol: float = 1e-8) -> None:
        if dcm_defect(self.att) > tol:
            raise ValueError("attitude matrix lost orthonormality")
        if not (np.all(np.isfinite(self.b_a)) and np.all(np.isfinite(self.b_g))):
            raise ValueError("non-finite bias estimate")


@dataclass(frozen=True)
class ImuSample:
    """One IMU epoch: time, specific force (m/s^2), angular rate (rad/s)."""

    t: float
    f: np.ndarray
    w: np.ndarray


def position_rate(lat, h, v_ned, earth: EarthModel = WGS84, check: bool = True):
    """Geodetic position rates ``(lat_dot, lon_dot, h_dot)``.

    Height follows the NED convention ``h_dot = -v_D``.

    Raises
    ------
    PolarSingularityError
        When ``cos(lat) <= 1e-12``.
    """
    v_ned = np.asarray(v_ned, dtype=float)
    cos_lat = np.cos(lat)
    if check and np.any(cos_lat <= _COS_LAT_MIN):
        raise PolarSingularityError("position rates undefined at the pole")
    M, N = radii_of_curvature(lat, earth)
    return np.stack(
        [
            v_ned[..., 0] / (M + h),
            v_ned[..., 1] / ((N + h) * cos_lat),
            -v_ned[..., 2],
        ],
        axis=-1,
    )


def velocity_rate(C, f_b, v_ned, omega_ie, omega_en, gravity):
    """NED acceleration ``C f - (2 w_ie + w_en) x v + g``."""
    f_b = np.asarray(f_b, dtype=float)
    coriolis = np.cross(2.0 * omega_ie + omega_en, v_ned)
    g_ned = np.zeros_like(v_ned)
    g_ned[..., 2] = gravity
    return np.einsum("...ij,...j->...i", C, f_b) + g_ned - coriolis


def attitude_rate(C, w_b, omega_ie, omega_en):
    """Rate of change of the body-to-NED matrix.

    ``C_dot = C [w_b x] - [(w_ie + w_en) x] C``.
    """
    return C @ skew(w_b) - skew(omega_ie + omega_en) @ C


def mechanize_step(lat, lon, h, v, C, f_b, w_b, dt, earth: EarthModel = WGS84,
                   check: bool = True):
    """One Euler step of the full mechanization, batched.

    All rates are evaluated at the pre-step state; the attitude is
    re-orthonormalized after the update.  Returns the updated
    ``(lat, lon, h, v, C)``.
    """
    omega_ie, omega_en = earth_rates(lat, v, h, earth)
    r_dot = position_rate(lat, h, v, earth, check=check)
    v_dot = velocity_rate(C, f_b, v, omega_ie, omega_en, earth.gravity)
    C_dot = attitude_rate(C, w_b, omega_ie, omega_en)
    lat = lat + dt * r_dot[..., 0]
    lon = lon + dt * r_dot[..., 1]
    h = h + dt * r_dot[..., 2]
    v = v + dt * v_dot
    C = reorthonormalize(C + dt * C_dot)
    return lat, lon, h, v, C


def strapdown_step(state: NavState, imu: ImuSample, dt: float,
                   earth: EarthModel = WGS84) -> NavState:
    """Propagate a navigation state through one IMU sample.

    The sample is bias-corrected with the state's current estimates
    before mechanization.  Deterministic for fixed inputs.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    f_b = np.asarray(imu.f, dtype=float) - state.b_a
    w_b = np.asarray(imu.w, dtype=float) - state.b_g
    lat, lon, h, v, C = mechanize_step(
        state.pos.lat, state.pos.lon, state.pos.h, state.vel, state.att,
        f_b, w_b, dt, earth,
    )
    return replace(
        state,
        pos=GeodeticPosition(float(lat), float(lon), float(h)),
        vel=v,
        att=C,
    )
