"""IMU and DVL error models, beam geometry, and beam-space velocity estimation.

Every stochastic routine takes an explicit ``numpy.random.Generator``;
nothing touches global RNG state, so Monte-Carlo runs stay reproducible
and independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedError
from .frames import skew

_COND_MAX = 1e12


@dataclass(frozen=True)
class ImuErrorModel:
    """Additive IMU corruption: white noise plus random-walk biases.

    ``sigma_a``/``sigma_g`` are per-sample white-noise standard
    deviations (m/s^2, rad/s).  ``sigma_ab``/``sigma_gb`` are bias
    random-walk densities (m/s^2/sqrt(s), rad/s/sqrt(s)); the per-step
    bias increment has std ``sigma_b * sqrt(dt)``.
    """

    sigma_a: float = 0.0
    sigma_g: float = 0.0
    sigma_ab: float = 0.0
    sigma_gb: float = 0.0
    b_a0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    b_g0: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("sigma_a", "sigma_g", "sigma_ab", "sigma_gb"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class DvlConfig:
    """Geometry of the 4-beam Janus DVL.

    ``alpha_pitch`` is the fixed beam pitch from the vertical; ``C_d_b``
    rotates DVL-frame vectors into the body frame; ``rate`` is the
    output rate in Hz.
    """

    alpha_pitch: float = np.deg2rad(20.0)
    C_d_b: np.ndarray = field(default_factory=lambda: np.eye(3))
    rate: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha_pitch < np.pi / 2:
            raise ValueError("beam pitch must lie in (0, pi/2)")


@dataclass(frozen=True)
class DvlErrorModel:
    """Built-in DVL errors: per-beam bias, per-axis scale, beam white noise."""

    b_dvl: np.ndarray = field(default_factory=lambda: np.zeros(4))
    s_dvl: np.ndarray = field(default_factory=lambda: np.zeros(3))
    sigma_beam: float = 0.0

    def __post_init__(self):
        if self.sigma_beam < 0:
            raise ValueError("sigma_beam must be non-negative")


@dataclass(frozen=True)
class BeamMeasurement:
    """One DVL epoch: time and the 4 beam-direction velocities (m/s)."""

    t: float
    y: np.ndarray


def corrupt_imu(f_true: np.ndarray, w_true: np.ndarray, dt: float,
                model: ImuErrorModel, rng: np.random.Generator,
                sigma_scale: np.ndarray | None = None):
    """Corrupt a clean IMU stream with bias random walks and white noise.

    Parameters
    ----------
    f_true, w_true : array (n, 3)
        Clean specific force and angular rate.
    dt : float
        Sample interval in seconds.
    model : ImuErrorModel
    rng : numpy.random.Generator
    sigma_scale : array (n,), optional
        Per-sample multiplier applied to all four noise densities
        (the simulator's time-varying noise schedule).

    Returns
    -------
    f, w : array (n, 3)
        Corrupted streams.
    b_a, b_g : array (n, 3)
        The true bias trajectories that were applied.
    """
    f_true = np.asarray(f_true, dtype=float)
    w_true = np.asarray(w_true, dtype=float)
    n = f_true.shape[0]
    scale = np.ones(n) if sigma_scale is None else np.asarray(sigma_scale, dtype=float)
    sq = scale[:, None]

    inc_a = model.sigma_ab * np.sqrt(dt) * sq * rng.standard_normal((n, 3))
    inc_g = model.sigma_gb * np.sqrt(dt) * sq * rng.standard_normal((n, 3))
    b_a = model.b_a0 + np.cumsum(inc_a, axis=0)
    b_g = model.b_g0 + np.cumsum(inc_g, axis=0)

    f = f_true + b_a + model.sigma_a * sq * rng.standard_normal((n, 3))
    w = w_true + b_g + model.sigma_g * sq * rng.standard_normal((n, 3))
    return f, w, b_a, b_g


def corrupt_imu_sample(imu_f: np.ndarray, imu_w: np.ndarray, b_a, b_g,
                       model: ImuErrorModel, rng: np.random.Generator):
    """Single-sample corruption: current biases plus white noise."""
    f = np.asarray(imu_f, dtype=float) + b_a + model.sigma_a * rng.standard_normal(3)
    w = np.asarray(imu_w, dtype=float) + b_g + model.sigma_g * rng.standard_normal(3)
    return f, w


def beam_matrix(cfg: DvlConfig) -> np.ndarray:
    """4x3 Janus beam-direction matrix.

    Row i is ``[cos(psi_i) sin(a), sin(psi_i) sin(a), cos(a)]`` with the
    beam yaws at 45, 135, 225, 315 degrees.
    """
    psi = np.deg2rad(np.arange(4) * 90.0 + 45.0)
    sa, ca = np.sin(cfg.alpha_pitch), np.cos(cfg.alpha_pitch)
    return np.column_stack([np.cos(psi) * sa, np.sin(psi) * sa, np.full(4, ca)])


def simulate_dvl(v_body: np.ndarray, t: float, cfg: DvlConfig,
                 err: DvlErrorModel, rng: np.random.Generator) -> BeamMeasurement:
    """Project a true body velocity onto the beams and apply the error model.

    The velocity is rotated to the DVL frame, scaled element-wise by
    ``1 + s_dvl``, projected, then per-beam bias and white noise added.
    """
    H = beam_matrix(cfg)
    v_d = cfg.C_d_b.T @ np.asarray(v_body, dtype=float)
    y = H @ (v_d * (1.0 + err.s_dvl)) + err.b_dvl
    y = y + err.sigma_beam * rng.standard_normal(4)
    return BeamMeasurement(t=t, y=y)


def estimate_dvl_velocity(y: np.ndarray | BeamMeasurement, cfg: DvlConfig) -> np.ndarray:
    """Least-squares body velocity from 4 beam velocities.

    Solves the normal equations ``v_d = (H^T H)^-1 H^T y`` and rotates
    the result to the body frame.

    Raises
    ------
    IllConditionedError
        If the normal-equations condition number exceeds 1e12.
    """
    if isinstance(y, BeamMeasurement):
        y = y.y
    H = beam_matrix(cfg)
    HtH = H.T @ H
    eig = np.linalg.eigvalsh(HtH)
    if eig[0] <= 0 or eig[-1] / eig[0] > _COND_MAX:
        raise IllConditionedError("beam geometry normal equations ill-conditioned")
    v_d = np.linalg.solve(HtH, H.T @ np.asarray(y, dtype=float))
    return cfg.C_d_b @ v_d


def beams_to_body(y: np.ndarray, cfg: DvlConfig) -> np.ndarray:
    """Vectorized least-squares conversion of a beam stream ``(m, 4)`` to body velocity ``(m, 3)``."""
    H = beam_matrix(cfg)
    HtH = H.T @ H
    eig = np.linalg.eigvalsh(HtH)
    if eig[0] <= 0 or eig[-1] / eig[0] > _COND_MAX:
        raise IllConditionedError("beam geometry normal equations ill-conditioned")
    v_d = np.linalg.solve(HtH, H.T @ np.asarray(y, dtype=float).T).T
    return v_d @ cfg.C_d_b.T


def dvl_measurement_noise(cfg: DvlConfig, sigma_beam: float) -> np.ndarray:
    """Covariance of the LS body-velocity estimate for white beam noise.

    ``R = sigma^2 C_d_b (H^T H)^-1 C_d_b^T`` -- the measurement-noise
    matrix a filter should use when fed least-squares DVL velocities.
    """
    H = beam_matrix(cfg)
    inv = np.linalg.inv(H.T @ H)
    return sigma_beam**2 * cfg.C_d_b @ inv @ cfg.C_d_b.T


__all__ = [
    "ImuErrorModel", "DvlConfig", "DvlErrorModel", "BeamMeasurement",
    "corrupt_imu", "corrupt_imu_sample", "beam_matrix", "simulate_dvl",
    "estimate_dvl_velocity", "beams_to_body", "dvl_measurement_noise", "skew",
]
