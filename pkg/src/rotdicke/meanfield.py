"""Thermodynamic-limit engine: mean-field equations of motion and observables.

The flow lives on (q1, p1, q2, p2) with the spin sector confined to
q1^2 + p1^2 < 4j.  The drive enters through phi(t) = delta_phi * t; an
undriven evolution is the same flow with the drive velocity forced to zero
(the physical ``delta_phi`` of the parameters is then only used by callers
to fix the final time).

The coherent-state labels map onto phase space as

    zeta  = (q1 + i p1) / sqrt(4j - (q1^2 + p1^2)),
    alpha = (q2 + i p2) / sqrt(2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import ModelParams, PhasePoint

__all__ = [
    "IntegrationError",
    "Trajectory",
    "eom_rhs",
    "hp_rhs",
    "integrate",
    "classical_hamiltonian",
    "mean_photon_scaled",
    "parity_meanfield",
    "scaled_parity_meanfield",
    "time_average",
    "point_from_coherent",
    "coherent_from_point",
]

# rtol 1e-10 leaves up to ~5e-8 relative energy drift over t=50 on energetic
# trajectories; 1e-12 keeps it below 1e-9.
DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 1e-12

# Relative distance to the sphere boundary 4j treated as "on the boundary";
# the square-root derivative diverges there.  During stepping the guard acts
# by step rejection (NaN derivatives), so trial evaluations that overshoot
# the domain are retried with a smaller step instead of killing the run.
_BOUNDARY_GUARD = 1e-12


class IntegrationError(RuntimeError):
    """Mean-field integration failure, carrying the time it occurred at."""

    def __init__(self, t: float, message: str):
        super().__init__(f"{message} (t={t!r})")
        self.t = t


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled time series produced by either engine.

    ``data`` maps column names to arrays aligned with ``times``; the
    mean-field engine always includes the phase-space coordinates
    q1, p1, q2, p2 next to whatever observables were attached.
    """

    params: ModelParams
    engine: str  # "meanfield" | "quantum"
    driven: bool
    times: np.ndarray
    data: dict[str, np.ndarray]
    observables: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("times must be a nonempty 1-D array")
        if t[0] != 0.0:
            raise ValueError(f"first sample must be at t=0, got {t[0]}")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ValueError("sample times must be strictly increasing")
        for name, col in self.data.items():
            if len(col) != t.size:
                raise ValueError(f"column {name!r} has {len(col)} samples, expected {t.size}")

    def column(self, name: str) -> np.ndarray:
        return self.data[name]

    def final(self, name: str) -> float:
        return float(self.data[name][-1])

    def average(self, name: str) -> float:
        return time_average(self.times, self.data[name])


def _rhs(t, y, omega0, omega, lam, four_j, drive):
    q1 = y[0]
    p1 = y[1]
    q2 = y[2]
    p2 = y[3]
    out = np.empty(4)
    rem = four_j - (q1 * q1 + p1 * p1)
    if rem < _BOUNDARY_GUARD * four_j:
        out[:] = np.nan  # reject the step; see _BOUNDARY_GUARD
        return out
    phi = drive * t
    cos_phi = math.cos(phi)
    sin_phi = math.sin(phi)
    proj = cos_phi * q1 + sin_phi * p1
    root = math.sqrt(rem / four_j)
    denom = math.sqrt(four_j * rem)
    g = 2.0 * lam * q2
    out[0] = omega0 * p1 - g * proj * p1 / denom + g * root * sin_phi
    out[1] = -omega0 * q1 + g * proj * q1 / denom - g * root * cos_phi
    out[2] = omega * p2
    out[3] = -omega * q2 - 2.0 * lam * root * proj
    return out


try:  # JIT pays off in sweeps: the integrator calls this millions of times.
    from numba import njit

    _rhs = njit(cache=True)(_rhs)
except ImportError:  # pragma: no cover - numba is an optional accelerator
    pass


def eom_rhs(point: PhasePoint, t: float, params: ModelParams) -> np.ndarray:
    """Time derivative (dq1, dp1, dq2, dp2) of the driven mean-field flow."""
    r2 = point.q1**2 + point.p1**2
    four_j = 4.0 * params.j
    if four_j - r2 < _BOUNDARY_GUARD * four_j:
        raise ValueError(
            f"q1^2+p1^2 = {r2} is on or outside the sphere of radius^2 4j = {four_j}; "
            "the square-root derivative diverges there"
        )
    return np.asarray(
        _rhs(
            t,
            np.array([point.q1, point.p1, point.q2, point.p2]),
            params.omega0,
            params.omega,
            params.lam,
            four_j,
            params.delta_phi,
        )
    )


def hp_rhs(
    alpha: complex, beta: complex, t: float, params: ModelParams
) -> tuple[complex, complex]:
    """Displacement-parameter flow (dalpha/dt, dbeta/dt) of the bosonized model.

    Equivalent to :func:`eom_rhs` under beta = (q1 + i p1)/sqrt(2),
    alpha = (q2 + i p2)/sqrt(2); kept as an independent oracle for it.
    """
    two_j = 2.0 * params.j
    bb = (beta * beta.conjugate()).real
    if bb >= two_j:
        raise ValueError(f"|beta|^2 = {bb} must be below 2j = {two_j}")
    phi = params.delta_phi * t
    e_plus = cmath.exp(1j * phi)
    e_minus = cmath.exp(-1j * phi)
    root = math.sqrt((two_j - bb) / two_j)
    mix = beta.conjugate() * e_plus + beta * e_minus
    re_alpha2 = alpha + alpha.conjugate()
    d_alpha = -1j * (params.omega * alpha + params.lam * root * mix)
    d_beta = -1j * (
        params.omega0 * beta
        + params.lam * root * re_alpha2 * e_plus
        - 0.5
        * params.lam
        * re_alpha2
        * mix
        * beta
        / (math.sqrt(two_j) * math.sqrt(two_j - bb))
    )
    return d_alpha, d_beta


def classical_hamiltonian(
    point: PhasePoint, t: float, params: ModelParams, driven: bool = True
) -> float:
    """Classical Hamiltonian; a constant of motion when the drive is off."""
    four_j = 4.0 * params.j
    r2 = point.q1**2 + point.p1**2
    if r2 > four_j:
        raise ValueError(f"q1^2+p1^2 = {r2} exceeds 4j = {four_j}")
    phi = (params.delta_phi * t) if driven else 0.0
    proj = math.cos(phi) * point.q1 + math.sin(phi) * point.p1
    return (
        0.5 * params.omega0 * (r2 - 2.0 * params.j)
        + 0.5 * params.omega * (point.q2**2 + point.p2**2)
        + 2.0 * params.lam * math.sqrt((four_j - r2) / four_j) * proj * point.q2
    )


def integrate(
    start: PhasePoint,
    params: ModelParams,
    t_end: float,
    sample_count: int = 1000,
    tol: float = DEFAULT_RTOL,
    driven: bool = True,
) -> Trajectory:
    """Integrate the mean-field flow and sample it on a uniform grid.

    Steps adaptively (embedded RK 4/5, relative tolerance ``tol``) and
    reports on ``sample_count`` uniform times including t=0 and ``t_end``.
    Raises :class:`IntegrationError` when step control fails, which in
    practice flags an approach to the q1^2+p1^2 -> 4j boundary.
    """
    if t_end <= 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if sample_count < 2:
        raise ValueError(f"sample_count must be >= 2, got {sample_count}")
    four_j = 4.0 * params.j
    r2 = start.q1**2 + start.p1**2
    if r2 >= four_j:
        raise ValueError(
            f"start violates q1^2+p1^2 < 4j: {r2} >= {four_j}"
        )
    drive = params.delta_phi if driven else 0.0
    t_grid = np.linspace(0.0, t_end, sample_count)
    sol = solve_ivp(
        _rhs,
        (0.0, t_end),
        [start.q1, start.p1, start.q2, start.p2],
        method="RK45",
        rtol=tol,
        atol=DEFAULT_ATOL,
        t_eval=t_grid,
        args=(params.omega0, params.omega, params.lam, four_j, drive),
    )
    if not sol.success:
        t_fail = float(sol.t[-1]) if sol.t.size else 0.0
        raise IntegrationError(
            t_fail,
            f"integration failed ({sol.message.strip()}); step rejection this "
            "hard flags an approach to the q1^2+p1^2 -> 4j boundary",
        )
    q1, p1, q2, p2 = sol.y
    r2_samples = q1**2 + p1**2
    bad = np.nonzero(r2_samples > four_j)[0]
    if bad.size:
        raise IntegrationError(
            float(t_grid[bad[0]]),
            "sampled point violates q1^2+p1^2 <= 4j; step control failed",
        )
    return Trajectory(
        params=params,
        engine="meanfield",
        driven=driven,
        times=t_grid,
        data={"q1": q1, "p1": p1, "q2": q2, "p2": p2},
    )


def mean_photon_scaled(point: PhasePoint, j: float) -> float:
    """Scaled mean photon number (q2^2 + p2^2)/(2j)."""
    return (point.q2**2 + point.p2**2) / (2.0 * j)


def parity_meanfield(alpha: complex, zeta: complex, j: float) -> float:
    """Parity expectation in the product coherent state |alpha>|zeta>.

    exp(-2|alpha|^2) * ((1-|zeta|^2)/(1+|zeta|^2))^(2j), with e^(i pi) - 1
    taken as exactly -2 so no imaginary dust is reported.
    """
    aa = abs(alpha) ** 2
    zz = abs(zeta) ** 2
    if not math.isfinite(zz):
        raise ValueError("zeta must be finite")
    base = (1.0 - zz) / (1.0 + zz)
    return math.exp(-2.0 * aa) * base ** int(round(2.0 * j))


def scaled_parity_meanfield(point: PhasePoint, j: float) -> float:
    """Parity with all phase-space coordinates rescaled by sqrt(j).

    exp(-(q2^2+p2^2)/j) * (1 - (q1^2+p1^2)/(2 j^2))^(2j); the base of the
    power must be nonnegative.
    """
    r2 = point.q1**2 + point.p1**2
    base = 1.0 - r2 / (2.0 * j * j)
    if base < 0.0:
        if base < -1e-12:
            raise ValueError(
                f"q1^2+p1^2 = {r2} exceeds 2j^2 = {2.0 * j * j}; scaled parity undefined"
            )
        base = 0.0  # floating residue exactly on the edge
    return math.exp(-(point.q2**2 + point.p2**2) / j) * base ** int(round(2.0 * j))


def time_average(times, values) -> float:
    """Time average over the sample grid, (1/(t_f - t_0)) * integral v dt.

    Trapezoidal quadrature on the given samples; exact for linear data.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size < 2:
        raise ValueError("time average needs at least 2 samples")
    if not np.all(np.diff(t) > 0.0):
        raise ValueError("sample times must be strictly increasing")
    return float(np.trapezoid(v, t) / (t[-1] - t[0]))


def point_from_coherent(alpha: complex, zeta: complex, j: float, t: float = 0.0) -> PhasePoint:
    """Phase-space point labelled by the coherent-state pair (alpha, zeta)."""
    alpha = complex(alpha)
    zeta = complex(zeta)
    s = abs(zeta) ** 2
    scale = 2.0 * math.sqrt(j / (1.0 + s))
    return PhasePoint(
        q1=scale * zeta.real,
        p1=scale * zeta.imag,
        q2=math.sqrt(2.0) * alpha.real,
        p2=math.sqrt(2.0) * alpha.imag,
        t=t,
    )


def coherent_from_point(point: PhasePoint, j: float) -> tuple[complex, complex]:
    """Inverse of :func:`point_from_coherent`."""
    r2 = point.q1**2 + point.p1**2
    four_j = 4.0 * j
    if r2 >= four_j:
        raise ValueError(f"q1^2+p1^2 = {r2} must be below 4j = {four_j}")
    zeta = complex(point.q1, point.p1) / math.sqrt(four_j - r2)
    alpha = complex(point.q2, point.p2) / math.sqrt(2.0)
    return alpha, zeta
