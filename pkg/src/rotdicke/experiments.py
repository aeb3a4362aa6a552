"""Driving protocols and sweeps.

A protocol picks an engine (mean-field or finite-size), one of the
initial-state preparations, and whether the rotation is switched on at
t=0.  The final time is always t_f = n_revolutions * 2 pi / delta_phi;
undriven comparison runs keep the same t_f, using delta_phi only to fix it.
Sweeps repeat a protocol over parameter grids, recording final-time and
time-averaged observables per cell; a failed cell is tagged with its error
instead of aborting the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import meanfield, quantum
from .meanfield import Trajectory
from .model import ModelParams, dynamical_critical_fit, rotated_critical_coupling

__all__ = [
    "ENGINES",
    "INITIAL_KINDS",
    "OBSERVABLES",
    "NONZERO_THRESHOLD",
    "ProtocolSpec",
    "SweepCell",
    "SweepResult",
    "run_protocol",
    "sweep_lambda",
    "sweep_velocity",
    "phase_diagram",
    "resolve_n_max",
]

ENGINES = ("meanfield", "quantum")
INITIAL_KINDS = (
    "stationary_dicke",
    "stationary_circle",
    "fock",
    "nearly_fock",
    "ground_state",
    "explicit",
)
OBSERVABLES = ("mean_photon_scaled", "parity", "scaled_parity")

# Time-averaged scaled photon number above this counts as a macroscopic
# ("nonzero") phase-diagram region; separates integrator noise from
# super-radiant values at desk scale.
NONZERO_THRESHOLD = 1e-3

N_MAX_FLOOR = 100


@dataclass(frozen=True)
class ProtocolSpec:
    """Full description of one run; every sweep cell derives from one."""

    params: ModelParams
    engine: str = "meanfield"
    initial: str = "stationary_dicke"
    epsilon: float | None = None
    alpha: complex = 0j
    zeta: complex = 0j
    driven: bool = True
    n_revolutions: int = 1
    sample_count: int = 1000
    observables: tuple[str, ...] = ("mean_photon_scaled", "parity")
    rtol: float = meanfield.DEFAULT_RTOL

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.initial not in INITIAL_KINDS:
            raise ValueError(
                f"initial must be one of {INITIAL_KINDS}, got {self.initial!r}"
            )
        if self.initial == "nearly_fock" and self.epsilon is None:
            raise ValueError("initial=nearly_fock requires epsilon")
        if self.initial == "ground_state" and self.engine != "quantum":
            raise ValueError(
                "initial=ground_state requires the quantum engine; the "
                "thermodynamic-limit counterpart is stationary_dicke"
            )
        if self.params.delta_phi <= 0.0:
            raise ValueError(
                "delta_phi must be positive: it defines t_f = n_R*2pi/delta_phi "
                "(undriven runs use it for t_f only)"
            )
        if self.n_revolutions < 1:
            raise ValueError(f"n_revolutions must be >= 1, got {self.n_revolutions}")
        if self.sample_count < 2:
            raise ValueError(f"sample_count must be >= 2, got {self.sample_count}")
        if self.rtol <= 0.0:
            raise ValueError(f"rtol must be positive, got {self.rtol}")
        bad = set(self.observables) - set(OBSERVABLES)
        if bad:
            raise ValueError(f"unknown observables: {sorted(bad)}")
        if not self.observables:
            raise ValueError("at least one observable is required")
        if self.engine == "quantum" and "scaled_parity" in self.observables:
            raise ValueError(
                "scaled_parity is a mean-field (rescaled phase space) observable; "
                "the quantum engine reports parity"
            )

    @property
    def t_final(self) -> float:
        return self.n_revolutions * 2.0 * math.pi / self.params.delta_phi

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, self.sample_count)


@dataclass(frozen=True)
class SweepCell:
    """Per-grid-point record: final-time and time-averaged observables."""

    coords: tuple[float, ...]
    final: dict[str, float] = field(default_factory=dict)
    average: dict[str, float] = field(default_factory=dict)
    region: str | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    """Grid of protocol outcomes plus the provenance spec.

    ``axes`` holds (name, values) pairs; cells are stored in lexicographic
    order of the axis indices (last axis fastest).  ``overlays`` carries
    reference curves evaluated on the velocity axis for phase diagrams.
    """

    axes: tuple[tuple[str, np.ndarray], ...]
    cells: tuple[SweepCell, ...]
    spec: ProtocolSpec
    overlays: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        expected = 1
        for _, values in self.axes:
            expected *= len(values)
        if len(self.cells) != expected:
            raise ValueError(
                f"cell count {len(self.cells)} != product of axis lengths {expected}"
            )

    def values(self, observable: str, kind: str = "average") -> np.ndarray:
        """Grid of one observable, NaN where a cell failed."""
        shape = tuple(len(values) for _, values in self.axes)
        out = np.full(shape, np.nan)
        flat = out.reshape(-1)
        for i, cell in enumerate(self.cells):
            record = cell.average if kind == "average" else cell.final
            if cell.error is None:
                flat[i] = record[observable]
        return out


def _initial_labels(spec: ProtocolSpec) -> tuple[complex, complex]:
    if spec.initial == "explicit":
        return complex(spec.alpha), complex(spec.zeta)
    alpha, zeta = quantum.initial_state_params(spec.initial, spec.params, spec.epsilon)
    return complex(alpha), complex(zeta)


def _meanfield_observables(traj: Trajectory, names: tuple[str, ...]) -> Trajectory:
    j = traj.params.j
    two_j = traj.params.two_j
    q1, p1 = traj.data["q1"], traj.data["p1"]
    q2, p2 = traj.data["q2"], traj.data["p2"]
    r2 = q1**2 + p1**2
    field2 = q2**2 + p2**2
    data = dict(traj.data)
    for name in names:
        if name == "mean_photon_scaled":
            data[name] = field2 / (2.0 * j)
        elif name == "parity":
            # exp(-2|alpha|^2) ((1-|zeta|^2)/(1+|zeta|^2))^(2j) in phase space.
            data[name] = np.exp(-field2) * (1.0 - r2 / (2.0 * j)) ** two_j
        elif name == "scaled_parity":
            base = 1.0 - r2 / (2.0 * j * j)
            if np.any(base < 0.0):
                raise ValueError(
                    "q1^2+p1^2 exceeded 2j^2 along the trajectory; "
                    "scaled parity undefined"
                )
            data[name] = np.exp(-field2 / j) * base**two_j
    return replace(traj, data=data, observables=names)


def resolve_n_max(spec: ProtocolSpec) -> int:
    """Boson truncation for a quantum run when the parameters leave it open.

    Grown from the floor of 100 until the initial state carries less than
    1e-10 truncation loss; for the ground state the occupation of the top
    Fock row stands in for the loss.
    """
    if spec.params.n_max is not None:
        return spec.params.n_max
    n_max = N_MAX_FLOOR
    if spec.initial == "ground_state":
        while True:
            params = replace(spec.params, n_max=n_max)
            state = quantum.ground_state(params)
            block = state.amplitudes.reshape(spec.params.two_j + 1, n_max + 1)
            top_row = float(np.sum(np.abs(block[:, -1]) ** 2))
            if top_row < 1e-12:
                return n_max
            n_max = int(math.ceil(n_max * 1.5))
    alpha, zeta = _initial_labels(spec)
    while True:
        try:
            quantum.coherent_state(alpha, zeta, spec.params.j, n_max)
            return n_max
        except ValueError:
            n_max = int(math.ceil(n_max * 1.5))


def run_protocol(spec: ProtocolSpec) -> Trajectory:
    """Prepare the initial state, evolve it, and attach the observables."""
    if spec.engine == "meanfield":
        alpha, zeta = _initial_labels(spec)
        start = meanfield.point_from_coherent(alpha, zeta, spec.params.j)
        traj = meanfield.integrate(
            start,
            spec.params,
            spec.t_final,
            sample_count=spec.sample_count,
            tol=spec.rtol,
            driven=spec.driven,
        )
        return _meanfield_observables(traj, spec.observables)

    params = replace(spec.params, n_max=resolve_n_max(spec))
    ops = quantum.build_operators(params)
    if spec.initial == "ground_state":
        psi0 = quantum.ground_state(params, ops=ops)
    else:
        alpha, zeta = _initial_labels(spec)
        psi0 = quantum.coherent_state(alpha, zeta, params.j, params.n_max)
    return quantum.evolve(
        psi0,
        params,
        spec.time_grid(),
        observables=spec.observables,
        driven=spec.driven,
        ops=ops,
    )


def _run_cell(spec: ProtocolSpec, coords: tuple[float, ...]) -> SweepCell:
    try:
        traj = run_protocol(spec)
    except (ValueError, RuntimeError) as exc:
        return SweepCell(coords=coords, error=str(exc))
    final = {name: traj.final(name) for name in spec.observables}
    average = {name: traj.average(name) for name in spec.observables}
    return SweepCell(coords=coords, final=final, average=average)


def _validated_axis(name: str, values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} values must form a nonempty 1-D grid")
    if arr.size > 1 and not np.all(np.diff(arr) > 0.0):
        raise ValueError(f"{name} values must be strictly increasing")
    return arr


def sweep_lambda(spec: ProtocolSpec, lambda_values) -> SweepResult:
    """Repeat the protocol across couplings."""
    values = _validated_axis("lambda", lambda_values)
    cells = []
    for lam in values:
        cell_spec = replace(spec, params=replace(spec.params, lam=float(lam)))
        cells.append(_run_cell(cell_spec, (float(lam),)))
    return SweepResult(axes=(("lambda", values),), cells=tuple(cells), spec=spec)


def sweep_velocity(spec: ProtocolSpec, delta_phi_values) -> SweepResult:
    """Repeat the protocol across driving velocities (all positive).

    delta_phi = 0 is not a sweep point: t_f = n_R*2pi/delta_phi diverges
    there, the undriven branch covers it.
    """
    values = _validated_axis("delta_phi", delta_phi_values)
    if values[0] <= 0.0:
        raise ValueError("delta_phi sweep values must be positive")
    cells = []
    for dphi in values:
        cell_spec = replace(spec, params=replace(spec.params, delta_phi=float(dphi)))
        cells.append(_run_cell(cell_spec, (float(dphi),)))
    return SweepResult(axes=(("delta_phi", values),), cells=tuple(cells), spec=spec)


def phase_diagram(spec: ProtocolSpec, lambda_values, delta_phi_values) -> SweepResult:
    """2-D grid over (lambda, delta_phi) with critical-line overlays.

    Cells run in lexicographic order (lambda major, delta_phi minor).  Each
    cell is classified against NONZERO_THRESHOLD on the time-averaged scaled
    photon number; the overlays carry the rotated critical coupling and the
    empirical dynamical fit per velocity for downstream plotting.
    """
    lam_values = _validated_axis("lambda", lambda_values)
    dphi_values = _validated_axis("delta_phi", delta_phi_values)
    if dphi_values[0] <= 0.0:
        raise ValueError("delta_phi grid values must be positive")
    cells = []
    for lam in lam_values:
        for dphi in dphi_values:
            cell_spec = replace(
                spec,
                params=replace(spec.params, lam=float(lam), delta_phi=float(dphi)),
            )
            cell = _run_cell(cell_spec, (float(lam), float(dphi)))
            if cell.error is None and "mean_photon_scaled" in cell.average:
                region = (
                    "nonzero"
                    if cell.average["mean_photon_scaled"] > NONZERO_THRESHOLD
                    else "zero"
                )
                cell = replace(cell, region=region)
            cells.append(cell)
    overlays = {
        "lambda_c_rot": np.array(
            [
                rotated_critical_coupling(spec.params.omega, spec.params.omega0, d)
                for d in dphi_values
            ]
        ),
        "lambda_c_dyn": np.array([dynamical_critical_fit(d) for d in dphi_values]),
    }
    return SweepResult(
        axes=(("lambda", lam_values), ("delta_phi", dphi_values)),
        cells=tuple(cells),
        spec=spec,
        overlays=overlays,
    )
