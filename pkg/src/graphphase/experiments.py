"""Synthetic rosace and twisted-grid experiments, packaged as data tables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import GridSpec, RosaceSpec, gen_grid, gen_rosace, rosace_truth, signal_planar_wave, signal_rosace
from .hilbert import AnalyticGraphSignal, analytic, build_ght, instantaneous_frequency
from .perturb import PerturbationResult, perturb
from .spectral import DEFAULT_TOLERANCES, ToleranceSet


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Outcome of one experiment.

    ``table`` maps column names to equal-length arrays (one row per fan for
    the rosace, one row per node for the grid); ``summary`` holds scalars.
    """

    name: str
    perturbation: PerturbationResult = field(repr=False)
    analytic: AnalyticGraphSignal = field(repr=False)
    table: dict[str, np.ndarray]
    series: dict[str, np.ndarray]
    summary: dict

    @property
    def added_edges(self) -> list[tuple[int, int, float]]:
        return self.perturbation.added_edges

    def to_dict(self) -> dict:
        return {
            "experiment": self.name,
            "added_edges": [[s, d, w] for s, d, w in self.added_edges],
            "before": self.perturbation.before.to_dict(),
            "after": self.perturbation.after.to_dict(),
            "summary": self.summary,
            "table": {k: _jsonable(v) for k, v in self.table.items()},
            "series": {k: _jsonable(v) for k, v in self.series.items()},
        }


def _jsonable(v: np.ndarray) -> list:
    v = np.asarray(v)
    return [int(a) for a in v] if v.dtype.kind in "iu" else [float(a) for a in v]


def fan_statistics(spec: RosaceSpec, a: AnalyticGraphSignal) -> tuple[np.ndarray, np.ndarray]:
    """Per-fan mean amplitude and mean ``|omega|`` with the hub left out.

    Frequencies are taken around the closed fan cycle and only over steps
    whose two endpoints are both off-hub.
    """
    amp = a.amplitude
    phi = a.phase
    mean_amp = np.empty(spec.n_hubs)
    mean_omega = np.empty(spec.n_hubs)
    for f in range(spec.n_hubs):
        fan = spec.fan_nodes(f)
        mean_amp[f] = amp[fan[1:]].mean()
        omega = instantaneous_frequency(phi, fan, closed=True)
        # step k goes fan[k] -> fan[k+1]; steps 0 and last touch the hub
        mean_omega[f] = np.abs(omega[1:-1]).mean()
    return mean_amp, mean_omega


def run_rosace(
    spec: RosaceSpec = RosaceSpec(), weight: float = 1.0, tolerances: ToleranceSet = DEFAULT_TOLERANCES
) -> ExperimentReport:
    g = gen_rosace(spec)
    res = perturb(g, weight=weight, tolerances=tolerances)
    op = build_ght(res.decomposition)
    a = analytic(op, signal_rosace(spec))
    amp, omega = fan_statistics(spec, a)
    amp_true, omega_true = rosace_truth(spec)
    table = {
        "fan": np.arange(1, spec.n_hubs + 1),
        "amplitude": amp,
        "amplitude_truth": amp_true,
        "amplitude_rel_error": np.abs(amp - amp_true) / amp_true,
        "omega": omega,
        "omega_truth": omega_true,
        "omega_rel_error": np.abs(omega - omega_true) / omega_true,
    }
    hubs = spec.hubs()
    series = {
        "hub": np.array(hubs),
        "hub_amplitude": a.amplitude[hubs],
        "hub_phase": a.phase[hubs],
        "hub_omega": instantaneous_frequency(a.phase, hubs, closed=True),
    }
    summary = {
        "n_hubs": spec.n_hubs,
        "n_fan": spec.n_fan,
        "added_edge_count": len(res.added_edges),
        "max_amplitude_rel_error": float(table["amplitude_rel_error"].max()),
        "max_omega_rel_error": float(table["omega_rel_error"].max()),
        "imag_residue": a.imag_residue,
    }
    return ExperimentReport("rosace", res, a, table, series, summary)


def grid_increments(spec: GridSpec, phi: np.ndarray, direction: str = "horizontal") -> np.ndarray:
    """Phase steps along interior edges in the propagation direction.

    Returns a ``(lines, steps)`` array: one row per grid row (horizontal) or
    column (vertical), wrap edges excluded.
    """
    field_ = np.asarray(phi).reshape(spec.rows, spec.cols)
    if direction == "vertical":
        field_ = field_.T
    rows = [instantaneous_frequency(line, np.arange(len(line))) for line in field_]
    return np.array(rows)


def run_grid(
    spec: GridSpec = GridSpec(),
    direction: str = "horizontal",
    period: float | None = None,
    weight: float = 1.0,
    tolerances: ToleranceSet = DEFAULT_TOLERANCES,
) -> ExperimentReport:
    g = gen_grid(spec)
    res = perturb(g, weight=weight, tolerances=tolerances)
    op = build_ght(res.decomposition)
    x = signal_planar_wave(spec, direction, period)
    a = analytic(op, x)
    if period is None:
        period = spec.cols if direction == "horizontal" else spec.rows
    inc = grid_increments(spec, a.phase, direction)
    i, j = np.divmod(np.arange(spec.n), spec.cols)
    table = {
        "node": np.arange(spec.n),
        "row": i,
        "col": j,
        "x": a.source,
        "hx": a.hilbert,
        "amplitude": a.amplitude,
        "phase": a.phase,
    }
    summary = {
        "rows": spec.rows,
        "cols": spec.cols,
        "twist": spec.twist,
        "direction": direction,
        "period": float(period),
        "added_edge_count": len(res.added_edges),
        "max_amplitude_deviation": float(np.max(np.abs(a.amplitude - 1.0))),
        "mean_phase_increment": float(inc.mean()),
        "nominal_phase_increment": float(2 * np.pi / period),
        "max_increment_deviation": float(np.max(np.abs(inc - inc.mean()))),
        "imag_residue": a.imag_residue,
    }
    return ExperimentReport("grid", res, a, table, {"phase_increments": inc.ravel()}, summary)
