"""Graph Hilbert transform, analytic graph signal and instantaneous quantities.

The transform is the spectral filter that multiplies graph Fourier
coefficients by ``-j`` where the eigenvalue lies in the upper half-plane,
``+j`` in the lower half-plane and ``0`` on the real axis.

Orientation: with ``A[i, j]`` the weight of ``j -> i`` the shift is a delay
along the edges, so on the cycle ``k -> k+1`` the eigenvalue ``exp(j w)``
belongs to the mode ``exp(-j w k)``.  The graph transform therefore equals the
classical discrete Hilbert transform of the signal read *against* the edge
direction, i.e. ``-H_classical(x)`` when ``x[k]`` is indexed along the edges,
and the phase decreases along edges for a forward wave.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DefectiveError, InvalidArgumentError, PreconditionError
from .graphs import DiGraph, GraphSignal
from .spectral import ConjugatePair, SpectralDecomposition, gft

log = logging.getLogger(__name__)

REALNESS_RTOL = 1e-10


def hilbert_filter(eigenvalues: np.ndarray, imag_tol: float = 1e-10, scale: float | None = None) -> np.ndarray:
    """Diagonal of the spectral Hilbert filter for the given eigenvalues."""
    lam = np.asarray(eigenvalues, dtype=complex)
    if scale is None:
        rho = float(np.max(np.abs(lam))) if lam.size else 0.0
        scale = rho if rho > 0 else 1.0
    thr = imag_tol * scale
    h = np.zeros(lam.shape, dtype=complex)
    h[lam.imag > thr] = -1j
    h[lam.imag < -thr] = 1j
    return h


@dataclass(frozen=True, eq=False)
class GhtOperator:
    decomposition: SpectralDecomposition = field(repr=False)
    filter_diag: np.ndarray

    @property
    def n(self) -> int:
        return self.decomposition.n

    def matrix(self) -> np.ndarray:
        """Dense real matrix ``U H U^-1`` (imaginary roundoff dropped)."""
        dec = self.decomposition
        return ((dec.basis * self.filter_diag) @ dec.dual()).real

    def apply(self, x) -> tuple[np.ndarray, float]:
        """Hilbert transform of ``x`` and the imaginary residue discarded from it."""
        v = _real_values(x, self.n)
        xhat = gft(self.decomposition, v)
        y = self.decomposition.basis @ (self.filter_diag * xhat)
        resid = float(np.max(np.abs(y.imag))) if self.n else 0.0
        return y.real, resid

    def real_projection(self, x) -> np.ndarray:
        """Component of ``x`` on the real-eigenvalue eigenvectors."""
        v = _real_values(x, self.n)
        xhat = gft(self.decomposition, v)
        keep = self.filter_diag == 0
        return (self.decomposition.basis[:, keep] @ xhat[keep]).real


@dataclass(frozen=True, eq=False)
class AnalyticGraphSignal:
    """``values = source + 1j * hilbert``."""

    values: np.ndarray
    source: np.ndarray
    hilbert: np.ndarray
    imag_residue: float = 0.0

    @property
    def amplitude(self) -> np.ndarray:
        return amplitude(self)

    @property
    def phase(self) -> np.ndarray:
        return phase(self)


def _real_values(x, n: int) -> np.ndarray:
    v = x.values if isinstance(x, GraphSignal) else np.asarray(x)
    if np.iscomplexobj(v):
        raise InvalidArgumentError("the graph Hilbert transform takes a real signal")
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise InvalidArgumentError(f"signal has shape {v.shape}, expected ({n},)")
    return v


def build_ght(dec: SpectralDecomposition) -> GhtOperator:
    """Hilbert operator for a diagonalizable, invertible decomposition."""
    diag = dec.diagnostics()
    if not diag.passed:
        raise DefectiveError(
            "the graph Hilbert transform needs a diagonalizable, invertible adjacency "
            f"(diagonalizable={diag.is_diagonalizable}, invertible={diag.is_invertible}); "
            "run graphphase.perturb.perturb first"
        )
    h = hilbert_filter(dec.eigenvalues, dec.tolerances.imag, dec.scale)
    for p in dec.pairing:
        if isinstance(p, ConjugatePair):
            assert h[p.k1] == np.conj(h[p.k2])
    h.setflags(write=False)
    return GhtOperator(dec, h)


def ght(op: GhtOperator, x) -> np.ndarray:
    """Real graph Hilbert transform of ``x``."""
    y, resid = op.apply(x)
    norm = float(np.linalg.norm(_real_values(x, op.n)))
    if resid > REALNESS_RTOL * max(norm, np.finfo(float).tiny):
        log.warning("Hilbert transform imaginary residue %.3e exceeds %.0e * ||x||", resid, REALNESS_RTOL)
    return y


def analytic(op: GhtOperator, x) -> AnalyticGraphSignal:
    """Analytic graph signal ``x + j H(x)``."""
    v = _real_values(x, op.n)
    hx, resid = op.apply(v)
    return AnalyticGraphSignal(v + 1j * hx, v.copy(), hx, resid)


def analytic_spectral(op: GhtOperator, x) -> np.ndarray:
    """The same analytic signal synthesised as ``U (I + jH) U^-1 x`` in one pass."""
    v = _real_values(x, op.n)
    xhat = gft(op.decomposition, v)
    return op.decomposition.basis @ ((1.0 + 1j * op.filter_diag) * xhat)


def _complex_values(a) -> np.ndarray:
    return a.values if isinstance(a, AnalyticGraphSignal) else np.asarray(a, dtype=complex)


def amplitude(a) -> np.ndarray:
    """Instantaneous amplitude ``|x~[k]|``."""
    return np.abs(_complex_values(a))


def wrap_phase(d) -> np.ndarray:
    """Map angles into ``]-pi, pi]`` (``-pi`` goes to ``+pi``)."""
    d = np.asarray(d, dtype=float)
    return np.pi - np.mod(np.pi - d, 2 * np.pi)


def phase(a) -> np.ndarray:
    """Instantaneous phase ``atan2(Im, Re)`` in ``]-pi, pi]``; an exact zero has phase 0."""
    z = _complex_values(a)
    phi = np.arctan2(z.imag, z.real)
    phi[phi == -np.pi] = np.pi
    return phi


def instantaneous_frequency(
    phi, path: Sequence[int], closed: bool = False, graph: DiGraph | None = None
) -> np.ndarray:
    """Wrapped phase difference ``phi[k] - phi[next(k)]`` along ``path``.

    One value per step: ``len(path) - 1`` for an open chain, ``len(path)``
    when ``closed`` (the last node steps back to the first).  If ``graph`` is
    given every step must be an edge.
    """
    phi = np.asarray(phi, dtype=float)
    nodes = np.asarray(path, dtype=int)
    if nodes.ndim != 1 or len(nodes) < 2:
        raise InvalidArgumentError("path needs at least two nodes")
    nxt = np.roll(nodes, -1) if closed else nodes[1:]
    cur = nodes if closed else nodes[:-1]
    if graph is not None:
        for a, b in zip(cur, nxt):
            if not graph.has_edge(int(a), int(b)):
                raise InvalidArgumentError(f"path step {a}->{b} is not an edge")
    return wrap_phase(phi[cur] - phi[nxt])


def classical_hilbert_dft(x) -> np.ndarray:
    """Discrete Hilbert transform of a periodic sequence via the DFT.

    Positive frequencies are multiplied by ``-j``, negative ones by ``+j``,
    DC and (for even length) Nyquist by 0.
    """
    x = np.asarray(x, dtype=float)
    N = x.shape[0]
    if N < 2:
        raise InvalidArgumentError("need at least two samples")
    h = np.zeros(N, dtype=complex)
    h[1:(N + 1) // 2] = -1j
    h[N // 2 + 1:] = 1j
    return np.fft.ifft(h * np.fft.fft(x)).real


@dataclass(frozen=True)
class OverlapReport:
    """Largest violations of the amplitude-squared and phase superposition identities."""

    amplitude_violation: float
    phase_violation: float
    components: int

    @property
    def max_violation(self) -> float:
        return max(self.amplitude_violation, self.phase_violation)


def verify_overlap_identities(
    op: GhtOperator, components: Sequence, supports: Sequence[Sequence[int]]
) -> OverlapReport:
    """Check how component signals on (possibly overlapping) node sets combine.

    For ``x = sum_m x_m`` this compares ``A(x)**2`` against
    ``sum_m A(x_m)**2 + sum_{m != n} (x_m x_n + H(x_m) H(x_n))`` and ``phi(x)``
    against ``atan2(sum_m H(x_m), sum_m x_m)`` at every node.  The phase
    violation is a wrapped angle difference and is ignored where ``x~`` is
    numerically zero.
    """
    if len(components) != len(supports) or not components:
        raise InvalidArgumentError("need one support per component and at least one component")
    xs = []
    for k, (c, sup) in enumerate(zip(components, supports)):
        v = _real_values(c, op.n)
        off = np.ones(op.n, dtype=bool)
        off[np.asarray(list(sup), dtype=int)] = False
        if np.any(v[off] != 0):
            raise PreconditionError(f"component {k} is nonzero outside its support")
        xs.append(v)
    X = np.array(xs)
    HX = np.array([op.apply(v)[0] for v in xs])
    total = analytic(op, X.sum(axis=0))

    amp2 = amplitude(total) ** 2
    sx, sh = X.sum(axis=0), HX.sum(axis=0)
    # sum over ordered pairs m != n = (sum)^2 - sum of squares
    cross = (sx ** 2 - (X ** 2).sum(axis=0)) + (sh ** 2 - (HX ** 2).sum(axis=0))
    rhs_amp = (X ** 2 + HX ** 2).sum(axis=0) + cross
    amp_violation = float(np.max(np.abs(amp2 - rhs_amp)))

    phi = phase(total)
    rhs_phi = np.arctan2(sh, sx)
    live = amplitude(total) > 1e-12 * max(float(np.max(amplitude(total))), 1.0)
    diff = np.abs(wrap_phase(phi - rhs_phi))
    phase_violation = float(np.max(diff[live])) if np.any(live) else 0.0
    return OverlapReport(amp_violation, phase_violation, len(xs))


ANALYSIS_HEADER = "node,x,hx,amplitude,phase"
FREQUENCY_HEADER = "from_node,to_node,omega"


def dump_analysis(a: AnalyticGraphSignal) -> str:
    """Analysis CSV text, one row per node."""
    amp, phi = amplitude(a), phase(a)
    rows = [ANALYSIS_HEADER]
    for k in range(len(a.source)):
        rows.append(f"{k},{float(a.source[k])!r},{float(a.hilbert[k])!r},{float(amp[k])!r},{float(phi[k])!r}")
    return "\n".join(rows) + "\n"


def dump_frequency(path: Sequence[int], omega: np.ndarray, closed: bool = False) -> str:
    """Frequency CSV text, one row per path step."""
    nodes = [int(v) for v in path]
    nxt = nodes[1:] + nodes[:1] if closed else nodes[1:]
    if len(omega) != len(nxt):
        raise InvalidArgumentError(f"{len(omega)} frequencies for {len(nxt)} path steps")
    rows = [FREQUENCY_HEADER]
    rows += [f"{a},{b},{float(w)!r}" for a, b, w in zip(nodes, nxt, omega)]
    return "\n".join(rows) + "\n"
