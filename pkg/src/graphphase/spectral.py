"""Eigendecomposition of the adjacency operator and the graph Fourier transform.

Eigenvalues are returned sorted by (real, imag).  Complex eigenvalues of a real
matrix come in conjugate pairs; the pairing is recovered explicitly and then
enforced exactly (eigenvalue and eigenvector of the partner are overwritten by
conjugates), so spectral filters that treat the two members symmetrically map
real signals to real signals.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import asdict, dataclass, field
from typing import Union

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .errors import DefectiveError, InvalidArgumentError, NumericalError, PreconditionError
from .graphs import DiGraph, GraphSignal


@dataclass(frozen=True)
class ToleranceSet:
    """Numerical thresholds shared by the spectral, perturbation and Hilbert code.

    ``zero``, ``imag``, ``pair`` and ``cluster`` are relative to the spectral
    radius (a zero radius counts as 1).
    """

    zero: float = 1e-8
    imag: float = 1e-10
    pair: float = 1e-8
    kappa_max: float = 1e8
    cluster: float = 1e-6
    collinear: float = 1e-6
    score: float = 1e-12
    residual: float = 1e-8

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise InvalidArgumentError(f"tolerance {name} must be positive, got {value}")
        if self.kappa_max < 1:
            raise InvalidArgumentError("kappa_max must be >= 1")


DEFAULT_TOLERANCES = ToleranceSet()


@dataclass(frozen=True)
class Real:
    index: int


@dataclass(frozen=True)
class ConjugatePair:
    """``k1`` carries the eigenvalue with positive imaginary part, ``k2`` its conjugate."""

    k1: int
    k2: int


Pairing = Union[Real, ConjugatePair]


@dataclass(frozen=True)
class SpectralDiagnostics:
    condition_estimate: float
    min_abs_eigenvalue: float
    is_diagonalizable: bool
    is_invertible: bool
    spectral_radius: float

    @property
    def passed(self) -> bool:
        return self.is_diagonalizable and self.is_invertible

    def to_dict(self) -> dict:
        return {
            "condition_estimate": _json_float(self.condition_estimate),
            "min_abs_eigenvalue": float(self.min_abs_eigenvalue),
            "is_diagonalizable": bool(self.is_diagonalizable),
            "is_invertible": bool(self.is_invertible),
            "spectral_radius": float(self.spectral_radius),
        }


def _json_float(v: float):
    return float(v) if np.isfinite(v) else None


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """``A U = U diag(eigenvalues)`` with an LU factorization of ``U`` for the dual basis."""

    adjacency: np.ndarray
    eigenvalues: np.ndarray
    basis: np.ndarray
    lu: tuple = field(repr=False)
    pairing: tuple[Pairing, ...]
    partner: np.ndarray
    residual: float
    condition_estimate: float
    max_collinearity: float
    singular_values: np.ndarray = field(repr=False)
    zero_semisimple: bool
    tolerances: ToleranceSet

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.n else 0.0

    @property
    def scale(self) -> float:
        """Spectral radius, with 0 replaced by 1 for relative thresholds."""
        rho = self.spectral_radius
        return rho if rho > 0 else 1.0

    @property
    def is_singular(self) -> bool:
        s = self.singular_values
        return bool(s[0] == 0 or s[-1] <= self.tolerances.zero * s[0])

    @property
    def real_mask(self) -> np.ndarray:
        return self.partner == np.arange(self.n)

    def diagnostics(self) -> SpectralDiagnostics:
        return diagnostics(self)

    def dual(self) -> np.ndarray:
        """Explicit ``U^-1``; rows are the left eigenvectors.  Prefer :func:`gft`."""
        return sla.lu_solve(self.lu, np.eye(self.n, dtype=complex), check_finite=False)

    def eigenvalue_condition(self) -> np.ndarray:
        """Condition number of each eigenvalue, ``||y_k|| ||u_k|| / |y_k^H u_k|``."""
        with np.errstate(all="ignore"):
            return np.linalg.norm(self.dual(), axis=1)

    def to_report(self) -> dict:
        d = self.diagnostics()
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "condition_estimate": _json_float(d.condition_estimate),
            "min_abs_eigenvalue": d.min_abs_eigenvalue,
            "is_diagonalizable": d.is_diagonalizable,
            "is_invertible": d.is_invertible,
            "residual": float(self.residual),
        }


def fingerprint(a: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(a, dtype=float).tobytes()).hexdigest()[:12]


def _canonical(v: np.ndarray) -> np.ndarray:
    """Unit 2-norm, first significant entry rotated to the positive real axis."""
    v = v / np.linalg.norm(v)
    mags = np.abs(v)
    first = int(np.argmax(mags > 1e-10 * mags.max()))
    out = v * (np.conj(v[first]) / mags[first])
    out[first] = mags[first]
    return out


def _adjacency(g) -> np.ndarray:
    a = g.adjacency if isinstance(g, DiGraph) else np.asarray(g, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError("adjacency must be square")
    return a


def decompose(g: DiGraph | np.ndarray, tolerances: ToleranceSet = DEFAULT_TOLERANCES) -> SpectralDecomposition:
    """Eigendecompose the adjacency of ``g`` with conjugate pairs enforced exactly.

    Defective matrices are decomposed too; the problem shows up in
    :func:`diagnostics`, not as an exception.
    """
    tol = tolerances
    A = _adjacency(g)
    n = A.shape[0]
    try:
        w, V = sla.eig(A, check_finite=False)
        sigma = sla.svdvals(A, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed: {exc}", fingerprint(A)) from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(V))):
        raise NumericalError("eigensolver returned non-finite values", fingerprint(A))

    rho = float(np.max(np.abs(w))) if n else 0.0
    scale = rho if rho > 0 else 1.0
    thr = tol.imag * scale
    pos = np.flatnonzero(w.imag > thr)
    neg = np.flatnonzero(w.imag < -thr)
    if len(pos) != len(neg):
        raise NumericalError("complex eigenvalues do not come in conjugate pairs", fingerprint(A))

    lam = np.empty(n, dtype=complex)
    U = np.empty((n, n), dtype=complex)
    partner = np.arange(n)
    if len(pos):
        cost = np.abs(w[pos][:, None] - np.conj(w[neg])[None, :])
        rows, cols = linear_sum_assignment(cost)
        if np.max(cost[rows, cols]) > tol.pair * scale:
            raise NumericalError("conjugate partner not found within pairing tolerance", fingerprint(A))
        for r, c in zip(rows, cols):
            p, q = pos[r], neg[c]
            lam[p] = 0.5 * (w[p] + np.conj(w[q]))
            lam[q] = np.conj(lam[p])
            U[:, p] = _canonical(V[:, p])
            U[:, q] = np.conj(U[:, p])
            partner[p], partner[q] = q, p

    real = np.flatnonzero(np.abs(w.imag) <= thr)
    # near-real conjugate pairs from the solver: keep the real 2-D span they carry
    cplx = [k for k in real if np.any(V[:, k].imag != 0)]
    tp = [k for k in cplx if w[k].imag > 0]
    tn = [k for k in cplx if w[k].imag < 0]
    used = set()
    if tp and tn:
        cost = np.abs(w[tp][:, None] - np.conj(w[tn])[None, :])
        for r, c in zip(*linear_sum_assignment(cost)):
            p, q = tp[r], tn[c]
            vp = _canonical(V[:, p])
            U[:, p] = vp.real / np.linalg.norm(vp.real)
            im = vp.imag
            U[:, q] = im / np.linalg.norm(im) if np.linalg.norm(im) > 0 else U[:, p]
            used.update((p, q))
    for k in real:
        lam[k] = w[k].real
        if k in used:
            pass
        else:
            v = _canonical(V[:, k]).real
            U[:, k] = v / np.linalg.norm(v)
    for k in real:
        v = U[:, k].real
        first = int(np.argmax(np.abs(v) > 1e-10 * np.abs(v).max()))
        U[:, k] = v * np.sign(v[first])

    order = np.lexsort((lam.imag, lam.real))
    inverse = np.empty(n, dtype=int)
    inverse[order] = np.arange(n)
    lam = lam[order]
    U = U[:, order]
    partner = inverse[partner[order]]

    pairing: list[Pairing] = []
    for k in range(n):
        j = partner[k]
        if j == k:
            pairing.append(Real(k))
        elif k < j:
            pairing.append(ConjugatePair(k, j) if lam[k].imag > 0 else ConjugatePair(j, k))

    anorm = np.linalg.norm(A)
    residual = float(np.linalg.norm(A @ U - U * lam) / (anorm if anorm > 0 else 1.0))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu = sla.lu_factor(U, check_finite=False)
        diag = np.abs(np.diag(lu[0]))
        if np.any(diag == 0) or not np.all(np.isfinite(lu[0])):
            cond = np.inf
        else:
            rcond, info = sla.lapack.zgecon(lu[0], np.linalg.norm(U, 1), norm="1")
            cond = 1.0 / rcond if rcond > 0 else np.inf
    cond = max(float(cond), 1.0)

    gram = np.abs(U.conj().T @ U)
    np.fill_diagonal(gram, 0.0)
    max_col = float(gram.max()) if n > 1 else 0.0

    zero_ok = True
    if n and (sigma[0] == 0 or sigma[-1] <= tol.zero * sigma[0]):
        top = sigma[0] if sigma[0] > 0 else 1.0
        rank1 = int(np.sum(sigma > tol.zero * top))
        sigma2 = sla.svdvals(A @ A, check_finite=False)
        rank2 = int(np.sum(sigma2 > tol.zero * top * top))
        zero_ok = rank1 == rank2

    for arr in (lam, U):
        arr.setflags(write=False)
    return SpectralDecomposition(
        adjacency=A,
        eigenvalues=lam,
        basis=U,
        lu=lu,
        pairing=tuple(pairing),
        partner=partner,
        residual=residual,
        condition_estimate=cond,
        max_collinearity=max_col,
        singular_values=sigma,
        zero_semisimple=zero_ok,
        tolerances=tol,
    )


def diagnostics(dec: SpectralDecomposition) -> SpectralDiagnostics:
    """Diagonalizability and invertibility flags under the decomposition's tolerances.

    A numerically rank-deficient adjacency reports ``min_abs_eigenvalue = 0``:
    the solver spreads a defective zero eigenvalue over a disc of radius
    ``eps**(1/k)``, so the smallest computed modulus is not trustworthy there.
    """
    tol = dec.tolerances
    rho = dec.spectral_radius
    min_abs = 0.0 if (dec.n == 0 or dec.is_singular) else float(np.min(np.abs(dec.eigenvalues)))
    diagonalizable = (
        dec.condition_estimate <= tol.kappa_max
        and dec.residual <= tol.residual
        and dec.max_collinearity < 1.0 - tol.collinear
        and dec.zero_semisimple
    )
    return SpectralDiagnostics(
        condition_estimate=dec.condition_estimate,
        min_abs_eigenvalue=min_abs,
        is_diagonalizable=bool(diagonalizable),
        is_invertible=bool(min_abs > tol.zero * dec.scale),
        spectral_radius=rho,
    )


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, GraphSignal) else np.asarray(x)


def symmetrize(dec: SpectralDecomposition, xhat: np.ndarray) -> np.ndarray:
    """Project coefficients onto the conjugate-symmetric set (the GFT of a real signal)."""
    out = np.array(xhat, dtype=complex)
    real = dec.real_mask
    out[real] = out[real].real
    for p in dec.pairing:
        if isinstance(p, ConjugatePair):
            c = 0.5 * (out[p.k1] + np.conj(out[p.k2]))
            out[p.k1], out[p.k2] = c, np.conj(c)
    return out


def gft(dec: SpectralDecomposition, x) -> np.ndarray:
    """Graph Fourier coefficients ``U^-1 x``, solved through the stored LU factors."""
    if not dec.diagnostics().is_diagonalizable:
        raise DefectiveError(
            "adjacency is not diagonalizable under the current tolerances; "
            "run graphphase.perturb.perturb first"
        )
    v = _values(x)
    if v.shape != (dec.n,):
        raise InvalidArgumentError(f"signal length {v.shape} does not match {dec.n} nodes")
    xhat = sla.lu_solve(dec.lu, v.astype(complex), check_finite=False)
    if not np.iscomplexobj(v):
        xhat = symmetrize(dec, xhat)
    return xhat


def igft(dec: SpectralDecomposition, xhat, real: bool = False) -> np.ndarray:
    """Synthesis ``U xhat``; with ``real=True`` the imaginary residue is checked and dropped."""
    c = np.asarray(xhat, dtype=complex)
    if c.shape != (dec.n,):
        raise InvalidArgumentError(f"coefficient length {c.shape} does not match {dec.n} nodes")
    x = dec.basis @ c
    if real:
        resid = float(np.max(np.abs(x.imag))) if dec.n else 0.0
        bound = 1e-10 * max(np.linalg.norm(c), np.finfo(float).tiny)
        if resid > bound:
            raise PreconditionError(
                f"coefficients are not conjugate-symmetric (imaginary residue {resid:.3e})"
            )
        return x.real
    return x
