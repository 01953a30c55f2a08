"""Dismantle Jordan blocks and zero eigenvalues by adding single edges.

Each iteration picks the worst eigenvalue cluster of the current adjacency,
takes its left and right eigenspaces ``T`` and ``Q`` and adds the absent edge
``m -> n`` (adjacency entry ``(n, m)``) that maximises ``|t[n]| |q[m]|`` over
unit vectors ``t`` in ``T`` and ``q`` in ``Q``.  That maximum equals
``||P_T e_n|| * ||P_Q e_m||`` with ``P`` the orthogonal projectors, so the
choice does not depend on how the eigenspaces are parameterised.

A singular adjacency is repaired first.  Its kernel is read off an SVD rather
than the eigenvalues: a nilpotent block of size ``k`` comes back from the
eigensolver as a ring of radius ``eps**(1/k)``, far outside any sensible
clustering tolerance.  An edge with nonzero ``|t[n]| |q[m]|`` raises the rank
by exactly one, so for generic weights this phase adds ``n - rank(A)`` edges.
Unit weights can cancel (two identical columns, say); see
:func:`candidate_edge` for how that case is handled.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.cluster.hierarchy import fcluster, linkage

from .errors import PerturbationError
from .graphs import DiGraph
from .spectral import (
    DEFAULT_TOLERANCES,
    SpectralDecomposition,
    SpectralDiagnostics,
    ToleranceSet,
    decompose,
    diagnostics,
)

log = logging.getLogger(__name__)

TIE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class DefectiveCluster:
    """Eigenvalue cluster targeted by one perturbation step.

    ``left_basis`` / ``right_basis`` are orthonormal bases of the left and right
    eigenspaces at ``eigenvalue``; ``left_vector`` / ``right_vector`` are their
    first columns, kept for reporting.
    """

    eigenvalue: complex
    member_indices: tuple[int, ...]
    geometric_deficiency: int
    left_basis: np.ndarray = field(repr=False)
    right_basis: np.ndarray = field(repr=False)
    kind: str = "defective"

    @property
    def left_vector(self) -> np.ndarray:
        return self.left_basis[:, 0]

    @property
    def right_vector(self) -> np.ndarray:
        return self.right_basis[:, 0]

    @property
    def size(self) -> int:
        return len(self.member_indices)

    def to_dict(self) -> dict:
        return {
            "eigenvalue": [float(np.real(self.eigenvalue)), float(np.imag(self.eigenvalue))],
            "kind": self.kind,
            "members": len(self.member_indices),
            "geometric_multiplicity": int(self.right_basis.shape[1]),
            "geometric_deficiency": int(self.geometric_deficiency),
        }


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    cluster: dict
    target: int
    source: int
    score: float

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "cluster": self.cluster,
            "edge": [self.source, self.target],
            "criterion": self.score,
        }


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    original: DiGraph
    perturbed: DiGraph
    added_edges: list[tuple[int, int, float]]
    before: SpectralDiagnostics
    after: SpectralDiagnostics
    trace: list[TraceRecord]
    decomposition: SpectralDecomposition = field(repr=False)

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def to_report(self) -> dict:
        return {
            "added_edges": [[s, d, w] for s, d, w in self.added_edges],
            "iterations": self.iterations,
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
            "trace": [t.to_dict() for t in self.trace],
        }


def _null_spaces(M: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Left and right kernels of ``M`` (singular values ``<= tol``) plus all singular values."""
    W, s, Vh = sla.svd(M, check_finite=False)
    k = int(np.sum(s > tol))
    return W[:, k:], Vh[k:].conj().T, s


def _union_find(n: int, pairs) -> list[list[int]]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(k)
    return list(groups.values())


def _refine(A: np.ndarray, lam: np.ndarray, grp: list[int], tol: float) -> list[list[int]]:
    """Split ``grp`` until each part's mean is an approximate eigenvalue.

    Error discs of exactly defective eigenvalues are huge, so union-find can
    chain unrelated blocks (e.g. ``+1`` and ``-1``) into one group whose mean
    is not in the spectrum at all.  Such groups are cut in two by single
    linkage on the eigenvalue positions, recursively.
    """
    mu = np.mean(lam[grp])
    if len(grp) == 1 or sla.svdvals(A - mu * np.eye(A.shape[0]), check_finite=False)[-1] <= tol:
        return [grp]
    pts = np.column_stack([lam[grp].real, lam[grp].imag])
    labels = fcluster(linkage(pts, method="single"), 2, criterion="maxclust")
    if labels.max() < 2:
        return [grp]
    parts = []
    for lab in (1, 2):
        parts += _refine(A, lam, [k for k, l in zip(grp, labels) if l == lab], tol)
    return parts


def _zero_cluster(dec: SpectralDecomposition) -> DefectiveCluster:
    A = dec.adjacency
    s = dec.singular_values
    top = s[0] if s[0] > 0 else 1.0
    T, Q, _ = _null_spaces(A, dec.tolerances.zero * top)
    lam = dec.eigenvalues
    # solver images of the zero eigenvalue: inside the eps**(1/n) ring
    radius = max(dec.tolerances.cluster, np.finfo(float).eps ** (1.0 / max(dec.n, 1)) * 2.0) * dec.scale
    members = tuple(int(k) for k in np.flatnonzero(np.abs(lam) <= radius))
    if len(members) < Q.shape[1]:
        members = tuple(int(k) for k in np.argsort(np.abs(lam), kind="stable")[: Q.shape[1]])
    return DefectiveCluster(
        eigenvalue=0j,
        member_indices=members,
        geometric_deficiency=max(len(members) - Q.shape[1], 0),
        left_basis=T,
        right_basis=Q,
        kind="zero",
    )


def find_worst_cluster(dec: SpectralDecomposition, tolerances: ToleranceSet | None = None) -> DefectiveCluster | None:
    """Cluster to dismantle next, or ``None`` if the operator already passes diagnostics.

    A singular adjacency always yields the zero cluster first.  Otherwise
    eigenvalues are grouped when their eigenvectors are collinear or their
    first-order error discs (``n eps ||A|| * condition``) overlap, and each
    group's geometric multiplicity is measured from the SVD of ``A - mu I``.
    The group with the largest deficiency wins.
    """
    if tolerances is not None and tolerances != dec.tolerances:
        dec = decompose(dec.adjacency, tolerances)
    tol = dec.tolerances
    if dec.is_singular or not dec.zero_semisimple:
        return _zero_cluster(dec)
    if diagnostics(dec).passed:
        return None

    A = dec.adjacency
    n = dec.n
    lam = dec.eigenvalues
    U = dec.basis
    cond = dec.eigenvalue_condition()
    cond = np.where(np.isfinite(cond), cond, 1.0 / np.finfo(float).eps)
    delta = n * np.finfo(float).eps * max(np.linalg.norm(A, 2), 1.0)

    gram = np.abs(U.conj().T @ U)
    np.fill_diagonal(gram, 0.0)
    suspects = np.flatnonzero((cond >= np.sqrt(tol.kappa_max)) | (gram.max(axis=0) >= 1.0 - tol.collinear))
    if len(suspects) == 0:
        suspects = np.array([int(np.argmax(cond))])
    links = []
    for a_i, a in enumerate(suspects):
        for b in suspects[a_i + 1:]:
            close = abs(lam[a] - lam[b]) <= max(tol.cluster * dec.scale, 10.0 * delta * (cond[a] + cond[b]))
            if close or gram[a, b] >= 1.0 - tol.collinear:
                links.append((a_i, int(np.flatnonzero(suspects == b)[0])))
    groups = []
    for grp in _union_find(len(suspects), links):
        groups += _refine(A, lam, [int(suspects[k]) for k in grp], tol.cluster * dec.scale)

    best = None
    best_key = None
    for grp in groups:
        mu = complex(np.mean(lam[grp]))
        if mu.imag < 0:
            # the conjugate cluster is equivalent; report the upper half-plane one
            continue
        if abs(mu.imag) <= tol.imag * dec.scale:
            mu = complex(mu.real, 0.0)
        # well-conditioned copies of the same eigenvalue count towards the algebraic multiplicity
        radius = max(tol.cluster * dec.scale, float(np.max(np.abs(lam[grp] - mu))) * (1 + 1e-6))
        grp = [int(k) for k in np.flatnonzero(np.abs(lam - mu) <= radius)]
        M = A - mu * np.eye(n)
        T, Q, s = _null_spaces(M, tol.cluster * dec.scale)
        deficiency = len(grp) - Q.shape[1]
        if Q.shape[1] == 0 or deficiency <= 0:
            if len(grp) == 1 or Q.shape[1] == 0:
                # isolated ill-conditioned eigenvalue: use its nearest singular pair
                W, s, Vh = sla.svd(M, check_finite=False)
                T, Q = W[:, -1:], Vh[-1:].conj().T
                deficiency = max(deficiency, 1) if cond[grp].max() > tol.kappa_max else deficiency
            if deficiency <= 0:
                continue
        key = (deficiency, len(grp), -mu.real, -mu.imag)
        if best_key is None or key > best_key:
            best_key = key
            best = DefectiveCluster(mu, tuple(sorted(grp)), deficiency, T, Q, "defective")
    if best is None:
        # diagnostics fail without a detectable Jordan group: target the worst-conditioned eigenvalue
        k = int(np.argmax(cond))
        mu = complex(lam[k]) if lam[k].imag >= 0 else complex(np.conj(lam[k]))
        W, s, Vh = sla.svd(A - mu * np.eye(n), check_finite=False)
        best = DefectiveCluster(mu, (k,), 1, W[:, -1:], Vh[-1:].conj().T, "ill-conditioned")
    return best


def _ranked(score: np.ndarray, allowed: np.ndarray):
    """Allowed entries in decreasing score, near-ties in lexicographic order."""
    score = np.where(allowed, score, -np.inf)
    while True:
        best = float(score.max()) if score.size else -np.inf
        if not np.isfinite(best):
            return
        tied = np.argwhere(score >= best * (1.0 - TIE_RTOL))
        for n_idx, m_idx in tied:
            yield int(n_idx), int(m_idx)
            score[n_idx, m_idx] = -np.inf


def candidate_edge(
    cluster: DefectiveCluster,
    g: DiGraph,
    tolerances: ToleranceSet = DEFAULT_TOLERANCES,
    weight: float = 1.0,
) -> tuple[int, int, float]:
    """Absent adjacency entry ``(n, m)`` maximising ``|t[n]| |q[m]|``.

    Near-ties (relative ``1e-9``) go to the lexicographically smallest
    ``(n, m)``.  The returned edge is ``m -> n``.

    When the adjacency is invertible, candidates whose rank-1 update would
    make it singular (``1 + weight * inv(A)[m, n]`` numerically zero) are
    passed over in favour of the next best admissible one.  If the zero
    cluster has no admissible entry at all, every remaining cofactor of the
    kernel vanishes and no single new edge can restore invertibility; the
    absent entry with the largest ``|t[n]| + |q[m]|`` is then added to move
    the kernel instead (reported with a negative score).
    """
    A = g.adjacency
    left = np.sqrt(np.sum(np.abs(cluster.left_basis) ** 2, axis=1))
    right = np.sqrt(np.sum(np.abs(cluster.right_basis) ** 2, axis=1))
    score = np.outer(left, right)
    absent = A == 0
    admissible = absent & (score > tolerances.score)
    if np.any(admissible):
        first = None
        inv = None
        if cluster.kind != "zero":
            try:
                inv = sla.inv(A, check_finite=False)
            except (sla.LinAlgError, ValueError):
                inv = None
        for n_idx, m_idx in _ranked(score, admissible):
            if first is None:
                first = (n_idx, m_idx)
            if inv is None or abs(1.0 + weight * inv[m_idx, n_idx]) > tolerances.zero:
                return n_idx, m_idx, float(score[n_idx, m_idx])
        return first[0], first[1], float(score[first])
    if cluster.kind == "zero":
        side = np.add.outer(left, right)
        movable = absent & (side > tolerances.score)
        for n_idx, m_idx in _ranked(side, movable):
            return n_idx, m_idx, -float(side[n_idx, m_idx])
    best = float(np.max(np.where(absent, score, -1.0))) if score.size else -1.0
    raise PerturbationError(
        f"no admissible edge for cluster at {cluster.eigenvalue:.6g} (best score {best:.3e})",
        cluster=cluster,
    )


def perturb(
    g: DiGraph,
    weight: float = 1.0,
    tolerances: ToleranceSet = DEFAULT_TOLERANCES,
    max_iterations: int | None = None,
) -> PerturbationResult:
    """Add edges of the given weight until the adjacency is diagonalizable and invertible."""
    if not weight > 0:
        raise ValueError(f"weight must be positive, got {weight}")
    if max_iterations is None:
        max_iterations = 2 * g.n
    current = g
    dec = decompose(current, tolerances)
    before = diagnostics(dec)
    trace: list[TraceRecord] = []
    added: list[tuple[int, int, float]] = []
    seen = set()
    while True:
        diag = diagnostics(dec)
        if diag.passed:
            break
        if len(trace) >= max_iterations:
            raise PerturbationError(
                f"still not diagonalizable and invertible after {max_iterations} added edges",
                trace=[t.to_dict() for t in trace],
            )
        cluster = find_worst_cluster(dec)
        if cluster is None:
            raise PerturbationError("diagnostics fail but no cluster was found", trace=[t.to_dict() for t in trace])
        try:
            n_idx, m_idx, score = candidate_edge(cluster, current, tolerances, weight)
        except PerturbationError as exc:
            raise PerturbationError(str(exc), trace=[t.to_dict() for t in trace], cluster=cluster) from None
        key = (cluster.kind, round(cluster.eigenvalue.real, 8), round(cluster.eigenvalue.imag, 8), n_idx, m_idx)
        if key in seen:
            raise PerturbationError("perturbation is cycling", trace=[t.to_dict() for t in trace], cluster=cluster)
        seen.add(key)
        rec = TraceRecord(len(trace) + 1, cluster.to_dict(), n_idx, m_idx, score)
        log.debug("iteration %d: edge %d->%d for %s", rec.iteration, m_idx, n_idx, rec.cluster)
        trace.append(rec)
        added.append((m_idx, n_idx, float(weight)))
        current = current.with_edges([(m_idx, n_idx, float(weight))])
        dec = decompose(current, tolerances)
    return PerturbationResult(g, current, added, before, diag, trace, dec)
