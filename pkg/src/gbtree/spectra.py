"""Floating-point eigendecomposition and numeric main-spectrum detection.

This path is a cross-check only; when it disagrees with the exact divisor
count the exact count wins and the disagreement is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

TOL_RESID = 1e-10
TOL_ORTH = 1e-10
TOL_CLUSTER = 1e-7
TOL_MAIN = 1e-8
TOL_RANK = 1e-9
DEFAULT_EIGEN_CAP = 2000

# projections within this factor of the threshold get flagged
BORDERLINE_FACTOR = 10.0


class EigenError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _dense(A) -> np.ndarray:
    if sparse.issparse(A):
        A = A.toarray()
    return np.asarray(A, dtype=float)


def symmetric_eigen(A, tol_resid: float = TOL_RESID, tol_orth: float = TOL_ORTH,
                    cap: int = DEFAULT_EIGEN_CAP) -> EigenDecomposition:
    """Full decomposition of a real symmetric matrix (LAPACK ``syevd`` via numpy).

    The result is checked against ``||Av - lv|| <= tol_resid * ||A||_2`` for
    every pair and ``|V^T V - I| <= tol_orth`` entrywise.
    """
    M = _dense(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > cap:
        raise ValueError(f"matrix of order {n} exceeds the eigensolver cap of {cap}")
    if not np.array_equal(M, M.T):
        raise ValueError("matrix is not symmetric")
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"eigensolver did not converge: {exc}") from exc

    norm2 = float(np.abs(w).max()) if n else 0.0
    resid = np.linalg.norm(M @ V - V * w, axis=0)
    worst = float(resid.max())
    if worst > tol_resid * max(norm2, 1.0):
        raise EigenError(f"residual {worst:.3e} exceeds tolerance {tol_resid:.1e} * ||A||")
    orth = float(np.abs(V.T @ V - np.eye(n)).max())
    if orth > tol_orth:
        raise EigenError(f"eigenvectors lose orthogonality: {orth:.3e}")
    return EigenDecomposition(w, V)


@dataclass
class Cluster:
    value: float
    multiplicity: int
    projection_norm: float
    is_main: bool
    borderline: bool = False

    def to_dict(self) -> dict:
        d = {
            "value": self.value,
            "mult": self.multiplicity,
            "proj": self.projection_norm,
            "main": self.is_main,
        }
        if self.borderline:
            d["borderline"] = True
        return d


@dataclass
class MainSpectrumReport:
    n: int
    clusters: list[Cluster]
    method: str = "numeric"
    tolerances: dict = field(default_factory=dict)

    @property
    def main_count(self) -> int:
        return sum(c.is_main for c in self.clusters)

    @property
    def main_eigenvalues(self) -> list[float]:
        return [c.value for c in self.clusters if c.is_main]

    def cluster_near(self, value: float, tol: float = TOL_CLUSTER) -> Cluster | None:
        best = min(self.clusters, key=lambda c: abs(c.value - value), default=None)
        if best is not None and abs(best.value - value) <= tol:
            return best
        return None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "clusters": [c.to_dict() for c in self.clusters],
            "main_count": self.main_count,
        }


def cluster_spectrum(eigenvalues: np.ndarray, tol_cluster: float = TOL_CLUSTER) -> list[slice]:
    """Group sorted eigenvalues; consecutive gaps ``<= tol_cluster`` join a cluster."""
    n = len(eigenvalues)
    if n == 0:
        return []
    breaks = np.flatnonzero(np.diff(eigenvalues) > tol_cluster) + 1
    bounds = [0, *breaks.tolist(), n]
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def main_spectrum_numeric(A, tol_cluster: float = TOL_CLUSTER, tol_main: float = TOL_MAIN,
                          decomposition: EigenDecomposition | None = None,
                          **eigen_kwargs) -> MainSpectrumReport:
    """Cluster the spectrum of A and flag clusters whose eigenspace sees the all-ones vector.

    A cluster is main when ``||P e|| > tol_main * sqrt(n)``, ``P`` being the
    orthogonal projector onto the span of the cluster's eigenvectors.
    """
    dec = decomposition if decomposition is not None else symmetric_eigen(A, **eigen_kwargs)
    w, V = dec.eigenvalues, dec.eigenvectors
    n = len(w)
    coeffs = V.T @ np.ones(n)
    threshold = tol_main * math.sqrt(n)
    clusters = []
    for sl in cluster_spectrum(w, tol_cluster):
        proj = float(np.linalg.norm(coeffs[sl]))
        clusters.append(Cluster(
            value=float(w[sl].mean()),
            multiplicity=sl.stop - sl.start,
            projection_norm=proj,
            is_main=proj > threshold,
            borderline=threshold / BORDERLINE_FACTOR < proj < threshold * BORDERLINE_FACTOR,
        ))
    return MainSpectrumReport(n, clusters, "numeric",
                              {"tol_cluster": tol_cluster, "tol_main": tol_main})


def walk_matrix(A) -> np.ndarray:
    """``[e, Ae, ..., A^{n-1} e]`` with each column scaled to unit length."""
    M = _dense(A)
    n = M.shape[0]
    W = np.empty((n, n))
    col = np.ones(n)
    for j in range(n):
        norm = np.linalg.norm(col)
        if norm > 0:
            col = col / norm
        W[:, j] = col
        col = M @ col
    return W


def walk_matrix_rank(A, tol_rank: float = TOL_RANK, cap: int = DEFAULT_EIGEN_CAP) -> int:
    """Numerical rank of the walk matrix: singular values above ``tol_rank * s_max``."""
    n = A.shape[0]
    if n > cap:
        raise ValueError(f"matrix of order {n} exceeds the cap of {cap}")
    if n == 0:
        return 0
    s = np.linalg.svd(walk_matrix(A), compute_uv=False)
    return int((s > tol_rank * s[0]).sum())
