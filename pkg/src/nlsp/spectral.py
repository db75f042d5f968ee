"""Condition number, sparsity, and eigenvalue-cutoff diagnostics.

The dense symmetric eigensolver is the reference path up to a size limit
(default 3000, overridable through the ``NLSP_DENSE_LIMIT`` environment
variable); above it, extreme eigenvalues come from a Lanczos solver with
shift-invert for the small end of the spectrum.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graphs import SymmetricMatrix

DEFAULT_CUTOFF = 1e-6
AUDIT_CUTOFF = 1e-10
DEFAULT_DENSE_LIMIT = 3000
_ITERATIVE_TOL = 1e-8


def dense_limit() -> int:
    """Largest order handled by the dense eigensolver (env-overridable)."""
    raw = os.environ.get("NLSP_DENSE_LIMIT")
    return int(raw) if raw else DEFAULT_DENSE_LIMIT


@dataclass(frozen=True)
class SpectralRecord:
    """Measured spectral quantities of one system matrix."""

    system_size: int
    lambda_min_nz: float
    lambda_max: float
    kappa: float
    sparsity: int
    cutoff: float
    matrix_kind: str

    def __post_init__(self) -> None:
        if self.kappa < 1.0 - 1e-12:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if not 0 < self.sparsity <= self.system_size:
            raise ValueError("sparsity must lie in 1..system_size")


@dataclass(frozen=True)
class CutoffSensitivity:
    """Minimum nonzero eigenvalue under the working and audit cutoffs."""

    system_size: int
    min_eig_at_1e6: float
    min_eig_at_1e10: float
    delta: float

    @property
    def flagged(self) -> bool:
        return self.delta > 0.0


def _to_csr(m: SymmetricMatrix) -> sp.csr_array:
    rows, cols, vals = [], [], []
    for i, j, v in m.items():
        rows.append(i)
        cols.append(j)
        vals.append(v)
        if i != j:
            rows.append(j)
            cols.append(i)
            vals.append(v)
    return sp.csr_array(
        sp.coo_array((vals, (rows, cols)), shape=(m.order, m.order))
    )


def full_spectrum(m: SymmetricMatrix) -> np.ndarray:
    """All eigenvalues, ascending.  Refuses orders above the dense limit."""
    limit = dense_limit()
    if m.order > limit:
        raise ValueError(
            f"order {m.order} exceeds dense limit {limit}; use extreme_eigs"
        )
    return np.linalg.eigvalsh(m.to_dense())


def extreme_eigs(m: SymmetricMatrix, cutoff: float = DEFAULT_CUTOFF) -> tuple[float, float]:
    """(smallest |eigenvalue| above cutoff, largest |eigenvalue|)."""
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    if m.order <= dense_limit():
        eigs = np.abs(full_spectrum(m))
        lam_max = float(eigs.max())
        if lam_max <= cutoff:
            raise ValueError("effectively zero matrix: all eigenvalues below cutoff")
        lam_min = float(eigs[eigs > cutoff].min())
        return lam_min, lam_max
    return _extreme_eigs_iterative(m, cutoff)


def _extreme_eigs_iterative(m: SymmetricMatrix, cutoff: float) -> tuple[float, float]:
    a = _to_csr(m)
    lam_max = float(
        np.abs(spla.eigsh(a, k=1, which="LM", tol=_ITERATIVE_TOL, return_eigenvectors=False)).max()
    )
    if lam_max <= cutoff:
        raise ValueError("effectively zero matrix: all eigenvalues below cutoff")
    # Shift-invert near zero; the small negative shift keeps the factored
    # matrix nonsingular for PSD Laplacians. k grows until an eigenvalue
    # clears the cutoff (the kernel can have high multiplicity for dilations).
    sigma = -0.01 * lam_max
    k = 2
    while True:
        k = min(k, m.order - 1)
        vals = spla.eigsh(
            a, k=k, sigma=sigma, which="LM", tol=_ITERATIVE_TOL, return_eigenvectors=False
        )
        above = np.abs(vals)[np.abs(vals) > cutoff]
        if above.size:
            return float(above.min()), lam_max
        if k >= m.order - 1:
            raise ValueError("effectively zero matrix: all eigenvalues below cutoff")
        k *= 2


def condition_number(m: SymmetricMatrix, cutoff: float = DEFAULT_CUTOFF) -> float:
    lam_min, lam_max = extreme_eigs(m, cutoff)
    return lam_max / lam_min


def sparsity(m: SymmetricMatrix) -> int:
    """Maximum number of structurally nonzero entries in any row."""
    counts = m.row_nnz()
    return max(counts) if counts else 0


def cutoff_sensitivity(m: SymmetricMatrix) -> CutoffSensitivity:
    """Minimum nonzero eigenvalue at cutoffs 1e-6 and 1e-10 (dense path)."""
    eigs = np.abs(full_spectrum(m))
    mins = []
    for cut in (DEFAULT_CUTOFF, AUDIT_CUTOFF):
        above = eigs[eigs > cut]
        if above.size == 0:
            raise ValueError("effectively zero matrix: all eigenvalues below cutoff")
        mins.append(float(above.min()))
    return CutoffSensitivity(
        system_size=m.order,
        min_eig_at_1e6=mins[0],
        min_eig_at_1e10=mins[1],
        delta=abs(mins[0] - mins[1]),
    )


def measure(m: SymmetricMatrix, matrix_kind: str, cutoff: float = DEFAULT_CUTOFF) -> SpectralRecord:
    """Assemble the SpectralRecord for one system matrix."""
    lam_min, lam_max = extreme_eigs(m, cutoff)
    return SpectralRecord(
        system_size=m.order,
        lambda_min_nz=lam_min,
        lambda_max=lam_max,
        kappa=lam_max / lam_min,
        sparsity=sparsity(m),
        cutoff=cutoff,
        matrix_kind=matrix_kind,
    )
