# -*- coding: utf-8 -*-
"""
Dense complex matrix core: value types for general and Hermitian matrices,
eigendecompositions, resolvents, normalized traces and norms.

Everything here is immutable. A HermitianMatrix computes its
eigendecomposition at most once and every resolvent of it is assembled from
that decomposition, so evaluating m_N, alpha_N, beta_N at many spectral points
costs one eigh call.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import linalg as la

from .errors import DomainError, InputError, NumericalError

HERMITIAN_REAL = 'hermitian-real'
GENERAL_COMPLEX = 'general-complex'
# real parts closer than this, relative to the spectral radius, count as equal when sorting
ORDER_RTOL = 1e-12


def _frozen_array(values):
    arr = np.array(values, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Square n x n matrix with finite complex entries."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InputError('matrix must be square and non-empty, got shape %s' % (arr.shape,))
        if not np.all(np.isfinite(arr)):
            raise InputError('matrix has non-finite entries')
        object.__setattr__(self, 'entries', arr)

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return np.array(self.entries, copy=True)
        return np.array(self.entries, dtype=dtype, copy=True)


@dataclass(frozen=True, eq=False)
class HermitianMatrix(ComplexMatrix):
    """Hermitian matrix, exact at construction.

    With ``symmetrize=True`` (default) the entries are replaced by
    (X + X*)/2 with a real diagonal; otherwise anything that is not exactly
    Hermitian is rejected.
    """

    symmetrize: bool = field(default=True, repr=False)

    def __post_init__(self):
        super().__post_init__()
        arr = np.array(self.entries)
        if self.symmetrize:
            arr = 0.5 * (arr + arr.conj().T)
            np.fill_diagonal(arr, arr.diagonal().real)
        elif not np.array_equal(arr, arr.conj().T):
            raise InputError('matrix is not Hermitian')
        object.__setattr__(self, 'entries', _frozen_array(arr))

    @cached_property
    def eigen(self):
        """(ascending real eigenvalues, unitary eigenvectors), computed once."""
        try:
            values, vectors = la.eigh(self.entries, check_finite=False)
        except la.LinAlgError as exc:
            raise NumericalError('eigh did not converge', {'n': self.n, 'reason': str(exc)})
        values.setflags(write=False)
        vectors.setflags(write=False)
        return values, vectors


def canonical_order(values, rtol=ORDER_RTOL):
    """Indices sorting ``values`` by (Re, Im); real parts within rtol * max|value| tie."""
    values = np.asarray(values, dtype=np.complex128)
    if values.size == 0:
        return np.arange(0)
    tol = rtol * float(np.max(np.abs(values)))
    by_re = np.argsort(values.real, kind='stable')
    groups = np.concatenate(([0], np.cumsum(np.diff(values.real[by_re]) > tol)))
    return by_re[np.lexsort((values.imag[by_re], groups))]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in canonical order.

    hermitian-real spectra are real and ascending; general-complex spectra are
    sorted lexicographically by (Re, Im).
    """

    values: np.ndarray
    kind: str = GENERAL_COMPLEX

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).ravel()
        if self.kind == HERMITIAN_REAL:
            vals = np.sort(vals.real).astype(np.complex128)
        elif self.kind == GENERAL_COMPLEX:
            vals = vals[canonical_order(vals)]
        else:
            raise InputError('unknown spectrum kind %r' % (self.kind,))
        vals.setflags(write=False)
        object.__setattr__(self, 'values', vals)

    def __len__(self):
        return self.values.shape[0]


def as_hermitian(H):
    if isinstance(H, HermitianMatrix):
        return H
    return HermitianMatrix(np.asarray(H))


def as_matrix(M):
    if isinstance(M, ComplexMatrix):
        return M
    return ComplexMatrix(np.asarray(M))


def hermitian_eigen(H):
    """Eigendecomposition H = U diag(lambda) U*, eigenvalues ascending.

    :returns: (Spectrum, U)
    """
    H = as_hermitian(H)
    values, vectors = H.eigen
    return Spectrum(values, HERMITIAN_REAL), vectors


def general_eigen(M):
    """Eigenvalues of an arbitrary complex matrix, (Re, Im)-sorted."""
    M = as_matrix(M)
    try:
        values = la.eigvals(M.entries, check_finite=False)
    except la.LinAlgError as exc:
        raise NumericalError('eigenvalue iteration failed to converge',
                             {'n': M.n, 'condition': float(np.linalg.cond(M.entries)), 'reason': str(exc)})
    return Spectrum(values, GENERAL_COMPLEX)


def check_off_axis(z):
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError('resolvent evaluated on the real axis (z=%r)' % (z,))
    return z


def resolvent(H, z):
    """G_z = (H - z)^{-1} assembled from the cached eigendecomposition of H."""
    H = as_hermitian(H)
    z = check_off_axis(z)
    values, vectors = H.eigen
    G = (vectors / (values - z)) @ vectors.conj().T
    return ComplexMatrix(G)


def normalized_trace(M):
    """<M> = tr(M) / n."""
    M = as_matrix(M)
    return complex(np.trace(M.entries) / M.n)


def traceless_part(W):
    """W - <W>, the traceless part of a Hermitian matrix."""
    W = as_hermitian(W)
    arr = np.array(W.entries)
    arr[np.diag_indices(W.n)] -= normalized_trace(W).real
    return HermitianMatrix(arr)


def operator_norm(M):
    """Largest singular value."""
    M = as_matrix(M)
    if isinstance(M, HermitianMatrix):
        values = M.eigen[0]
        return float(max(abs(values[0]), abs(values[-1])))
    return float(la.svdvals(M.entries, check_finite=False)[0])
