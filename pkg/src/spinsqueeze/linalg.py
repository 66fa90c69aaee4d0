"""Dense complex linear algebra for 3- and 9-dimensional Hilbert spaces.

Everything operates on plain ``complex128`` numpy arrays.  The matrices
involved are at most 9x9, so the matrix exponential is computed exactly
through a spectral decomposition of the associated Hermitian matrix rather
than a truncated series or Pade approximant; unitarity of the resulting
propagators then holds to machine precision.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12


def as_complex_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got an array of dimension {a.ndim}")
    return a


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol


def is_anti_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a + a.conj().T))) <= tol


def kron(a, b) -> np.ndarray:
    """Kronecker product: entry [i*p + k, j*q + l] = a[i, j] * b[k, l]."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def expectation(state, op) -> complex:
    """<psi|A|psi> for a state vector and an operator of matching dimension.

    The result is returned as a complex number even when A is Hermitian;
    callers that know the operator is Hermitian take the real part.
    """
    psi = np.asarray(state, dtype=complex).ravel()
    a = as_complex_matrix(op)
    if a.shape != (psi.size, psi.size):
        raise ValueError(
            f"operator shape {a.shape} does not match state dimension {psi.size}"
        )
    return complex(psi.conj() @ (a @ psi))


def matrix_exponential(m, scale, kind: str | None = None) -> np.ndarray:
    """exp(scale * m) for a Hermitian or anti-Hermitian matrix m.

    The exponential is evaluated through the eigendecomposition of the
    associated Hermitian matrix (m itself, or i*m when m is anti-Hermitian),
    so group properties such as exp((a+b)m) = exp(am) exp(bm) and unitarity
    for imaginary spectra hold to rounding error.

    ``kind`` may be "hermitian", "anti_hermitian", or None to autodetect.
    ``scale`` is typically real; complex scales (e.g. -i*tau for a Hermitian
    generator) are accepted and handled exactly the same way.
    """
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if kind is None:
        if is_hermitian(a):
            kind = "hermitian"
        elif is_anti_hermitian(a):
            kind = "anti_hermitian"
        else:
            raise ValueError(
                "matrix is neither Hermitian nor anti-Hermitian within tolerance"
            )
    if kind == "hermitian":
        if not is_hermitian(a):
            raise ValueError("matrix violates its hermitian tag")
        w, v = np.linalg.eigh(a)
        eigs = w.astype(complex)
    elif kind == "anti_hermitian":
        if not is_anti_hermitian(a):
            raise ValueError("matrix violates its anti_hermitian tag")
        # i*m is Hermitian with real eigenvalues w; m itself has -i*w.
        w, v = np.linalg.eigh(1j * a)
        eigs = -1j * w
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return (v * np.exp(scale * eigs)) @ v.conj().T
