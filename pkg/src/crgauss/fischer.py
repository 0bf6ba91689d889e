"""Fischer splitting of bidegree-(2,2) polynomials in two variables.

A Hermitian 3x3 sectional matrix ``m`` is split uniquely as
``harmonic_matrix(nf) + lift_A(A)``: a harmonic part (5 real parameters) and
``|zeta|^2`` times the Hermitian form of ``A`` (4 real parameters). The
off-diagonal entry of ``A`` is called ``sigma`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .tensor import NormalForm, _complex, _real, harmonic_matrix, laplacian

HARMONIC_TOL = 1e-11
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class HermitianA:
    """The 2x2 Hermitian matrix ``[[tau, sigma], [conj(sigma), rho]]``."""

    tau: float = 0.0
    rho: float = 0.0
    sigma: complex = 0j

    def __post_init__(self):
        tau, rho, sigma = float(self.tau), float(self.rho), complex(self.sigma)
        if not all(math.isfinite(x) for x in (tau, rho, sigma.real, sigma.imag)):
            raise ValueError("non-finite entry in A")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.tau, self.sigma], [self.sigma.conjugate(), self.rho]])

    @classmethod
    def from_matrix(cls, m) -> "HermitianA":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0].real, m[1, 1].real, (m[0, 1] + m[1, 0].conjugate()) / 2)

    def distance(self, other: "HermitianA") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def to_json(self) -> dict:
        return {"tau": self.tau, "rho": self.rho, "sigma": [self.sigma.real, self.sigma.imag]}

    @classmethod
    def from_json(cls, obj: dict) -> "HermitianA":
        return cls(_real(obj["tau"]), _real(obj["rho"]), _complex(obj["sigma"]))


def lift_A(A: HermitianA) -> np.ndarray:
    """3x3 matrix of ``(zeta A zeta^*) |zeta|^2`` in the monomial basis."""
    t, r, s = A.tau, A.rho, A.sigma
    sc = s.conjugate()
    return np.array([[t, s, 0], [sc, t + r, s], [0, sc, r]], dtype=complex)


def _hermitian_coords(m: np.ndarray) -> np.ndarray:
    return np.array(
        [
            m[0, 0].real, m[1, 1].real, m[2, 2].real,
            m[0, 1].real, m[0, 1].imag,
            m[0, 2].real, m[0, 2].imag,
            m[1, 2].real, m[1, 2].imag,
        ]
    )


def _from_params(x) -> tuple[NormalForm, HermitianA]:
    a, br, bi, cr, ci, tau, rho, sr, si = x
    return NormalForm(a, complex(br, bi), complex(cr, ci)), HermitianA(tau, rho, complex(sr, si))


def _system() -> np.ndarray:
    cols = []
    for k in range(9):
        e = np.zeros(9)
        e[k] = 1.0
        nf, A = _from_params(e)
        cols.append(_hermitian_coords(harmonic_matrix(nf) + lift_A(A)))
    return np.column_stack(cols)


_SYSTEM = _system()
_COND = np.linalg.cond(_SYSTEM)
assert _COND < 100, f"Fischer system is ill-conditioned (cond={_COND})"
_LU = lu_factor(_SYSTEM)


def _check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL):
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    err = np.max(np.abs(m - m.conj().T))
    if err > tol * max(1.0, np.max(np.abs(m))):
        raise ValueError(f"matrix is not Hermitian (deviation {err:.3e})")
    return m


def fischer_decompose(m) -> tuple[NormalForm, HermitianA]:
    m = _check_hermitian(m)
    x = lu_solve(_LU, _hermitian_coords(m))
    return _from_params(x)


def reconstruct(nf: NormalForm, A: HermitianA) -> np.ndarray:
    return harmonic_matrix(nf) + lift_A(A)


def is_harmonic(m, tol: float = HARMONIC_TOL) -> bool:
    m = _check_hermitian(m)
    return float(np.max(np.abs(laplacian(m)))) <= tol
