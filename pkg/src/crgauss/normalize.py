"""SU(2) change of coframe on normal forms, and normalization to c = 0.

Convention: ``su2_apply(nf, u)`` is the form whose sectional polynomial is
``P_new(zeta) = P_old(zeta @ U.T)`` with ``U = [[p, q], [-conj(q), conj(p)]]``.
Under it the transformation formulas hold as a polynomial identity, and
``su2_apply(su2_apply(nf, u1), u2) == su2_apply(nf, u1 @ u2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor import NormalForm, _complex

C_TOL = 1e-10
UNIT_TOL = 1e-12
REAL_TOL = 1e-12
TRIM_TOL = 1e-13


class NormalizationError(ArithmeticError):
    """No candidate rotation drives c below tolerance."""

    def __init__(self, msg, best_residual):
        super().__init__(f"{msg} (best |c| = {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass(frozen=True)
class SU2Element:
    p: complex = 1 + 0j
    q: complex = 0j

    def __post_init__(self):
        p, q = complex(self.p), complex(self.q)
        norm = abs(p) ** 2 + abs(q) ** 2
        if not math.isfinite(norm) or abs(norm - 1) > UNIT_TOL:
            raise ValueError(f"|p|^2 + |q|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def matrix(self) -> np.ndarray:
        p, q = self.p, self.q
        return np.array([[p, q], [-q.conjugate(), p.conjugate()]])

    def __matmul__(self, other: "SU2Element") -> "SU2Element":
        m = self.matrix @ other.matrix
        return SU2Element(m[0, 0], m[0, 1])

    def to_json(self) -> dict:
        return {"p": [self.p.real, self.p.imag], "q": [self.q.real, self.q.imag]}

    @classmethod
    def from_json(cls, obj: dict) -> "SU2Element":
        return cls(_complex(obj["p"]), _complex(obj["q"]))

    @classmethod
    def from_ratio(cls, w: complex) -> "SU2Element":
        """Unit pair with conj(q)/p = w and p real positive."""
        p = 1 / math.sqrt(1 + abs(w) ** 2)
        qbar = w * p
        return cls(p, qbar.conjugate())


IDENTITY = SU2Element(1, 0)
AT_INFINITY = SU2Element(0, 1)


def _transform(a, b, c, p, q):
    pc, qc, bc, cc = p.conjugate(), q.conjugate(), b.conjugate(), c.conjugate()
    pp, qq = abs(p) ** 2, abs(q) ** 2
    a_new = (
        (pp * pp - 4 * pp * qq + qq * qq) * a
        + p * q * (qq - pp) * b
        + pc * qc * (qq - pp) * bc
        + p**2 * q**2 * c
        + pc**2 * qc**2 * cc
    )
    b_new = (
        6 * p * qc * (pp - qq) * a
        + p**2 * (pp - 3 * qq) * b
        + qc**2 * (qq - 3 * pp) * bc
        - 2 * p**3 * q * c
        + 2 * pc * qc**3 * cc
    )
    c_new = (
        6 * p**2 * qc**2 * a
        + 2 * p**3 * qc * b
        - 2 * p * qc**3 * bc
        + p**4 * c
        + qc**4 * cc
    )
    return a_new, b_new, c_new


def su2_apply(nf: NormalForm, u: SU2Element) -> NormalForm:
    if not isinstance(u, SU2Element):
        raise TypeError("u must be an SU2Element")
    a_new, b_new, c_new = _transform(nf.a, nf.b, nf.c, u.p, u.q)
    a_new = complex(a_new)
    if abs(a_new.imag) > REAL_TOL * max(1.0, nf.scale()):
        # the transformed a is real for every unit (p, q); a residue means bad input algebra
        raise ArithmeticError(f"transformed a has imaginary part {a_new.imag:.3e}")
    return NormalForm(a_new.real, b_new, c_new)


def quartic_coefficients(nf: NormalForm) -> np.ndarray:
    """Coefficients, lowest degree first, of c~ / p^4 as a polynomial in w = conj(q)/p."""
    a, b, c = nf.a, nf.b, nf.c
    return np.array([c, 2 * b, 6 * a, -2 * b.conjugate(), c.conjugate()], dtype=complex)


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of sum coeffs[k] w^k (leading coefficient nonzero) via companion eigenvalues."""
    deg = len(coeffs) - 1
    if deg < 1:
        return np.empty(0, dtype=complex)
    monic = coeffs[:-1] / coeffs[-1]
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic
    return np.linalg.eigvals(comp)


def _polish(coeffs, w, steps=3):
    poly = np.polynomial.Polynomial(coeffs)
    dpoly = poly.deriv()
    for _ in range(steps):
        d = dpoly(w)
        if d == 0:
            break
        step = poly(w) / d
        if not np.isfinite(step) or abs(step) > 1e-6 * max(1.0, abs(w)):
            break
        w = w - step
    return w


def _ldexp(x, e):
    x = np.asarray(x, dtype=complex)
    return np.ldexp(x.real, e) + 1j * np.ldexp(x.imag, e)


def _roots(nf: NormalForm):
    """Pairs ``(w, u)``; w is None for the root at infinity."""
    coeffs = quartic_coefficients(nf)
    big = np.max(np.abs(coeffs))
    if big == 0:
        return [(0j, IDENTITY)]
    # exact power-of-two rescale keeps the companion matrix finite for subnormal input
    coeffs = _ldexp(coeffs, -math.frexp(big)[1])
    big = np.max(np.abs(coeffs))
    deg = 4
    while abs(coeffs[deg]) <= TRIM_TOL * big:
        deg -= 1
    trimmed = coeffs[: deg + 1]
    out = []
    for w in _companion_roots(trimmed):
        w = complex(_polish(trimmed, complex(w)))
        out.append((w, SU2Element.from_ratio(w)))
    if deg < 4:
        out.append((None, AT_INFINITY))
    return out


def c_root_candidates(nf: NormalForm) -> list[SU2Element]:
    return [u for _, u in _roots(nf)]


def _order_key(w):
    if w is None:
        return (math.inf, math.inf)
    return (w.real, w.imag)


def normalize(nf: NormalForm, c_tol: float = C_TOL) -> tuple[NormalForm, SU2Element]:
    """Rotate ``nf`` so that ``|c| <= c_tol`` (relative to the input scale)."""
    scale = nf.scale()
    if scale == 0:
        return nf, IDENTITY
    e = -math.frexp(scale)[1]
    unit = NormalForm(math.ldexp(nf.a, e), complex(_ldexp(nf.b, e)), complex(_ldexp(nf.c, e)))
    if abs(unit.c) <= c_tol * unit.scale():
        return nf, IDENTITY
    scored = []
    for w, u in _roots(unit):
        res = abs(su2_apply(unit, u).c)
        scored.append((res, _order_key(w), u))
    scored.sort(key=lambda t: (t[0], t[1]))
    best, _, u = scored[0]
    best /= unit.scale()
    if best > c_tol:
        raise NormalizationError("normalization failed", best)
    return su2_apply(nf, u), u
