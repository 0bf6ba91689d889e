"""CR curvature tensor for n=2: storage, invariants, sectional matrix, L_S.

Index conventions
-----------------
Entries are stored as ``S[alpha, beta, nu, mu]`` meaning S_{alpha beta-bar nu mu-bar}
(0-based here, 1-based in JSON). Slots 0 and 2 are holomorphic, slots 1 and 3
antiholomorphic. The Levi form is the identity, so raising a barred index is
numerically the identity map.

The sectional polynomial is ``S(zeta) = sum S[a,b,n,m] z_a z_n conj(z_b z_m)``
and is encoded as ``Z m Z^*`` with ``Z = (z1^2, z1 z2, z2^2)``; rows of ``m``
index the holomorphic monomial, columns the antiholomorphic one.

L_S convention: ``(L_S x)_{alpha nu} = sum_{beta,mu} S[alpha,beta,nu,mu] x_{beta mu}``
with coordinates taken in the basis e1 = E11, e2 = E12 + E21, e3 = E22. This is
the contraction that agrees with the closed-form normalized matrix in its first
row and second column. The closed form differs from every contraction of
a traceless tensor in its (3,3) entry and in the phase of the middle row; see
``build_LS_normalized`` for the closed form used by the classification.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

V_TOL = 1e-10
E_TOL = 1e-9
Z_TOL = 1e-9

# monomial index of zeta_i zeta_j in Z = (z1^2, z1 z2, z2^2)
_MONO = np.array([[0, 1], [1, 2]])
_BASIS = (
    np.array([[1.0, 0.0], [0.0, 0.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, 0.0], [0.0, 1.0]]),
)


class InvalidTensorError(ValueError):
    """Raised when a tensor violates the symmetry or trace laws."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:8])
        super().__init__(f"{len(self.violations)} invariant violation(s): {lines}")


@dataclass(frozen=True)
class NormalForm:
    """Reduced curvature coefficients ``(a, b, c)`` of the sectional matrix."""

    a: float
    b: complex = 0j
    c: complex = 0j

    def __post_init__(self):
        if isinstance(self.a, complex):
            raise TypeError("a must be real")
        a, b, c = float(self.a), complex(self.b), complex(self.c)
        if not all(math.isfinite(x) for x in (a, b.real, b.imag, c.real, c.imag)):
            raise ValueError(f"non-finite normal form: {(a, b, c)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def scale(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def is_normalized(self, c_tol: float = 1e-10) -> bool:
        return abs(self.c) <= c_tol

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NormalForm":
        return cls(_real(obj["a"]), _complex(obj.get("b", [0, 0])), _complex(obj.get("c", [0, 0])))


@dataclass(frozen=True)
class Violation:
    kind: str  # "hermitian", "symmetry" or "trace"
    index: tuple
    residual: float

    def __str__(self):
        idx = ",".join(str(i + 1) for i in self.index)
        return f"{self.kind}[{idx}] residual={self.residual:.3e}"


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """All 16 coefficients S_{alpha beta-bar nu mu-bar}, stored explicitly."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.shape != (2, 2, 2, 2):
            raise ValueError(f"expected shape (2, 2, 2, 2), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite tensor entry")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __getitem__(self, idx):
        return self.entries[idx]

    def replace(self, idx, value) -> "CurvatureTensor":
        """Copy with a single entry changed (0-based index)."""
        arr = self.entries.copy()
        arr[idx] = value
        return CurvatureTensor(arr)

    def to_json(self) -> dict:
        out = []
        for idx in itertools.product(range(2), repeat=4):
            v = self.entries[idx]
            out.append({"idx": [i + 1 for i in idx], "val": [v.real, v.imag]})
        return {"entries": out}

    @classmethod
    def from_json(cls, obj: dict) -> "CurvatureTensor":
        arr = np.zeros((2, 2, 2, 2), dtype=complex)
        seen = set()
        for rec in obj["entries"]:
            idx = tuple(int(i) - 1 for i in rec["idx"])
            if len(idx) != 4 or any(i not in (0, 1) for i in idx):
                raise ValueError(f"bad tensor index {rec['idx']}")
            if idx in seen:
                raise ValueError(f"duplicate tensor index {rec['idx']}")
            seen.add(idx)
            arr[idx] = _complex(rec["val"])
        if len(seen) != 16:
            raise ValueError(f"expected 16 tensor entries, got {len(seen)}")
        return cls(arr)


@dataclass(frozen=True)
class Classification:
    rank: int
    trace_sign: str  # "negative", "zero" or "positive"
    solution_count: int

    def to_json(self) -> dict:
        return {"rank": self.rank, "trace_sign": self.trace_sign, "count": self.solution_count}


def _real(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"expected a real number, got {x!r}")
    return float(x)


def _complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise ValueError(f"expected [re, im], got {x!r}")
    return complex(_real(x[0]), _real(x[1]))


def _symmetry_images(idx):
    """Index images under the symmetry law; the last one is the conjugating map."""
    al, be, nu, mu = idx
    return (
        ("symmetry", (nu, be, al, mu), False),
        ("symmetry", (nu, mu, al, be), False),
        ("hermitian", (be, al, mu, nu), True),
    )


def harmonic_matrix(nf: NormalForm) -> np.ndarray:
    """Sectional matrix of a traceless tensor in terms of ``(a, b, c)``."""
    a, b, c = nf.a, nf.b, nf.c
    return np.array(
        [
            [a, b, c],
            [b.conjugate(), -4 * a, -b],
            [c.conjugate(), -b.conjugate(), a],
        ],
        dtype=complex,
    )


def tensor_from_normal_form(nf: NormalForm) -> CurvatureTensor:
    a, b, c = nf.a, nf.b, nf.c
    seeds = {
        (0, 0, 0, 0): a,
        (0, 0, 0, 1): b / 2,
        (0, 1, 0, 1): c,
        (0, 0, 1, 1): -a,
        (0, 1, 1, 1): -b / 2,
        (1, 1, 1, 1): a,
    }
    arr = np.zeros((2, 2, 2, 2), dtype=complex)
    known = {}
    stack = list(seeds.items())
    while stack:
        idx, val = stack.pop()
        if idx in known:
            continue
        known[idx] = val
        arr[idx] = val
        for _, img, conj in _symmetry_images(idx):
            stack.append((img, val.conjugate() if conj else val))
    assert len(known) == 16
    return CurvatureTensor(arr)


def validate(t: CurvatureTensor, tol: float = V_TOL) -> list[Violation]:
    """Violations of the symmetry/Hermitian and trace laws, each pair reported once."""
    S = t.entries
    found = []
    for idx in itertools.product(range(2), repeat=4):
        for kind, img, conj in _symmetry_images(idx):
            if img < idx:
                continue
            other = S[img].conjugate() if conj else S[img]
            r = abs(S[idx] - other)
            if r > tol:
                found.append(Violation(kind, idx, float(r)))
    tr = np.einsum("mmab->ab", S)
    for al, be in itertools.product(range(2), repeat=2):
        r = abs(tr[al, be])
        if r > tol:
            found.append(Violation("trace", (al, be), float(r)))
    return found


def sectional_matrix(t: CurvatureTensor) -> np.ndarray:
    bad = validate(t)
    if bad:
        raise InvalidTensorError(bad)
    m = np.zeros((3, 3), dtype=complex)
    for al, be, nu, mu in itertools.product(range(2), repeat=4):
        m[_MONO[al, nu], _MONO[be, mu]] += t.entries[al, be, nu, mu]
    return m


def monomials(zeta) -> np.ndarray:
    z1, z2 = complex(zeta[0]), complex(zeta[1])
    return np.array([z1 * z1, z1 * z2, z2 * z2])


def sectional_eval(m: np.ndarray, zeta, tol: float = E_TOL) -> float:
    Z = monomials(zeta)
    val = Z @ m @ Z.conj()
    if abs(val.imag) > tol * max(1.0, abs(val)):
        raise ValueError(f"imaginary part {val.imag:.3e} too large: matrix is not Hermitian")
    return float(val.real)


def laplacian(m: np.ndarray) -> np.ndarray:
    """Coefficient matrix Q with ``zeta Q zeta^* = Delta(Z m Z^*)``, Delta = sum d_a dbar_a / 4."""
    m = np.asarray(m, dtype=complex)
    q11 = m[0, 0] + m[1, 1] / 4
    q22 = m[2, 2] + m[1, 1] / 4
    q12 = (m[0, 1] + m[1, 2]) / 2
    q21 = (m[1, 0] + m[2, 1]) / 2
    return np.array([[q11, q12], [q21, q22]])


def _sym_coords(y: np.ndarray) -> np.ndarray:
    return np.array([y[0, 0], y[0, 1], y[1, 1]])


def build_LS_general(t: CurvatureTensor) -> np.ndarray:
    bad = validate(t)
    if bad:
        raise InvalidTensorError(bad)
    cols = [_sym_coords(np.einsum("abnm,bm->an", t.entries, e)) for e in _BASIS]
    return np.column_stack(cols)


def build_LS_normalized(a: float, b: complex) -> np.ndarray:
    """Closed-form 3x3 L_S for a normalized (c = 0) curvature."""
    b = complex(b)
    bc = b.conjugate()
    return np.array(
        [
            [a, b, 0],
            [b / 2, -2 * a, -bc / 2],
            [0, -bc, 0],
        ],
        dtype=complex,
    )


def numerical_rank(M: np.ndarray, tol: float = Z_TOL) -> int:
    s = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _is_zero(x: float, scale: float, z_tol: float) -> bool:
    return scale == 0 or abs(x) <= z_tol * scale


def classify(a: float, b: complex, z_tol: float = Z_TOL) -> Classification:
    """Rank/trace of L_S and the solution count from the a/b dichotomy."""
    scale = max(abs(a), abs(b))
    a_zero = _is_zero(a, scale, z_tol)
    b_zero = _is_zero(b, scale, z_tol)
    if a_zero and b_zero:
        return Classification(0, "zero", 0)
    trace = "zero" if a_zero else ("negative" if a > 0 else "positive")
    if not b_zero and not a_zero:
        return Classification(3, trace, 2)
    count = 1 if trace == "negative" else 2
    return Classification(2, trace, count)


def trace_sign(x: float, scale: float = 1.0, z_tol: float = Z_TOL) -> str:
    if _is_zero(x, scale, z_tol):
        return "zero"
    return "negative" if x < 0 else "positive"
