"""Gauss equation ``S + (zeta A zeta^*)|zeta|^2 = -|omega|^2`` for M^5 -> S^7.

For a normalized curvature (c = 0) every solution is certified by a rank-one
negative semidefinite factorization ``T_A = -v v^*`` where ``omega = Z v``.
Candidates come from the closed-form case analysis; the eigendecomposition of
``T_A`` decides which of them are genuine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .fischer import HermitianA, lift_A
from .tensor import Z_TOL, Classification, _complex, _is_zero, classify

R_TOL = 1e-8
G_TOL = 0.2
RESIDUAL_TOL = 1e-9


class GaussConsistencyError(RuntimeError):
    """Solution count disagrees with the classification of the curvature."""

    def __init__(self, msg, candidates):
        super().__init__(msg)
        self.candidates = candidates


@dataclass(frozen=True)
class SffVector:
    """Coefficients of ``omega = v1 z1^2 + v2 z1 z2 + v3 z2^2``, defined up to phase."""

    v: tuple

    def __post_init__(self):
        v = tuple(complex(x) for x in self.v)
        if len(v) != 3:
            raise ValueError("omega needs exactly 3 coefficients")
        if not all(math.isfinite(abs(x)) for x in v):
            raise ValueError("non-finite omega coefficient")
        object.__setattr__(self, "v", v)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.v, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.array))

    def canonical(self) -> "SffVector":
        """Representative whose first non-negligible entry is real positive."""
        arr = self.array
        n = np.linalg.norm(arr)
        if n == 0:
            return self
        for x in arr:
            if abs(x) > 1e-9 * n:
                arr = arr * (abs(x) / x)
                break
        return SffVector(tuple(arr))

    def rotate(self, t: float) -> "SffVector":
        return SffVector(tuple(self.array * complex(math.cos(t), math.sin(t))))

    def equivalent(self, other: "SffVector", tol: float = 1e-9) -> bool:
        """Equal up to a unit phase: compare the outer products."""
        x, y = self.array, other.array
        return float(np.max(np.abs(np.outer(x, x.conj()) - np.outer(y, y.conj())))) <= tol

    def __call__(self, zeta) -> complex:
        z1, z2 = zeta
        v1, v2, v3 = self.v
        return v1 * z1 * z1 + v2 * z1 * z2 + v3 * z2 * z2

    def to_json(self) -> list:
        return [[x.real, x.imag] for x in self.v]

    @classmethod
    def from_json(cls, obj) -> "SffVector":
        return cls(tuple(_complex(x) for x in obj))


@dataclass(frozen=True)
class GaussSolution:
    A: HermitianA
    sff: SffVector
    eigenvalue: float
    branch: str

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "omega": self.sff.to_json(),
            "eigenvalue": self.eigenvalue,
            "branch": self.branch,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GaussSolution":
        return cls(
            HermitianA.from_json(obj["A"]),
            SffVector.from_json(obj["omega"]),
            float(obj.get("eigenvalue", float("nan"))),
            str(obj.get("branch", "")),
        )


@dataclass(frozen=True)
class Candidate:
    branch: str
    A: HermitianA
    eigenvalues: tuple
    accepted: bool

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "A": self.A.to_json(),
            "eigenvalues": list(self.eigenvalues),
            "accepted": self.accepted,
        }


@dataclass(frozen=True)
class GaussResult:
    """Solutions of the Gauss equation; behaves like the tuple of solutions."""

    solutions: tuple
    classification: Classification
    candidates: tuple = ()
    flat: bool = False

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


def build_TA(a: float, b: complex, A: HermitianA) -> np.ndarray:
    t, r, s = A.tau, A.rho, A.sigma
    b = complex(b)
    return np.array(
        [
            [t + a, s + b, 0],
            [(s + b).conjugate(), t + r - 4 * a, s - b],
            [0, (s - b).conjugate(), r + a],
        ],
        dtype=complex,
    )


def rank1_nsd_factor(T, r_tol: float = R_TOL) -> SffVector | None:
    """``v`` with ``T = -v v^*`` when T is numerically rank one and negative, else None."""
    T = np.asarray(T, dtype=complex)
    w, U = np.linalg.eigh((T + T.conj().T) / 2)
    order = np.argsort(-np.abs(w))
    w, U = w[order], U[:, order]
    if w[0] == 0 or abs(w[1]) > r_tol * abs(w[0]) or w[0] > 0:
        return None
    return SffVector(tuple(math.sqrt(-w[0]) * U[:, 0])).canonical()


def _candidates(a: float, b: complex, b_zero: bool):
    if b_zero:
        return [
            ("case1_mid", HermitianA(-a, -a, 0)),
            ("case1_third", HermitianA(-a, 5 * a, 0)),
            ("case1_first", HermitianA(5 * a, -a, 0)),
        ]
    root = math.sqrt(9 * a * a + 4 * abs(b) ** 2)
    out = []
    for sign in (1, -1):
        out.append(("case2_sigma_plus_b", HermitianA(2 * a + sign * root, -a, b)))
    for sign in (1, -1):
        out.append(("case2_sigma_minus_b", HermitianA(-a, 2 * a + sign * root, -b)))
    return out


def _scaled(A: HermitianA, e: int) -> HermitianA:
    s = A.sigma
    return HermitianA(math.ldexp(A.tau, e), math.ldexp(A.rho, e), complex(math.ldexp(s.real, e), math.ldexp(s.imag, e)))


def solve_gauss(a: float, b: complex, z_tol: float = Z_TOL, r_tol: float = R_TOL) -> GaussResult:
    """All solutions ``(A, omega)`` up to phase, for a normalized curvature ``(a, b, 0)``."""
    a, b = float(a), complex(b)
    cls = classify(a, b, z_tol)
    scale = max(abs(a), abs(b))
    if cls.rank == 0:
        # flat curvature: omega == 0 is the only solution
        return GaussResult((), cls, (), flat=True)
    # the equation is homogeneous: solve at unit size, undo with an exact power of 4
    e = math.frexp(scale)[1]
    e += e % 2
    ua = math.ldexp(a, -e)
    ub = complex(math.ldexp(b.real, -e), math.ldexp(b.imag, -e))
    solutions, cands = [], []
    for branch, A in _candidates(ua, ub, _is_zero(ub, max(abs(ua), abs(ub)), z_tol)):
        T = build_TA(ua, ub, A)
        v = rank1_nsd_factor(T, r_tol)
        eig = tuple(math.ldexp(float(x), e) for x in np.linalg.eigvalsh(T))
        A = _scaled(A, e)
        cands.append(Candidate(branch, A, eig, v is not None))
        if v is not None:
            v = SffVector(tuple(x * math.ldexp(1.0, e // 2) for x in v.v))
            solutions.append(GaussSolution(A, v, -v.norm() ** 2, branch))
    solutions.sort(key=lambda s: (s.branch, s.A.tau))
    if len(solutions) != cls.solution_count:
        detail = ", ".join(f"{c.branch}:{np.array(c.eigenvalues).tolist()}" for c in cands)
        raise GaussConsistencyError(
            f"found {len(solutions)} solutions for (a, b) = ({a}, {b}), "
            f"classification expects {cls.solution_count}; candidates {detail}",
            tuple(cands),
        )
    return GaussResult(tuple(solutions), cls, tuple(cands))


def verify_gauss(a: float, b: complex, A: HermitianA, sff: SffVector) -> float:
    v = sff.array
    return float(np.max(np.abs(build_TA(a, b, A) + np.outer(v, v.conj()))))


def sff_coefficients(sff: SffVector) -> np.ndarray:
    """Symmetric array omega_{alpha beta} with omega = omega_{ab} z_a z_b."""
    v1, v2, v3 = sff.v
    return np.array([[v1, v2 / 2], [v2 / 2, v3]])


def A_from_sff(sff: SffVector) -> HermitianA:
    """A determined by the second fundamental form through the Gauss equation (n = 2)."""
    w = sff_coefficients(sff)
    contraction = np.einsum("ga,gb->ab", w, w.conj())
    total = float(np.sum(np.abs(w) ** 2))
    return HermitianA.from_matrix(-contraction + total / 6 * np.eye(2))


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    step: float = 0.25
    g_tol: float = G_TOL

    def axis(self) -> np.ndarray:
        if not (self.step > 0 and self.hi >= self.lo):
            raise ValueError(f"empty grid: {self}")
        n = int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1
        return self.lo + self.step * np.arange(n)


@dataclass(frozen=True)
class BruteCluster:
    A: HermitianA
    score: float
    min_eigenvalue: float
    size: int
    members: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "score": self.score,
            "min_eigenvalue": self.min_eigenvalue,
            "size": self.size,
        }


def _scan(a, b, grid: GridSpec, chunk=50_000):
    axis = grid.axis()
    g = grid.g_tol
    # a diagonal entry never exceeds the top eigenvalue
    tr = axis[axis + a <= g]
    tt, rr = np.meshgrid(tr, tr, indexing="ij")
    keep = tt + rr - 4 * a <= g
    pairs = np.column_stack([tt[keep], rr[keep]])
    sr, si = np.meshgrid(axis, axis, indexing="ij")
    sig = (sr + 1j * si).ravel()
    hits, scores, mins = [], [], []
    per = max(1, chunk // max(1, sig.size))
    for start in range(0, len(pairs), per):
        block = pairs[start:start + per]
        t = np.repeat(block[:, 0], sig.size)
        r = np.repeat(block[:, 1], sig.size)
        s = np.tile(sig, len(block))
        T = np.zeros((t.size, 3, 3), dtype=complex)
        T[:, 0, 0] = t + a
        T[:, 0, 1] = s + b
        T[:, 1, 0] = np.conj(s + b)
        T[:, 1, 1] = t + r - 4 * a
        T[:, 1, 2] = s - b
        T[:, 2, 1] = np.conj(s - b)
        T[:, 2, 2] = r + a
        lam = np.linalg.eigvalsh(T)
        score = np.maximum(np.abs(lam[:, 1]), np.maximum(lam[:, 2], 0))
        ok = score <= g
        hits.append(np.column_stack([t[ok], r[ok], s[ok].real, s[ok].imag]))
        scores.append(score[ok])
        mins.append(lam[ok, 0])
    if not hits:
        return np.empty((0, 4)), np.empty(0), np.empty(0)
    return np.concatenate(hits), np.concatenate(scores), np.concatenate(mins)


def brute_clusters(a: float, b: complex, grid: GridSpec) -> list[BruteCluster]:
    """Grid points where T_A is within g_tol of rank-one NSD, grouped by adjacency."""
    a, b = float(a), complex(b)
    pts, scores, mins = _scan(a, b, grid)
    if len(pts) == 0:
        return []
    pairs = cKDTree(pts).query_pairs(r=1.5 * grid.step, p=np.inf, output_type="ndarray")
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(pts), len(pts)))
    ncomp, labels = connected_components(adj, directed=False)
    out = []
    for k in range(ncomp):
        idx = np.flatnonzero(labels == k)
        # best score first, then lexicographic on the parameters
        order = np.lexsort((pts[idx, 3], pts[idx, 2], pts[idx, 1], pts[idx, 0], scores[idx]))
        best = idx[order[0]]
        t, r, sr, si = pts[best]
        out.append(
            BruteCluster(
                HermitianA(t, r, complex(sr, si)),
                float(scores[best]),
                float(mins[best]),
                len(idx),
                tuple(map(tuple, pts[idx])),
            )
        )
    out.sort(key=lambda c: (c.A.tau, c.A.rho, c.A.sigma.real, c.A.sigma.imag))
    return out


def brute_solutions(a: float, b: complex, grid: GridSpec) -> list[HermitianA]:
    """Cluster representatives whose rank-one factor is not negligible."""
    return [c.A for c in brute_clusters(a, b, grid) if -c.min_eigenvalue > grid.g_tol]
