"""Webster's embedding of ``{|z|^2 + 2 Re b(z) = 1}`` into the unit sphere.

``b(z) = z^T B z`` is a homogeneous quadratic; the map is
``f(z) = (z, b(z)) / (1 - b(z))``. All point functions accept a single point
of shape ``(n,)`` or a batch of shape ``(k, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import _complex

P_TOL = 1e-8
S_FLOOR = 1e-6
MAX_RESAMPLES = 1000


class PoleError(ZeroDivisionError):
    def __init__(self, bz):
        super().__init__(f"pole of the Webster map: b(z) = {bz}")
        self.bz = bz


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    B: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=complex)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 1:
            raise ValueError(f"B must be square, got shape {B.shape}")
        if not np.all(np.isfinite(B)):
            raise ValueError("non-finite entry in B")
        if np.max(np.abs(B - B.T)) > 1e-12 * max(1.0, np.max(np.abs(B))):
            raise ValueError("B must be symmetric")
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.einsum("...i,ij,...j->...", z, self.B, z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.B, 2))

    def to_json(self) -> dict:
        return {"n": self.n, "B": [[[x.real, x.imag] for x in row] for row in self.B]}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadraticForm":
        B = np.array([[_complex(x) for x in row] for row in obj["B"]], dtype=complex)
        if "n" in obj and int(obj["n"]) != B.shape[0]:
            raise ValueError(f"n = {obj['n']} does not match B of size {B.shape[0]}")
        return cls(B)


def random_quadratic_form(n: int, rng: np.random.Generator, max_norm: float = 0.3) -> QuadraticForm:
    """Random complex symmetric B with operator norm uniform in (0, max_norm]."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    B = (G + G.T) / 2
    target = max_norm * (1 - rng.random())
    return QuadraticForm(B * (target / np.linalg.norm(B, 2)))


def _sq(z) -> np.ndarray:
    return np.sum(np.abs(z) ** 2, axis=-1)


def defining_residual(Q: QuadraticForm, z):
    z = np.asarray(z, dtype=complex)
    return _sq(z) + 2 * Q(z).real - 1


def webster_map(Q: QuadraticForm, z, p_tol: float = P_TOL) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    bz = Q(z)
    denom = 1 - bz
    bad = np.abs(denom) < p_tol
    if np.any(bad):
        raise PoleError(complex(np.ravel(bz)[np.ravel(bad)][0]))
    out = np.concatenate([z, bz[..., None]], axis=-1)
    return out / denom[..., None]


def sphere_residual(Q: QuadraticForm, z, p_tol: float = P_TOL):
    return _sq(webster_map(Q, z, p_tol)) - 1


def _random_direction(n, rng, size=None):
    shape = (n,) if size is None else (size, n)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_hypersurface(
    Q: QuadraticForm,
    d,
    rng: np.random.Generator,
    s_floor: float = S_FLOOR,
    max_resamples: int = MAX_RESAMPLES,
) -> np.ndarray:
    """The point ``t d`` on the hypersurface, resampling d when the ray misses it."""
    d = np.asarray(d, dtype=complex)
    if not np.any(d):
        raise ValueError("direction must be nonzero")
    for _ in range(max_resamples + 1):
        rad = _sq(d) + 2 * Q(d).real
        if rad >= s_floor:
            return d / np.sqrt(rad)
        d = _random_direction(Q.n, rng)
    raise SamplingError(f"no valid ray after {max_resamples} resamples")


def sample_points(
    Q: QuadraticForm,
    count: int,
    rng: np.random.Generator,
    s_floor: float = S_FLOOR,
    max_resamples: int = MAX_RESAMPLES,
) -> np.ndarray:
    """``count`` points on the hypersurface along Gaussian random rays."""
    out = np.empty((count, Q.n), dtype=complex)
    todo = np.arange(count)
    for _ in range(max_resamples + 1):
        if todo.size == 0:
            break
        d = _random_direction(Q.n, rng, todo.size)
        rad = _sq(d) + 2 * Q(d).real
        ok = rad >= s_floor
        out[todo[ok]] = d[ok] / np.sqrt(rad[ok])[:, None]
        todo = todo[~ok]
    if todo.size == 0:
        return out
    raise SamplingError(f"{todo.size} rays still invalid after {max_resamples} resamples")
