"""The Heisenberg algebra h_n and its derivations trivial on the center.

Basis order is ``(X0, X1..Xn, Y1..Yn)``; vectors of the non-central part
``v`` use ``(x1..xn, y1..yn)``, i.e. ``(q, p)`` coordinates.

Symmetric maps ``A`` and derivations ``D`` are exchanged by the pair
``D = J A`` / ``A = -J D``, which are exact inverses because ``J^2 = -I``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NotADerivationError
from .lie_core import LieAlgebra, MetricForm

_SYM_TOL = 1e-14
_DERIV_TOL = 1e-10


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m), initial=0.0)))


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    return int(n)


def _square_even(m, name: str) -> tuple[np.ndarray, int]:
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
        raise InvalidArgument(f"{name} must be a 2n x 2n matrix, got shape {m.shape}")
    return m, m.shape[0] // 2


@dataclass(frozen=True)
class SymmetricMap:
    """Symmetric 2n x 2n matrix; defines H(x) = 1/2 (Ax, x) and b(x, y) = (Ax, y)."""

    A: np.ndarray

    def __post_init__(self):
        a, _ = _square_even(self.A, "A")
        if np.max(np.abs(a - a.T)) > _SYM_TOL * _scale(a):
            raise InvalidArgument("A is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "A", a)

    @property
    def n(self) -> int:
        return self.A.shape[0] // 2

    def is_singular(self, tol: float = 1e-12) -> bool:
        return abs(np.linalg.det(self.A)) <= tol

    def to_dict(self) -> dict:
        return {"n": self.n, "A": self.A.tolist()}

    @classmethod
    def from_dict(cls, doc) -> "SymmetricMap":
        # a bare nested list is accepted as well as {"n": .., "A": ..}
        if isinstance(doc, dict):
            try:
                a = np.array(doc["A"], dtype=float)
            except (KeyError, ValueError, TypeError) as exc:
                raise InvalidArgument(f"malformed symmetric map document: {exc}") from exc
            if "n" in doc and a.ndim == 2 and a.shape[0] != 2 * int(doc["n"]):
                raise InvalidArgument("declared n does not match the size of A")
        else:
            a = np.array(doc, dtype=float)
        return cls(a)


@dataclass(frozen=True)
class Derivation:
    """Derivation of h_n trivial on the center, stored as its 2n x 2n block on v."""

    D: np.ndarray

    def __post_init__(self):
        d, _ = _square_even(self.D, "D")
        if is_derivation_defect(d) > _DERIV_TOL * _scale(d):
            raise NotADerivationError("J D is not symmetric")
        d.setflags(write=False)
        object.__setattr__(self, "D", d)

    @property
    def n(self) -> int:
        return self.D.shape[0] // 2

    def full_matrix(self) -> np.ndarray:
        """Action on all of h_n in the basis (X0, X.., Y..); zero on X0."""
        m = np.zeros((2 * self.n + 1,) * 2)
        m[1:, 1:] = self.D
        return m

    def to_dict(self) -> dict:
        return {"n": self.n, "D": self.D.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "Derivation":
        try:
            return cls(np.array(doc["D"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed derivation document: {exc}") from exc


def as_symmetric(a) -> SymmetricMap:
    return a if isinstance(a, SymmetricMap) else SymmetricMap(a)


def heisenberg(n: int) -> LieAlgebra:
    """h_n with basis (X0, X1..Xn, Y1..Yn) and [Xi, Yi] = X0."""
    n = _check_n(n)
    dim = 2 * n + 1
    c = np.zeros((dim, dim, dim))
    for i in range(1, n + 1):
        c[i, n + i, 0] = 1.0
        c[n + i, i, 0] = -1.0
    labels = ("X0",) + tuple(f"X{i}" for i in range(1, n + 1)) + tuple(f"Y{i}" for i in range(1, n + 1))
    return LieAlgebra(c, labels)


def heisenberg_metric(n: int) -> MetricForm:
    """Left-invariant definite metric making X0, Xi, Yj orthonormal."""
    return MetricForm(np.eye(2 * _check_n(n) + 1))


def standard_J(n: int) -> np.ndarray:
    n = _check_n(n)
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def is_derivation_defect(D) -> float:
    d, n = _square_even(D, "D")
    jd = standard_J(n) @ d
    return float(np.max(np.abs(jd - jd.T)))


def deriv_of_sym(A) -> Derivation:
    a = as_symmetric(A)
    return Derivation(standard_J(a.n) @ a.A)


def sym_of_deriv(D) -> SymmetricMap:
    d = D.D if isinstance(D, Derivation) else np.array(D, dtype=float)
    d, n = _square_even(d, "D")
    if is_derivation_defect(d) > _DERIV_TOL * _scale(d):
        raise NotADerivationError("J D is not symmetric within tolerance")
    a = -standard_J(n) @ d
    return SymmetricMap(0.5 * (a + a.T))


def is_skew_derivation(D, tol: float = 1e-12) -> bool:
    """True when D is skew for the canonical inner product (an isometry generator)."""
    d = D.D if isinstance(D, Derivation) else np.asarray(D, dtype=float)
    return bool(np.max(np.abs(d + d.T)) <= tol)


def derivation_space_dim(n: int, tol: float = 1e-10) -> int:
    """Nullspace dimension of ``D -> JD - (JD)^T`` on 2n x 2n matrices."""
    n = _check_n(n)
    m = 2 * n
    J = standard_J(n)
    cols = []
    for k in range(m * m):
        e = np.zeros(m * m)
        e[k] = 1.0
        jd = J @ e.reshape(m, m)
        cols.append((jd - jd.T).ravel())
    s = np.linalg.svd(np.array(cols).T, compute_uv=False)
    return int(m * m - np.sum(s > tol))
