"""Finite-dimensional Lie algebras given by structure constants.

An algebra of dimension ``d`` is stored as a dense array ``c`` of shape
``(d, d, d)`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``. Vectors are plain
1-d numpy arrays of coordinates in the ordered basis.

Defect functions return scalars; callers decide what is small enough.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DegenerateMetricError, InvalidArgument

_RANK_TOL = 1e-10


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants over an ordered, labelled basis.

    The constructor only checks shapes. Antisymmetry and the Jacobi identity
    are measured by :func:`antisymmetry_defect` and :func:`jacobi_defect`, so
    that deliberately broken tables can still be represented and diagnosed.
    """

    structure: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        c = _frozen(self.structure)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise InvalidArgument(f"structure must have shape (d, d, d), got {c.shape}")
        labels = tuple(self.labels) or tuple(f"e{i}" for i in range(c.shape[0]))
        if len(labels) != c.shape[0]:
            raise InvalidArgument("one label per basis element is required")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e


@dataclass(frozen=True)
class MetricForm:
    """Nondegenerate symmetric bilinear form given by its Gram matrix."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.array(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise InvalidArgument(f"gram must be square, got shape {g.shape}")
        if not np.array_equal(g, g.T):
            raise InvalidArgument("gram matrix is not symmetric")
        if abs(np.linalg.det(g)) <= 1e-12:
            raise DegenerateMetricError("gram matrix is singular")
        object.__setattr__(self, "gram", _frozen(g))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))


@dataclass(frozen=True)
class QuadraticFunction:
    """The function ``f(X) = 1/2 X^T Q X`` in basis coordinates."""

    quad: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        q = np.array(self.quad, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise InvalidArgument(f"quad must be square, got shape {q.shape}")
        scale = max(1.0, float(np.max(np.abs(q), initial=0.0)))
        if np.max(np.abs(q - q.T), initial=0.0) > 1e-12 * scale:
            raise InvalidArgument("quad matrix is not symmetric")
        object.__setattr__(self, "quad", _frozen(0.5 * (q + q.T)))

    @property
    def dim(self) -> int:
        return self.quad.shape[0]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return 0.5 * float(x @ self.quad @ x)

    def differential(self, x) -> np.ndarray:
        """Coordinates of df_x as a covector."""
        return self.quad @ np.asarray(x, dtype=float)


def _check_vec(alg: LieAlgebra, x, name="x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (alg.dim,):
        raise InvalidArgument(f"{name} must have length {alg.dim}, got shape {x.shape}")
    return x


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    x = _check_vec(alg, x, "x")
    y = _check_vec(alg, y, "y")
    return np.einsum("i,j,ijk->k", x, y, alg.structure)


def ad_matrix(alg: LieAlgebra, x) -> np.ndarray:
    """Matrix of ``y -> [x, y]`` (columns are images of basis vectors)."""
    x = _check_vec(alg, x)
    return np.einsum("i,ijk->kj", x, alg.structure)


def antisymmetry_defect(alg: LieAlgebra) -> float:
    c = alg.structure
    return float(np.max(np.abs(c + c.transpose(1, 0, 2))))


def jacobi_defect(alg: LieAlgebra) -> float:
    """Max-norm of the Jacobi sum over all basis triples."""
    c = alg.structure
    # [e_i, [e_j, e_k]] = sum_l c[j,k,l] c[i,l,m]
    nested = np.einsum("jkl,ilm->ijkm", c, c)
    total = nested + nested.transpose(1, 2, 0, 3) + nested.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(total), initial=0.0))


def ad_invariance_defect(alg: LieAlgebra, m: MetricForm) -> float:
    """max |<[x,y],z> + <y,[x,z]>| over basis triples."""
    if m.dim != alg.dim:
        raise InvalidArgument("metric and algebra dimensions differ")
    # <[e_x, e_y], e_z> = sum_k c[x,y,k] G[k,z]
    pair = np.einsum("xyk,kz->xyz", alg.structure, m.gram)
    total = pair + pair.transpose(0, 2, 1)
    return float(np.max(np.abs(total), initial=0.0))


def gradient(m: MetricForm, f: QuadraticFunction, x) -> np.ndarray:
    """Metric gradient: the vector ``g`` with ``<g, y> = df_x(y)`` for all y."""
    if not isinstance(m, MetricForm):
        m = MetricForm(m)
    if f.dim != m.dim:
        raise InvalidArgument("function and metric dimensions differ")
    return np.linalg.solve(m.gram, f.differential(x))


def _span_basis(vectors: np.ndarray, tol: float = _RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as rows) of the span of the given row vectors."""
    if vectors.size == 0:
        return np.zeros((0, vectors.shape[-1]))
    u, s, vt = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vt[:rank]


def derived_series(alg: LieAlgebra, max_steps: int = 64) -> list[int]:
    """Dimensions of D^0 ⊇ D^1 ⊇ ... until the chain is zero or stabilises.

    The algebra is solvable exactly when the last entry is 0.
    """
    current = np.eye(alg.dim)
    dims = [alg.dim]
    for _ in range(max_steps):
        prods = np.einsum("ai,bj,ijk->abk", current, current, alg.structure)
        nxt = _span_basis(prods.reshape(-1, alg.dim))
        dims.append(nxt.shape[0])
        if nxt.shape[0] == 0 or nxt.shape[0] == current.shape[0]:
            break
        current = nxt
    return dims


def adjoint_exp(alg: LieAlgebra, x, t: float = 1.0) -> np.ndarray:
    """``exp(t ad_x)``, the adjoint action of ``exp(t x)``.

    Uses scipy's scaling-and-squaring Padé exponential.
    """
    return scipy.linalg.expm(t * ad_matrix(alg, x))


def algebra_to_dict(alg: LieAlgebra, metric: MetricForm | None = None) -> dict:
    idx = np.argwhere(alg.structure != 0.0)
    doc = {
        "dim": alg.dim,
        "labels": list(alg.labels),
        "structure": [[int(i), int(j), int(k), float(alg.structure[i, j, k])] for i, j, k in idx],
    }
    if metric is not None:
        doc["gram"] = metric.gram.tolist()
    return doc


def algebra_from_dict(doc: dict) -> tuple[LieAlgebra, MetricForm | None]:
    try:
        dim = int(doc["dim"])
        c = np.zeros((dim, dim, dim))
        for i, j, k, value in doc.get("structure", []):
            c[int(i), int(j), int(k)] = float(value)
        labels: Sequence[str] = doc.get("labels") or ()
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidArgument(f"malformed algebra document: {exc}") from exc
    alg = LieAlgebra(c, tuple(labels))
    metric = MetricForm(doc["gram"]) if doc.get("gram") is not None else None
    return alg, metric
