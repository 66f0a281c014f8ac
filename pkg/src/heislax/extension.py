"""Double extensions and the metric algebras g = RX0 + R^2n + RX_{n+1}.

Basis order of every algebra built here is ``(X0, X1..Xn, Y1..Yn, X_{n+1})``.
The splitting used throughout is

    g_-  = RX0 + v        (the Heisenberg ideal)
    g_+  = RX_{n+1}
    g_+⊥ = v + RX_{n+1}   (where the orbits live)
    g_-⊥ = RX0
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .heisenberg import SymmetricMap, as_symmetric, standard_J
from .lie_core import (
    LieAlgebra,
    MetricForm,
    ad_invariance_defect,
    algebra_from_dict,
    algebra_to_dict,
)

_PRE_TOL = 1e-12


@dataclass(frozen=True)
class MetricAlgebra:
    alg: LieAlgebra
    metric: MetricForm


@dataclass(frozen=True)
class Splitting:
    g_minus: tuple[int, ...]
    g_plus: tuple[int, ...]
    g_plus_perp: tuple[int, ...]
    g_minus_perp: tuple[int, ...]
    residual: float


@dataclass(frozen=True)
class MetricLieAlgebra:
    """Solvable algebra with ad-invariant metric built from a symmetric map A.

    ``S`` is ad(X_{n+1}) restricted to v and always equals ``J A``.
    ``convention`` records which constructor produced it ("lb" for
    :func:`from_symmetric`, "oscillator" for :func:`oscillator`).
    """

    alg: LieAlgebra
    metric: MetricForm
    A: SymmetricMap
    convention: str = "lb"

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def S(self) -> np.ndarray:
        return standard_J(self.n) @ self.A.A

    @property
    def i_x0(self) -> int:
        return 0

    @property
    def i_top(self) -> int:
        return 2 * self.n + 1

    @property
    def v(self) -> slice:
        return slice(1, 2 * self.n + 1)

    def embed(self, xv, xnp1: float = 0.0, x0: float = 0.0) -> np.ndarray:
        x = np.zeros(self.dim)
        x[0] = x0
        x[self.v] = xv
        x[-1] = xnp1
        return x

    def to_dict(self) -> dict:
        doc = algebra_to_dict(self.alg, self.metric)
        doc.update({"n": self.n, "A": self.A.A.tolist(), "convention": self.convention})
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricLieAlgebra":
        alg, metric = algebra_from_dict(doc)
        if metric is None:
            raise InvalidArgument("metric algebra document has no gram matrix")
        try:
            A = SymmetricMap(doc["A"])
        except KeyError as exc:
            raise InvalidArgument("metric algebra document has no A") from exc
        if alg.dim != 2 * A.n + 2:
            raise InvalidArgument("dimension does not match A")
        return cls(alg, metric, A, doc.get("convention", "lb"))


def _labels(n: int) -> tuple[str, ...]:
    return (
        ("X0",)
        + tuple(f"X{i}" for i in range(1, n + 1))
        + tuple(f"Y{i}" for i in range(1, n + 1))
        + (f"X{n + 1}",)
    )


def double_extend(base_dim: int, phi, base_structure, S) -> MetricAlgebra:
    """Double extension of a metric algebra (b, phi) by a skew derivation S.

    Returns the algebra RZ + b + RT (basis order Z, b..., T) with

        [z1 Z + B1 + t1 T, z2 Z + B2 + t2 T]
            = phi(S B1, B2) Z + [B1, B2]_b + t1 S B2 - t2 S B1

    and the metric extending phi by <Z, T> = 1, <Z, Z> = <T, T> = 0.
    """
    m = int(base_dim)
    phi = phi if isinstance(phi, MetricForm) else MetricForm(phi)
    S = np.array(S, dtype=float)
    cb = np.zeros((m, m, m)) if base_structure is None else np.array(base_structure, dtype=float)
    if phi.dim != m or S.shape != (m, m) or cb.shape != (m, m, m):
        raise InvalidArgument("base_dim, phi, base_structure and S disagree in size")
    G = phi.gram
    scale = max(1.0, float(np.max(np.abs(S))) * float(np.max(np.abs(G))))
    skew = G @ S
    if np.max(np.abs(skew + skew.T)) > _PRE_TOL * scale:
        raise InvalidArgument("S is not skew-symmetric with respect to phi")
    # S[e_i, e_j] = [S e_i, e_j] + [e_i, S e_j]
    lhs = np.einsum("ijk,lk->ijl", cb, S)
    rhs = np.einsum("ai,ajl->ijl", S, cb) + np.einsum("bj,ibl->ijl", S, cb)
    if np.max(np.abs(lhs - rhs), initial=0.0) > _PRE_TOL * max(1.0, float(np.max(np.abs(S)))):
        raise InvalidArgument("S is not a derivation of the base algebra")
    if m and ad_invariance_defect(LieAlgebra(cb), phi) > _PRE_TOL:
        raise InvalidArgument("phi is not ad-invariant on the base algebra")

    d = m + 2
    c = np.zeros((d, d, d))
    b = slice(1, m + 1)
    c[b, b, b] = cb
    # phi(S e_i, e_j) = (G S)[j, i]
    c[b, b, 0] = skew.T
    c[d - 1, b, b] = S.T
    c[b, d - 1, b] = -S.T
    gram = np.zeros((d, d))
    gram[b, b] = G
    gram[0, d - 1] = gram[d - 1, 0] = 1.0
    return MetricAlgebra(LieAlgebra(c), MetricForm(gram))


def from_symmetric(A, convention: str = "lb") -> MetricLieAlgebra:
    """Double extension of (R^2n, b), b(x, y) = (Ax, y), by S = J A.

    Nontrivial brackets: [U, V] = b(JAU, V) X0 and [X_{n+1}, U] = JAU.
    """
    a = as_symmetric(A)
    if a.is_singular():
        raise InvalidArgument("A is singular, so b is degenerate")
    S = standard_J(a.n) @ a.A
    ext = double_extend(2 * a.n, MetricForm(a.A), None, S)
    alg = LieAlgebra(ext.alg.structure, _labels(a.n))
    return MetricLieAlgebra(alg, ext.metric, a, convention)


def oscillator(n: int) -> MetricLieAlgebra:
    """Oscillator algebra: [Xi, Yi] = X0, [X_{n+1}, Xi] = -Yi, [X_{n+1}, Yi] = Xi.

    These relations are those of from_symmetric(-Id). The ad-invariant metric
    with <X0, X_{n+1}> = 1 is then forced to be -Id on v; its signature has a
    single positive direction.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    return from_symmetric(-np.eye(2 * int(n)), convention="oscillator")


def pendula(n: int) -> MetricLieAlgebra:
    """n uncoupled inverted pendula, A = diag(I, -I): q' = p, p' = q."""
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    n = int(n)
    return from_symmetric(np.diag(np.r_[np.ones(n), -np.ones(n)]))


def splitting(g: MetricLieAlgebra) -> Splitting:
    n = g.n
    top = 2 * n + 1
    v = tuple(range(1, top))
    minus = (0,) + v
    plus = (top,)
    plus_perp = v + (top,)
    minus_perp = (0,)
    G = g.metric.gram
    res = max(
        float(np.max(np.abs(G[np.ix_(plus, plus_perp)]))),
        float(np.max(np.abs(G[np.ix_(minus, minus_perp)]))),
    )
    return Splitting(minus, plus, plus_perp, minus_perp, res)
