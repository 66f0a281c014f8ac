"""Coadjoint orbits of the Heisenberg group inside g_+⊥ and their Poisson geometry.

A point of g_+⊥ is ``X = sum(x_i X_i + y_i Y_i) + x_{n+1} X_{n+1}`` with
``x0 = 0``. Nonzero ``x_{n+1}`` labels a 2n-dimensional orbit; points with
``x_{n+1} = 0`` are fixed by the action and treated as singleton orbits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .extension import MetricLieAlgebra
from .lie_core import QuadraticFunction, bracket, gradient


@dataclass(frozen=True)
class OrbitPoint:
    xv: np.ndarray
    xnp1: float

    def __post_init__(self):
        xv = np.array(self.xv, dtype=float)
        if xv.ndim != 1 or xv.size % 2 or xv.size == 0:
            raise InvalidArgument("xv must be a vector of even length 2n")
        xv.setflags(write=False)
        object.__setattr__(self, "xv", xv)
        object.__setattr__(self, "xnp1", float(self.xnp1))

    @property
    def n(self) -> int:
        return self.xv.size // 2

    def to_dict(self) -> dict:
        return {"xv": self.xv.tolist(), "xnp1": self.xnp1}

    @classmethod
    def from_dict(cls, doc: dict) -> "OrbitPoint":
        try:
            return cls(doc["xv"], doc["xnp1"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed orbit point document: {exc}") from exc


@dataclass(frozen=True)
class GMinusElement:
    """Element x0 X0 + U_v of the Heisenberg ideal g_-."""

    x0: float
    uv: np.ndarray

    def __post_init__(self):
        uv = np.array(self.uv, dtype=float)
        uv.setflags(write=False)
        object.__setattr__(self, "uv", uv)
        object.__setattr__(self, "x0", float(self.x0))


def _check(g: MetricLieAlgebra, X: OrbitPoint):
    if X.n != g.n:
        raise InvalidArgument(f"orbit point has n={X.n}, algebra has n={g.n}")


def embed(g: MetricLieAlgebra, X: OrbitPoint) -> np.ndarray:
    _check(g, X)
    return g.embed(X.xv, X.xnp1)


def embed_minus(g: MetricLieAlgebra, U: GMinusElement) -> np.ndarray:
    if U.uv.shape != (2 * g.n,):
        raise InvalidArgument("g_- element has the wrong size")
    return g.embed(U.uv, 0.0, U.x0)


def project_minus(g: MetricLieAlgebra, z) -> np.ndarray:
    """Component in g_- along the splitting g = g_+ + g_- (drops X_{n+1})."""
    z = np.array(z, dtype=float)
    z[g.i_top] = 0.0
    return z


def project_plus_perp(g: MetricLieAlgebra, z) -> np.ndarray:
    """Component in g_+⊥ along g = g_+⊥ + g_-⊥ (drops X0)."""
    z = np.array(z, dtype=float)
    z[g.i_x0] = 0.0
    return z


def to_point(g: MetricLieAlgebra, z) -> OrbitPoint:
    z = np.asarray(z, dtype=float)
    return OrbitPoint(z[g.v], z[g.i_top])


def coadjoint_inf(g: MetricLieAlgebra, U: GMinusElement, V: OrbitPoint) -> np.ndarray:
    """v-part of the infinitesimal action U·V = x_{n+1}(V) S U_v."""
    _check(g, V)
    return V.xnp1 * (g.S @ U.uv)


def generator(g: MetricLieAlgebra, U: GMinusElement, X: OrbitPoint) -> np.ndarray:
    """Tangent vector pi_{g_+⊥}([U, X]) as a full coordinate vector."""
    return project_plus_perp(g, bracket(g.alg, embed_minus(g, U), embed(g, X)))


def orbit_dim(g: MetricLieAlgebra, V: OrbitPoint, tol: float = 0.0) -> int:
    _check(g, V)
    return 2 * g.n if abs(V.xnp1) > tol else 0


def same_orbit(V: OrbitPoint, W: OrbitPoint) -> bool:
    if V.xnp1 == 0.0 or W.xnp1 == 0.0:
        return V.xnp1 == W.xnp1 and np.array_equal(V.xv, W.xv)
    return V.xnp1 == W.xnp1


def kks(g: MetricLieAlgebra, X: OrbitPoint, U: GMinusElement, V: GMinusElement) -> float:
    """omega_X(U~, V~) = <X, [U, V]> = x_{n+1}(X) b(JA U_v, V_v)."""
    _check(g, X)
    return X.xnp1 * float((g.S @ U.uv) @ g.A.A @ V.uv)


def kks_matrix(g: MetricLieAlgebra, X: OrbitPoint) -> np.ndarray:
    """Matrix with entries kks(X, e_a, e_b) over the v-basis of g_-."""
    return X.xnp1 * (g.S.T @ g.A.A)


@dataclass(frozen=True)
class LinearFunction:
    """l(X) = c . X for a fixed covector c."""

    c: np.ndarray

    def __call__(self, x) -> float:
        return float(np.asarray(self.c) @ np.asarray(x))

    def differential(self, x) -> np.ndarray:
        return np.asarray(self.c, dtype=float)


def _grad(g: MetricLieAlgebra, f, x) -> np.ndarray:
    if isinstance(f, QuadraticFunction):
        return gradient(g.metric, f, x)
    return np.linalg.solve(g.metric.gram, f.differential(x))


def poisson_orbit(g: MetricLieAlgebra, f, h, X: OrbitPoint) -> float:
    """{F, H}(X) = <X, [grad f_-(X), grad h_-(X)]> for the restrictions to the orbit.

    ``f`` and ``h`` are :class:`QuadraticFunction` or :class:`LinearFunction`.
    """
    x = embed(g, X)
    gf = project_minus(g, _grad(g, f, x))
    gh = project_minus(g, _grad(g, h, x))
    return g.metric(x, bracket(g.alg, gf, gh))


def ham_vf(g: MetricLieAlgebra, f, X: OrbitPoint) -> OrbitPoint:
    """Hamiltonian vector field of f restricted to the orbit: -pi_{g_+⊥}[grad f_-(X), X]."""
    x = embed(g, X)
    gf = project_minus(g, _grad(g, f, x))
    return to_point(g, -project_plus_perp(g, bracket(g.alg, gf, x)))


def metric_quadratic(g: MetricLieAlgebra) -> QuadraticFunction:
    """f(X) = 1/2 <X, X>."""
    return QuadraticFunction(g.metric.gram, name="metric")


def center_pairing(g: MetricLieAlgebra) -> LinearFunction:
    """l(X) = <X, X0>, which equals x_{n+1}."""
    return LinearFunction(g.metric.gram[:, 0].copy())


def extend_quadratic(g: MetricLieAlgebra, Ai, cross_term: bool = False) -> QuadraticFunction:
    """Extend 1/2 (Ai x_v, x_v) to g, optionally adding x0 x_{n+1}."""
    Ai = np.asarray(getattr(Ai, "A", Ai), dtype=float)
    if Ai.shape != (2 * g.n, 2 * g.n):
        raise InvalidArgument("quadratic has the wrong size for this algebra")
    Q = np.zeros((g.dim, g.dim))
    Q[g.v, g.v] = Ai
    if cross_term:
        Q[0, g.i_top] = Q[g.i_top, 0] = 1.0
    return QuadraticFunction(Q)
