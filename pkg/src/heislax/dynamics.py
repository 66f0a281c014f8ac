"""Lax dynamics on the orbits: exact Adjoint flow, RK4, Lax matrices, diagnostics."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DivergenceError, InvalidArgument
from .extension import MetricLieAlgebra
from .lie_core import QuadraticFunction, adjoint_exp, gradient
from .orbits import OrbitPoint, embed, metric_quadratic

INTERNAL = "internal"
INTERLEAVED = "paper-interleaved"  # tag name fixed by the public interface


@dataclass(frozen=True)
class Trajectory:
    """Samples of an orbit curve; rows of ``xv`` are the v-coordinates."""

    times: np.ndarray
    xv: np.ndarray
    xnp1: np.ndarray
    method: str

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[OrbitPoint]:
        return [OrbitPoint(x, c) for x, c in zip(self.xv, self.xnp1)]

    def embedded(self, g: MetricLieAlgebra) -> np.ndarray:
        out = np.zeros((len(self), g.dim))
        out[:, g.v] = self.xv
        out[:, g.i_top] = self.xnp1
        return out


@dataclass(frozen=True)
class LaxPair:
    L: np.ndarray
    M: np.ndarray
    basis_order: str = INTERNAL


def lax_rhs(g: MetricLieAlgebra, X: OrbitPoint) -> OrbitPoint:
    """[grad f_+(X), X] = x_{n+1} S x_v, with zero x_{n+1} component."""
    if X.n != g.n:
        raise InvalidArgument("orbit point and algebra disagree on n")
    return OrbitPoint(X.xnp1 * (g.S @ X.xv), 0.0)


def _propagators(g: MetricLieAlgebra, xnp1: float, times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    return scipy.linalg.expm(times[:, None, None] * (xnp1 * g.S))


def flow_exact(g: MetricLieAlgebra, X0: OrbitPoint, t: float) -> OrbitPoint:
    """Ad(exp(t x_{n+1} X_{n+1})) X0, i.e. x_v(t) = exp(t x_{n+1} S) x_v."""
    if X0.n != g.n:
        raise InvalidArgument("orbit point and algebra disagree on n")
    E = scipy.linalg.expm(t * X0.xnp1 * g.S)
    return OrbitPoint(E @ X0.xv, X0.xnp1)


def _rk4(g: MetricLieAlgebra, X0: OrbitPoint, h: float, steps: int, every: int):
    B = X0.xnp1 * g.S
    x = X0.xv.copy()
    out = [x.copy()]
    for k in range(1, steps + 1):
        # overflow is reported below as a DivergenceError
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = B @ x
            k2 = B @ (x + 0.5 * h * k1)
            k3 = B @ (x + 0.5 * h * k2)
            k4 = B @ (x + h * k3)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(f"non-finite state after {k} steps (t = {k * h:g})")
        if k % every == 0 or k == steps:
            out.append(x.copy())
    return np.array(out)


def integrate(
    g: MetricLieAlgebra,
    X0: OrbitPoint,
    T: float,
    dt: float,
    method: str = "rk4",
    record_every: int = 1,
) -> Trajectory:
    """Sample the orbit curve through X0 on a uniform grid over [0, T].

    ``method`` is "rk4" (classical fixed-step Runge-Kutta on :func:`lax_rhs`)
    or "exact" (matrix exponential at each sample time). The step is
    ``T / ceil(T / dt)`` so the grid ends exactly at T.
    """
    if X0.n != g.n:
        raise InvalidArgument("orbit point and algebra disagree on n")
    if not dt > 0 or not math.isfinite(dt):
        raise InvalidArgument("dt must be positive")
    if not T >= 0 or not math.isfinite(T):
        raise InvalidArgument("T must be non-negative")
    if method not in ("rk4", "exact"):
        raise InvalidArgument(f"unknown method {method!r}")
    if record_every < 1:
        raise InvalidArgument("record_every must be >= 1")
    if T == 0:
        return Trajectory(np.zeros(1), X0.xv[None, :].copy(), np.full(1, X0.xnp1), method)

    steps = max(1, math.ceil(T / dt - 1e-9))
    h = T / steps
    idx = [k for k in range(steps + 1) if k % record_every == 0 or k == steps]
    times = np.array(idx, dtype=float) * h
    times[-1] = T
    if method == "rk4":
        xv = _rk4(g, X0, h, steps, record_every)
    else:
        xv = np.einsum("kij,j->ki", _propagators(g, X0.xnp1, times), X0.xv)
        if not np.all(np.isfinite(xv)):
            raise DivergenceError("exact flow overflowed")
    return Trajectory(times, xv, np.full(len(times), X0.xnp1), method)


def _interleave(n: int) -> np.ndarray:
    perm = np.empty(2 * n, dtype=int)
    perm[0::2] = np.arange(n)
    perm[1::2] = np.arange(n, 2 * n)
    return perm


def _ad_batch(g: MetricLieAlgebra, xs: np.ndarray) -> np.ndarray:
    return np.einsum("ki,ijl->klj", xs, g.alg.structure)


def _interleaved_L(g: MetricLieAlgebra, xv: np.ndarray, xnp1: np.ndarray) -> np.ndarray:
    # rows/cols: v interleaved (X1, Y1, ..., Xn, Yn), then two extra slots
    n = g.n
    perm = _interleave(n)
    J = np.block([[np.zeros((n, n)), -np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    K = len(xnp1)
    L = np.zeros((K, 2 * n + 2, 2 * n + 2))
    L[:, : 2 * n, : 2 * n] = xnp1[:, None, None] * g.S[np.ix_(perm, perm)]
    L[:, : 2 * n, -1] = xv[:, perm]
    L[:, 2 * n, : 2 * n] = 0.5 * (xv @ J.T)[:, perm]
    return L


def lax_matrices(g: MetricLieAlgebra, X: OrbitPoint, basis_order: str = INTERNAL) -> LaxPair:
    """Lax pair (L, M) with L' = [M, L] along the flow.

    "internal": L = ad(X), M = ad(x_{n+1} X_{n+1}) in the basis
    (X0, X.., Y.., X_{n+1}).

    "paper-interleaved": a (2n+2)-square realization in the order
    (X1, Y1, ..., Xn, Yn, ., .), not the adjoint matrix. Its last column is
    (x1, y1, ..., xn, yn, 0, 0) and its second-to-last row is
    (-y1/2, x1/2, ..., -yn/2, xn/2, 0, 0); M is the same S-block as above.
    """
    if X.n != g.n:
        raise InvalidArgument("orbit point and algebra disagree on n")
    top = np.zeros(g.dim)
    top[g.i_top] = X.xnp1
    if basis_order == INTERNAL:
        L = _ad_batch(g, embed(g, X)[None, :])[0]
        M = _ad_batch(g, top[None, :])[0]
    elif basis_order == INTERLEAVED:
        L = _interleaved_L(g, X.xv[None, :], np.array([X.xnp1]))[0]
        M = np.zeros_like(L)
        perm = _interleave(g.n)
        M[: 2 * g.n, : 2 * g.n] = X.xnp1 * g.S[np.ix_(perm, perm)]
    else:
        raise InvalidArgument(f"unknown basis order {basis_order!r}")
    return LaxPair(L, M, basis_order)


def isospectral_drift(traj: Trajectory, g: MetricLieAlgebra, basis_order: str = INTERNAL) -> float:
    """max over samples and k = 1..2n+2 of |tr L(t)^k - tr L(0)^k|."""
    if len(traj) == 0:
        raise InvalidArgument("empty trajectory")
    if basis_order == INTERNAL:
        Ls = _ad_batch(g, traj.embedded(g))
    elif basis_order == INTERLEAVED:
        Ls = _interleaved_L(g, traj.xv, traj.xnp1)
    else:
        raise InvalidArgument(f"unknown basis order {basis_order!r}")
    P = Ls.copy()
    worst = 0.0
    for _ in range(g.dim):
        tr = np.trace(P, axis1=1, axis2=2)
        worst = max(worst, float(np.max(np.abs(tr - tr[0]))))
        P = P @ Ls
    return worst


def solve_by_factorization(g: MetricLieAlgebra, X0: OrbitPoint, t: float):
    """Solve the Lax equation by splitting exp(t grad f(X0)) = g_+(t) g_-(t).

    Works in the adjoint representation: E = exp(t ad grad f(X0)) is
    computed on all of g, and Ad(g_+(t)) is read off as the part of E acting
    on v modulo X0 (Ad(g_-) acts trivially there). Returns
    ``(Ad(g_+(t)), Ad(g_+(t)) X0)``.
    """
    x0 = embed(g, X0)
    grad = gradient(g.metric, metric_quadratic(g), x0)
    E = adjoint_exp(g.alg, grad, t)
    factor = np.eye(g.dim)
    factor[g.v, g.v] = E[g.v, g.v]
    z = factor @ x0
    return factor, OrbitPoint(z[g.v], z[g.i_top])


def factorization_residual(g: MetricLieAlgebra, X0: OrbitPoint, t: float) -> float:
    """How far Ad(g_+)^-1 exp(t ad grad f(X0)) is from Ad of an element of G_-."""
    x0 = embed(g, X0)
    E = adjoint_exp(g.alg, gradient(g.metric, metric_quadratic(g), x0), t)
    factor, _ = solve_by_factorization(g, X0, t)
    minus = np.linalg.solve(factor, E)
    # Ad(exp Y) X_{n+1} has v-part [Y, X_{n+1}] = -S y_v for Y in g_-
    yv = -np.linalg.solve(g.S, minus[g.v, g.i_top])
    Y = g.embed(yv)
    return float(np.max(np.abs(minus - adjoint_exp(g.alg, Y, 1.0))))


def energy_series(traj: Trajectory, f: QuadraticFunction) -> np.ndarray:
    """f evaluated at each sample (embedded with x0 = 0)."""
    d = f.dim
    n = traj.xv.shape[1] // 2
    if d != 2 * n + 2:
        raise InvalidArgument("function dimension does not match the trajectory")
    xs = np.zeros((len(traj), d))
    xs[:, 1 : 2 * n + 1] = traj.xv
    xs[:, -1] = traj.xnp1
    return 0.5 * np.einsum("ki,ij,kj->k", xs, f.quad, xs)


def trajectory_csv(traj: Trajectory, g: MetricLieAlgebra) -> str:
    """CSV with header t,x_1..x_n,y_1..y_n,x_np1,H,drift (17 significant digits)."""
    n = g.n
    H = energy_series(traj, metric_quadratic(g))
    header = ["t"] + [f"x_{i}" for i in range(1, n + 1)] + [f"y_{i}" for i in range(1, n + 1)]
    header += ["x_np1", "H", "drift"]
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    rows = np.column_stack([traj.times, traj.xv, traj.xnp1, H, H - H[0]])
    for row in rows:
        buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return buf.getvalue()
