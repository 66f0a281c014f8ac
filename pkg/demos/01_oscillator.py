"""Harmonic oscillators as a Lax equation on Heisenberg orbits.

Run with ``python demos/01_oscillator.py``.
"""
# %%
import math

import numpy as np

from heislax import (
    OrbitPoint,
    ad_invariance_defect,
    bracket,
    flow_exact,
    integrate,
    isospectral_drift,
    jacobi_defect,
    lax_matrices,
    oscillator,
)
from heislax.dynamics import INTERLEAVED

# %% [markdown]
# The oscillator algebra for n = 2 has basis (X0, X1, X2, Y1, Y2, X3).
# X0 is central, [Xi, Yi] = X0 and X3 rotates each (Xi, Yi) plane.

# %%
g = oscillator(2)
e = g.alg.basis
print("labels:", g.alg.labels)
print("[X1, Y1] =", bracket(g.alg, e(1), e(3)))
print("[X3, X1] =", bracket(g.alg, e(5), e(1)))
print("jacobi defect:", jacobi_defect(g.alg))
print("ad-invariance defect:", ad_invariance_defect(g.alg, g.metric))
print("metric eigenvalues:", np.linalg.eigvalsh(g.metric.gram))

# %% [markdown]
# Points of an orbit carry coordinates (x, y) and a fixed label x_{n+1}.
# Along the flow each mode rotates with angular speed x_{n+1}.

# %%
X0 = OrbitPoint([1.0, 0.5, 0.0, -0.3], 1.0)
for t in (0.0, math.pi / 2, math.pi, 2 * math.pi):
    print(f"t = {t:5.3f}  x_v = {np.round(flow_exact(g, X0, t).xv, 12)}")

# %%
traj = integrate(g, X0, T=20.0, dt=1e-3, method="rk4", record_every=100)
exact = integrate(g, X0, T=20.0, dt=1e-3, method="exact", record_every=100)
print("rk4 vs exact, sup error:", np.max(np.abs(traj.xv - exact.xv)))
print("max |x_v| along the orbit:", np.max(np.linalg.norm(exact.xv, axis=1)))
print("isospectral drift (rk4):", isospectral_drift(traj, g))

# %% [markdown]
# The Lax pair in the interleaved layout (X1, Y1, X2, Y2, ., .).

# %%
pair = lax_matrices(g, X0, INTERLEAVED)
np.set_printoptions(precision=3, suppress=True)
print("L =\n", pair.L)
print("M =\n", pair.M)
