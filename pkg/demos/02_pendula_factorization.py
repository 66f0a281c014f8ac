"""Inverted pendula and the factorization solution of the Lax equation.

Run with ``python demos/02_pendula_factorization.py``.
"""
# %%
import math

import numpy as np

from heislax import OrbitPoint, flow_exact, integrate, pendula, solve_by_factorization, trajectory_csv

# %% [markdown]
# With A = diag(I, -I) the equations of motion are q' = p, p' = q, so
# trajectories grow like cosh and sinh.

# %%
g = pendula(1)
X0 = OrbitPoint([1.0, 0.0], 1.0)
for t in (0.0, 0.5, 1.0, 2.0):
    X = flow_exact(g, X0, t)
    print(f"t = {t:3.1f}  x = {X.xv[0]:.12f}  cosh = {math.cosh(t):.12f}  y = {X.xv[1]:.12f}  sinh = {math.sinh(t):.12f}")

# %% [markdown]
# The same state comes out of splitting exp(t grad f(X0)) into a factor in
# the one-dimensional group generated by X_{n+1} times a Heisenberg factor.

# %%
for t in (-3.0, 0.7, 4.0):
    factor, Z = solve_by_factorization(g, X0, t)
    print(f"t = {t:4.1f}  factorization - exact = {np.max(np.abs(Z.xv - flow_exact(g, X0, t).xv)):.2e}")
print("v-block of Ad(g_+(1)):\n", solve_by_factorization(g, X0, 1.0)[0][1:3, 1:3])

# %% [markdown]
# Trajectories are exported as CSV for external plotting.

# %%
print(trajectory_csv(integrate(g, X0, T=1.0, dt=0.25, method="exact"), g))
