"""Integrability certificates from commuting derivations.

Run with ``python demos/03_integrability.py``.
"""
# %%
import numpy as np

from heislax import (
    abelian_family,
    centralizer,
    certificate,
    complex_symmetric_test,
    first_integrals,
    from_symmetric,
    involution_test,
    level_set_classify,
    oscillator,
    pendula,
)

np.set_printoptions(precision=3, suppress=True)

# %% [markdown]
# Two quadratics 1/2 (Ai x, x) and 1/2 (Aj x, x) Poisson commute on every
# orbit exactly when J Ai and J Aj commute.

# %%
P1, P2 = np.diag([1.0, 0, 1, 0]), np.diag([0, 1.0, 0, 1])
print("mode projectors in involution:", involution_test(P1, P2))
print("Id and [[0,1],[1,0]] in involution:", involution_test(np.eye(2), np.array([[0.0, 1], [1, 0]])))
print("dimension of the centralizer of J in sp(2):", len(centralizer(np.eye(4))))

# %% [markdown]
# Certificates for the oscillators and the pendula.

# %%
for name, g, ext in (("oscillator(3)", oscillator(3), "cross-term"), ("pendula(2)", pendula(2), "trivial")):
    cert = certificate(g, extension=ext)
    print(name, cert.verdict, "rank", cert.rank, "defect", cert.commutation_defect)
    for f in cert.integrals:
        print(f.quad)

# %% [markdown]
# A random Hamiltonian: the search splits J A into invariant blocks.

# %%
rng = np.random.default_rng(0)
M = rng.standard_normal((6, 6))
cert = certificate(from_symmetric(M + M.T), seed=0)
print("random A:", cert.verdict, "rank", cert.rank, "commutation defect %.1e" % cert.commutation_defect)

# %% [markdown]
# Level sets of the per-mode integrals.

# %%
osc = first_integrals(abelian_family(np.eye(6)), "trivial")
pend = first_integrals(abelian_family(np.diag([1.0, 1, -1, -1])), "trivial")
print("oscillator, c = 1:", level_set_classify(osc, [1, 1, 1]))
print("oscillator, c1 = -1:", level_set_classify(osc, [-1, 1, 1]))
print("pendula, c = 1:", level_set_classify(pend, [1, 1]))

# %% [markdown]
# Quadratics commuting with the oscillator energy are the complex-symmetric ones.

# %%
print(complex_symmetric_test(np.eye(2)), complex_symmetric_test(np.diag([1.0, -1.0])))
