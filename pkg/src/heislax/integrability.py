"""Involution tests, centralizers in the derivation algebra, and integrability certificates.

For symmetric maps Ai, Aj the restricted quadratics Poisson commute on every
orbit exactly when the derivations J Ai and J Aj commute. An n-dimensional
abelian family inside the centralizer of J A, with independent induced
quadratics, certifies complete integrability of H(x) = 1/2 (Ax, x). The
criterion is one-sided: a failed search yields "undetermined", never
"non-integrable".
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InvalidArgument
from .extension import MetricLieAlgebra
from .heisenberg import Derivation, SymmetricMap, as_symmetric, standard_J, sym_of_deriv
from .lie_core import QuadraticFunction
from .orbits import OrbitPoint

INTEGRABLE = "integrable"
UNDETERMINED = "undetermined"

_CLUSTER_TOL = 1e-6
_NULL_TOL = 1e-10


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _maxabs(m) -> float:
    return float(np.max(np.abs(m), initial=0.0))


def _same_n(*maps: SymmetricMap) -> int:
    ns = {m.n for m in maps}
    if len(ns) != 1:
        raise InvalidArgument("symmetric maps have different sizes")
    return ns.pop()


def involution_test(Ai, Aj, tol: float = 1e-10) -> bool:
    """True iff ||[J Ai, J Aj]|| <= tol."""
    return commutation_defect(Ai, Aj) <= tol


def commutation_defect(Ai, Aj) -> float:
    ai, aj = as_symmetric(Ai), as_symmetric(Aj)
    J = standard_J(_same_n(ai, aj))
    return _maxabs(_comm(J @ ai.A, J @ aj.A))


def poisson_quadratics(g: MetricLieAlgebra, Ai, Aj, X: OrbitPoint) -> float:
    """{H_i, H_j}(X) = x_{n+1} (J Ai x_v, Aj x_v)."""
    ai, aj = as_symmetric(Ai), as_symmetric(Aj)
    n = _same_n(ai, aj, g.A)
    if g.A.is_singular():
        raise InvalidArgument("the ambient algebra needs a nonsingular A")
    if X.n != n:
        raise InvalidArgument("orbit point has the wrong size")
    J = standard_J(n)
    return X.xnp1 * float((J @ ai.A @ X.xv) @ (aj.A @ X.xv))


def _commutant_system(mats: list[np.ndarray], n: int) -> np.ndarray:
    """Linear constraints on vec(D): [D, M] = 0 for each M, and J D symmetric."""
    m = 2 * n
    J = standard_J(n)
    rows = []
    for k in range(m * m):
        E = np.zeros(m * m)
        E[k] = 1.0
        D = E.reshape(m, m)
        JD = J @ D
        parts = [(JD - JD.T).ravel()] + [_comm(D, M).ravel() for M in mats]
        rows.append(np.concatenate(parts))
    return np.array(rows).T


def _nullspace_mats(system: np.ndarray, m: int, scale: float) -> list[np.ndarray]:
    ns = scipy.linalg.null_space(system, rcond=_NULL_TOL / max(1.0, scale))
    return [ns[:, k].reshape(m, m) for k in range(ns.shape[1])]


def centralizer(A, tol: float = _NULL_TOL) -> list[Derivation]:
    """Basis of z(JA) = {D in derivations trivial on the center : [D, JA] = 0}."""
    a = as_symmetric(A)
    S = standard_J(a.n) @ a.A
    system = _commutant_system([S], a.n)
    return [Derivation(D) for D in _nullspace_mats(system, 2 * a.n, _maxabs(S))]


def joint_centralizer(mats: list[np.ndarray], n: int) -> list[np.ndarray]:
    scale = max([1.0] + [_maxabs(M) for M in mats])
    return _nullspace_mats(_commutant_system(mats, n), 2 * n, scale)


def _normalize(D: np.ndarray, n: int) -> np.ndarray:
    """Fix the sign of a family member and drop round-off dust.

    The sign makes the last nonzero diagonal entry of the induced symmetric
    map positive, so per-mode projectors come out as +1/2 (x_i^2 + y_i^2)
    and hyperbolic modes as +1/2 (y_i^2 - x_i^2).
    """
    D = np.array(D, dtype=float)
    D[np.abs(D) < 1e-13 * max(1.0, _maxabs(D))] = 0.0
    a = -standard_J(n) @ D
    diag = np.diag(a)
    nz = np.flatnonzero(np.abs(diag) > 1e-12 * max(1.0, _maxabs(a)))
    if nz.size:
        sign = np.sign(diag[nz[-1]])
    else:
        flat = a.ravel()
        sign = np.sign(flat[np.flatnonzero(flat)[0]]) if np.any(flat) else 1.0
    return sign * D + 0.0


def _classes(w: np.ndarray, scale: float) -> list[tuple[complex, list[int]]]:
    tol = _CLUSTER_TOL * scale
    assigned = np.zeros(len(w), dtype=bool)
    out = []
    for i, lam in enumerate(w):
        if assigned[i]:
            continue
        orbit = np.array([lam, -lam, np.conj(lam), -np.conj(lam)])
        members = [
            j for j in range(len(w))
            if not assigned[j] and np.min(np.abs(orbit - w[j])) <= tol
        ]
        assigned[members] = True
        out.append((lam, members))
    return out


def _seed_block(S, A, R, d, scale):
    """S-invariant subspace of dimension d inside range(R) on which b is nondegenerate."""
    m = S.shape[0]
    eye = np.eye(m)
    candidates = [R @ eye[j] for j in range(m)]
    candidates += [R @ (eye[i] + eye[j]) for i in range(m) for j in range(i + 1, m)]
    for u in candidates:
        nu = np.linalg.norm(u)
        if nu < 1e-8:
            continue
        cols = [u]
        for _ in range(d - 1):
            cols.append(S @ cols[-1])
        K = np.column_stack(cols)
        Kn = K / np.linalg.norm(K, axis=0)
        if np.linalg.svd(Kn, compute_uv=False)[-1] < 1e-8:
            continue
        G = Kn.T @ A @ Kn
        if np.min(np.abs(np.linalg.eigvalsh(0.5 * (G + G.T)))) < 1e-8 * max(1.0, _maxabs(A)):
            continue
        return K @ np.linalg.solve(K.T @ A @ K, K.T @ A)
    return None


def _plane_family(a: SymmetricMap) -> list[np.ndarray] | None:
    """Commuting derivations from a b-orthogonal splitting into invariant blocks.

    Each eigenvalue class {±λ, ±conj λ} of S = JA is split into S-invariant
    subspaces of dimension 2 (λ real or imaginary) or 4 (complex quartet),
    mutually orthogonal for b(x, y) = (Ax, y). A 2-block P contributes S P;
    a 4-block contributes S P and S^3 P. Returns None when S is not
    semisimple or no nondegenerate splitting is found.
    """
    n, A = a.n, a.A
    m = 2 * n
    S = standard_J(n) @ A
    scale = max(1.0, _maxabs(S))
    w, V = np.linalg.eig(S)
    classes = _classes(w, scale)
    if len(classes) > 1 and np.linalg.cond(V) > 1e10:
        return None
    Vinv = np.linalg.inv(V) if len(classes) > 1 else None
    out = []
    for lam, members in classes:
        kind_real = abs(lam.imag) <= _CLUSTER_TOL * scale
        kind_imag = abs(lam.real) <= _CLUSTER_TOL * scale
        d = 2 if (kind_real or kind_imag) else 4
        if len(members) % d:
            return None
        if len(classes) == 1:
            R = np.eye(m)
        else:
            R = np.real(V[:, members] @ Vinv[members, :])
        nblocks = len(members) // d
        for b in range(nblocks):
            P = R if b == nblocks - 1 else _seed_block(S, A, R, d, scale)
            if P is None:
                return None
            # semisimplicity on the block: minimal polynomial of degree d
            S2 = S @ S @ P
            if d == 2:
                mu = (lam * lam).real
                if _maxabs(S2 - mu * P) > 1e-8 * scale**2:
                    return None
                out.append(S @ P)
            else:
                l2 = lam * lam
                S4 = S @ S @ S2
                if _maxabs(S4 - 2 * l2.real * S2 + abs(l2) ** 2 * P) > 1e-8 * scale**4:
                    return None
                out.extend([S @ P, S @ S2])
            R = R - P
    return out


def _greedy_family(a: SymmetricMap, seed: int, attempts: int = 8) -> list[np.ndarray] | None:
    """Randomised extension of {JA} inside successive joint centralizers."""
    n = a.n
    S = standard_J(n) @ a.A
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        fam = [S / max(1.0, _maxabs(S))]
        while len(fam) < n:
            C = joint_centralizer(fam, n)
            if not C:
                break
            F = np.column_stack([f.ravel() for f in fam])
            Q, _ = np.linalg.qr(F)
            Cm = np.column_stack([c.ravel() for c in C])
            Cperp = Cm - Q @ (Q.T @ Cm)
            u, s, _ = np.linalg.svd(Cperp, full_matrices=False)
            basis = u[:, s > 1e-8]
            if basis.shape[1] == 0:
                break
            new = (basis @ rng.standard_normal(basis.shape[1])).reshape(2 * n, 2 * n)
            fam.append(new / _maxabs(new))
        if len(fam) == n and _family_rank(fam, n, rng) == n:
            return fam
    return None


def _family_rank(fam: list[np.ndarray], n: int, rng, points: int = 5) -> int:
    J = standard_J(n)
    syms = [-J @ D for D in fam]
    best = 0
    for _ in range(points):
        x = rng.standard_normal(2 * n)
        rows = np.array([0.5 * (s + s.T) @ x for s in syms])
        sv = np.linalg.svd(rows, compute_uv=False)
        best = max(best, int(np.sum(sv > 1e-8)))
    return best


def abelian_family(A, seed: int = 0) -> list[Derivation] | None:
    """n pairwise-commuting derivations in the centralizer of JA, or None.

    Tries the invariant-block splitting first and falls back to a seeded
    greedy search.
    """
    a = as_symmetric(A)
    if a.is_singular():
        raise InvalidArgument("A must be nonsingular")
    fam = _plane_family(a)
    if fam is None:
        fam = _greedy_family(a, seed)
    if fam is None:
        return None
    return [Derivation(_normalize(D, a.n)) for D in fam]


def first_integrals(family: list[Derivation], extension: str = "cross-term") -> list[QuadraticFunction]:
    """g_k(X) = 1/2 (A_k x_v, x_v) [+ x0 x_{n+1}] with A_k = -J D_k."""
    if extension not in ("cross-term", "trivial"):
        raise InvalidArgument(f"unknown extension {extension!r}")
    out = []
    for D in family:
        Ak = sym_of_deriv(D).A
        m = Ak.shape[0]
        Q = np.zeros((m + 2, m + 2))
        Q[1:-1, 1:-1] = Ak
        if extension == "cross-term":
            Q[0, -1] = Q[-1, 0] = 1.0
        out.append(QuadraticFunction(Q))
    return out


def differential_rank(fns: list[QuadraticFunction], points: list[OrbitPoint], tol: float = 1e-8) -> int:
    """Max over points of the rank of the orbit-restricted differentials."""
    if not points:
        raise InvalidArgument("at least one point is required")
    if not fns:
        return 0
    best = 0
    for X in points:
        x = np.concatenate([[0.0], X.xv, [X.xnp1]])
        rows = np.array([(f.quad @ x)[1:-1] for f in fns])
        sv = np.linalg.svd(rows, compute_uv=False)
        best = max(best, int(np.sum(sv > tol)))
    return best


@dataclass(frozen=True)
class IntegrabilityCertificate:
    A: SymmetricMap
    family: list[Derivation]
    integrals: list[QuadraticFunction]
    commutation_defect: float
    poisson_defect: float
    rank: int
    verdict: str
    seed: int
    extension: str = "cross-term"
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "A": self.A.A.tolist(),
            "family": [D.D.tolist() for D in self.family],
            "integrals": [f.quad.tolist() for f in self.integrals],
            "commutation_defect": self.commutation_defect,
            "poisson_defect": self.poisson_defect,
            "rank": self.rank,
            "verdict": self.verdict,
            "seed": self.seed,
            "extension": self.extension,
            "notes": list(self.notes),
        }


def random_orbit_points(n: int, count: int, rng) -> list[OrbitPoint]:
    pts = []
    for _ in range(count):
        xv = rng.standard_normal(2 * n)
        c = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
        pts.append(OrbitPoint(xv, c))
    return pts


def certificate(
    g: MetricLieAlgebra,
    samples: int = 20,
    seed: int = 0,
    extension: str = "cross-term",
    tol: float = 1e-10,
) -> IntegrabilityCertificate:
    """Search for an abelian family and verify it at sampled orbit points."""
    a = g.A
    n = a.n
    rng = np.random.default_rng(seed)
    family = abelian_family(a, seed=seed)
    if family is None:
        return IntegrabilityCertificate(
            a, [], [], float("inf"), float("inf"), 0, UNDETERMINED, seed, extension,
            ["no abelian family found in the centralizer"],
        )
    integrals = first_integrals(family, extension)
    S = g.S
    mats = [S] + [D.D for D in family]
    comm = max(_maxabs(_comm(mats[i], mats[j])) for i in range(len(mats)) for j in range(i + 1, len(mats)))
    points = random_orbit_points(n, max(1, samples), rng)
    syms = [a] + [sym_of_deriv(D) for D in family]
    pois = 0.0
    for X in points:
        for i in range(len(syms)):
            for j in range(i + 1, len(syms)):
                pois = max(pois, abs(poisson_quadratics(g, syms[i], syms[j], X)))
    rank = differential_rank(integrals, points)
    notes = []
    if len(family) != n:
        notes.append(f"family has {len(family)} elements, need {n}")
    if comm > tol:
        notes.append("commutation defect above tolerance")
    if pois > tol * max(1.0, _maxabs(a.A)) * 100:
        notes.append("sampled Poisson brackets do not vanish")
    if rank != n:
        notes.append(f"differential rank {rank} < {n}")
    verdict = UNDETERMINED if notes else INTEGRABLE
    return IntegrabilityCertificate(a, family, integrals, comm, pois, rank, verdict, seed, extension, notes)


def _v_block(f) -> np.ndarray:
    if isinstance(f, QuadraticFunction):
        q = f.quad
        return q[1:-1, 1:-1] if q.shape[0] % 2 == 0 and q.shape[0] >= 4 else q
    return np.asarray(getattr(f, "A", f), dtype=float)


def level_set_classify(integrals, levels, tol: float = 1e-12) -> str:
    """Classify {x : 1/2 (Q_k x, x) = c_k for all k} as compact, noncompact or empty.

    Each integral is judged on the support of its v-block. A definite block
    with a level of the wrong sign makes the set empty; an indefinite block
    makes it unbounded; if every block is definite and together they cover
    R^2n the set is compact (a product of ellipsoids when supports are
    disjoint, as for per-mode integrals).
    """
    blocks = [_v_block(f) for f in integrals]
    levels = list(levels)
    if len(blocks) != len(levels) or not blocks:
        raise InvalidArgument("need one level per integral")
    indefinite = False
    for Q, c in zip(blocks, levels):
        ev = np.linalg.eigvalsh(0.5 * (Q + Q.T))
        ev = ev[np.abs(ev) > tol * max(1.0, _maxabs(Q))]
        if ev.size == 0:
            if abs(c) > tol:
                return "empty"
            continue
        if np.all(ev > 0):
            if c < -tol:
                return "empty"
        elif np.all(ev < 0):
            if c > tol:
                return "empty"
        else:
            indefinite = True
    if indefinite:
        return "noncompact"
    stacked = np.vstack(blocks)
    if np.linalg.matrix_rank(stacked) < blocks[0].shape[0]:
        return "noncompact"
    return "compact"


def _blocks(a: SymmetricMap):
    n = a.n
    A = a.A
    return A[:n, :n], A[:n, n:], A[n:, :n], A[n:, n:]


def complex_symmetric_test(A, tol: float = 1e-10) -> bool:
    """True iff A = [[B, C], [D, E]] has C = -D and B = E (equivalently AJ = JA)."""
    B, C, D, E = _blocks(as_symmetric(A))
    return bool(_maxabs(C + D) <= tol and _maxabs(B - E) <= tol and _maxabs(B - B.T) <= tol)


def pairwise_test(Ai, Aj, tol: float = 1e-10) -> bool:
    """For complex-symmetric Ai, Aj: [Ci, Bj] = [Cj, Bi] and [Ci, Cj] = [Bi, Bj]."""
    ai, aj = as_symmetric(Ai), as_symmetric(Aj)
    _same_n(ai, aj)
    if not (complex_symmetric_test(ai, tol) and complex_symmetric_test(aj, tol)):
        raise InvalidArgument("pairwise_test needs complex-symmetric inputs")
    Bi, Ci, _, _ = _blocks(ai)
    Bj, Cj, _, _ = _blocks(aj)
    return bool(
        _maxabs(_comm(Ci, Bj) - _comm(Cj, Bi)) <= tol
        and _maxabs(_comm(Ci, Cj) - _comm(Bi, Bj)) <= tol
    )
