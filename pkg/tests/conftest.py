import numpy as np
import pytest
import scipy.linalg

ACCEPTANCE_LINES: list[str] = []


def random_symmetric(rng, n, nonsingular=True):
    while True:
        M = rng.standard_normal((2 * n, 2 * n))
        A = M + M.T
        if not nonsingular or abs(np.linalg.det(A)) > 1e-3:
            return A


def oracle_bracket(A, x, y):
    """[z1 X0 + u + t1 T, z2 X0 + v + t2 T] written out by hand for from_symmetric(A)."""
    m = A.shape[0]
    n = m // 2
    J = np.block([[np.zeros((n, n)), -np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    S = J @ A
    u, t1 = x[1:-1], x[-1]
    v, t2 = y[1:-1], y[-1]
    out = np.zeros(m + 2)
    out[0] = (A @ S @ u) @ v
    out[1:-1] = t1 * (S @ v) - t2 * (S @ u)
    return out


def std_J(n):
    return np.block([[np.zeros((n, n)), -np.eye(n)], [np.eye(n), np.zeros((n, n))]])


def random_symplectic(rng, n, scale=0.4):
    M = rng.standard_normal((2 * n, 2 * n))
    return scipy.linalg.expm(scale * std_J(n) @ (M + M.T))


def mode_generators(n, kinds):
    """Per-mode Hamiltonian generators: a rotation or a hyperbolic boost in (q_k, p_k)."""
    gens = []
    for k, kind in enumerate(kinds):
        B = np.zeros((2 * n, 2 * n))
        if kind == "elliptic":
            B[k, n + k], B[n + k, k] = 1.0, -1.0
        else:
            B[k, k], B[n + k, n + k] = 1.0, -1.0
        gens.append(B)
    return gens


def commuting_symmetric(rng, n, count=2):
    """Symmetric maps whose derivations J A_i commute, conjugated by a random symplectic map."""
    kinds = rng.choice(["elliptic", "hyperbolic"], size=n)
    gens = mode_generators(n, kinds)
    P = random_symplectic(rng, n)
    Pinv = np.linalg.inv(P)
    J = std_J(n)
    out = []
    for _ in range(count):
        S = sum(rng.uniform(0.5, 2.0) * rng.choice([-1, 1]) * B for B in gens)
        A = -J @ (P @ S @ Pinv)
        out.append(0.5 * (A + A.T))
    return out


def complex_symmetric(rng, n, H=None):
    """Real form [[X, -Y], [Y, X]] of a Hermitian matrix H = X + iY."""
    if H is None:
        M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = M + M.conj().T
    X, Y = H.real, H.imag
    return np.block([[X, -Y], [Y, X]])


def commuting_complex_symmetric(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, _ = np.linalg.qr(M)
    Hs = [U @ np.diag(rng.standard_normal(n)) @ U.conj().T for _ in range(2)]
    return [complex_symmetric(rng, n, 0.5 * (H + H.conj().T)) for H in Hs]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
