import json

import numpy as np
import pytest

from heislax import integrability
from heislax.dynamics import energy_series, integrate
from heislax.errors import InvalidArgument
from heislax.extension import from_symmetric, oscillator, pendula
from heislax.heisenberg import deriv_of_sym, standard_J, sym_of_deriv
from heislax.integrability import (
    INTEGRABLE,
    UNDETERMINED,
    abelian_family,
    centralizer,
    certificate,
    complex_symmetric_test,
    differential_rank,
    first_integrals,
    involution_test,
    level_set_classify,
    pairwise_test,
    poisson_quadratics,
)
from heislax.orbits import OrbitPoint, extend_quadratic, poisson_orbit

from conftest import (
    commuting_complex_symmetric,
    commuting_symmetric,
    complex_symmetric,
    random_symmetric,
    random_symplectic,
)

PROJ_1 = np.diag([1.0, 0.0, 1.0, 0.0])
PROJ_2 = np.diag([0.0, 1.0, 0.0, 1.0])


def comm(a, b):
    return a @ b - b @ a


def test_involution_examples(rng):
    A = random_symmetric(rng, 2)
    assert involution_test(A, A)
    assert involution_test(PROJ_1, PROJ_2)
    assert not involution_test(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_involution_rejects_mismatched_sizes():
    with pytest.raises(InvalidArgument):
        involution_test(np.eye(2), np.eye(4))


def test_poisson_quadratics_examples(rng):
    g = from_symmetric(np.eye(2))
    X = OrbitPoint([1.0, 0.0], 1.0)
    assert poisson_quadratics(g, np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]), X) == 1.0
    A = random_symmetric(rng, 1)
    assert abs(poisson_quadratics(g, A, A, OrbitPoint(rng.standard_normal(2), 2.0))) <= 1e-14


def test_poisson_quadratics_rejects_singular_algebra():
    g = from_symmetric(np.eye(2))
    object.__setattr__(g, "A", type(g.A)(np.zeros((2, 2))))
    with pytest.raises(InvalidArgument):
        poisson_quadratics(g, np.eye(2), np.eye(2), OrbitPoint([1.0, 0.0], 1.0))


def test_commuting_pairs_poisson_commute(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        Ai, Aj = commuting_symmetric(rng, n)
        assert involution_test(Ai, Aj)
        g = from_symmetric(random_symmetric(rng, n))
        for _ in range(50):
            X = OrbitPoint(rng.standard_normal(2 * n), rng.standard_normal())
            assert abs(poisson_quadratics(g, Ai, Aj, X)) <= 1e-10


def test_poisson_quadratics_agrees_with_orbit_bracket(rng):
    for _ in range(30):
        n = int(rng.integers(1, 4))
        g = from_symmetric(random_symmetric(rng, n))
        Ai = random_symmetric(rng, n, nonsingular=False)
        Aj = random_symmetric(rng, n, nonsingular=False)
        X = OrbitPoint(rng.standard_normal(2 * n), rng.standard_normal())
        for cross in (False, True):
            generic = poisson_orbit(g, extend_quadratic(g, Ai, cross), extend_quadratic(g, Aj, cross), X)
            direct = poisson_quadratics(g, Ai, Aj, X)
            assert abs(direct - generic) <= 1e-10 * max(1.0, abs(direct))


def in_span(C, M, tol=1e-10):
    basis = np.array([D.D.ravel() for D in C]).T
    coef = np.linalg.lstsq(basis, M.ravel(), rcond=None)[0]
    return np.max(np.abs(basis @ coef - M.ravel())) <= tol * max(1.0, np.max(np.abs(M)))


def test_centralizer_examples():
    C = centralizer(np.eye(2))
    assert len(C) >= 1 and in_span(C, standard_J(1))
    assert len(centralizer(np.eye(4))) == 4


def test_centralizer_properties(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        A = random_symmetric(rng, n)
        S = standard_J(n) @ A
        C = centralizer(A)
        for D in C:
            JD = standard_J(n) @ D.D
            assert np.max(np.abs(JD - JD.T)) <= 1e-12
            assert np.max(np.abs(comm(D.D, S))) <= 1e-12 * max(1.0, np.max(np.abs(S)))
        assert in_span(C, S)
        Ac = complex_symmetric(rng, n)
        assert in_span(centralizer(Ac), standard_J(n))


def test_family_oscillator_projectors():
    fam = abelian_family(np.eye(6))
    assert len(fam) == 3
    for i, D in enumerate(fam):
        P = np.zeros(6)
        P[[i, 3 + i]] = 1.0
        assert np.array_equal(D.D, deriv_of_sym(np.diag(P)).D)


def test_family_pendula_hyperbolic():
    fam = abelian_family(np.diag([1.0, 1.0, -1.0, -1.0]))
    assert len(fam) == 2
    expected = [np.diag([-1.0, 0.0, 1.0, 0.0]), np.diag([0.0, -1.0, 0.0, 1.0])]
    for D, P in zip(fam, expected):
        assert np.array_equal(sym_of_deriv(D).A, P)


def test_family_n1_is_the_hamiltonian_derivation(rng):
    for _ in range(10):
        A = random_symmetric(rng, 1)
        fam = abelian_family(A)
        assert len(fam) == 1
        S = standard_J(1) @ A
        ratio = fam[0].D.ravel() @ S.ravel() / (S.ravel() @ S.ravel())
        assert np.allclose(fam[0].D, ratio * S, atol=1e-12)


def check_family(A, fam):
    n = A.shape[0] // 2
    S = standard_J(n) @ A
    mats = [S] + [D.D for D in fam]
    scale = max(1.0, np.max(np.abs(S)))
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            assert np.max(np.abs(comm(mats[i], mats[j]))) <= 1e-10 * scale**2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_family_random(rng, n):
    for _ in range(10):
        A = random_symmetric(rng, n)
        fam = abelian_family(A)
        assert fam is not None and len(fam) == n
        check_family(A, fam)


def test_family_complex_quartet(rng):
    a, b = 0.7, 1.3
    M = np.array([[a, -b], [b, a]])
    S = np.block([[M, np.zeros((2, 2))], [np.zeros((2, 2)), -M.T]])
    P = random_symplectic(rng, 2)
    S = P @ S @ np.linalg.inv(P)
    A = -standard_J(2) @ S
    A = 0.5 * (A + A.T)
    assert integrability._plane_family(integrability.SymmetricMap(A)) is not None
    fam = abelian_family(A)
    assert len(fam) == 2
    check_family(A, fam)
    assert certificate(from_symmetric(A)).verdict == INTEGRABLE


def test_family_non_semisimple_uses_fallback(rng):
    M = np.array([[1.0, 1.0], [0.0, 1.0]])
    S = np.block([[M, np.zeros((2, 2))], [np.zeros((2, 2)), -M.T]])
    A = -standard_J(2) @ S
    assert integrability._plane_family(integrability.SymmetricMap(A)) is None
    fam = abelian_family(A, seed=3)
    assert fam is not None and len(fam) == 2
    check_family(A, fam)
    assert certificate(from_symmetric(A), seed=3).verdict == INTEGRABLE


def test_first_integrals_shapes():
    assert first_integrals([]) == []
    fam = abelian_family(np.eye(2))
    (f,) = first_integrals(fam, "cross-term")
    assert f.quad[0, -1] == 1.0
    (f,) = first_integrals(fam, "trivial")
    assert f.quad[0, -1] == 0.0
    with pytest.raises(InvalidArgument):
        first_integrals(fam, "sideways")


def test_differential_rank(rng):
    g = oscillator(3)
    fns = first_integrals(abelian_family(g.A))
    assert differential_rank(fns, [OrbitPoint(rng.standard_normal(6), 1.0)]) == 3
    assert differential_rank(fns, [OrbitPoint(np.zeros(6), 1.0)]) == 0
    p = pendula(2)
    fns = first_integrals(abelian_family(p.A), "trivial")
    assert differential_rank(fns, [OrbitPoint(rng.standard_normal(4), 1.0) for _ in range(3)]) == 2
    with pytest.raises(InvalidArgument):
        differential_rank(fns, [])


def test_certificates_for_named_systems():
    c = certificate(oscillator(3))
    assert c.verdict == INTEGRABLE and c.rank == 3 and c.commutation_defect <= 1e-10
    c = certificate(pendula(2), extension="trivial")
    assert c.verdict == INTEGRABLE and c.rank == 2


def test_certificate_undetermined_when_search_fails(monkeypatch):
    monkeypatch.setattr(integrability, "abelian_family", lambda A, seed=0: None)
    c = certificate(oscillator(2))
    assert c.verdict == UNDETERMINED
    assert c.family == [] and c.notes


def test_certificate_undetermined_on_dependent_family(monkeypatch):
    # two copies of the same derivation commute but are not independent
    fam = abelian_family(np.eye(4))
    monkeypatch.setattr(integrability, "abelian_family", lambda A, seed=0: [fam[0], fam[0]])
    c = certificate(oscillator(2))
    assert c.verdict == UNDETERMINED and c.rank == 1


def test_integrable_certificates_conserve_integrals(rng):
    for k in range(8):
        n = int(rng.integers(1, 4))
        A = commuting_symmetric(rng, n, count=1)[0] if k % 2 else random_symmetric(rng, n)
        g = from_symmetric(A)
        c = certificate(g, seed=k)
        assert c.verdict == INTEGRABLE
        X = OrbitPoint(rng.standard_normal(2 * n), rng.uniform(0.2, 0.5))
        traj = integrate(g, X, 1.0, 0.1, method="exact")
        for f in c.integrals:
            e = energy_series(traj, f)
            scale = max(1.0, np.max(np.abs(traj.xv)) ** 2 * np.max(np.abs(f.quad)))
            assert np.max(np.abs(e - e[0])) <= 1e-10 * scale


def test_certificate_json_and_determinism(rng):
    g = from_symmetric(random_symmetric(rng, 3))
    a = json.dumps(certificate(g, seed=7).to_dict())
    b = json.dumps(certificate(g, seed=7).to_dict())
    assert a == b
    doc = json.loads(a)
    for key in ("A", "family", "integrals", "commutation_defect", "rank", "verdict", "seed"):
        assert key in doc


def test_level_sets():
    osc = first_integrals(abelian_family(np.eye(4)), "trivial")
    pend = first_integrals(abelian_family(np.diag([1.0, 1.0, -1.0, -1.0])), "trivial")
    assert level_set_classify(osc, [1.0, 1.0]) == "compact"
    assert level_set_classify(pend, [1.0, 1.0]) == "noncompact"
    assert level_set_classify(osc, [-1.0, 1.0]) == "empty"
    assert level_set_classify(osc[:1], [1.0]) == "noncompact"
    with pytest.raises(InvalidArgument):
        level_set_classify(osc, [1.0])


def test_complex_symmetric_examples():
    assert complex_symmetric_test(np.eye(2))
    assert not complex_symmetric_test(np.diag([1.0, -1.0]))
    assert not involution_test(np.eye(2), np.diag([1.0, -1.0]))
    assert pairwise_test(PROJ_1, PROJ_2) and involution_test(PROJ_1, PROJ_2)
    with pytest.raises(InvalidArgument):
        complex_symmetric_test(np.eye(3))


def test_complex_symmetric_iff_commutes_with_identity(rng):
    for k in range(100):
        n = int(rng.integers(1, 4))
        A = complex_symmetric(rng, n) if k % 2 else random_symmetric(rng, n, nonsingular=False)
        assert complex_symmetric_test(A) == involution_test(np.eye(2 * n), A)


def test_pairwise_test_agrees_with_involution(rng):
    hits = 0
    for k in range(100):
        n = int(rng.integers(1, 4))
        if k % 2:
            Ai, Aj = commuting_complex_symmetric(rng, n)
        else:
            Ai, Aj = complex_symmetric(rng, n), complex_symmetric(rng, n)
        expected = involution_test(Ai, Aj)
        hits += expected
        assert pairwise_test(Ai, Aj) == expected
    assert 0 < hits < 100


def test_pairwise_test_rejects_general_input():
    with pytest.raises(InvalidArgument):
        pairwise_test(np.diag([1.0, -1.0]), np.eye(2))
