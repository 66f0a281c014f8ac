"""Command-line front end: ``heislax {build,integrate,verify,certify,involution}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 numerical divergence, 4 undetermined certificate.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, integrability, lie_core, orbits
from .errors import DivergenceError, InvalidArgument
from .extension import MetricLieAlgebra, from_symmetric, oscillator
from .heisenberg import SymmetricMap
from .lie_core import LieAlgebra

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_DIVERGENCE = 3
EXIT_UNDETERMINED = 4

DEFAULT_TOLS = {
    "structure": 1e-12,
    "flow": 1e-12,
    "isospectral": 1e-10,
    "rk4": 1e-6,
    "poisson": 1e-10,
    "factorization": 1e-10,
    "commutation": 1e-10,
    "involution": 1e-10,
    "rank": 1e-8,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    A_paths: tuple[str, ...] = ()
    oscillator: int | None = None
    x0: str | None = None
    T: float = 1.0
    dt: float = 1e-3
    method: str = "exact"
    seed: int = 0
    out: str | None = None
    extension: str | None = None
    perturb: float = 0.0
    samples: int = 20
    tols: dict = field(default_factory=lambda: dict(DEFAULT_TOLS))


def _read_json(source: str):
    """Load JSON from a path; a string that is not a file is parsed as inline JSON."""
    if os.path.exists(source):
        try:
            with open(source, encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"{source}: not valid JSON ({exc})") from exc
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{source}: no such file and not inline JSON") from exc


def _algebra_from_doc(doc) -> MetricLieAlgebra:
    if isinstance(doc, dict) and "structure" in doc:
        # a document written by `build`: rebuild from A so S and the metric stay consistent
        g = MetricLieAlgebra.from_dict(doc)
        return from_symmetric(g.A, g.convention)
    return from_symmetric(SymmetricMap.from_dict(doc))


def load_algebra(cfg: RunConfig) -> MetricLieAlgebra:
    if cfg.oscillator is not None:
        if cfg.A_paths:
            raise InvalidArgument("give either --A or --oscillator, not both")
        return oscillator(cfg.oscillator)
    if not cfg.A_paths:
        raise InvalidArgument("an algebra is required: --A <path> or --oscillator <n>")
    return _algebra_from_doc(_read_json(cfg.A_paths[0]))


def load_point(cfg: RunConfig, n: int) -> orbits.OrbitPoint:
    if cfg.x0 is None:
        xv = np.zeros(2 * n)
        xv[0] = 1.0
        return orbits.OrbitPoint(xv, 1.0)
    doc = _read_json(cfg.x0)
    if isinstance(doc, dict):
        X = orbits.OrbitPoint.from_dict(doc)
    else:
        arr = np.asarray(doc, dtype=float)
        if arr.ndim != 1 or arr.size != 2 * n + 1:
            raise InvalidArgument(f"--x0 must list 2n+1 = {2 * n + 1} numbers (x.., y.., x_np1)")
        X = orbits.OrbitPoint(arr[:-1], arr[-1])
    if X.n != n:
        raise InvalidArgument("--x0 and the algebra disagree on n")
    if not (np.all(np.isfinite(X.xv)) and math.isfinite(X.xnp1)):
        raise InvalidArgument("--x0 has non-finite entries")
    return X


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def cmd_build(cfg: RunConfig) -> int:
    g = load_algebra(cfg)
    _emit(_dumps(g.to_dict()), cfg.out)
    inv = lie_core.ad_invariance_defect(g.alg, g.metric)
    jac = lie_core.jacobi_defect(g.alg)
    print(f"dim={g.dim} ad_invariance_defect={inv:.17g} jacobi_defect={jac:.17g}", file=sys.stderr)
    return EXIT_OK


def cmd_integrate(cfg: RunConfig) -> int:
    g = load_algebra(cfg)
    if not (cfg.T > 0 and math.isfinite(cfg.T)):
        raise InvalidArgument("--T must be positive")
    if not (cfg.dt > 0 and math.isfinite(cfg.dt)):
        raise InvalidArgument("--dt must be positive")
    X0 = load_point(cfg, g.n)
    traj = dynamics.integrate(g, X0, cfg.T, cfg.dt, method=cfg.method)
    H = dynamics.energy_series(traj, orbits.metric_quadratic(g))
    _emit(dynamics.trajectory_csv(traj, g), cfg.out)
    energy = float(np.max(np.abs(H - H[0])))
    iso = dynamics.isospectral_drift(traj, g)
    print(f"energy_drift={energy:.17g} isospectral_drift={iso:.17g}", file=sys.stderr)
    return EXIT_OK


def _perturbed(g: MetricLieAlgebra, eps: float) -> MetricLieAlgebra:
    """Shift one entry of ad(X_{n+1}) (antisymmetrically), which breaks Jacobi."""
    c = np.array(g.alg.structure)
    t = g.i_top
    c[t, 1, 2] += eps
    c[1, t, 2] -= eps
    return MetricLieAlgebra(LieAlgebra(c, g.alg.labels), g.metric, g.A, g.convention)


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "value": float(value), "tol": float(tol), "pass": bool(value <= tol)}


def verify_report(g: MetricLieAlgebra, seed: int, tols: dict, perturb: float = 0.0, points: int = 20) -> dict:
    """Run the invariant suite on one algebra and return a JSON-ready report."""
    rng = np.random.default_rng(seed)
    if perturb:
        g = _perturbed(g, perturb)
    n = g.n
    checks = [
        _check("antisymmetry", lie_core.antisymmetry_defect(g.alg), tols["structure"]),
        _check("jacobi", lie_core.jacobi_defect(g.alg), tols["structure"]),
        _check("ad_invariance", lie_core.ad_invariance_defect(g.alg, g.metric), tols["structure"]),
    ]
    pts = integrability.random_orbit_points(n, points, rng)
    X0 = pts[0]
    T, dt = 1.0, 1e-3
    exact = dynamics.integrate(g, X0, T, dt * 100, method="exact")
    H = dynamics.energy_series(exact, orbits.metric_quadratic(g))
    scale = max(1.0, float(np.max(np.abs(exact.xv))) ** 2 * float(np.max(np.abs(g.A.A))))
    checks.append(_check("metric_drift_exact", float(np.max(np.abs(H - H[0]))) / scale, tols["flow"]))
    checks.append(_check("xnp1_constant", float(np.max(np.abs(exact.xnp1 - X0.xnp1))), 0.0))
    iso_scale = max(1.0, float(np.max(np.abs(exact.xv)))) ** g.dim
    checks.append(_check("isospectral_exact", dynamics.isospectral_drift(exact, g) / iso_scale, tols["isospectral"]))
    rk = dynamics.integrate(g, X0, T, dt, method="rk4")
    ref = np.array([dynamics.flow_exact(g, X0, t).xv for t in rk.times])
    err = float(np.max(np.abs(rk.xv - ref))) / max(1.0, float(np.max(np.abs(ref))))
    checks.append(_check("rk4_vs_exact", err, tols["rk4"]))

    ell = orbits.center_pairing(g)
    f = orbits.metric_quadratic(g)
    aks = max(abs(orbits.poisson_orbit(g, f, ell, X)) for X in pts)
    checks.append(_check("aks_bracket", aks, tols["poisson"]))

    worst = 0.0
    for X in pts:
        M = rng.standard_normal((2 * n, 2 * n))
        Aj = SymmetricMap(M + M.T)
        direct = integrability.poisson_quadratics(g, g.A, Aj, X)
        generic = orbits.poisson_orbit(
            g, orbits.extend_quadratic(g, g.A), orbits.extend_quadratic(g, Aj), X
        )
        worst = max(worst, abs(direct - generic) / max(1.0, float(X.xv @ X.xv)))
    checks.append(_check("poisson_quadratics_vs_orbit", worst, tols["poisson"]))

    fact = 0.0
    for X in pts[:5]:
        t = float(rng.uniform(-1.0, 1.0))
        _, Z = dynamics.solve_by_factorization(g, X, t)
        W = dynamics.flow_exact(g, X, t)
        fact = max(fact, float(np.max(np.abs(Z.xv - W.xv))) / max(1.0, float(np.max(np.abs(W.xv)))))
    checks.append(_check("factorization_vs_exact", fact, tols["factorization"]))

    if g.convention == "oscillator":
        # on the orbit through x_{n+1} = c the bracket is c (J grad f, grad h)
        J = np.block([[np.zeros((n, n)), -np.eye(n)], [np.eye(n), np.zeros((n, n))]])
        dev = 0.0
        for X in pts:
            Qa = rng.standard_normal((2 * n, 2 * n))
            Qb = rng.standard_normal((2 * n, 2 * n))
            Qa, Qb = Qa + Qa.T, Qb + Qb.T
            canon = X.xnp1 * float((J @ Qa @ X.xv) @ (Qb @ X.xv))
            orb = orbits.poisson_orbit(g, orbits.extend_quadratic(g, Qa), orbits.extend_quadratic(g, Qb), X)
            dev = max(dev, abs(orb - canon) / max(1.0, float(X.xv @ X.xv)))
        checks.append(_check("orbit_bracket_canonical", dev, tols["structure"]))

    return {
        "n": n,
        "convention": g.convention,
        "seed": seed,
        "perturb": perturb,
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.oscillator is None and not cfg.A_paths:
        g = oscillator(3)
    else:
        g = load_algebra(cfg)
    report = verify_report(g, cfg.seed, cfg.tols, cfg.perturb, cfg.samples)
    _emit(_dumps(report), cfg.out)
    for c in report["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']} {c['value']:.3g} (tol {c['tol']:g})", file=sys.stderr)
    return EXIT_OK if report["all_pass"] else EXIT_VERIFY_FAILED


def cmd_certify(cfg: RunConfig) -> int:
    g = load_algebra(cfg)
    ext = cfg.extension or ("cross-term" if cfg.oscillator is not None else "trivial")
    cert = integrability.certificate(g, samples=cfg.samples, seed=cfg.seed, extension=ext, tol=cfg.tols["commutation"])
    _emit(_dumps(cert.to_dict()), cfg.out)
    print(f"verdict={cert.verdict} rank={cert.rank} commutation_defect={cert.commutation_defect:.3g}", file=sys.stderr)
    return EXIT_OK if cert.verdict == integrability.INTEGRABLE else EXIT_UNDETERMINED


def cmd_involution(cfg: RunConfig) -> int:
    if len(cfg.A_paths) != 2:
        raise InvalidArgument("involution needs two inputs: --A a.json b.json")
    Ai, Aj = (SymmetricMap.from_dict(_read_json(p)) for p in cfg.A_paths)
    defect = integrability.commutation_defect(Ai, Aj)
    doc = {"involution": bool(defect <= cfg.tols["involution"]), "defect": defect}
    _emit(_dumps(doc), cfg.out)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "integrate": cmd_integrate,
    "verify": cmd_verify,
    "certify": cmd_certify,
    "involution": cmd_involution,
}


def _seed_default() -> int:
    raw = os.environ.get("HEISLAX_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heislax", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        nargs = 2 if name == "involution" else None
        p.add_argument("--A", dest="A_paths", nargs=nargs, help="JSON symmetric map, bare matrix or built algebra")
        if name != "involution":
            p.add_argument("--oscillator", type=int, help="use the oscillator algebra of this n")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to $HEISLAX_SEED, then 0)")
        p.add_argument("--out", help="output file (default stdout)")
        for key, value in DEFAULT_TOLS.items():
            p.add_argument(f"--tol-{key}", type=float, default=value)
        if name == "integrate":
            p.add_argument("--x0", help="initial point: path or inline JSON list x..,y..,x_np1")
            p.add_argument("--T", type=float, default=1.0)
            p.add_argument("--dt", type=float, default=1e-3)
            p.add_argument("--method", choices=["exact", "rk4"], default="exact")
        if name == "verify":
            p.add_argument("--perturb", type=float, default=0.0, help="inject a structure-constant error")
        if name in ("verify", "certify"):
            p.add_argument("--samples", type=int, default=20)
        if name == "certify":
            p.add_argument("--extension", choices=["cross-term", "trivial"])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    paths = ns.A_paths
    if isinstance(paths, str):
        paths = (paths,)
    tols = {key: getattr(ns, f"tol_{key}") for key in DEFAULT_TOLS}
    return RunConfig(
        command=ns.command,
        A_paths=tuple(paths or ()),
        oscillator=getattr(ns, "oscillator", None),
        x0=getattr(ns, "x0", None),
        T=getattr(ns, "T", 1.0),
        dt=getattr(ns, "dt", 1e-3),
        method=getattr(ns, "method", "exact"),
        seed=ns.seed if ns.seed is not None else _seed_default(),
        out=ns.out,
        extension=getattr(ns, "extension", None),
        perturb=getattr(ns, "perturb", 0.0),
        samples=getattr(ns, "samples", 20),
        tols=tols,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (InvalidArgument, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
