"""Command-line front end.

Examples::

    nhqm confined spectrum --T 12 --mu 1 --N 40 --format csv
    nhqm table 1
    nhqm two-level evolve --mu 1 --psi0 1,0 --t 0,1,2
    nhqm shoot --T 12 --mu 1 --N 40 --states 4
    nhqm asymptotics --m 1,3,5
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, asymptotics, confined, shooting, tables, two_level
from .output import emit, spectrum_records, sweep_records


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _complexes(text: str) -> list[complex]:
    """Comma-separated Python complex literals: ``1,0`` or ``1+2j,-0.5j``."""
    try:
        return [complex(v.replace(" ", "")) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")
    p.add_argument("--seed", type=int, default=0)


def _confined_flags(p, lists=False):
    if lists:
        p.add_argument("--T", type=_floats, required=True)
        p.add_argument("--mu", type=_floats, required=True)
        p.add_argument("--N", type=_ints, required=True)
    else:
        p.add_argument("--T", type=float, required=True)
        p.add_argument("--mu", type=float, required=True)
        p.add_argument("--N", type=int, required=True)
    p.add_argument("--coupling", choices=[c.value for c in confined.Coupling], default=confined.DEFAULT_COUPLING.value)
    p.add_argument("--tol-im", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nhqm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    tl = sub.add_parser("two-level", help="2x2 model H(mu)")
    tl.add_argument("action", choices=["eig", "evolve", "metric", "fixed-basis"])
    tl.add_argument("--mu", type=float, required=True)
    tl.add_argument("--psi0", type=_complexes, default=[1, 0])
    tl.add_argument("--t", type=_floats, default=[0.0], help="comma-separated times")
    tl.add_argument("--tau", type=float, default=None, help="metric horizon; defaults to the largest t")
    _common(tl)

    cf = sub.add_parser("confined", help="Galerkin model of -D^2 + i mu x in a box")
    cf.add_argument("action", choices=["assemble", "spectrum", "evolve", "wavefunction"])
    _confined_flags(cf)
    cf.add_argument("--psi0", type=_complexes, default=None, help="initial coefficients (default: random, see --seed)")
    cf.add_argument("--t", type=_floats, default=[0.0])
    cf.add_argument("--state", type=int, default=1, help="eigenstate plotted by 'wavefunction'")
    cf.add_argument("--points", type=int, default=201, help="grid size for 'wavefunction'")
    _common(cf)

    sw = sub.add_parser("sweep", help="spectra over a (T, mu, N) grid")
    _confined_flags(sw, lists=True)
    sw.add_argument("--states", type=int, default=10)
    _common(sw)

    tb = sub.add_parser("table", help="reproduce a published table")
    tb.add_argument("number", type=int, choices=list(tables.TABLES))
    tb.add_argument("--coupling", choices=[c.value for c in confined.Coupling], default=confined.DEFAULT_COUPLING.value)
    _common(tb)

    sh = sub.add_parser("shoot", help="refine Galerkin eigenvalues by ODE shooting")
    _confined_flags(sh)
    sh.add_argument("--states", type=int, default=4)
    sh.add_argument("--step", type=float, default=None)
    _common(sh)

    asy = sub.add_parser("asymptotics", help="tail parameters for -D^2 + i x^m")
    asy.add_argument("--m", type=_ints, default=[1, 3, 5, 7, 9])
    _common(asy)
    return parser


def _split(prefix, z):
    return {f"{prefix}_re": float(np.real(z)), f"{prefix}_im": float(np.imag(z))}


def _vector(prefix, v):
    row = {}
    for i, z in enumerate(v):
        row.update(_split(f"{prefix}{i}", z))
    return row


def _check_positive(**kw):
    for name, v in kw.items():
        if v is not None and not v > 0:
            raise UsageError(f"--{name} must be positive")


def _check_times(ts):
    if any(t < 0 for t in ts):
        raise UsageError("--t values must be non-negative")


def _two_level(args):
    model = two_level.TwoLevelModel(args.mu)
    _check_times(args.t)
    if args.action == "eig":
        es = two_level.eigenpairs(model)
        if isinstance(es, two_level.ExceptionalReport):
            return [
                {"mu": model.mu, "regime": model.regime.value, "vector": "eigen", **_split("lambda", es.eigenvalue), **_vector("u", es.u1)},
                {"mu": model.mu, "regime": model.regime.value, "vector": "auxiliary", **_split("lambda", es.eigenvalue), **_vector("u", es.u2)},
            ]
        return [
            {"mu": model.mu, "regime": model.regime.value, "vector": name, **_split("lambda", lam), **_vector("u", u)}
            for name, lam, u in (("lambda1", es.lambda1, es.u1), ("lambda2", es.lambda2, es.u2))
        ]
    if args.action == "fixed-basis":
        M = two_level.fixed_basis_system(model.mu)
        return [{"mu": model.mu, "row": i + 1, "col": j + 1, **_split("m", M[i, j])} for i in range(2) for j in range(2)]
    if args.action == "evolve":
        if len(args.psi0) != 2:
            raise UsageError("--psi0 needs two components")
        rows = []
        for t in args.t:
            psi = two_level.evolve(model, args.psi0, t)
            rows.append({"t": t, **_vector("psi", psi), "norm": float(np.linalg.norm(psi))})
        return rows
    tau = args.tau if args.tau is not None else max(max(args.t), 0.0) or 1.0
    _check_positive(tau=tau)
    rows = []
    for t in args.t:
        r, s = two_level.metric_factors(model, tau, t)
        h1 = two_level.transformed_hamiltonian(model, tau, t)
        rows.append({"t": t, "tau": tau, "r": r, "s": s, **_split("h11", h1[0, 0]), **_split("h22", h1[1, 1])})
    return rows


def _initial_coeffs(args, dim):
    if args.psi0 is not None:
        if len(args.psi0) != dim:
            raise UsageError(f"--psi0 needs {dim} components")
        return np.array(args.psi0, dtype=complex)
    rng = np.random.default_rng(args.seed)
    c = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return c / np.linalg.norm(c)


def _confined(args):
    _check_positive(T=args.T, N=args.N)
    model = confined.assemble(args.T, args.mu, args.N, args.coupling)
    if args.action == "assemble":
        h = model.matrix
        return [
            {"row": i + 1, "col": j + 1, "re": float(h[i, j].real), "im": float(h[i, j].imag)}
            for i, j in zip(*np.nonzero(h))
        ]
    if args.action == "spectrum":
        return spectrum_records(confined.spectrum(model, args.tol_im))
    if args.action == "evolve":
        _check_times(args.t)
        c0 = _initial_coeffs(args, model.dim)
        rows = []
        for t in args.t:
            c = confined.evolve_confined(model, c0, t)
            rows.extend({"t": t, "index": k + 1, "re": float(z.real), "im": float(z.imag)} for k, z in enumerate(c))
        return rows
    # wavefunction
    if not 1 <= args.state <= model.dim:
        raise UsageError(f"--state must be in 1..{model.dim}")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if args.psi0 is not None:
        coeffs = _initial_coeffs(args, model.dim)
    else:
        from .linalg import eig

        coeffs = eig(model.matrix).eigenvectors[:, args.state - 1]
    x = np.linspace(-args.T / 2, args.T / 2, args.points)
    psi = confined.wavefunction_eval(model, coeffs, x)
    return [
        {"x": float(xi), "re": float(z.real), "im": float(z.imag), "density": float(abs(z) ** 2)}
        for xi, z in zip(x, psi)
    ]


def _sweep(args):
    for T in args.T:
        _check_positive(T=T)
    for N in args.N:
        _check_positive(N=N)
    result = confined.sweep(args.T, args.mu, args.N, args.coupling, args.tol_im)
    return sweep_records(result, args.states)


def _table(args):
    rows = []
    for c in tables.reproduce(args.number, args.coupling):
        e = c.expected
        rows.append(
            {
                "table": e.table, "column": e.column, "row": e.row, "T": e.T, "mu": e.mu, "N": e.N,
                "state": e.state, "quantity": e.quantity, "expected": e.text, "computed": c.computed,
                "im": c.computed_im, "label": c.label, "abs_error": c.error,
            }
        )
    return rows


def _shoot(args):
    _check_positive(T=args.T, N=args.N, step=args.step)
    spec = confined.spectrum(confined.assemble(args.T, args.mu, args.N, args.coupling), args.tol_im)
    problem = shooting.ShootingProblem(args.T, args.mu, step=args.step)
    rows = []
    for k, st in enumerate(spec.states[: args.states]):
        E = shooting.refine(problem, st.value)
        rows.append({"state": k + 1, **_split("seed", st.value), **_split("refined", E), "shift": abs(E - st.value)})
    return rows


def _asymptotics(args):
    rows = []
    for m in args.m:
        try:
            e = asymptotics.tail_parameters(m)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        bp = e.b**2 * e.p**2
        rows.append(
            {"m": m, "p": e.p, **_split("b", e.b), "q": e.q, **_split("b2p2", bp), "consistent": asymptotics.consistency_flag(m)}
        )
    return rows


HANDLERS = {
    "two-level": _two_level,
    "confined": _confined,
    "sweep": _sweep,
    "table": _table,
    "shoot": _shoot,
    "asymptotics": _asymptotics,
}


def _error(kind, exc, code):
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc), "exit": code}
    sys.stderr.write(json.dumps(record) + "\n")
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _error("usage", exc, 2)
    config = {k: v for k, v in vars(args).items() if k not in ("out",)}
    try:
        records = HANDLERS[args.command](args)
    except UsageError as exc:
        return _error("usage", exc, 2)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return _error("numerical", exc, 1)
    payload = emit(records, args.format, {"config": _jsonable(config)})
    try:
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(payload)
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
    except OSError as exc:
        return _error("io", exc, 1)
    return 0


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
