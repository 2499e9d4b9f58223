"""Command-line front end: ``hyperqm {tables,classify,simulate,fourier,check}``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from typing import Callable, Iterable, TextIO

import numpy as np

from .algebra import AlgebraError, builtin, resolve_algebra, term_label
from .analysis import DEFAULT_SEED, check_ft_conditions, classify
from .relativity import (
    FourVector,
    add_velocities,
    boost,
    check_clifford,
    clifford_report,
    gamma_set,
    minkowski_dot,
    SpinCheckError,
    spin_eigen_check,
)
from .wavefunction import (
    ContractViolation,
    default_grid,
    delta_concentration_ratio,
    evaluate_many,
    kernel_pair,
    make_wave,
    modulus,
    prefactor_table,
    sample,
    schroedinger_residual,
    transform_array,
    TWO_PI,
)

SUITES = ("clifford", "prefactors", "modulus", "schroedinger", "ft", "spin", "lorentz")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """17 significant digits; ``-0`` printed as ``0``."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return format(x, ".17g")


# --- tables -------------------------------------------------------------------


def render_table(spec, style: str = "ascii") -> str:
    labels = spec.basis_labels
    cells = [[term_label(spec, spec.table[r][s]) for s in range(spec.dim)] for r in range(spec.dim)]
    if style == "csv":
        rows = ["*," + ",".join(labels)] + [labels[r] + "," + ",".join(cells[r]) for r in range(spec.dim)]
        return "\n".join(rows) + "\n"
    width = max(len(c) for row in cells for c in row)
    width = max(width, max(len(l) for l in labels))
    head = " " * width + " | " + " ".join(l.rjust(width) for l in labels)
    out = [head, "-" * len(head)]
    for r in range(spec.dim):
        out.append(labels[r].ljust(width) + " | " + " ".join(c.rjust(width) for c in cells[r]))
    return "\n".join(out) + "\n"


def run_tables(args, out: TextIO) -> int:
    out.write(render_table(resolve_algebra(args.algebra), args.format))
    return 0


def run_classify(args, out: TextIO) -> int:
    spec = resolve_algebra(args.algebra)
    out.write(classify(spec, seed=args.seed).to_text())
    return 0


# --- simulate / fourier -------------------------------------------------------


def _open_out(path: str):
    try:
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def run_simulate(args, out: TextIO) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if not args.m > 0:
        raise UsageError("--m must be positive")
    E = args.p * args.p / (2.0 * args.m)
    w = make_wave(args.wave, args.p, E)
    xs = np.linspace(args.x0, args.x1, args.n)
    rows = sample(w, xs, args.t)
    with _open_out(args.out) as fh:
        fh.write("x,t,c0,c1,c2,c3\n")
        for x, v in rows:
            fh.write(",".join(fmt(c) for c in (x, args.t, *v.coeffs)) + "\n")
    residual = schroedinger_residual(args.wave, w, args.m, grid=[(x, args.t) for x, _ in rows])
    out.write(f"residual={fmt(residual)}\n")
    return 0


def run_fourier(args, out: TextIO) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if not args.L > 0:
        raise UsageError("--L must be positive")
    alpha, beta = kernel_pair(args.kernel)
    if not check_ft_conditions(alpha, beta):
        raise UsageError(f"kernel {args.kernel} is not admissible")
    w = make_wave(args.wave, args.p, 0.0)
    xs = np.linspace(-args.L / 2, args.L / 2, args.n)
    values = evaluate_many(w, xs)
    p_grid = args.p + (TWO_PI / args.L) * (np.arange(args.n) - args.n // 2)
    spectrum = transform_array(xs, values, alpha, beta, p_grid)
    with _open_out(args.out) as fh:
        fh.write("p,c0,c1,c2,c3\n")
        for p, row in zip(p_grid, spectrum):
            fh.write(",".join(fmt(c) for c in (p, *row)) + "\n")
    ratio = delta_concentration_ratio(args.wave, args.kernel, args.L, args.n, args.p)
    out.write(f"ratio={fmt(ratio)}\n")
    return 0


# --- check suites -------------------------------------------------------------

Check = tuple[str, Callable[[], "str | None"]]


def _suite_clifford() -> Iterable[Check]:
    report = clifford_report(gamma_set())
    _, failures = check_clifford(gamma_set())
    where = {(mu, rho): pos for mu, rho, pos in failures}
    for mu, rho, ok in report:
        yield f"gamma[{mu},{rho}]", (lambda ok=ok, key=(mu, rho): None if ok else f"entry {where[key]}")


_EXPECTED_PREFACTORS = {
    ("+j", "C"): "-kp",
    ("+j", "J"): "-kp = -p",
    ("-k", "C"): "-jp",
    ("-k", "J"): "-jp = -ip",
    ("+k", "C"): "jp",
    ("+k", "J"): "jp = ip",
}


def _suite_prefactors() -> Iterable[Check]:
    for line in prefactor_table():
        op = f"{'+' if line.op.sign > 0 else '-'}{line.op.prefactor}"
        want = _EXPECTED_PREFACTORS[(op, line.wave_tag)]

        def check(line=line, want=want):
            got = line.describe(1.0).split(" = ", 1)[1].rsplit(" phi_", 1)[0]
            return None if got == want else f"got {got}, want {want}"

        yield f"prefactor[{op},phi_{line.wave_tag}]", check


def _modulus_check(tag: str, target_label: str) -> Callable[[], str | None]:
    def check():
        w = make_wave(tag, 1.0, 0.5)
        target = w.algebra.unit(target_label)
        xs = np.linspace(-10.0, 10.0, 1000)
        ts = np.linspace(0.0, 5.0, 1000)
        for x, t in zip(xs, ts):
            m = modulus(w, float(x), float(t))
            if not m.allclose(target, 1e-9):
                return f"{m} at x={fmt(x)} t={fmt(t)}"
        return None

    return check


def _suite_modulus() -> Iterable[Check]:
    yield "phiC_modulus", _modulus_check("C", "1")
    yield "phiJ_modulus", _modulus_check("J", "k")


def _suite_schroedinger() -> Iterable[Check]:
    for form, tag in (("C", "C"), ("J", "J"), ("C", "J")):

        def check(form=form, tag=tag):
            r = schroedinger_residual(form, make_wave(tag, 1.0, 0.5), 1.0, default_grid())
            return None if r < 1e-9 else f"residual {fmt(r)}"

        yield f"{form}_form_phi{tag}", check


def _suite_ft() -> Iterable[Check]:
    for tag in ("C", "J"):
        alpha, beta = kernel_pair(tag)
        yield f"ft_admissible[{alpha},{beta}]", (lambda a=alpha, b=beta: None if check_ft_conditions(a, b) else "rejected")
    q = builtin("quaternion")
    units = q.units()
    for a, b in itertools.product(units[1:], units):
        yield f"ft_rejects[{a},{b}]", (lambda a=a, b=b: "accepted" if check_ft_conditions(a, b) else None)


def _suite_spin() -> Iterable[Check]:
    for r, sign in itertools.product((1, 2, 3), (1, -1)):

        def check(r=r, sign=sign):
            try:
                spin_eigen_check(r, sign)
            except SpinCheckError as exc:
                return str(exc)
            return None

        yield f"spin[sigma{r},{'+' if sign > 0 else '-'}]", check


def _suite_lorentz() -> Iterable[Check]:
    for v in (0.0, 0.5, -0.5, 0.9, -0.9, 0.99, -0.99):

        def check(v=v):
            err = float(np.max(np.abs(boost(v) @ boost(-v) - np.eye(2))))
            return None if err < 1e-12 else f"max error {fmt(err)}"

        yield f"boost_inverse[v={fmt(v)}]", check

    def closure():
        for v1, v2 in itertools.product((-0.9, -0.5, 0.0, 0.3, 0.99), repeat=2):
            err = float(np.max(np.abs(boost(v1) @ boost(v2) - boost(add_velocities(v1, v2)).matrix)))
            if err > 1e-10:
                return f"v1={fmt(v1)} v2={fmt(v2)} error {fmt(err)}"
        return None

    def invariance():
        x = FourVector((2.0, 1.5, -0.3, 0.7))
        for v in (0.5, -0.9, 0.99):
            y = boost(v).apply(x)
            if not math.isclose(minkowski_dot(x, x), minkowski_dot(y, y), rel_tol=1e-10, abs_tol=1e-10):
                return f"interval changed under v={fmt(v)}"
        return None

    yield "velocity_addition", closure
    yield "minkowski_invariance", invariance


_SUITE_FUNCS = {
    "clifford": _suite_clifford,
    "prefactors": _suite_prefactors,
    "modulus": _suite_modulus,
    "schroedinger": _suite_schroedinger,
    "ft": _suite_ft,
    "spin": _suite_spin,
    "lorentz": _suite_lorentz,
}


def run_suite(name: str) -> tuple[list[str], bool]:
    names = SUITES if name == "all" else (name,)
    lines, ok = [], True
    for suite in names:
        for label, check in _SUITE_FUNCS[suite]():
            try:
                detail = check()
            except (AlgebraError, ContractViolation, ArithmeticError) as exc:
                detail = f"{type(exc).__name__}: {exc}"
            if detail is None:
                lines.append(f"{label}: ok")
            else:
                ok = False
                lines.append(f"{label}: FAIL({detail})")
    return lines, ok


def run_check(args, out: TextIO) -> int:
    lines, ok = run_suite(args.suite)
    out.write("\n".join(lines) + "\n")
    return 0 if ok else 1


# --- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperqm", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled checks (default 42)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="print a multiplication table")
    p.add_argument("--algebra", required=True, help="builtin name or @path/to/spec.txt")
    p.add_argument("--format", choices=("ascii", "csv"), default="ascii")
    p.set_defaults(func=run_tables)

    p = sub.add_parser("classify", help="report algebraic properties")
    p.add_argument("--algebra", required=True)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.set_defaults(func=run_classify)

    p = sub.add_parser("simulate", help="sample a plane wave to CSV")
    p.add_argument("--wave", choices=("C", "J"), required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--x1", type=float, default=TWO_PI)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("fourier", help="transform a plane wave and report peak growth")
    p.add_argument("--wave", choices=("C", "J"), required=True)
    p.add_argument("--kernel", choices=("C", "J"), required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--L", type=float, default=40 * math.pi)
    p.add_argument("--n", type=int, default=2048)
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_fourier)

    p = sub.add_parser("check", help="run verification suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), required=True)
    p.set_defaults(func=run_check)
    return parser


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, AlgebraError, OSError) as exc:
        print(f"hyperqm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
