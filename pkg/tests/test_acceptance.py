"""Acceptance criteria 1-12.

Run with ``pytest tests/test_acceptance.py -v`` (or execute this file); a
PASS/FAIL line per criterion is printed in the summary section.
"""

from __future__ import annotations

import io
import itertools
import math
import re
import time

import numpy as np
import pytest

from hyperqm.algebra import builtin, mul
from hyperqm.analysis import check_ft_conditions
from hyperqm.cli import main
from hyperqm.relativity import (
    ETA,
    add_velocities,
    boost,
    check_clifford,
    gamma_set,
    spin_eigen_check,
)
from hyperqm.wavefunction import (
    apply,
    delta_concentration_ratio,
    evaluate,
    expectation,
    gaussian,
    generalized_ft,
    kernel_pair,
    make_phi_C,
    make_phi_J,
    make_wave,
    modulus,
    operator,
    parseval_check,
    periodic_grid,
    prefactor_table,
    reciprocal_grid,
    sample,
    schroedinger_residual,
)

criterion = pytest.mark.criterion


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


# --- 1. multiplication tables ----------------------------------------------------

# Reference grids in LaTeX array notation, row times column.
REFERENCE_TABLES = {
    "quaternion": r"""
         & 1 & i_1 & i_2 & i_3
        1 & 1 & i_1 & i_2 & i_3
        i_1 & i_1 & -1 & i_3 & -i_2
        i_2 & i_2 & -i_3 & -1 & i_1
        i_3 & i_3 & i_2 & -i_1 & -1
    """,
    "biquaternion": r"""
         & 1 & i_0 & i_1 & i_2 & i_3 & \sigma_1 & \sigma_2 & \sigma_3
        1 & 1 & i_0 & i_1 & i_2 & i_3 & \sigma_1 & \sigma_2 & \sigma_3
        i_0 & i_0 & -1 & \sigma_1 & \sigma_2 & \sigma_3 & -i_1 & -i_2 & -i_3
        i_1 & i_1 & \sigma_1 & -1 & i_3 & -i_2 & -i_0 & \sigma_3 & -\sigma_2
        i_2 & i_2 & \sigma_2 & -i_3 & -1 & i_1 & -\sigma_3 & -i_0 & \sigma_1
        i_3 & i_3 & \sigma_3 & i_2 & -i_1 & -1 & \sigma_2 & -\sigma_1 & -i_0
        \sigma_1 & \sigma_1 & -i_1 & -i_0 & \sigma_3 & -\sigma_2 & 1 & -i_3 & i_2
        \sigma_2 & \sigma_2 & -i_2 & -\sigma_3 & -i_0 & \sigma_1 & i_3 & 1 & -i_1
        \sigma_3 & \sigma_3 & -i_3 & \sigma_2 & -\sigma_1 & -i_0 & -i_2 & i_1 & 1
    """,
    "bicomplex_canonical": r"""
         & 1 & i_0 & i_1 & \sigma
        1 & 1 & i_0 & i_1 & \sigma
        i_0 & i_0 & -1 & \sigma & -i_1
        i_1 & i_1 & \sigma & -1 & -i_0
        \sigma & \sigma & -i_1 & -i_0 & 1
    """,
    "bicomplex_oblique": r"""
         & 1 & i & j & k
        1 & 1 & i & j & k
        i & i & -1 & -k & j
        j & j & -k & -k & j
        k & k & j & j & k
    """,
}


def _latex_label(cell: str) -> str:
    return re.sub(r"\\|_|~|\s", "", cell)


def reference_grid(name):
    rows = [[_latex_label(c) for c in line.split("&")] for line in REFERENCE_TABLES[name].strip().splitlines()]
    return rows[0][1:], {(row[0], col): cell for row in rows[1:] for col, cell in zip(rows[0][1:], row[1:])}


@criterion("1", "multiplication tables reproduced cell for cell, < 1 s")
def test_c01_tables():
    start = time.perf_counter()
    cells = 0
    for name in REFERENCE_TABLES:
        code, text = cli("tables", "--algebra", name, "--format", "csv")
        assert code == 0
        lines = [line.split(",") for line in text.splitlines()]
        labels, expected = reference_grid(name)
        assert lines[0][1:] == labels
        for row in lines[1:]:
            for col, cell in zip(labels, row[1:]):
                assert cell == expected[(row[0], col)], (name, row[0], col)
                cells += 1
        code, ascii_text = cli("tables", "--algebra", name)
        assert code == 0 and len(ascii_text.splitlines()) == len(labels) + 2
    assert cells == 16 + 64 + 16 + 16
    assert time.perf_counter() - start < 1.0


# --- 2. property table -------------------------------------------------------------

PROPERTY_ROWS = {
    "complex": ("yes", "yes", "yes", "yes"),
    "dual": ("yes", "yes", "yes", "no"),
    "split_complex": ("yes", "yes", "yes", "no"),
    "quaternion": ("yes", "yes", "no", "yes"),
    "biquaternion": ("yes", "yes", "no", "no"),
    "bicomplex_canonical": ("yes", "yes", "yes", "no"),
}


@criterion("2", "property table for the six builtins, exact, < 5 s")
def test_c02_properties():
    start = time.perf_counter()
    for name, row in PROPERTY_ROWS.items():
        code, text = cli("classify", "--algebra", name)
        assert code == 0
        lines = set(text.splitlines())
        for prop, value in zip(("distributive", "associative", "commutative", "reversible"), row):
            assert f"{prop}={value}" in lines, (name, prop)
    assert time.perf_counter() - start < 5.0


# --- 3. Clifford ---------------------------------------------------------------------


@criterion("3", "16 Dirac anticommutators in exact integers, < 1 s")
def test_c03_clifford():
    start = time.perf_counter()
    gammas = gamma_set()
    ok, failures = check_clifford(gammas)
    assert ok and not failures
    assert np.array_equal(np.diag(ETA), [1, -1, -1, -1])
    for g in gammas:
        assert g.integer_coords().dtype == np.int64
    code, text = cli("check", "--suite", "clifford")
    assert code == 0
    assert text.splitlines() == [f"gamma[{m},{r}]: ok" for m, r in itertools.product(range(4), repeat=2)]
    assert time.perf_counter() - start < 1.0


# --- 4. Schroedinger -------------------------------------------------------------------


@criterion("4", "Schroedinger residuals < 1e-9 at p=1, m=1, E=0.5")
def test_c04_schroedinger():
    assert schroedinger_residual("C", make_phi_C(1.0, 0.5), 1.0) < 1e-9
    assert schroedinger_residual("J", make_phi_J(1.0, 0.5), 1.0) < 1e-9


# --- 5. prefactor table ------------------------------------------------------------------


@criterion("5", "six operator prefactor lines and the three aliases on phi_J, exact")
def test_c05_prefactors():
    o = builtin("bicomplex_oblique")
    one, i, j, k = o.units()
    lines = [line.describe(1.0) for line in prefactor_table(1.0)]
    assert lines == [
        "+j d/dx phi_C = -kp phi_C",
        "+j d/dx phi_J = -kp = -p phi_J",
        "-k d/dx phi_C = -jp phi_C",
        "-k d/dx phi_J = -jp = -ip phi_J",
        "+k d/dx phi_C = jp phi_C",
        "+k d/dx phi_J = jp = ip phi_J",
    ]
    # exact derivation: sign * P * alpha * beta == lam * alpha in integer arithmetic
    waves = {"C": (one, i), "J": (k, j)}
    expected = {
        ("+j", "C"): [-k],
        ("+j", "J"): [-k, -one],
        ("-k", "C"): [-j],
        ("-k", "J"): [-j, -i],
        ("+k", "C"): [j],
        ("+k", "J"): [j, i],
    }
    for (op, tag), lams in expected.items():
        sign = 1 if op[0] == "+" else -1
        alpha, beta = waves[tag]
        derived = mul(o.unit(op[1]), mul(alpha, beta)) * sign
        for lam in lams:
            assert mul(lam, alpha) == derived, (op, tag, lam)
    assert mul(-one, i) != mul(-k, i)


# --- 6. modulus ---------------------------------------------------------------------------


@criterion("6", "dagger modulus of phi_J is k and of phi_C is 1 at 1000 points")
def test_c06_modulus():
    o = builtin("bicomplex_oblique")
    rng = np.random.default_rng(42)
    pts = rng.uniform(-20.0, 20.0, (1000, 2))
    wJ, wC = make_phi_J(1.0, 0.5), make_phi_C(1.0, 0.5)
    for x, t in pts:
        assert modulus(wJ, x, t).allclose(o.unit("k"), 1e-9)
        assert modulus(wC, x, t).allclose(o.one(), 1e-9)


# --- 7. expectation values -----------------------------------------------------------------


@criterion("7", "expectation densities p, kp, kE constant over the grid")
def test_c07_expectations():
    o = builtin("bicomplex_oblique")
    p = 1.5
    E = p * p / 2
    assert expectation(operator("-i", "x"), make_phi_C(p, E), tol=1e-9).allclose(o.one() * p, 1e-9)
    assert expectation(operator("-i", "x"), make_phi_J(p, E), tol=1e-9).allclose(o.unit("k") * p, 1e-9)
    assert expectation(operator("+i", "t"), make_phi_J(p, E), tol=1e-9).allclose(o.unit("k") * E, 1e-9)


# --- 8. FT admissibility ------------------------------------------------------------------


@criterion("8", "kernel admissibility: (1,i), (k,j) accepted; quaternion pairs with alpha != 1 rejected")
def test_c08_ft_admissibility():
    o = builtin("bicomplex_oblique")
    assert check_ft_conditions(o.one(), o.unit("i"))
    assert check_ft_conditions(o.unit("k"), o.unit("j"))
    q = builtin("quaternion")
    signed = [s * u for u in q.units() for s in (1, -1)]
    for alpha, beta in itertools.product(signed, signed):
        if alpha == q.one():
            continue
        assert not check_ft_conditions(alpha, beta), (alpha, beta)


# --- 9. concentration and Parseval ------------------------------------------------------------

L_DOMAIN, N_POINTS = 40 * math.pi, 2048
_c09_clock: list[float] = []


@criterion("9", "peak growth: matched > 1.8, mismatched < 1.2; Parseval 1e-6; < 10 s")
def test_c09_matched_kernel_ratio():
    start = time.perf_counter()
    ratio = delta_concentration_ratio("J", "J", L_DOMAIN, N_POINTS)
    _c09_clock.append(time.perf_counter() - start)
    assert ratio > 1.8


@criterion("9", "peak growth: matched > 1.8, mismatched < 1.2; Parseval 1e-6; < 10 s")
def test_c09_mismatched_kernel_ratio():
    start = time.perf_counter()
    ratio = delta_concentration_ratio("J", "C", L_DOMAIN, N_POINTS)
    _c09_clock.append(time.perf_counter() - start)
    assert ratio < 1.2, f"J wave under the C kernel grows by {ratio:.6f}"


@criterion("9", "peak growth: matched > 1.8, mismatched < 1.2; Parseval 1e-6; < 10 s")
def test_c09_parseval():
    start = time.perf_counter()
    xs = periodic_grid(L_DOMAIN, N_POINTS)
    samples = sample(make_phi_C(2.0, 0.0), xs, window=gaussian(3.0))
    spectrum = generalized_ft(samples, *kernel_pair("C"), reciprocal_grid(xs, center=0.0))
    lhs, rhs = parseval_check(samples, spectrum)
    _c09_clock.append(time.perf_counter() - start)
    assert abs(lhs - rhs) <= 1e-6 * lhs
    assert sum(_c09_clock) < 10.0


# --- 10. eigen-biquaternions ---------------------------------------------------------------


@criterion("10", "sigma_r (1 +/- sigma_r) = +/-(1 +/- sigma_r) and (1+sigma_r)(1-sigma_r) = 0, exact")
def test_c10_spin():
    bq = builtin("biquaternion")
    for r, sign in itertools.product((1, 2, 3), (1, -1)):
        state, lam, partner = spin_eigen_check(r, sign)
        s = bq.unit(f"sigma{r}")
        assert mul(s, state) == state * lam
        assert mul(bq.one() + s, bq.one() - s) == bq.zero()
        assert mul(state, partner) == bq.zero()


# --- 11. Lorentz ----------------------------------------------------------------------------


@criterion("11", "boost(v) boost(-v) = 1 to 1e-12; velocity addition closes to 1e-10")
def test_c11_lorentz():
    vs = (0.0, 0.5, -0.5, 0.9, -0.9, 0.99, -0.99)
    for v in vs:
        assert np.max(np.abs(boost(v) @ boost(-v) - np.eye(2))) < 1e-12
    for v1, v2 in itertools.product(vs, repeat=2):
        composed = boost(v1) @ boost(v2)
        assert np.max(np.abs(composed - boost(add_velocities(v1, v2)).matrix)) < 1e-10


# --- 12. finite differences -------------------------------------------------------------------


def _fd_error(w, axis, h, x=0.37, t=0.81):
    dx, dt = (h, 0.0) if axis == "x" else (0.0, h)
    fd = (evaluate(w, x + dx, t + dt) - evaluate(w, x - dx, t - dt)) / (2 * h)
    return (fd - evaluate(apply(operator("+1", axis), w).wave, x, t)).max_abs()


@criterion("12", "central differences converge at second order (ratio in [3.5, 4.5])")
def test_c12_finite_differences():
    for tag, axis in itertools.product("CJ", "xt"):
        w = make_wave(tag, 1.0, 0.5)
        ratio = _fd_error(w, axis, 1e-3) / _fd_error(w, axis, 5e-4)
        assert 3.5 <= ratio <= 4.5, (tag, axis, ratio)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
