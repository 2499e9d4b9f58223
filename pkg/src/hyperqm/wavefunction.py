"""Plane waves ``alpha * exp(beta (p x - E t))`` over an algebra, differential
operators with algebra-valued prefactors, and the generalized Fourier
transform with kernel ``alpha * exp(-beta p x)``.

Units are natural (hbar = 1). Waves are kept symbolic, so derivatives are
exact; sampling happens only when a wave is evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import (
    DAGGER,
    AlgebraError,
    ConvergenceError,
    Element,
    builtin,
    conjugate,
    exp,
    left_mul_matrix,
    mul,
    oblique_to_canonical_matrix,
    right_mul_matrix,
)
from .analysis import OscillationAnalysis, analyze_oscillation_generator, check_ft_conditions

TWO_PI = 2.0 * math.pi


class ContractViolation(RuntimeError):
    """A quantity that must be constant over the grid was not."""


@dataclass(frozen=True)
class PlaneWave:
    amplitude: Element
    generator: Element
    p: float
    E: float
    analysis: OscillationAnalysis = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.amplitude.algebra != self.generator.algebra:
            raise AlgebraError("amplitude and generator must share an algebra")
        object.__setattr__(self, "analysis", analyze_oscillation_generator(self.generator))

    @property
    def algebra(self):
        return self.amplitude.algebra

    def phase(self, x: float, t: float) -> float:
        return self.p * x - self.E * t

    @cached_property
    def period(self) -> float | None:
        """Phase period ``2 pi / lam``, or None when ``exp(beta s)`` is not periodic in ``s``.

        ``exp(beta s) = 1 - eps + eps cos(lam s) + beta/lam sin(lam s)`` needs ``eps beta = beta``.
        """
        eps, beta = self.analysis.idempotent, self.generator
        if mul(eps, beta).allclose(beta, 1e-12 * (1.0 + beta.max_abs())):
            return TWO_PI / self.analysis.lam
        return None

    def __call__(self, x: float, t: float = 0.0) -> Element:
        return evaluate(self, x, t)


def make_phi_C(p: float, E: float) -> PlaneWave:
    spec = builtin("bicomplex_oblique")
    return PlaneWave(spec.one(), spec.unit("i"), p, E)


def make_phi_J(p: float, E: float) -> PlaneWave:
    spec = builtin("bicomplex_oblique")
    return PlaneWave(spec.unit("k"), spec.unit("j"), p, E)


def make_wave(tag: str, p: float, E: float) -> PlaneWave:
    if tag == "C":
        return make_phi_C(p, E)
    if tag == "J":
        return make_phi_J(p, E)
    raise AlgebraError(f"unknown wave {tag!r}; use C or J")


def evaluate(w: PlaneWave, x: float, t: float) -> Element:
    """``alpha * exp(beta * (p x - E t))`` by the power series, after reducing the phase by whole periods."""
    s = w.phase(x, t)
    period = w.period
    if period is not None:
        s = math.remainder(s, period)
    return mul(w.amplitude, exp(s * w.generator, tol=1e-12))


def evaluate_many(w: PlaneWave, xs: Sequence[float], t: float = 0.0, tol: float = 1e-12, max_terms: int = 200) -> np.ndarray:
    """:func:`evaluate` over many ``x`` at once; one coefficient row per point.

    Sums the same series for every point, stopping when the stopping rule of
    :func:`exp` holds at all of them.
    """
    s = w.p * np.asarray(xs, dtype=float) - w.E * t
    period = w.period
    if period is not None:
        s = np.remainder(s + period / 2, period) - period / 2
    gen = left_mul_matrix(w.generator)
    power_vec = w.algebra.one().coeffs.copy()
    coef = np.ones_like(s)
    total = np.tile(power_vec, (len(s), 1))
    for n in range(1, max_terms):
        power_vec = gen @ power_vec
        coef = coef * s / n
        term = np.outer(coef, power_vec)
        total += term
        if np.all(np.max(np.abs(term), axis=1) < tol * (1.0 + np.max(np.abs(total), axis=1))):
            return total @ left_mul_matrix(w.amplitude).T
    raise ConvergenceError(f"exp series did not converge in {max_terms} terms")


# --- operators --------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorSpec:
    """``sign * prefactor * d/d(axis)``."""

    prefactor: Element
    axis: str
    sign: int = 1

    def __post_init__(self):
        if self.axis not in ("x", "t"):
            raise AlgebraError(f"axis must be 'x' or 't', got {self.axis!r}")
        if self.sign not in (1, -1):
            raise AlgebraError("sign must be +1 or -1")
        if self.prefactor.is_zero():
            raise AlgebraError("prefactor must be nonzero")

    def __str__(self):
        return f"{'+' if self.sign > 0 else '-'}{self.prefactor} d/d{self.axis}"


def operator(text: str, axis: str, algebra: str = "bicomplex_oblique") -> OperatorSpec:
    """Shorthand: ``operator("-i", "x")`` is the momentum operator ``-i d/dx``."""
    sign = -1 if text.startswith("-") else 1
    label = text.lstrip("+-") or "1"
    return OperatorSpec(builtin(algebra).unit(label), axis, sign)


@dataclass(frozen=True)
class ApplyResult:
    wave: PlaneWave
    eigenvalue: Element | None
    ambiguous_with: Element | None = None


def _derivative_amplitude(w: PlaneWave, axis: str) -> Element:
    rate = w.p if axis == "x" else -w.E
    return mul(w.amplitude, w.generator) * rate


def _reference_unit(spec) -> Element | None:
    """First basis unit squaring to -1; spans the plane where alternative eigenvalues are sought."""
    one = spec.one()
    for u in spec.units()[1:]:
        if mul(u, u) == -one:
            return u
    return None


def _solve_eigenvalue(alpha: Element, target: Element) -> tuple[Element | None, Element | None]:
    """Solve ``lam * alpha = target``.

    Returns the minimum-norm solution (norm taken in canonical coordinates for
    bicomplex numbers, where the ideals are orthogonal) and, if the solution is
    not unique, an alternative one.
    """
    spec = alpha.algebra
    R = right_mul_matrix(alpha)
    M = oblique_to_canonical_matrix() if spec.name == "bicomplex_oblique" else np.eye(spec.dim)
    Minv = np.linalg.inv(M)
    y = target.coeffs
    lam_c, *_ = np.linalg.lstsq(R @ Minv, y, rcond=None)
    lam = Minv @ lam_c
    if np.max(np.abs(R @ lam - y)) > 1e-9 * (1.0 + np.max(np.abs(y))):
        return None, None
    lam_el = Element(spec, np.where(np.abs(lam) < 1e-14, 0.0, lam))

    s = np.linalg.svd(R, compute_uv=False)
    if s[-1] > 1e-10 * spec.dim * max(1.0, s[0]):
        return lam_el, None

    u = _reference_unit(spec)
    if u is not None:
        P = np.column_stack([spec.one().coeffs, u.coeffs])
        ab, *_ = np.linalg.lstsq(R @ P, y, rcond=None)
        alt = P @ ab
        if np.max(np.abs(R @ alt - y)) <= 1e-9 * (1.0 + np.max(np.abs(y))) and np.max(np.abs(alt - lam)) > 1e-9:
            return lam_el, Element(spec, np.where(np.abs(alt) < 1e-14, 0.0, alt))
    _, _, vt = np.linalg.svd(R)
    kernel_vec = vt[-1] / np.max(np.abs(vt[-1]))
    return lam_el, Element(spec, lam + kernel_vec)


def apply(op: OperatorSpec, w: PlaneWave) -> ApplyResult:
    """Apply ``op`` to ``w`` analytically and read off the eigenvalue, if any."""
    if op.prefactor.algebra != w.algebra:
        raise AlgebraError("operator and wave live in different algebras")
    new_amp = mul(op.prefactor, _derivative_amplitude(w, op.axis)) * op.sign
    lam, alt = _solve_eigenvalue(w.amplitude, new_amp)
    return ApplyResult(replace(w, amplitude=new_amp), lam, alt)


@dataclass(frozen=True)
class PrefactorLine:
    op: OperatorSpec
    wave_tag: str
    multiplier: Element
    alias: Element | None

    def describe(self, p: float) -> str:
        mult = symbolic(self.multiplier, p)
        if self.alias is not None:
            mult += " = " + symbolic(self.alias, p)
        sign = "+" if self.op.sign > 0 else "-"
        return f"{sign}{self.op.prefactor} d/dx phi_{self.wave_tag} = {mult} phi_{self.wave_tag}"


def symbolic(value: Element, p: float) -> str:
    """Render ``value`` as a multiple of ``p``, e.g. ``-kp`` or ``ip``."""
    per_p = value.coeffs / p
    nonzero = np.flatnonzero(np.abs(per_p) > 1e-12)
    if len(nonzero) != 1:
        return f"({value / p})p"
    idx = nonzero[0]
    c = per_p[idx]
    label = value.algebra.basis_labels[idx]
    mag = "" if abs(abs(c) - 1.0) < 1e-12 else f"{abs(c):g}"
    return f"{'-' if c < 0 else ''}{mag}{'' if label == '1' else label}p"


_PREFACTOR_OPS = ("+j", "-k", "+k")


def prefactor_table(p: float = 1.0) -> list[PrefactorLine]:
    """The six ``(+j | -k | +k) d/dx`` applications to ``phi_C`` and ``phi_J``."""
    lines = []
    for text in _PREFACTOR_OPS:
        op = operator(text, "x")
        for tag in ("C", "J"):
            res = apply(op, make_wave(tag, p, p * p / 2))
            lines.append(PrefactorLine(op, tag, res.eigenvalue, res.ambiguous_with))
    return lines


# --- Schroedinger form, modulus, expectation ----------------------------------------


def default_grid(n: int = 8) -> list[tuple[float, float]]:
    """``n x n`` points of ``[0, 2 pi]^2``."""
    axis = np.linspace(0.0, TWO_PI, n)
    return [(float(x), float(t)) for x in axis for t in axis]


def schroedinger_residual(form: str, w: PlaneWave, m: float, grid=None) -> float:
    """Max coefficient of ``H w - T w`` over the grid.

    ``form="C"``: ``H = -d2/dx2 / 2m``, ``T = i d/dt``.
    ``form="J"``: ``H = -k d2/dx2 / 2m``, ``T = j d/dt``.
    """
    if m <= 0:
        raise AlgebraError("mass must be positive")
    spec = w.algebra
    if form == "C":
        h_pref, t_pref = spec.one(), spec.unit("i")
    elif form == "J":
        h_pref, t_pref = spec.unit("k"), spec.unit("j")
    else:
        raise AlgebraError(f"unknown form {form!r}; use C or J")
    d2 = mul(w.amplitude, mul(w.generator, w.generator)) * (w.p * w.p)
    lhs = mul(h_pref, d2) * (-1.0 / (2.0 * m))
    rhs = mul(t_pref, _derivative_amplitude(w, "t"))
    residual = replace(w, amplitude=lhs - rhs)
    if residual.amplitude.is_zero():
        return 0.0
    return max(evaluate(residual, x, t).max_abs() for x, t in (grid or default_grid()))


def modulus(w: PlaneWave, x: float, t: float) -> Element:
    """``w^dagger w`` at one point."""
    v = evaluate(w, x, t)
    return mul(conjugate(DAGGER, v), v)


def expectation(op: OperatorSpec, w: PlaneWave, grid=None, tol: float = 1e-9) -> Element:
    """Pointwise ``w^dagger (op w)``; must be the same at every grid point."""
    applied = apply(op, w).wave
    values = [mul(conjugate(DAGGER, evaluate(w, x, t)), evaluate(applied, x, t)) for x, t in (grid or default_grid())]
    first = values[0]
    for v in values[1:]:
        if not v.allclose(first, tol):
            raise ContractViolation(f"expectation density varies over the grid: {first} vs {v}")
    return first


# --- Fourier transform --------------------------------------------------------------


def kernel_pair(tag: str) -> tuple[Element, Element]:
    spec = builtin("bicomplex_oblique")
    if tag == "C":
        return spec.one(), spec.unit("i")
    if tag == "J":
        return spec.unit("k"), spec.unit("j")
    raise AlgebraError(f"unknown kernel {tag!r}; use C or J")


def _uniform_step(xs: np.ndarray) -> float:
    if len(xs) < 2:
        raise AlgebraError("need at least two grid points")
    steps = np.diff(xs)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0) or steps[0] <= 0:
        raise AlgebraError("grid must be uniform and increasing")
    return float(steps[0])


def transform_array(
    xs: np.ndarray,
    values: np.ndarray,
    alpha: Element,
    beta: Element,
    p_grid: Sequence[float],
    direction: str = "forward",
) -> np.ndarray:
    """Array form of :func:`generalized_ft`; ``values`` has one coefficient row per grid point."""
    if direction not in ("forward", "inverse"):
        raise AlgebraError(f"direction must be forward or inverse, got {direction!r}")
    if not check_ft_conditions(alpha, beta):
        raise AlgebraError(
            "kernel is not admissible: need alpha^2 = alpha, beta^2 = -alpha, alpha beta = beta alpha = beta"
        )
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    dx = _uniform_step(xs)
    s = 1.0 if direction == "forward" else -1.0
    weights = np.full(len(xs), dx)
    weights[0] = weights[-1] = dx / 2

    # admissibility gives alpha exp(beta u) = alpha cos u + beta sin u
    phase = np.outer(np.asarray(p_grid, dtype=float), xs)
    cos_w = np.cos(phase) * weights
    sin_w = np.sin(phase) * weights
    f_alpha = values @ right_mul_matrix(alpha).T
    f_beta = values @ right_mul_matrix(beta).T
    return (cos_w @ f_alpha - s * (sin_w @ f_beta)) / math.sqrt(TWO_PI)


def generalized_ft(
    samples: Sequence[tuple[float, Element]],
    kernel_alpha: Element,
    kernel_beta: Element,
    p_grid: Sequence[float],
    direction: str = "forward",
) -> list[tuple[float, Element]]:
    """``G(p) = 1/sqrt(2 pi) * sum F(x) alpha exp(-s beta p x) dx`` with trapezoid weights.

    ``s = +1`` forward, ``-1`` inverse (then the samples are ``(p, G(p))`` and
    ``p_grid`` holds the positions).
    """
    if not samples:
        raise AlgebraError("no samples")
    spec = kernel_alpha.algebra
    xs = np.array([x for x, _ in samples])
    values = np.array([f.coeffs for _, f in samples])
    if any(f.algebra != spec for _, f in samples):
        raise AlgebraError("samples and kernel live in different algebras")
    out = transform_array(xs, values, kernel_alpha, kernel_beta, p_grid, direction)
    return [(float(p), Element(spec, row)) for p, row in zip(p_grid, out)]


def sample(w: PlaneWave, xs: Sequence[float], t: float = 0.0, window=None) -> list[tuple[float, Element]]:
    """Evaluate ``w`` on ``xs``; ``window`` is an optional real envelope function of x."""
    rows = evaluate_many(w, xs, t)
    out = []
    for x, row in zip(xs, rows):
        v = Element(w.algebra, row)
        if window is not None:
            v = v * float(window(x))
        out.append((float(x), v))
    return out


def gaussian(width: float, center: float = 0.0):
    return lambda x: math.exp(-((x - center) ** 2) / (2.0 * width**2))


def periodic_grid(L: float, N: int) -> np.ndarray:
    """``N`` points spaced ``L/N`` starting at ``-L/2`` (right end excluded)."""
    return -L / 2 + (L / N) * np.arange(N)


def reciprocal_grid(xs: np.ndarray, center: float = 0.0) -> np.ndarray:
    """Momentum grid with ``dp = 2 pi / (N dx)``, centred on ``center``."""
    n = len(xs)
    dp = TWO_PI / (n * _uniform_step(np.asarray(xs)))
    return center + dp * (np.arange(n) - n // 2)


def delta_concentration_ratio(wave_tag: str, kernel_tag: str, L: float, N: int, p: float = 2.0) -> float:
    """Norm of the transform at ``p' = p`` on ``[-L, L]`` divided by that on ``[-L/2, L/2]``.

    A delta-like peak grows linearly with the domain (ratio near 2); a bounded
    integral keeps it near 1.
    """
    if N < 2:
        raise AlgebraError("need at least two grid points")
    if L <= 0:
        raise AlgebraError("domain length must be positive")
    w = make_wave(wave_tag, p, 0.0)
    alpha, beta = kernel_pair(kernel_tag)
    norms = []
    for length in (L, 2 * L):
        xs = np.linspace(-length / 2, length / 2, N)
        G = transform_array(xs, evaluate_many(w, xs), alpha, beta, [p])
        norms.append(float(np.linalg.norm(G[0])))
    return norms[1] / norms[0]


def parseval_check(
    samples_x: Sequence[tuple[float, Element]],
    samples_p: Sequence[tuple[float, Element]],
) -> tuple[float, float]:
    """``(sum |phi(x)|^2 dx, sum |phi(p)|^2 dp)`` with the Euclidean coefficient norm."""

    def energy(samples):
        if not samples:
            return 0.0
        coords = np.array([c for c, _ in samples])
        step = _uniform_step(coords) if len(coords) > 1 else 1.0
        return float(sum(v.coeffs @ v.coeffs for _, v in samples) * step)

    return energy(samples_x), energy(samples_p)
