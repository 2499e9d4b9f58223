"""Structural analysis of algebras: property classification, idempotents,
ideals, zero divisors and complex-isomorphic planes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DAGGER,
    INNER,
    OUTER,
    PLAIN,
    AlgebraError,
    AlgebraSpec,
    Element,
    associator,
    builtin,
    conjugate,
    left_mul_matrix,
    mul,
    right_mul_matrix,
)

DEFAULT_SEED = 42

PROPERTIES = (
    "alternative",
    "associative",
    "commutative",
    "distributive",
    "flexible",
    "power_associative",
    "reversible",
)


class AnalysisError(AlgebraError):
    """The element does not have the structure the analysis requires."""


@dataclass
class PropertyReport:
    algebra: str
    seed: int
    distributive: str = "yes"
    associative: str = "yes"
    alternative: str = "yes"
    flexible: str = "yes"
    power_associative: str = "yes"
    commutative: str = "yes"
    reversible: str = "yes"
    witnesses: dict[str, tuple[Element, ...]] = field(default_factory=dict)

    def holds(self, prop: str) -> bool:
        return getattr(self, prop) == "yes"

    def to_text(self, header: bool = True) -> str:
        lines = [f"# algebra={self.algebra} seed={self.seed}"] if header else []
        lines += [f"{prop}={'yes' if self.holds(prop) else 'no'}" for prop in PROPERTIES]
        return "\n".join(lines) + "\n"


def _fail(report: PropertyReport, prop: str, witness: tuple[Element, ...]) -> None:
    if getattr(report, prop) == "yes":
        setattr(report, prop, "no_with_witness")
        report.witnesses[prop] = witness


def _singular(M: np.ndarray) -> bool:
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s[-1] <= 1e-10 * len(s) * max(1.0, s[0]))


def classify(spec: AlgebraSpec, seed: int = DEFAULT_SEED, samples: int = 1000) -> PropertyReport:
    """Decide the multiplication properties of ``spec``.

    Commutativity, associativity, alternativity and flexibility are multilinear
    identities and are decided exactly on basis elements. Power associativity
    and reversibility are certified by sampling with ``seed`` plus explicit
    zero-divisor candidates.
    """
    rng = np.random.default_rng(seed)
    report = PropertyReport(spec.name, seed)
    units = spec.units()

    def random_element() -> Element:
        return Element(spec, rng.uniform(-1.0, 1.0, spec.dim))

    for _ in range(20):
        a, b, c = random_element(), random_element(), random_element()
        if not mul(a, b + c).allclose(mul(a, b) + mul(a, c), 1e-12) or not mul(
            b + c, a
        ).allclose(mul(b, a) + mul(c, a), 1e-12):
            _fail(report, "distributive", (a, b, c))

    for a, b in itertools.product(units, repeat=2):
        if mul(a, b) != mul(b, a):
            _fail(report, "commutative", (a, b))

    for a, b, c in itertools.product(units, repeat=3):
        abc = associator(a, b, c)
        if not abc.is_zero():
            _fail(report, "associative", (a, b, c))
        # linearised forms of (aa)b = a(ab) and (ab)a = a(ba)
        if not (abc + associator(b, a, c)).is_zero():
            _fail(report, "alternative", (a, b, c))
        if not (abc + associator(c, b, a)).is_zero():
            _fail(report, "flexible", (a, b, c))
        cyclic = sum(
            (associator(*perm) for perm in itertools.permutations((a, b, c))),
            spec.zero(),
        )
        if not cyclic.is_zero():
            _fail(report, "power_associative", (a, b, c))

    for _ in range(samples):
        a = random_element()
        a2 = mul(a, a)
        lhs, rhs = mul(a2, a2), mul(mul(a2, a), a)
        if not lhs.allclose(rhs, 1e-9 * (1.0 + lhs.max_abs())):
            _fail(report, "power_associative", (a,))
            break

    for _ in range(samples):
        a = random_element()
        if _singular(left_mul_matrix(a)) or _singular(right_mul_matrix(a)):
            _fail(report, "reversible", (a,))
            break
    if report.reversible == "yes":
        for candidate in _zero_divisor_candidates(spec, seed):
            if _singular(left_mul_matrix(candidate)) or _singular(right_mul_matrix(candidate)):
                _fail(report, "reversible", (candidate,))
                break
    return report


def _zero_divisor_candidates(spec: AlgebraSpec, seed: int):
    units = spec.units()
    yield from units[1:]
    for r, s in itertools.combinations(range(spec.dim), 2):
        yield units[r] + units[s]
        yield units[r] - units[s]
    one, zero = spec.one(), spec.zero()
    for e in find_idempotents(spec, seed):
        if not (e.allclose(one, 1e-7) or e.allclose(zero, 1e-7)):
            yield e


# --- idempotents ----------------------------------------------------------------


def _newton_idempotent(start: np.ndarray, spec: AlgebraSpec, max_iter: int = 60) -> np.ndarray | None:
    e = start.copy()
    eye = np.eye(spec.dim)
    for _ in range(max_iter):
        el = Element(spec, e)
        F = mul(el, el).coeffs - e
        if np.max(np.abs(F)) < 1e-13:
            return e
        J = left_mul_matrix(el) + right_mul_matrix(el) - eye
        step, *_ = np.linalg.lstsq(J, F, rcond=None)
        e = e - step
        if not np.all(np.isfinite(e)) or np.max(np.abs(e)) > 1e6:
            return None
    el = Element(spec, e)
    if np.max(np.abs(mul(el, el).coeffs - e)) < 1e-12:
        return e
    return None


def find_idempotents(spec: AlgebraSpec, seed: int = DEFAULT_SEED, random_starts: int = 200) -> list[Element]:
    """Idempotents reached by Newton's method on ``e*e - e`` from seeded starts.

    Always contains 0 and 1. Results are deduplicated at 1e-7 and sorted by
    coefficient vector.
    """
    rng = np.random.default_rng(seed)
    eye = np.eye(spec.dim)
    starts = [np.zeros(spec.dim), eye[0]]
    for r, s in itertools.combinations(range(spec.dim), 2):
        starts.append((eye[r] + eye[s]) / 2)
        starts.append((eye[r] - eye[s]) / 2)
    starts += list(rng.uniform(-1.0, 1.0, (random_starts, spec.dim)))

    found: list[np.ndarray] = []
    for start in starts:
        e = _newton_idempotent(start, spec)
        if e is None:
            continue
        e = np.where(np.abs(e) < 1e-14, 0.0, e)
        if all(np.max(np.abs(e - f)) > 1e-7 for f in found):
            found.append(e)
    found.sort(key=lambda v: tuple(np.round(v, 9)))
    return [Element(spec, e) for e in found]


# --- subspaces --------------------------------------------------------------------


def _coords(elements: list[Element]) -> np.ndarray:
    return np.array([e.coeffs for e in elements])


def _in_span(B: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    coef, *_ = np.linalg.lstsq(B.T, v, rcond=None)
    return bool(np.max(np.abs(B.T @ coef - v), initial=0.0) <= tol * (1.0 + np.max(np.abs(v))))


def _check_independent(basis: list[Element]) -> np.ndarray:
    if not basis:
        raise AlgebraError("empty basis")
    for e in basis[1:]:
        if e.algebra != basis[0].algebra:
            raise AlgebraError("basis elements live in different algebras")
    B = _coords(basis)
    if np.linalg.matrix_rank(B, tol=1e-9) < len(basis):
        raise AlgebraError("subspace basis is linearly dependent")
    return B


def is_subalgebra(basis: list[Element]) -> bool:
    B = _check_independent(basis)
    return all(_in_span(B, mul(a, b).coeffs) for a, b in itertools.product(basis, repeat=2))


def is_ideal(spec: AlgebraSpec, subspace_basis: list[Element]) -> bool:
    """True iff the span absorbs multiplication by every basis element from both sides."""
    B = _check_independent(subspace_basis)
    if subspace_basis[0].algebra != spec:
        raise AlgebraError("subspace does not live in the given algebra")
    for g, b in itertools.product(spec.units(), subspace_basis):
        if not (_in_span(B, mul(g, b).coeffs) and _in_span(B, mul(b, g).coeffs)):
            return False
    return True


def _null_space(M: np.ndarray) -> np.ndarray:
    _, s, vt = np.linalg.svd(M)
    threshold = 1e-10 * M.shape[0] * max(1.0, s[0])
    rank = int(np.sum(s > threshold))
    return vt[rank:]


def zero_divisor_partner(q: Element) -> Element | None:
    """A nonzero ``x`` with ``q*x == 0``, or None if ``q`` is not a left zero divisor.

    Conjugates of ``q`` and ``1 - q`` are tried first, so the natural partners
    (e.g. ``1 - k`` for ``k``) come back when they exist; otherwise a kernel
    vector scaled to max-abs 1 is returned.
    """
    if q.is_zero():
        raise AlgebraError("zero has no meaningful zero-divisor partner")
    kernel = _null_space(left_mul_matrix(q))
    if len(kernel) == 0:
        return None
    spec = q.algebra
    candidates = []
    for kind in (OUTER, INNER, PLAIN, DAGGER):
        try:
            candidates.append(conjugate(kind, q))
        except AlgebraError:
            pass
    candidates.append(spec.one() - q)
    for cand in candidates:
        if not cand.is_zero(1e-12) and mul(q, cand).is_zero(1e-12 * (1.0 + q.max_abs() * cand.max_abs())):
            return cand
    v = kernel[0]
    v = v / v[np.argmax(np.abs(v) > 1e-12)]
    v = v / np.max(np.abs(v))
    return Element(spec, np.where(np.abs(v) < 1e-14, 0.0, v))


# --- two-dimensional planes ---------------------------------------------------------


def _normalize_generator(g: Element, unit: Element, tol: float = 1e-12) -> tuple[str, Element]:
    """Normal form of ``g`` in the plane span{unit, g}, where ``unit`` acts as identity."""
    sq = mul(g, g)
    B = _coords([unit, g])
    coef, *_ = np.linalg.lstsq(B.T, sq.coeffs, rcond=None)
    if np.max(np.abs(B.T @ coef - sq.coeffs)) > 1e-9 * (1.0 + sq.max_abs()):
        raise AlgebraError("span is not closed under multiplication")
    a, b = coef
    disc = a + b * b / 4.0
    shifted = g - (b / 2.0) * unit
    if abs(disc) <= tol * (1.0 + abs(a) + b * b):
        return "dual", shifted
    kind = "split" if disc > 0 else "complex"
    return kind, shifted / math.sqrt(abs(disc))


def classify_2d_generator(g: Element) -> tuple[str, Element]:
    """Kind (``dual``, ``split``, ``complex``) of span{1, g} and its normalized generator.

    With ``g*g = a + b*g`` the shifted element ``g - b/2`` squares to the real
    number ``a + b^2/4``; dividing by the root of its magnitude gives a
    generator squaring to 0, +1 or -1.
    """
    one = g.algebra.one()
    if np.linalg.matrix_rank(_coords([one, g]), tol=1e-12) < 2:
        raise AlgebraError("generator must be non-real")
    return _normalize_generator(g, one)


@dataclass(frozen=True)
class SubalgebraDescriptor:
    name: str
    basis: tuple[Element, ...]
    kind: str
    is_ideal: bool
    internal_identity: Element | None


_KIND_NAMES = {"complex": "complex_iso", "dual": "dual_iso", "split": "split_iso"}


def internal_identity(basis: list[Element]) -> Element | None:
    """The element ``e`` of span(basis) with ``e*b == b*e == b`` for every basis element, if any."""
    B = _check_independent(basis)
    blocks_A, blocks_y = [], []
    for b in basis:
        # e*b as a function of span coordinates c: left multiplication by e = c @ basis
        blocks_A.append(np.column_stack([mul(x, b).coeffs for x in basis]))
        blocks_A.append(np.column_stack([mul(b, x).coeffs for x in basis]))
        blocks_y += [b.coeffs, b.coeffs]
    A, y = np.vstack(blocks_A), np.concatenate(blocks_y)
    c, *_ = np.linalg.lstsq(A, y, rcond=None)
    if np.max(np.abs(A @ c - y)) > 1e-9:
        return None
    e = c @ B
    return Element(basis[0].algebra, np.where(np.abs(e) < 1e-14, 0.0, e))


def describe_plane(name: str, basis: list[Element]) -> SubalgebraDescriptor:
    if len(basis) != 2:
        raise AlgebraError("a plane needs exactly two basis elements")
    if not is_subalgebra(basis):
        raise AlgebraError(f"span of {name} is not closed under multiplication")
    unit = internal_identity(basis)
    if unit is None:
        raise AlgebraError(f"{name} has no internal identity")
    # generator: the basis element farthest from the identity direction
    u = unit.coeffs / np.linalg.norm(unit.coeffs)
    g = max(basis, key=lambda b: np.linalg.norm(b.coeffs - (b.coeffs @ u) * u))
    kind, _ = _normalize_generator(g, unit)
    spec = basis[0].algebra
    return SubalgebraDescriptor(name, tuple(basis), _KIND_NAMES[kind], is_ideal(spec, basis), unit)


def find_complex_subalgebras_bicomplex() -> list[SubalgebraDescriptor]:
    """The four complex-isomorphic planes of the bicomplex numbers in the oblique basis."""
    spec = builtin("bicomplex_oblique")
    one, i, j, k = spec.units()
    planes = [
        ("C1", [one, i]),
        ("C0", [one, i - 2 * j]),
        ("J", [k, j]),
        ("Jbar", [one - k, i - j]),
    ]
    return [describe_plane(name, basis) for name, basis in planes]


# --- wave admissibility ---------------------------------------------------------------


def check_ft_conditions(alpha: Element, beta: Element, tol: float = 1e-12) -> bool:
    """Whether ``alpha``/``beta`` can serve as the identity and imaginary unit of a Fourier kernel.

    Requires ``alpha^2 = alpha``, ``beta^2 = -alpha`` and ``alpha beta = beta alpha = beta``.
    """
    if alpha.algebra != beta.algebra:
        return False
    return (
        mul(alpha, alpha).allclose(alpha, tol)
        and mul(beta, beta).allclose(-alpha, tol)
        and mul(alpha, beta).allclose(beta, tol)
        and mul(beta, alpha).allclose(beta, tol)
    )


@dataclass(frozen=True)
class OscillationAnalysis:
    generator: Element
    idempotent: Element
    lam: float


def analyze_oscillation_generator(beta: Element, tol: float = 1e-12) -> OscillationAnalysis:
    """Write ``beta^2 = -lam^2 * eps`` with ``eps`` idempotent and ``lam > 0``.

    This is what makes ``exp(beta x)`` periodic. Raises :class:`AnalysisError`
    when ``beta^2`` is nilpotent or not a positive multiple of an idempotent.
    """
    u = -mul(beta, beta)
    scale = 1.0 + beta.max_abs() ** 2
    if u.is_zero(tol * scale):
        raise AnalysisError(f"{beta} squares to zero; no oscillation")
    u2 = mul(u, u)
    # u*u = c*u with c = lam^2 > 0
    c = float(u2.coeffs @ u.coeffs) / float(u.coeffs @ u.coeffs)
    if not u2.allclose(c * u, tol * (1.0 + u2.max_abs())):
        raise AnalysisError(f"square of {beta} is not proportional to an idempotent")
    if c <= 0:
        raise AnalysisError(f"{beta} generates hyperbolic, not oscillating, behaviour")
    eps = u / c
    return OscillationAnalysis(beta, eps, math.sqrt(c))
