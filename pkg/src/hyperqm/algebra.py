"""Finite-dimensional unital algebras over the reals.

An algebra is fixed by its multiplication table on a basis ``1, e_1, ..., e_n``
in which every product of two basis elements is ``0`` or ``+/-`` a single basis
element. Elements carry float coefficients; the table itself is kept as exact
integers so that table-level identities can be checked without rounding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class AlgebraError(ValueError):
    """Operation is not defined for the given algebra or operands."""


class SpecParseError(AlgebraError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ConvergenceError(ArithmeticError):
    """Power series did not reach tolerance within the term cap."""


@dataclass(frozen=True)
class SignedBasisTerm:
    """``coeff * e_index`` with ``coeff`` in {-1, 0, +1}."""

    coeff: int
    index: int = 0

    def __post_init__(self):
        if self.coeff not in (-1, 0, 1):
            raise AlgebraError(f"structure constant must be -1, 0 or 1, got {self.coeff}")
        if self.coeff == 0 and self.index != 0:
            object.__setattr__(self, "index", 0)


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    dim: int
    basis_labels: tuple[str, ...]
    table: tuple[tuple[SignedBasisTerm, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        if self.dim < 1:
            raise AlgebraError("dimension must be positive")
        if len(self.basis_labels) != self.dim or len(set(self.basis_labels)) != self.dim:
            raise AlgebraError("need exactly dim distinct basis labels")
        if self.basis_labels[0] != "1":
            raise AlgebraError("basis label 0 must be '1'")
        if len(self.table) != self.dim or any(len(row) != self.dim for row in self.table):
            raise AlgebraError("table must be dim x dim")
        for r in range(self.dim):
            for s in range(self.dim):
                term = self.table[r][s]
                if term.coeff and not 0 <= term.index < self.dim:
                    raise AlgebraError(f"table[{r}][{s}] points outside the basis")
        for r in range(self.dim):
            if self.table[0][r] != SignedBasisTerm(1, r) or self.table[r][0] != SignedBasisTerm(1, r):
                raise AlgebraError(f"basis element 0 is not a two-sided identity (index {r})")

    @cached_property
    def structure(self) -> np.ndarray:
        """Integer tensor ``T[r, s, mu]`` with ``e_r e_s = sum_mu T[r, s, mu] e_mu``."""
        T = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for r, row in enumerate(self.table):
            for s, term in enumerate(row):
                if term.coeff:
                    T[r, s, term.index] = term.coeff
        T.flags.writeable = False
        return T

    @cached_property
    def _flat_structure(self) -> np.ndarray:
        return self.structure.reshape(self.dim * self.dim, self.dim).astype(float)

    @cached_property
    def is_associative(self) -> bool:
        T = self.structure
        left = np.einsum("abm,mcn->abcn", T, T)
        right = np.einsum("bcm,amn->abcn", T, T)
        return bool(np.array_equal(left, right))

    def index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise AlgebraError(f"{self.name} has no basis element {label!r}") from None

    def unit(self, label: str) -> Element:
        coeffs = np.zeros(self.dim)
        coeffs[self.index(label)] = 1.0
        return Element(self, coeffs)

    def units(self) -> list[Element]:
        return [self.unit(label) for label in self.basis_labels]

    def one(self) -> Element:
        return self.unit("1")

    def zero(self) -> Element:
        return Element(self, np.zeros(self.dim))

    def element(self, *coeffs: float, **by_label: float) -> Element:
        """Build an element positionally or by label, e.g. ``spec.element(k=1, j=-0.5)``."""
        if coeffs and by_label:
            raise TypeError("give coefficients positionally or by label, not both")
        if by_label:
            arr = np.zeros(self.dim)
            for label, value in by_label.items():
                arr[self.index(label)] = value
            return Element(self, arr)
        if len(coeffs) == 1 and np.ndim(coeffs[0]) == 1:
            coeffs = tuple(coeffs[0])
        return Element(self, coeffs)

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, dim={self.dim})"


class Element:
    """Immutable coefficient vector over an :class:`AlgebraSpec`."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: AlgebraSpec, coeffs: Iterable[float]):
        arr = np.array(coeffs, dtype=float)
        if arr.shape != (algebra.dim,):
            raise AlgebraError(f"{algebra.name} needs {algebra.dim} coefficients, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise AlgebraError("coefficients must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __getitem__(self, label: str) -> float:
        return float(self.coeffs[self.algebra.index(label)])

    def __add__(self, other):
        if isinstance(other, Element):
            return add(self, other)
        if isinstance(other, (int, float)):
            return add(self, scale(other, self.algebra.one()))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Element):
            return sub(self, other)
        if isinstance(other, (int, float)):
            return sub(self, scale(other, self.algebra.one()))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return sub(scale(other, self.algebra.one()), self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return scale(float(other), self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return scale(float(other), self)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return scale(1.0 / float(other), self)
        return NotImplemented

    def __neg__(self):
        return scale(-1.0, self)

    def __pow__(self, n: int):
        return power(self, n)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.algebra.name, self.coeffs.tobytes()))

    def allclose(self, other: Element, atol: float = 1e-9) -> bool:
        _check_same(self, other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= atol)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def is_zero(self, atol: float = 0.0) -> bool:
        return self.max_abs() <= atol

    def __str__(self):
        parts = []
        for label, c in zip(self.algebra.basis_labels, self.coeffs):
            if c == 0:
                continue
            mag = f"{abs(c):.12g}"
            if label == "1":
                body = mag
            elif mag == "1":
                body = label
            else:
                body = f"{mag}*{label}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Element({self.algebra.name}: {self})"


def _check_same(a: Element, b: Element) -> None:
    if a.algebra != b.algebra:
        raise AlgebraError(f"elements live in different algebras ({a.algebra.name} vs {b.algebra.name})")


def mul(a: Element, b: Element) -> Element:
    _check_same(a, b)
    spec = a.algebra
    outer = np.multiply.outer(a.coeffs, b.coeffs).ravel()
    return Element(spec, outer @ spec._flat_structure)


def add(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return Element(a.algebra, a.coeffs + b.coeffs)


def sub(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return Element(a.algebra, a.coeffs - b.coeffs)


def scale(lam: float, a: Element) -> Element:
    return Element(a.algebra, lam * a.coeffs)


def associator(a: Element, b: Element, c: Element) -> Element:
    """``(ab)c - a(bc)``."""
    return mul(mul(a, b), c) - mul(a, mul(b, c))


def power(q: Element, n: int) -> Element:
    """Left-nested power ``((q q) q) ... q``; ``q**0`` is 1."""
    if n < 0:
        raise AlgebraError("negative powers are not defined in general")
    result = q.algebra.one()
    for _ in range(n):
        result = mul(result, q)
    return result


def exp(q: Element, tol: float = 1e-12, max_terms: int = 200) -> Element:
    """Exponential by partial sums of ``sum q^n / n!``.

    Stops once the last added term is below ``tol * (1 + max|partial sum|)``.
    """
    spec = q.algebra
    if not spec.is_associative:
        raise AlgebraError(f"exp needs an associative algebra; {spec.name} is not")
    term = spec.one()
    total = term
    for n in range(1, max_terms):
        term = mul(term, q) / n
        total = add(total, term)
        if term.max_abs() < tol * (1.0 + total.max_abs()):
            return total
    raise ConvergenceError(f"exp series did not converge in {max_terms} terms (|q| = {q.max_abs():g})")


def left_mul_matrix(a: Element) -> np.ndarray:
    """Matrix ``M`` with ``M @ x.coeffs == mul(a, x).coeffs``."""
    return np.einsum("r,rsm->ms", a.coeffs, a.algebra.structure.astype(float))


def right_mul_matrix(a: Element) -> np.ndarray:
    """Matrix ``M`` with ``M @ x.coeffs == mul(x, a).coeffs``."""
    return np.einsum("s,rsm->mr", a.coeffs, a.algebra.structure.astype(float))


# --- conjugations -------------------------------------------------------------


@dataclass(frozen=True)
class ConjugationKind:
    variant: str
    custom_signs: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.variant not in ("plain", "inner", "outer", "dagger", "custom"):
            raise AlgebraError(f"unknown conjugation {self.variant!r}")
        if self.variant == "custom":
            if not self.custom_signs or any(s not in (-1, 1) for s in self.custom_signs):
                raise AlgebraError("custom conjugation needs a sign vector of +/-1")
            object.__setattr__(self, "custom_signs", tuple(self.custom_signs))
        elif self.custom_signs is not None:
            raise AlgebraError("only custom conjugations take signs")

    @classmethod
    def custom(cls, signs: Sequence[int]) -> ConjugationKind:
        return cls("custom", tuple(signs))


PLAIN = ConjugationKind("plain")
INNER = ConjugationKind("inner")
OUTER = ConjugationKind("outer")
DAGGER = ConjugationKind("dagger")

# Sign maps in canonical coordinates. Inner flips i0 (so sigma-type products too),
# outer flips the outer units, dagger flips both and fixes the sigma-type products.
_CONJUGATION_SIGNS = {
    "biquaternion": {
        "inner": (1, -1, 1, 1, 1, -1, -1, -1),
        "outer": (1, 1, -1, -1, -1, -1, -1, -1),
        "dagger": (1, -1, -1, -1, -1, 1, 1, 1),
    },
    "bicomplex_canonical": {
        "inner": (1, -1, 1, -1),
        "outer": (1, 1, -1, -1),
        "dagger": (1, -1, -1, 1),
    },
}


def conjugate(kind: ConjugationKind, q: Element) -> Element:
    spec = q.algebra
    if kind.variant == "custom":
        if len(kind.custom_signs) != spec.dim:
            raise AlgebraError(f"custom conjugation has {len(kind.custom_signs)} signs, algebra has dim {spec.dim}")
        return Element(spec, np.array(kind.custom_signs) * q.coeffs)
    if spec.name == "bicomplex_oblique":
        return to_oblique(conjugate(kind, to_canonical(q)))
    if kind.variant == "plain":
        signs = np.array([1] + [-1] * (spec.dim - 1))
        return Element(spec, signs * q.coeffs)
    table = _CONJUGATION_SIGNS.get(spec.name)
    if table is None:
        raise AlgebraError(f"{kind.variant} conjugate is not defined on {spec.name}")
    return Element(spec, np.array(table[kind.variant]) * q.coeffs)


# --- bicomplex basis change ---------------------------------------------------

# Columns: oblique basis (1, i, j, k) in canonical coordinates (1, i0, i1, sigma),
# with i = i0, j = (i0 - i1)/2, k = (1 + sigma)/2.
_OBLIQUE_TO_CANONICAL = np.array(
    [
        [1.0, 0.0, 0.0, 0.5],
        [0.0, 1.0, 0.5, 0.0],
        [0.0, 0.0, -0.5, 0.0],
        [0.0, 0.0, 0.0, 0.5],
    ]
)
_CANONICAL_TO_OBLIQUE = np.array(
    [
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 0.0, -2.0, 0.0],
        [0.0, 0.0, 0.0, 2.0],
    ]
)


def basis_change_bicomplex(q: Element, direction: str) -> Element:
    """Change bicomplex coordinates; ``direction`` is ``"canonical->oblique"`` or ``"oblique->canonical"``."""
    if direction == "canonical->oblique":
        if q.algebra.name != "bicomplex_canonical":
            raise AlgebraError(f"expected a bicomplex_canonical element, got {q.algebra.name}")
        return Element(builtin("bicomplex_oblique"), _CANONICAL_TO_OBLIQUE @ q.coeffs)
    if direction == "oblique->canonical":
        if q.algebra.name != "bicomplex_oblique":
            raise AlgebraError(f"expected a bicomplex_oblique element, got {q.algebra.name}")
        return Element(builtin("bicomplex_canonical"), _OBLIQUE_TO_CANONICAL @ q.coeffs)
    raise AlgebraError(f"unknown direction {direction!r}")


def to_oblique(q: Element) -> Element:
    return basis_change_bicomplex(q, "canonical->oblique")


def to_canonical(q: Element) -> Element:
    return basis_change_bicomplex(q, "oblique->canonical")


def oblique_to_canonical_matrix() -> np.ndarray:
    return _OBLIQUE_TO_CANONICAL.copy()


# --- builtin tables -----------------------------------------------------------

# Written as row times column, as in the printed tables.
_TABLES = {
    "complex": """
        1  i
        i  -1
    """,
    "dual": """
        1      Omega
        Omega  0
    """,
    "split_complex": """
        1      sigma
        sigma  1
    """,
    "quaternion": """
        1   i1   i2   i3
        i1  -1   i3   -i2
        i2  -i3  -1   i1
        i3  i2   -i1  -1
    """,
    "biquaternion": """
        1       i0       i1       i2       i3       sigma1   sigma2   sigma3
        i0      -1       sigma1   sigma2   sigma3   -i1      -i2      -i3
        i1      sigma1   -1       i3       -i2      -i0      sigma3   -sigma2
        i2      sigma2   -i3      -1       i1       -sigma3  -i0      sigma1
        i3      sigma3   i2       -i1      -1       sigma2   -sigma1  -i0
        sigma1  -i1      -i0      sigma3   -sigma2  1        -i3      i2
        sigma2  -i2      -sigma3  -i0      sigma1   i3       1        -i1
        sigma3  -i3      sigma2   -sigma1  -i0      -i2      i1       1
    """,
    "bicomplex_canonical": """
        1      i0     i1     sigma
        i0     -1     sigma  -i1
        i1     sigma  -1     -i0
        sigma  -i1    -i0    1
    """,
    "bicomplex_oblique": """
        1  i   j   k
        i  -1  -k  j
        j  -k  -k  j
        k  j   j   k
    """,
}

BUILTIN_NAMES = tuple(_TABLES)


def _parse_cell(cell: str, labels: Sequence[str]) -> SignedBasisTerm:
    if cell == "0":
        return SignedBasisTerm(0)
    sign = -1 if cell.startswith("-") else 1
    return SignedBasisTerm(sign, list(labels).index(cell.lstrip("+-")))


def _from_grid(name: str, text: str) -> AlgebraSpec:
    rows = [line.split() for line in text.strip().splitlines()]
    labels = rows[0]
    table = [[_parse_cell(cell, labels) for cell in row] for row in rows]
    return AlgebraSpec(name, len(labels), tuple(labels), tuple(map(tuple, table)))


_BUILTIN_CACHE: dict[str, AlgebraSpec] = {}


def builtin(name: str) -> AlgebraSpec:
    if name not in _TABLES:
        raise AlgebraError(f"unknown algebra {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if name not in _BUILTIN_CACHE:
        _BUILTIN_CACHE[name] = _from_grid(name, _TABLES[name])
    return _BUILTIN_CACHE[name]


# --- text spec format ---------------------------------------------------------

_PRODUCT_RE = re.compile(r"^(\S+)\s*\*\s*(\S+)\s*=\s*(\S+)$")


def parse_spec(text: str) -> AlgebraSpec:
    """Parse the line-based algebra description.

    ::

        algebra split
        dim 2
        basis 1 s
        s*s = 1
    """
    lines = [(n, line.strip()) for n, line in enumerate(text.splitlines(), start=1)]
    lines = [(n, line) for n, line in lines if line and not line.startswith("#")]
    if len(lines) < 3:
        raise SpecParseError("expected 'algebra', 'dim' and 'basis' header lines", lines[-1][0] if lines else None)

    (n1, l1), (n2, l2), (n3, l3) = lines[:3]
    head = l1.split()
    if len(head) != 2 or head[0] != "algebra":
        raise SpecParseError("expected 'algebra <name>'", n1)
    name = head[1]
    head = l2.split()
    if len(head) != 2 or head[0] != "dim" or not head[1].isdigit() or int(head[1]) < 1:
        raise SpecParseError("expected 'dim <positive integer>'", n2)
    dim = int(head[1])
    head = l3.split()
    if head[:1] != ["basis"] or len(head) != dim + 1:
        raise SpecParseError(f"expected 'basis' followed by {dim} labels", n3)
    labels = head[1:]
    if labels[0] != "1":
        raise SpecParseError("first basis label must be 1", n3)
    if len(set(labels)) != dim:
        raise SpecParseError("duplicate basis label", n3)

    table: list[list[SignedBasisTerm | None]] = [[None] * dim for _ in range(dim)]
    for r in range(dim):
        table[0][r] = SignedBasisTerm(1, r)
        table[r][0] = SignedBasisTerm(1, r)

    for lineno, line in lines[3:]:
        m = _PRODUCT_RE.match(line)
        if not m:
            raise SpecParseError(f"cannot parse product rule {line!r}", lineno)
        left, right, result = m.groups()
        for label in (left, right):
            if label not in labels:
                raise SpecParseError(f"unknown label {label!r}", lineno)
        r, s = labels.index(left), labels.index(right)
        if r == 0 or s == 0:
            raise SpecParseError("products with 1 are implied and must not be given", lineno)
        if table[r][s] is not None:
            raise SpecParseError(f"duplicate rule for {left}*{right}", lineno)
        if result == "0":
            table[r][s] = SignedBasisTerm(0)
            continue
        sign = -1 if result.startswith("-") else 1
        target = result[1:] if result[0] in "+-" else result
        if target not in labels:
            raise SpecParseError(f"unknown label {target!r} (only single signed basis terms are allowed)", lineno)
        table[r][s] = SignedBasisTerm(sign, labels.index(target))

    last = lines[-1][0]
    for r in range(dim):
        for s in range(dim):
            if table[r][s] is None:
                raise SpecParseError(f"missing rule for {labels[r]}*{labels[s]}", last)
    return AlgebraSpec(name, dim, tuple(labels), tuple(tuple(row) for row in table))


def format_spec(spec: AlgebraSpec) -> str:
    lines = [f"algebra {spec.name}", f"dim {spec.dim}", "basis " + " ".join(spec.basis_labels)]
    for r in range(1, spec.dim):
        for s in range(1, spec.dim):
            lines.append(f"{spec.basis_labels[r]}*{spec.basis_labels[s]} = {term_label(spec, spec.table[r][s])}")
    return "\n".join(lines) + "\n"


def load_spec(path: str | Path) -> AlgebraSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def resolve_algebra(name_or_path: str) -> AlgebraSpec:
    """A builtin name, or ``@path`` to a spec file."""
    if name_or_path.startswith("@"):
        return load_spec(name_or_path[1:])
    return builtin(name_or_path)


def term_label(spec: AlgebraSpec, term: SignedBasisTerm) -> str:
    if term.coeff == 0:
        return "0"
    label = spec.basis_labels[term.index]
    return label if term.coeff > 0 else f"-{label}"


def is_real(q: Element, atol: float = 0.0) -> bool:
    return bool(np.all(np.abs(q.coeffs[1:]) <= atol))


def euclidean_norm(q: Element) -> float:
    return math.sqrt(float(q.coeffs @ q.coeffs))
