"""Minkowski four-vectors, 1+1 Lorentz boosts (c = 1), Klein-Gordon dispersion,
and Dirac gamma matrices as 2x2 matrices over the biquaternions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraError, AlgebraSpec, Element, builtin, mul

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class FourVector:
    components: tuple[float, float, float, float]
    variance: str = "contravariant"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(float(c) for c in self.components))
        if len(self.components) != 4:
            raise AlgebraError("a four-vector has four components")
        if self.variance not in ("contravariant", "covariant"):
            raise AlgebraError(f"unknown variance {self.variance!r}")

    def lower(self) -> FourVector:
        if self.variance == "covariant":
            return self
        return FourVector(tuple(ETA @ self.components), "covariant")

    def raise_(self) -> FourVector:
        if self.variance == "contravariant":
            return self
        return FourVector(tuple(ETA @ self.components), "contravariant")


def minkowski_dot(a: FourVector, b: FourVector) -> float:
    """``eta^{mu rho} a_mu b_rho``, whatever the variance of the inputs."""
    return float(np.asarray(a.lower().components) @ ETA @ np.asarray(b.lower().components))


@dataclass(frozen=True, eq=False)
class BoostMatrix:
    v: float
    matrix: np.ndarray

    @property
    def gamma(self) -> float:
        return float(self.matrix[0, 0])

    def __matmul__(self, other):
        if isinstance(other, BoostMatrix):
            return self.matrix @ other.matrix
        return self.matrix @ np.asarray(other)

    def apply(self, x: FourVector) -> FourVector:
        """Boost the (t, x) components of a contravariant vector."""
        comps = np.array(x.raise_().components)
        comps[:2] = self.matrix @ comps[:2]
        return FourVector(tuple(comps))


def boost(v: float) -> BoostMatrix:
    if not abs(v) < 1.0:
        raise AlgebraError(f"boost velocity must satisfy |v| < 1, got {v}")
    g = 1.0 / math.sqrt(1.0 - v * v)
    m = g * np.array([[1.0, -v], [-v, 1.0]])
    m.flags.writeable = False
    return BoostMatrix(float(v), m)


def add_velocities(v1: float, v2: float) -> float:
    return (v1 + v2) / (1.0 + v1 * v2)


def kg_dispersion_residual(p: Sequence[float], E: float, m: float) -> float:
    """``|E^2 - |p|^2 - m^2|``; zero iff the plane wave solves the Klein-Gordon equation."""
    return abs(E * E - float(np.dot(p, p)) - m * m)


# --- matrices over an algebra -------------------------------------------------


class MatrixOverAlgebra:
    """Square matrix with algebra-valued entries, multiplied row times column."""

    def __init__(self, entries: Sequence[Sequence[Element]]):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise AlgebraError("matrix must be square and nonempty")
        spec = rows[0][0].algebra
        if any(e.algebra != spec for row in rows for e in row):
            raise AlgebraError("all entries must share one algebra")
        self.entries = rows
        self.algebra: AlgebraSpec = spec

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int, algebra: AlgebraSpec) -> MatrixOverAlgebra:
        one, zero = algebra.one(), algebra.zero()
        return cls([[one if r == c else zero for c in range(n)] for r in range(n)])

    def __matmul__(self, other: MatrixOverAlgebra) -> MatrixOverAlgebra:
        if self.n != other.n or self.algebra != other.algebra:
            raise AlgebraError("shape or algebra mismatch")
        rng = range(self.n)
        return MatrixOverAlgebra(
            [[sum((mul(self.entries[r][k], other.entries[k][c]) for k in rng), self.algebra.zero()) for c in rng] for r in rng]
        )

    def __add__(self, other: MatrixOverAlgebra) -> MatrixOverAlgebra:
        rng = range(self.n)
        return MatrixOverAlgebra([[self.entries[r][c] + other.entries[r][c] for c in rng] for r in rng])

    def __mul__(self, scalar: float) -> MatrixOverAlgebra:
        return MatrixOverAlgebra([[e * scalar for e in row] for row in self.entries])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __eq__(self, other):
        if not isinstance(other, MatrixOverAlgebra):
            return NotImplemented
        return self.entries == other.entries

    def integer_coords(self) -> np.ndarray:
        """Coordinates as an ``n x n x dim`` integer array; fails if any coefficient is not an integer."""
        coords = np.array([[e.coeffs for e in row] for row in self.entries])
        ints = np.rint(coords)
        if not np.array_equal(ints, coords):
            raise AlgebraError("matrix has non-integer coordinates")
        return ints.astype(np.int64)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"MatrixOverAlgebra([{body}])"


def _exact_matmul(A: np.ndarray, B: np.ndarray, T: np.ndarray) -> np.ndarray:
    # (AB)[r, c, mu] = sum_k sum_{a,b} A[r,k,a] B[k,c,b] T[a,b,mu], all in int64
    return np.einsum("rka,kcb,abm->rcm", A, B, T)


def gamma_set() -> list[MatrixOverAlgebra]:
    """``gamma^0 = diag(1, -1)``, ``gamma^r = [[0, sigma_r], [-sigma_r, 0]]``."""
    bq = builtin("biquaternion")
    one, zero = bq.one(), bq.zero()
    gammas = [MatrixOverAlgebra([[one, zero], [zero, -one]])]
    for r in (1, 2, 3):
        s = bq.unit(f"sigma{r}")
        gammas.append(MatrixOverAlgebra([[zero, s], [-s, zero]]))
    return gammas


def check_clifford(gammas: Sequence[MatrixOverAlgebra]) -> tuple[bool, list[tuple[int, int, tuple[int, int]]]]:
    """Check ``g^mu g^rho + g^rho g^mu = 2 eta^{mu rho}`` for all 16 ordered pairs in integers.

    Returns ``(ok, failures)`` with each failure ``(mu, rho, (row, col))`` naming
    the first offending entry.
    """
    if len(gammas) != 4:
        raise AlgebraError("need four gamma matrices")
    spec = gammas[0].algebra
    n = gammas[0].n
    T = spec.structure
    coords = [g.integer_coords() for g in gammas]
    identity = MatrixOverAlgebra.identity(n, spec).integer_coords()
    failures = []
    for mu, rho in itertools.product(range(4), repeat=2):
        anti = _exact_matmul(coords[mu], coords[rho], T) + _exact_matmul(coords[rho], coords[mu], T)
        expected = 2 * int(ETA[mu, rho]) * identity
        bad = np.argwhere(np.any(anti != expected, axis=2))
        if len(bad):
            failures.append((mu, rho, (int(bad[0][0]), int(bad[0][1]))))
    return not failures, failures


def clifford_report(gammas: Sequence[MatrixOverAlgebra]) -> list[tuple[int, int, bool]]:
    _, failures = check_clifford(gammas)
    failed = {(mu, rho) for mu, rho, _ in failures}
    return [(mu, rho, (mu, rho) not in failed) for mu, rho in itertools.product(range(4), repeat=2)]


class SpinCheckError(AssertionError):
    pass


def spin_eigen_check(r: int, sign: int) -> tuple[Element, int, Element]:
    """Verify ``sigma_r (1 + sign sigma_r) = sign (1 + sign sigma_r)`` exactly.

    Returns the state ``1 + sign sigma_r``, the eigenvalue ``sign`` and the
    zero-divisor partner ``1 - sign sigma_r``.
    """
    if r not in (1, 2, 3) or sign not in (1, -1):
        raise AlgebraError("need r in 1..3 and sign +/-1")
    bq = builtin("biquaternion")
    s = bq.unit(f"sigma{r}")
    state = bq.one() + s * sign
    partner = bq.one() - s * sign
    if mul(s, state) != state * sign:
        raise SpinCheckError(f"sigma{r} (1 {'+' if sign > 0 else '-'} sigma{r}) is not an eigen-biquaternion")
    if not mul(state, partner).is_zero():
        raise SpinCheckError(f"1 +/- sigma{r} are not zero-divisor partners")
    return state, sign, partner
