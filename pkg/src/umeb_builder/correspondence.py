"""
State <-> matrix correspondence on C^d (x) C^d'.

A pure state sum_{k,l} a_{kl} |k>|l'> maps to the d x d' matrix [sqrt(d) a_{kl}];
its Schmidt number is the rank of that matrix and it is maximally entangled iff
every singular value of the matrix equals 1. Row index k runs over the smaller
factor C^d, column index l over C^d'.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL
from .linalg_core import ComplexMatrix, SubspaceBasis, numerical_rank, singular_values


NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PureState:
    """Coefficient tensor a_{kl} of a bipartite pure state, stored as a d x d' array."""

    d: int
    d_prime: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        data = self._validated_coeffs()
        if abs(float(np.vdot(data, data).real) - 1.0) > NORM_TOL:
            raise ValueError(
                f"state is not normalized: sum |a_kl|^2 = {float(np.vdot(data, data).real):.12g}"
            )

    def _validated_coeffs(self) -> np.ndarray:
        if self.d < 1 or self.d_prime < 1:
            raise ValueError(f"dimensions must be positive (got d={self.d}, d'={self.d_prime})")
        if self.d > self.d_prime:
            raise ValueError(f"d must be <= d' (got d={self.d}, d'={self.d_prime})")
        data = np.array(self.coeffs, dtype=np.complex128)
        if data.size != self.d * self.d_prime:
            raise ValueError(
                f"expected {self.d * self.d_prime} coefficients for C^{self.d} x C^{self.d_prime}, "
                f"got {data.size}"
            )
        data = data.reshape(self.d, self.d_prime)
        if not np.all(np.isfinite(data)):
            raise ValueError("state coefficients contain NaN or Inf entries")
        data.setflags(write=False)
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "d_prime", int(self.d_prime))
        object.__setattr__(self, "coeffs", data)
        return data

    @classmethod
    def unchecked(cls, d: int, d_prime: int, coeffs: np.ndarray) -> "PureState":
        """Build a state without the unit-norm check (for loading documents under test)."""
        state = object.__new__(cls)
        object.__setattr__(state, "d", d)
        object.__setattr__(state, "d_prime", d_prime)
        object.__setattr__(state, "coeffs", coeffs)
        state._validated_coeffs()
        return state

    @classmethod
    def from_kets(
        cls, d: int, d_prime: int, terms: Iterable[Tuple[complex, int, int]]
    ) -> "PureState":
        """Sum of coef * |k>|l'> over (coef, k, l) terms."""
        data = np.zeros((d, d_prime), dtype=np.complex128)
        for coef, k, l in terms:
            data[k, l] += coef
        return cls(d, d_prime, data)

    @classmethod
    def product(cls, left: Sequence[complex], right: Sequence[complex]) -> "PureState":
        """|left> (x) |right>, with both factors normalized first."""
        a = np.asarray(left, dtype=np.complex128)
        b = np.asarray(right, dtype=np.complex128)
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        return cls(len(a), len(b), np.outer(a, b))

    @property
    def vector(self) -> np.ndarray:
        """Coefficients in row-major (k, l) order."""
        return self.coeffs.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "PureState") -> complex:
        """<self|other> computed on coefficients."""
        if (self.d, self.d_prime) != (other.d, other.d_prime):
            raise ValueError(
                f"incompatible dimensions: ({self.d}, {self.d_prime}) vs ({other.d}, {other.d_prime})"
            )
        return complex(np.vdot(self.coeffs, other.coeffs))


def state_to_matrix(s: PureState) -> ComplexMatrix:
    """A = [sqrt(d) a_kl]."""
    norm_sq = float(np.vdot(s.coeffs, s.coeffs).real)
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: sum |a_kl|^2 = {norm_sq:.12g}")
    return ComplexMatrix(math.sqrt(s.d) * s.coeffs)


def matrix_to_state(a: ComplexMatrix) -> PureState:
    """Inverse of state_to_matrix; requires Tr(A^dagger A) = d."""
    d, d_prime = a.shape
    trace = float(np.vdot(a.entries, a.entries).real)
    if abs(trace - d) > NORM_TOL * d:
        raise ValueError(f"matrix must satisfy Tr(A^dagger A) = d = {d}; measured trace {trace:.12g}")
    return PureState(d, d_prime, a.entries / math.sqrt(d))


def schmidt_number(s: PureState, tol: float = DEFAULT_TOL) -> int:
    return numerical_rank(state_to_matrix(s), tol)


def is_maximally_entangled(s: PureState, tol: float = DEFAULT_TOL) -> Tuple[bool, float]:
    """(all singular values of state_to_matrix(s) within tol of 1, max |sigma_i - 1|)."""
    deviation = max(abs(sigma - 1.0) for sigma in singular_values(state_to_matrix(s)))
    return deviation <= tol, deviation


def span_of_states(
    states: Sequence[PureState], dims: Optional[Tuple[int, int]] = None
) -> SubspaceBasis:
    """
    The matrix subspace spanned by the states' coefficient matrices.

    Elements are the a_kl arrays themselves (state_to_matrix(s) / sqrt(d)), so an
    orthonormal set of states gives an orthonormal SubspaceBasis under Tr(A^dagger B).
    """
    if dims is None:
        if not states:
            raise ValueError("span_of_states needs dims when no states are given")
        dims = (states[0].d, states[0].d_prime)
    return SubspaceBasis(ambient_dims=dims, elements=tuple(ComplexMatrix(s.coeffs) for s in states))
