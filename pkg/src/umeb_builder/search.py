"""
Seeded numerical searches used as corroborating evidence during verification.

- numeric_unextendibility_oracle: hill-climbs the smallest singular value of
  complement elements scaled to Hilbert-Schmidt norm sqrt(d). Reaching 1 means a
  maximally entangled state orthogonal to the basis was found.
- search_orthogonal_product: alternating minimization over the two local unit
  vectors of a product state, looking for one orthogonal to a product set.

Restart i draws from numpy.random.SeedSequence(seed, spawn_key=(i,)). Restarts
advance in lockstep as one stack per worker, and results are reduced in restart
order, so outputs do not depend on workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .config import DEFAULT_SEED, DEFAULT_TOL, DEFAULT_UPB_RESTARTS, DEFAULT_UPB_TOL
from .constructions import BasisSet
from .correspondence import PureState, state_to_matrix
from .linalg_core import (
    ComplexMatrix,
    SubspaceBasis,
    eigh_stack,
    jacobi_eigh,
    numerical_rank,
    orthonormal_complement,
    singular_value_stack,
)


STEP_START = 0.5
STEP_DECAY = 0.9
STEP_STOP = 1e-7
IMPROVEMENT_EPS = 1e-12
ALTERNATING_MAX_STEPS = 100
ALTERNATING_EPS = 1e-15

R = TypeVar("R")


def restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_chunks(task: Callable[[Sequence[int]], R], restarts: int, workers: int) -> List[R]:
    """Split range(restarts) into contiguous chunks, one per worker; results come back in chunk order."""
    chunks = [
        [int(i) for i in chunk] for chunk in np.array_split(np.arange(restarts), min(workers, restarts))
    ]
    if len(chunks) == 1:
        return [task(chunks[0])]
    with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
        futures = [executor.submit(task, chunk) for chunk in chunks]
        return [future.result() for future in futures]


@dataclass(frozen=True)
class OracleResult:
    max_sigma_min: float
    best: Optional[ComplexMatrix]
    per_restart: Tuple[float, ...]
    seed: int
    iters: int


def _sigma_min_stack(
    complement: SubspaceBasis, d: int, x: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Smallest singular value of each sqrt(d)-normalized combination.

    Row t of x holds the real then the imaginary coefficients. Rows whose
    combination vanishes get -1.
    """
    k = len(complement)
    coeffs = np.empty((x.shape[0], k), dtype=np.complex128)
    coeffs.real = x[:, :k]
    coeffs.imag = x[:, k:]
    mats = complement.combinations(coeffs)
    flat = mats.reshape(mats.shape[0], -1)
    norm_sq = np.zeros(flat.shape[0])
    for j in range(flat.shape[1]):
        norm_sq += flat[:, j].real ** 2 + flat[:, j].imag ** 2
    norm = np.sqrt(norm_sq)
    valid = norm > 0.0
    factor = np.where(valid, math.sqrt(d) / np.where(valid, norm, 1.0), 0.0)
    scaled = np.empty_like(mats)
    scaled.real = mats.real * factor[:, None, None]
    scaled.imag = mats.imag * factor[:, None, None]
    sigma_min = singular_value_stack(scaled)[:, -1]
    return np.where(valid, sigma_min, -1.0), scaled


def _hill_climb(
    complement: SubspaceBasis, d: int, iters: int, rngs: Sequence[np.random.Generator]
) -> Tuple[np.ndarray, np.ndarray]:
    """One random-restart hill climb per generator, all advanced together."""
    dim = 2 * len(complement)
    x = np.stack([rng.standard_normal(dim) for rng in rngs])
    best, best_mats = _sigma_min_stack(complement, d, x)
    step = np.full(len(rngs), STEP_START)
    for _ in range(iters):
        # sigma_min cannot exceed 1 at HS norm sqrt(d).
        rows = np.flatnonzero((step >= STEP_STOP) & (best < 1.0 - IMPROVEMENT_EPS))
        if rows.size == 0:
            break
        moves = np.stack([rngs[i].standard_normal(dim) for i in rows])
        candidate = x[rows] + step[rows, None] * moves
        value, mats = _sigma_min_stack(complement, d, candidate)
        better = value > best[rows] + IMPROVEMENT_EPS
        taken = rows[better]
        x[taken] = candidate[better]
        best[taken] = value[better]
        best_mats[taken] = mats[better]
        step[rows[~better]] *= STEP_DECAY
    return best, best_mats


def numeric_unextendibility_oracle(
    basis: BasisSet,
    restarts: int,
    iters: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    complement: Optional[SubspaceBasis] = None,
    tol: float = DEFAULT_TOL,
) -> OracleResult:
    """
    Best smallest singular value found over sqrt(d)-normalized complement elements.

    Each restart starts from a random combination of the complement basis and
    perturbs the real and imaginary coefficients, shrinking the step on every
    rejected move. A value >= 1 - margin exhibits an extension of the basis.
    """
    if restarts < 1 or iters < 1:
        raise ValueError(f"restarts and iters must be >= 1 (got {restarts}, {iters})")
    if complement is None:
        complement = orthonormal_complement(basis.span(), tol)
    if not complement.elements:
        raise ValueError("oracle needs a nonempty complement (basis is complete)")

    def task(indices: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        return _hill_climb(complement, basis.d, iters, [restart_rng(seed, i) for i in indices])

    results = _run_chunks(task, restarts, workers)
    values = np.concatenate([value for value, _mats in results])
    mats = np.concatenate([m for _value, m in results])
    winner = int(np.argmax(values))
    best = ComplexMatrix(mats[winner]) if values[winner] >= 0.0 else None
    return OracleResult(
        max_sigma_min=max(float(values[winner]), 0.0),
        best=best,
        per_restart=tuple(max(float(v), 0.0) for v in values),
        seed=seed,
        iters=iters,
    )


@dataclass(frozen=True)
class ProductSearchResult:
    """Outcome of the orthogonal product-state search; passed means no such state was found."""

    passed: bool
    best_residual: float
    best_candidate: PureState
    restarts: int
    tol: float


def product_factors(state: PureState, tol: float = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """(x, y) with state = x (x) y, both unit vectors; raises unless the Schmidt number is 1."""
    mat = state_to_matrix(state)
    rank = numerical_rank(mat, tol)
    if rank != 1:
        raise ValueError(f"state is not a product state (Schmidt number {rank})")
    coeffs = state.coeffs
    _values, vecs = jacobi_eigh(coeffs @ coeffs.conj().T)
    x = vecs[:, 0]
    y = x.conj() @ coeffs
    return x, y / np.linalg.norm(y)


def _overlaps(vectors: np.ndarray, batch: np.ndarray) -> np.ndarray:
    """|<v_i|u_t>| for every row u_t of batch, shape (len(batch), len(vectors))."""
    return np.abs(batch @ vectors.conj().T)


def _smallest_eigvecs(weights: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Unit minimizer of sum_i w_ti |<v_i|a>|^2 for each row t of weights; vectors are rows."""
    forms = np.einsum("ti,ik,il->tkl", weights, vectors, vectors.conj())
    forms = 0.5 * (forms + np.conj(np.swapaxes(forms, 1, 2)))
    _values, vecs = eigh_stack(forms)
    return vecs[:, :, -1]


def _alternating_descent(
    xs: np.ndarray, ys: np.ndarray, rngs: Sequence[np.random.Generator]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One alternating minimization per generator; converged rows stop moving."""
    d, dp = xs.shape[1], ys.shape[1]
    starts = []
    for rng in rngs:
        b = rng.standard_normal(dp) + 1j * rng.standard_normal(dp)
        starts.append(b / np.linalg.norm(b))
    b = np.stack(starts)
    a = np.zeros((len(rngs), d), dtype=np.complex128)
    previous = np.full(len(rngs), math.inf)
    active = np.ones(len(rngs), dtype=bool)
    for _ in range(ALTERNATING_MAX_STEPS):
        rows = np.flatnonzero(active)
        if rows.size == 0:
            break
        new_a = _smallest_eigvecs(_overlaps(ys, b[rows]) ** 2, xs)
        new_b = _smallest_eigvecs(_overlaps(xs, new_a) ** 2, ys)
        a[rows] = new_a
        b[rows] = new_b
        objective = np.sum(_overlaps(xs, new_a) ** 2 * _overlaps(ys, new_b) ** 2, axis=1)
        active[rows[previous[rows] - objective <= ALTERNATING_EPS]] = False
        previous[rows] = objective
    residual = np.max(_overlaps(xs, a) * _overlaps(ys, b), axis=1)
    return residual, a, b


def search_orthogonal_product(
    states: Sequence[PureState],
    restarts: int = DEFAULT_UPB_RESTARTS,
    tol: float = DEFAULT_UPB_TOL,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> ProductSearchResult:
    """
    Look for a product state a (x) b orthogonal to every input product state.

    The residual of a candidate is max_i |<phi_i|a (x) b>|. The set passes when
    the best residual over all restarts stays above tol.
    """
    if not states:
        raise ValueError("product search needs at least one state")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1 (got {restarts})")
    d, dp = states[0].d, states[0].d_prime
    for i, s in enumerate(states):
        if (s.d, s.d_prime) != (d, dp):
            raise ValueError(f"state {i} has dimensions ({s.d}, {s.d_prime}), expected ({d}, {dp})")
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            overlap = abs(states[i].inner(states[j]))
            if overlap > DEFAULT_TOL:
                raise ValueError(f"states {i} and {j} are not orthogonal (|<phi_i|phi_j>| = {overlap:.3e})")

    factors = []
    for i, s in enumerate(states):
        try:
            factors.append(product_factors(s))
        except ValueError as exc:
            raise ValueError(f"state {i}: {exc}") from None
    xs = np.stack([x for x, _y in factors])
    ys = np.stack([y for _x, y in factors])

    def task(indices: Sequence[int]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _alternating_descent(xs, ys, [restart_rng(seed, i) for i in indices])

    results = _run_chunks(task, restarts, workers)
    residuals = np.concatenate([r for r, _a, _b in results])
    a_rows = np.concatenate([a for _r, a, _b in results])
    b_rows = np.concatenate([b for _r, _a, b in results])
    winner = int(np.argmin(residuals))

    return ProductSearchResult(
        passed=bool(residuals[winner] > tol),
        best_residual=float(residuals[winner]),
        best_candidate=PureState.product(a_rows[winner], b_rows[winner]),
        restarts=restarts,
        tol=tol,
    )
