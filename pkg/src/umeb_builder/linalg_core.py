"""
Small dense complex linear algebra for matrices of a few dozen entries.

Everything here is sized for d <= ~12, d' <= ~24: singular values come from a
cyclic Jacobi eigensolver on the Hermitian Gram matrix, complements from
modified Gram-Schmidt against the matrix-unit basis.

The Jacobi kernel works on stacks of matrices at once (oracle restarts, random
samples, basis members) using elementwise real arithmetic, so the result for
one matrix never depends on what else is in the stack.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL


JACOBI_MAX_SWEEPS = 64
JACOBI_EPS = 1e-15

ComplexScalar = complex


def _require_finite(array: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{what} contains NaN or Inf entries")


def require_tol(tol: float) -> float:
    if not tol > 0:
        raise ValueError(f"tol must be > 0 (got {tol})")
    return float(tol)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Immutable dense rows x cols complex matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        data = np.array(self.entries, dtype=np.complex128)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"matrix must be 2-D with positive dimensions (got shape {data.shape})")
        _require_finite(data, "matrix")
        data.setflags(write=False)
        object.__setattr__(self, "entries", data)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ComplexMatrix":
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    @classmethod
    def unit(cls, rows: int, cols: int, k: int, l: int) -> "ComplexMatrix":
        """Matrix unit E_{kl}."""
        data = np.zeros((rows, cols), dtype=np.complex128)
        data[k, l] = 1.0
        return cls(data)

    def scaled(self, factor: complex) -> "ComplexMatrix":
        return ComplexMatrix(self.entries * factor)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "ComplexMatrix":
        """Return P A Q where row i of the result is row row_perm[i], column c is col_perm[c]."""
        return ComplexMatrix(self.entries[np.ix_(list(row_perm), list(col_perm))])



def hs_inner(a: ComplexMatrix, b: ComplexMatrix) -> ComplexScalar:
    """Hilbert-Schmidt inner product Tr(A^dagger B)."""
    if a.shape != b.shape:
        raise ValueError(f"incompatible shapes for hs_inner: {a.shape} vs {b.shape}")
    return complex(np.vdot(a.entries, b.entries))


def _complex(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    out = np.empty(re.shape, dtype=np.complex128)
    out.real = re
    out.imag = im
    return out


def _sequential_sum(x: np.ndarray) -> np.ndarray:
    """Sum over every axis but the first, one term at a time, so each row's total ignores the others."""
    flat = x.reshape(x.shape[0], -1)
    total = np.zeros(flat.shape[0])
    for j in range(flat.shape[1]):
        total += flat[:, j]
    return total


def _mix(
    xr: np.ndarray,
    xi: np.ndarray,
    yr: np.ndarray,
    yi: np.ndarray,
    c: np.ndarray,
    s: np.ndarray,
    pr: np.ndarray,
    pi: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(c x - s w, s x + c w) with w = (pr + i pi) y, in real and imaginary parts."""
    wr = pr * yr - pi * yi
    wi = pr * yi + pi * yr
    return c * xr - s * wr, c * xi - s * wi, s * xr + c * wr, s * xi + c * wi


def _rotate(
    re: np.ndarray,
    im: np.ndarray,
    vr: np.ndarray,
    vi: np.ndarray,
    p: int,
    q: int,
    todo: np.ndarray,
    skip: np.ndarray,
) -> None:
    """Zero entry (p, q) of every matrix in the stack that still needs it."""
    apr = re[:, p, q]
    api = im[:, p, q]
    mag = np.sqrt(apr * apr + api * api)
    active = todo & (mag > skip)
    if not active.any():
        return

    # Rotate in the (p, q) plane after removing the phase of a[p, q].
    safe = np.where(active, mag, 1.0)
    pr = np.where(active, apr / safe, 1.0)
    pi = np.where(active, api / safe, 0.0)
    theta = (re[:, q, q] - re[:, p, p]) / (2.0 * safe)
    with np.errstate(over="ignore", divide="ignore"):
        t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
        t = np.where(np.abs(theta) > 1e150, 0.5 / theta, np.where(theta < 0.0, -t, t))
    c = np.where(active, 1.0 / np.sqrt(t * t + 1.0), 1.0)
    s = np.where(active, t * c, 0.0)
    c, s, pr, pi = c[:, None], s[:, None], pr[:, None], pi[:, None]

    re[:, :, p], im[:, :, p], re[:, :, q], im[:, :, q] = _mix(
        re[:, :, p], im[:, :, p], re[:, :, q], im[:, :, q], c, s, pr, -pi
    )
    re[:, p, :], im[:, p, :], re[:, q, :], im[:, q, :] = _mix(
        re[:, p, :], im[:, p, :], re[:, q, :], im[:, q, :], c, s, pr, pi
    )
    vr[:, :, p], vi[:, :, p], vr[:, :, q], vi[:, :, q] = _mix(
        vr[:, :, p], vi[:, :, p], vr[:, :, q], vi[:, :, q], c, s, pr, -pi
    )
    for i, j in ((p, q), (q, p)):
        re[:, i, j] = np.where(active, 0.0, re[:, i, j])
        im[:, i, j] = np.where(active, 0.0, im[:, i, j])
    im[:, p, p] = 0.0
    im[:, q, q] = 0.0


def _jacobi_sweeps(re: np.ndarray, im: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi sweeps over a stack of Hermitian matrices, in place.

    re and im hold the real and imaginary parts, shape (count, n, n); on return
    their diagonals are the eigenvalues. Returns the eigenvector real and
    imaginary parts as columns. Only elementwise real arithmetic is used, so a
    matrix comes out bit-for-bit the same whatever else shares the stack.
    """
    count, n, _ = re.shape
    diag = np.arange(n)
    vr = np.zeros_like(re)
    vr[:, diag, diag] = 1.0
    vi = np.zeros_like(re)
    im[:, diag, diag] = 0.0
    scale = np.sqrt(_sequential_sum(re * re + im * im))
    skip = JACOBI_EPS * JACOBI_EPS * scale
    for _sweep in range(JACOBI_MAX_SWEEPS):
        off = re * re + im * im
        off[:, diag, diag] = 0.0
        todo = np.sqrt(_sequential_sum(off)) > JACOBI_EPS * scale
        if not todo.any():
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(re, im, vr, vi, p, q, todo, skip)
    return vr, vi


def eigh_stack(stack: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues (descending along each row) and eigenvectors (as columns) of a
    (count, n, n) stack of Hermitian matrices.

    Nothing is validated; non-finite input gives non-finite output.
    """
    data = np.asarray(stack, dtype=np.complex128)
    re = data.real.copy()
    im = data.imag.copy()
    with np.errstate(invalid="ignore", over="ignore"):
        vr, vi = _jacobi_sweeps(re, im)
    n = re.shape[1]
    values = re[:, np.arange(n), np.arange(n)]
    order = np.argsort(-values, axis=1, kind="stable")
    vecs = np.take_along_axis(_complex(vr, vi), order[:, None, :], axis=2)
    return np.take_along_axis(values, order, axis=1), vecs


def jacobi_eigh(hermitian: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns (eigenvalues descending, eigenvectors as columns).
    """
    a = np.array(hermitian, dtype=np.complex128)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"jacobi_eigh expects a square matrix (got shape {a.shape})")
    _require_finite(a, "hermitian matrix")
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(a).max(initial=0.0)))):
        raise ValueError("jacobi_eigh expects a Hermitian matrix")
    values, vecs = eigh_stack(a[None])
    return values[0], vecs[0]


def singular_value_stack(stack: np.ndarray) -> np.ndarray:
    """
    Singular values of every matrix in a (count, rows, cols) stack, descending
    along each row, min(rows, cols) per matrix.

    The Gram matrix of the short side is diagonalized with Jacobi rotations; each
    singular value is then read off as the norm of A projected on an eigenvector,
    which keeps values near zero accurate to machine precision instead of sqrt(eps).
    Non-finite matrices give non-finite values instead of raising.
    """
    data = np.asarray(stack, dtype=np.complex128)
    if data.shape[1] > data.shape[2]:
        data = np.conj(np.swapaxes(data, 1, 2))
    count, m, width = data.shape
    sr, si = data.real, data.imag

    with np.errstate(invalid="ignore", over="ignore"):
        gr = np.zeros((count, m, m))
        gi = np.zeros((count, m, m))
        for l in range(width):
            xr = sr[:, :, l]
            xi = si[:, :, l]
            gr += xr[:, :, None] * xr[:, None, :] + xi[:, :, None] * xi[:, None, :]
            gi += xi[:, :, None] * xr[:, None, :] - xr[:, :, None] * xi[:, None, :]
        vr, vi = _jacobi_sweeps(gr, gi)

        # Row e of the projection is v_e^dagger A.
        pr = np.zeros((count, m, width))
        pi = np.zeros((count, m, width))
        for i in range(m):
            ur = vr[:, i, :, None]
            ui = vi[:, i, :, None]
            xr = sr[:, None, i, :]
            xi = si[:, None, i, :]
            pr += ur * xr + ui * xi
            pi += ur * xi - ui * xr
        sq = pr * pr + pi * pi
        norms = np.zeros((count, m))
        for l in range(width):
            norms += sq[:, :, l]
        sigma = np.sqrt(norms)
    return -np.sort(-sigma, axis=1)


def singular_values(a: ComplexMatrix) -> List[float]:
    """Singular values of A, descending, min(rows, cols) of them."""
    return [float(x) for x in singular_value_stack(a.entries[None])[0]]


def rank_counts(sigma: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Numerical rank of each row of a singular value stack."""
    require_tol(tol)
    return np.count_nonzero(sigma > tol, axis=1)


def numerical_rank(a: ComplexMatrix, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values strictly above tol."""
    require_tol(tol)
    return sum(1 for s in singular_values(a) if s > tol)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """
    Basis of a subspace of d x d' matrices.

    Elements are expected to be orthonormal under Tr(A^dagger B); operations that
    rely on it check the Gram matrix themselves.
    """

    ambient_dims: Tuple[int, int]
    elements: Tuple[ComplexMatrix, ...] = ()

    def __post_init__(self) -> None:
        dims = (int(self.ambient_dims[0]), int(self.ambient_dims[1]))
        if dims[0] < 1 or dims[1] < 1:
            raise ValueError(f"ambient dimensions must be positive (got {dims})")
        elements = tuple(self.elements)
        for el in elements:
            if el.shape != dims:
                raise ValueError(f"subspace element has shape {el.shape}, expected {dims}")
        object.__setattr__(self, "ambient_dims", dims)
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)

    def stacked(self) -> np.ndarray:
        """Elements flattened row-major, one per row."""
        d, dp = self.ambient_dims
        if not self.elements:
            return np.zeros((0, d * dp), dtype=np.complex128)
        return np.stack([el.entries.reshape(-1) for el in self.elements])

    def gram_deviation(self) -> float:
        """max |Gram_ij - delta_ij|."""
        if not self.elements:
            return 0.0
        rows = self.stacked()
        gram = rows.conj() @ rows.T
        return float(np.abs(gram - np.eye(len(self.elements))).max())

    def combinations(self, coeffs: np.ndarray) -> np.ndarray:
        """
        Stack of sum_j coeffs[t, j] * element_j, one d x d' matrix per row of coeffs.

        Accumulated term by term in real arithmetic so each row's result only
        depends on that row.
        """
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.ndim != 2 or coeffs.shape[1] != len(self.elements):
            raise ValueError(
                f"expected coefficient rows of length {len(self.elements)}, got shape {coeffs.shape}"
            )
        d, dp = self.ambient_dims
        rows = self.stacked()
        br, bi = rows.real, rows.imag
        cr, ci = coeffs.real, coeffs.imag
        mr = np.zeros((coeffs.shape[0], d * dp))
        mi = np.zeros((coeffs.shape[0], d * dp))
        for j in range(len(self.elements)):
            mr += cr[:, j, None] * br[j] - ci[:, j, None] * bi[j]
            mi += cr[:, j, None] * bi[j] + ci[:, j, None] * br[j]
        return _complex(mr, mi).reshape(-1, d, dp)

    def column_support(self, tol: float = DEFAULT_TOL) -> Tuple[int, ...]:
        """Columns on which at least one element has an entry above tol."""
        if not self.elements:
            return ()
        used = np.zeros(self.ambient_dims[1], dtype=bool)
        for el in self.elements:
            used |= (np.abs(el.entries) > tol).any(axis=0)
        return tuple(int(c) for c in np.flatnonzero(used))


def orthonormal_complement(span: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    Orthonormal basis of the orthogonal complement of span inside all d x d' matrices.

    Modified Gram-Schmidt (two passes) of each matrix unit E_{kl}, in row-major
    order, against the span and the complement found so far; residuals with norm
    below tol are dropped.
    """
    require_tol(tol)
    deviation = span.gram_deviation()
    if deviation > tol:
        raise ValueError(f"span is not orthonormal: max Gram deviation {deviation:.3e} exceeds tol {tol:.1e}")

    d, dp = span.ambient_dims
    n = d * dp
    accepted: List[np.ndarray] = [row for row in span.stacked()]
    complement: List[ComplexMatrix] = []
    for idx in range(n):
        if len(accepted) >= n:
            break
        v = np.zeros(n, dtype=np.complex128)
        v[idx] = 1.0
        for _pass in range(2):
            for q in accepted:
                v = v - np.vdot(q, v) * q
        norm = float(np.linalg.norm(v))
        if norm < tol:
            continue
        v = v / norm
        accepted.append(v)
        complement.append(ComplexMatrix(v.reshape(d, dp)))

    return SubspaceBasis(ambient_dims=(d, dp), elements=tuple(complement))


def random_coefficients(k: int, trials: int, seed: int) -> np.ndarray:
    """
    (trials, k) complex coefficients uniform on the unit square [0,1) + i[0,1).

    Row t only depends on (seed, t), so longer runs extend shorter ones.
    """
    rng = np.random.default_rng(seed)
    out = np.empty((trials, k), dtype=np.complex128)
    for t in range(trials):
        out[t].real = rng.random(k)
        out[t].imag = rng.random(k)
    return out


def random_combinations(subspace: SubspaceBasis, trials: int, seed: int) -> np.ndarray:
    """Seeded random elements of the subspace as a (trials, d, d') stack."""
    return subspace.combinations(random_coefficients(len(subspace), trials, seed))


def generic_rank(
    subspace: SubspaceBasis, trials: int, seed: int, tol: float = DEFAULT_TOL
) -> int:
    """Maximum numerical rank over `trials` random combinations of the subspace basis."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1 (got {trials})")
    if not subspace.elements:
        return 0
    sigma = singular_value_stack(random_combinations(subspace, trials, seed))
    return int(rank_counts(sigma, tol).max())
