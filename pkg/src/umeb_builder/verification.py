"""
Certification of candidate UMEBs and of product sets claimed to be UPBs.

A BasisSet is a UMEB when its states are orthonormal and maximally entangled,
there are fewer than d*d' of them, and no maximally entangled state is
orthogonal to all of them. The last condition is established structurally:
every element of the orthogonal complement has rank < d (column support or
generic rank), so none can have all singular values equal to 1. The numeric
oracle only ever corroborates or refutes.
"""

import math
import sys
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .config import (
    DEFAULT_GENERIC_TRIALS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    DEFAULT_UPB_RESTARTS,
    DEFAULT_UPB_TOL,
    MIN_GENERIC_TRIALS,
    VerifyConfig,
)
from .constructions import BasisSet
from .correspondence import PureState
from .linalg_core import (
    ComplexMatrix,
    SubspaceBasis,
    generic_rank,
    orthonormal_complement,
    random_combinations,
    rank_counts,
    require_tol,
    singular_value_stack,
)
from .search import ProductSearchResult, numeric_unextendibility_oracle, search_orthogonal_product


MEB = "MEB"
UMEB = "UMEB"
EXTENDIBLE = "EXTENDIBLE"
NOT_ORTHONORMAL = "NOT_ORTHONORMAL"
NOT_MAX_ENTANGLED = "NOT_MAX_ENTANGLED"
INCONCLUSIVE = "INCONCLUSIVE"

PASSING_VERDICTS = (MEB, UMEB)

INCONCLUSIVE_QUALIFIER = "structural check inconclusive; oracle found no extension."


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    deviation: float


def _log(verbose: bool, message: str) -> None:
    if verbose:
        sys.stderr.write(f"  {message}\n")
        sys.stderr.flush()


def check_orthonormality(basis: BasisSet, tol: float = DEFAULT_TOL) -> CheckResult:
    """max |<phi_i|phi_j> - delta_ij| against tol; an overflowing Gram matrix counts as infinite deviation."""
    require_tol(tol)
    if not basis.states:
        raise ValueError("orthonormality check needs a nonempty basis")
    with np.errstate(over="ignore", invalid="ignore"):
        deviation = basis.span().gram_deviation()
    if not math.isfinite(deviation):
        deviation = math.inf
    return CheckResult(passed=deviation <= tol, deviation=deviation)


def _entanglement_deviations(d: int, coeffs: np.ndarray) -> np.ndarray:
    """max |sigma_i - 1| of sqrt(d) * a_kl for each coefficient matrix in the stack; inf where not finite."""
    with np.errstate(over="ignore", invalid="ignore"):
        sigma = singular_value_stack(math.sqrt(d) * coeffs)
        deviation = np.abs(sigma - 1.0).max(axis=1)
    return np.where(np.isfinite(deviation), deviation, math.inf)


def entanglement_deviation(state: PureState) -> float:
    """max |sigma_i - 1| of sqrt(d) * a_kl, without requiring a unit-norm state."""
    return float(_entanglement_deviations(state.d, state.coeffs[None])[0])


def check_max_entanglement(basis: BasisSet, tol: float = DEFAULT_TOL) -> CheckResult:
    require_tol(tol)
    if not basis.states:
        return CheckResult(passed=True, deviation=0.0)
    coeffs = np.stack([s.coeffs for s in basis.states])
    worst = float(_entanglement_deviations(basis.d, coeffs).max())
    return CheckResult(passed=worst <= tol, deviation=worst)


def _first_maximally_entangled(stack: np.ndarray, d: int, tol: float) -> Optional[ComplexMatrix]:
    """The first matrix of the stack that, rescaled to HS norm sqrt(d), has every singular value within tol of 1."""
    norms = np.sqrt(np.sum(np.abs(stack) ** 2, axis=(1, 2)))
    usable = norms > 0.0
    scaled = stack * np.where(usable, math.sqrt(d) / np.where(usable, norms, 1.0), 0.0)[:, None, None]
    deviation = np.abs(singular_value_stack(scaled) - 1.0).max(axis=1)
    hits = np.flatnonzero(usable & (deviation <= tol))
    if hits.size == 0:
        return None
    return ComplexMatrix(scaled[hits[0]])


@dataclass(frozen=True)
class ComplementFacts:
    """What the orthogonal complement of a basis looks like."""

    passed: bool
    complement: SubspaceBasis
    column_support: Tuple[int, ...]
    generic_rank: int
    extension: Optional[ComplexMatrix] = None

    @property
    def dim(self) -> int:
        return len(self.complement)

    @property
    def exhibited_extension(self) -> bool:
        return self.extension is not None

    def support_for_report(self, d_prime: int) -> Union[str, list]:
        if len(self.column_support) == d_prime:
            return "full"
        return list(self.column_support)


def structural_unextendibility(
    basis: BasisSet,
    tol: float = DEFAULT_TOL,
    trials: int = DEFAULT_GENERIC_TRIALS,
    seed: int = DEFAULT_SEED,
) -> ComplementFacts:
    """
    Rank bound on the complement of the spanned matrix subspace.

    Passes when the complement's generic rank is < d. A complement supported on
    fewer than d columns bounds the rank exactly; generic_rank sampling (at least
    MIN_GENERIC_TRIALS seeded combinations) covers the rest. Fails outright when
    a complement basis element or sample is itself maximally entangled.
    """
    require_tol(tol)
    trials = max(trials, MIN_GENERIC_TRIALS)
    d = basis.d
    complement = orthonormal_complement(basis.span(), tol)
    support = complement.column_support(tol)

    extension = None
    if complement.elements:
        candidates = np.concatenate(
            [
                np.stack([el.entries for el in complement.elements]),
                random_combinations(complement, trials, seed),
            ]
        )
        extension = _first_maximally_entangled(candidates, d, tol)

    # Every complement element lives on `support`, so its rank is at most len(support).
    bounded_by_support = len(support) < d
    rank = generic_rank(complement, trials, seed, tol) if complement.elements else 0

    return ComplementFacts(
        passed=(bounded_by_support or rank < d) and extension is None,
        complement=complement,
        column_support=support,
        generic_rank=rank,
        extension=extension,
    )


def exhibit_schmidt_ceiling(
    basis: BasisSet, trials: int, seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL
) -> int:
    """Largest Schmidt number seen among random unit vectors of the complement."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1 (got {trials})")
    complement = orthonormal_complement(basis.span(), tol)
    if not complement.elements:
        return 0
    samples = random_combinations(complement, trials, seed)
    norms = np.sqrt(np.sum(np.abs(samples) ** 2, axis=(1, 2)))
    # sigma(cA) = c sigma(A) for c > 0.
    sigma = singular_value_stack(samples) * (math.sqrt(basis.d) / norms)[:, None]
    return int(rank_counts(sigma, tol).max())


@dataclass(frozen=True)
class VerificationReport:
    d: int
    d_prime: int
    member_count: int
    orthonormality: CheckResult
    max_entanglement: CheckResult
    verdict: str
    config: VerifyConfig
    complement_dim: Optional[int] = None
    complement_column_support: Union[str, list, None] = None
    complement_generic_rank: Optional[int] = None
    structural_unextendible: Optional[bool] = None
    numeric_oracle_max_sigma_min: Optional[float] = None
    exhibited_extension: bool = False
    qualifier: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.verdict in PASSING_VERDICTS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "d_prime": self.d_prime,
            "member_count": self.member_count,
            "orthonormality": {
                "passed": self.orthonormality.passed,
                "max_deviation": self.orthonormality.deviation,
            },
            "max_entanglement": {
                "passed": self.max_entanglement.passed,
                "worst_deviation": self.max_entanglement.deviation,
            },
            "complement_dim": self.complement_dim,
            "complement_column_support": self.complement_column_support,
            "complement_generic_rank": self.complement_generic_rank,
            "structural_unextendible": self.structural_unextendible,
            "numeric_oracle_max_sigma_min": self.numeric_oracle_max_sigma_min,
            "exhibited_extension": self.exhibited_extension,
            "verdict": self.verdict,
            "qualifier": self.qualifier,
            "tol": self.config.tol,
            "oracle_margin": self.config.oracle_margin,
            "seed": self.config.seed,
            "oracle_restarts": self.config.oracle_restarts,
            "oracle_iters": self.config.oracle_iters,
            "generic_trials": self.config.generic_trials,
        }


def verify_umeb(
    basis: BasisSet, config: Optional[VerifyConfig] = None, verbose: bool = False
) -> VerificationReport:
    """Run every check and derive the verdict; failures are verdicts, never exceptions."""
    config = config or VerifyConfig()
    d, dp = basis.d, basis.d_prime
    count = len(basis)
    full = d * dp
    base = dict(d=d, d_prime=dp, member_count=count, config=config)

    if count == 0:
        _log(verbose, "empty set: every maximally entangled state extends it")
        return VerificationReport(
            orthonormality=CheckResult(True, 0.0),
            max_entanglement=CheckResult(True, 0.0),
            verdict=EXTENDIBLE,
            complement_dim=full,
            complement_column_support="full",
            complement_generic_rank=d,
            structural_unextendible=False,
            exhibited_extension=True,
            qualifier="empty set",
            **base,
        )

    ortho = check_orthonormality(basis, config.tol)
    _log(verbose, f"orthonormality: max Gram deviation {ortho.deviation:.3e} ({'pass' if ortho.passed else 'fail'})")
    ent = check_max_entanglement(basis, config.tol)
    _log(verbose, f"entanglement: worst |sigma - 1| {ent.deviation:.3e} ({'pass' if ent.passed else 'fail'})")

    if not ortho.passed:
        return VerificationReport(orthonormality=ortho, max_entanglement=ent, verdict=NOT_ORTHONORMAL, **base)
    if not ent.passed:
        return VerificationReport(orthonormality=ortho, max_entanglement=ent, verdict=NOT_MAX_ENTANGLED, **base)
    if count == full:
        _log(verbose, "complement: empty (complete basis)")
        return VerificationReport(
            orthonormality=ortho,
            max_entanglement=ent,
            verdict=MEB,
            complement_dim=0,
            complement_column_support=[],
            complement_generic_rank=0,
            structural_unextendible=True,
            **base,
        )

    facts = structural_unextendibility(basis, config.tol, config.generic_trials, config.seed)
    _log(
        verbose,
        f"complement: dim {facts.dim}, columns {facts.support_for_report(dp)}, "
        f"generic rank {facts.generic_rank} (d={d})",
    )
    oracle = numeric_unextendibility_oracle(
        basis,
        restarts=config.oracle_restarts,
        iters=config.oracle_iters,
        seed=config.seed,
        workers=config.workers,
        complement=facts.complement,
        tol=config.tol,
    )
    _log(verbose, f"oracle: max sigma_min {oracle.max_sigma_min:.3e} over {config.oracle_restarts} restarts")

    threshold = 1.0 - config.oracle_margin
    exhibited = facts.exhibited_extension or oracle.max_sigma_min >= threshold
    qualifier = None
    if exhibited:
        verdict = EXTENDIBLE
    elif facts.passed:
        verdict = UMEB
    else:
        verdict = INCONCLUSIVE
        qualifier = INCONCLUSIVE_QUALIFIER

    return VerificationReport(
        orthonormality=ortho,
        max_entanglement=ent,
        verdict=verdict,
        complement_dim=facts.dim,
        complement_column_support=facts.support_for_report(dp),
        complement_generic_rank=facts.generic_rank,
        structural_unextendible=facts.passed,
        numeric_oracle_max_sigma_min=oracle.max_sigma_min,
        exhibited_extension=exhibited,
        qualifier=qualifier,
        **base,
    )


def verify_upb(
    states: Sequence[PureState],
    grid_resolution: int = DEFAULT_UPB_RESTARTS,
    tol: float = DEFAULT_UPB_TOL,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> ProductSearchResult:
    """
    Whether no product state orthogonal to every input was found.

    grid_resolution is the number of seeded alternating-minimization restarts;
    non-product or non-orthogonal inputs raise ValueError.
    """
    return search_orthogonal_product(states, restarts=grid_resolution, tol=tol, seed=seed, workers=workers)
