import io
import math
import unittest
from unittest import mock

import numpy as np

from umeb_builder.config import VerifyConfig
from umeb_builder.constructions import (
    BasisSet,
    HolePattern,
    PartitionSpec,
    compose_direct_sum,
    theorem1_construct,
    theorem2_construct,
)
from umeb_builder.correspondence import PureState
from umeb_builder.fixtures import bell_basis, example1, fixture_basis, fixture_umeb_2x3, fixture_upb_3x3
from umeb_builder.linalg_core import SubspaceBasis
from umeb_builder.verification import (
    EXTENDIBLE,
    INCONCLUSIVE,
    INCONCLUSIVE_QUALIFIER,
    MEB,
    NOT_MAX_ENTANGLED,
    NOT_ORTHONORMAL,
    UMEB,
    ComplementFacts,
    check_max_entanglement,
    check_orthonormality,
    entanglement_deviation,
    exhibit_schmidt_ceiling,
    structural_unextendibility,
    verify_umeb,
    verify_upb,
)
from umeb_builder.search import OracleResult


FAST = VerifyConfig(oracle_restarts=3, oracle_iters=60, generic_trials=50)


def _subset(basis: BasisSet, count: int) -> BasisSet:
    return BasisSet(basis.d, basis.d_prime, basis.states[:count], basis.labels[:count], basis.provenance)


def _eq19() -> BasisSet:
    return theorem2_construct(PartitionSpec.from_parts(3, 10, (4, 5)))


class TestChecks(unittest.TestCase):
    def test_orthonormality(self) -> None:
        result = check_orthonormality(_eq19(), 1e-9)
        self.assertTrue(result.passed)
        self.assertLess(result.deviation, 1e-12)

        basis = _eq19()
        repeated = BasisSet(3, 10, basis.states[:2] + basis.states[:1], ((0,), (1,), (2,)), basis.provenance)
        result = check_orthonormality(repeated, 1e-9)
        self.assertFalse(result.passed)
        self.assertAlmostEqual(result.deviation, 1.0, places=12)

        self.assertTrue(check_orthonormality(_subset(basis, 1), 1e-9).passed)
        with self.assertRaises(ValueError):
            check_orthonormality(BasisSet.empty(3, 10), 1e-9)

    def test_max_entanglement(self) -> None:
        self.assertTrue(check_max_entanglement(example1(), 1e-9).passed)

        upb = fixture_basis("upb3x3")
        self.assertFalse(check_max_entanglement(upb, 1e-9).passed)

        units = [PureState.from_kets(2, 3, [(1.0, k, l)]) for k in range(2) for l in range(3)]
        basis = BasisSet(2, 3, tuple(units), tuple((i,) for i in range(6)), upb.provenance)
        result = check_max_entanglement(basis, 1e-9)
        self.assertFalse(result.passed)
        self.assertAlmostEqual(result.deviation, 1.0, places=12)

    def test_overflow_counts_as_infinite_deviation(self) -> None:
        huge = PureState.unchecked(2, 3, np.array([[1e200, 0.0, 0.0], [0.0, 1.0, 0.0]]))
        self.assertEqual(entanglement_deviation(huge), math.inf)

        bell = bell_basis()
        states = (PureState.unchecked(2, 2, np.full((2, 2), 1e200)),) + bell.states[1:]
        basis = BasisSet(2, 2, states, bell.labels, bell.provenance)
        self.assertEqual(check_orthonormality(basis, 1e-9).deviation, math.inf)
        result = check_max_entanglement(basis, 1e-9)
        self.assertFalse(result.passed)
        self.assertEqual(result.deviation, math.inf)


class TestStructural(unittest.TestCase):
    def test_partition_basis_complement(self) -> None:
        facts = structural_unextendibility(_eq19(), 1e-9, trials=50, seed=0)
        self.assertTrue(facts.passed)
        self.assertEqual(facts.column_support, (9,))
        self.assertEqual(facts.generic_rank, 1)
        self.assertEqual(facts.dim, 3)

    def test_hole_pattern_complement(self) -> None:
        facts = structural_unextendibility(example1(), 1e-9, trials=50, seed=0)
        self.assertTrue(facts.passed)
        self.assertEqual(facts.column_support, (1, 3, 5))
        self.assertEqual(facts.generic_rank, 3)
        self.assertEqual(facts.dim, 5)

    def test_bell_minus_one_exhibits_extension(self) -> None:
        facts = structural_unextendibility(_subset(bell_basis(), 3), 1e-9, trials=50, seed=0)
        self.assertFalse(facts.passed)
        self.assertTrue(facts.exhibited_extension)
        self.assertEqual(facts.generic_rank, 2)

    def test_schmidt_ceiling(self) -> None:
        self.assertEqual(exhibit_schmidt_ceiling(_eq19(), trials=20, seed=0), 1)
        self.assertEqual(exhibit_schmidt_ceiling(example1(), trials=20, seed=0), 3)
        self.assertEqual(exhibit_schmidt_ceiling(_subset(bell_basis(), 3), trials=20, seed=0), 2)
        self.assertEqual(exhibit_schmidt_ceiling(bell_basis(), trials=20, seed=0), 0)


class TestVerifyUmeb(unittest.TestCase):
    def test_partition_basis_is_umeb(self) -> None:
        report = verify_umeb(theorem2_construct(PartitionSpec.from_parts(3, 10, (4, 4))), FAST)

        self.assertEqual(report.verdict, UMEB)
        self.assertTrue(report.passed)
        self.assertEqual(report.member_count, 24)
        self.assertEqual(report.complement_dim, 6)
        self.assertEqual(report.complement_column_support, [8, 9])
        self.assertEqual(report.complement_generic_rank, 2)
        self.assertLess(report.numeric_oracle_max_sigma_min, 1e-8)
        self.assertIsNone(report.qualifier)

    def test_two_by_three_fixture_is_umeb(self) -> None:
        report = verify_umeb(fixture_umeb_2x3(), FAST)
        self.assertEqual(report.verdict, UMEB)
        self.assertEqual(report.member_count, 4)

    def test_complete_bell_basis_is_meb(self) -> None:
        report = verify_umeb(bell_basis(), FAST)
        self.assertEqual(report.verdict, MEB)
        self.assertEqual(report.complement_dim, 0)
        self.assertIsNone(report.numeric_oracle_max_sigma_min)

    def test_bell_minus_one_is_extendible(self) -> None:
        report = verify_umeb(_subset(bell_basis(), 3), FAST)
        self.assertEqual(report.verdict, EXTENDIBLE)
        self.assertTrue(report.exhibited_extension)
        self.assertGreaterEqual(report.numeric_oracle_max_sigma_min, 1 - 1e-6)
        self.assertFalse(report.passed)

    def test_corrupted_coefficient_is_not_orthonormal(self) -> None:
        basis = _eq19()
        coeffs = basis.states[0].coeffs.copy()
        coeffs[0, 0] += 0.1
        states = (PureState.unchecked(3, 10, coeffs),) + basis.states[1:]
        report = verify_umeb(BasisSet(3, 10, states, basis.labels, basis.provenance), FAST)

        self.assertEqual(report.verdict, NOT_ORTHONORMAL)
        self.assertIsNone(report.complement_dim)

    def test_overflowing_coefficient_is_not_orthonormal(self) -> None:
        basis = _eq19()
        coeffs = basis.states[0].coeffs.copy()
        coeffs[0, 0] = 1e200
        states = (PureState.unchecked(3, 10, coeffs),) + basis.states[1:]
        report = verify_umeb(BasisSet(3, 10, states, basis.labels, basis.provenance), FAST)

        self.assertEqual(report.verdict, NOT_ORTHONORMAL)
        self.assertEqual(report.orthonormality.deviation, math.inf)
        self.assertEqual(report.max_entanglement.deviation, math.inf)
        self.assertFalse(report.passed)

    def test_product_basis_is_not_maximally_entangled(self) -> None:
        report = verify_umeb(fixture_basis("upb3x3"), FAST)
        self.assertEqual(report.verdict, NOT_MAX_ENTANGLED)

    def test_empty_set_is_extendible(self) -> None:
        report = verify_umeb(BasisSet.empty(2, 3), FAST)
        self.assertEqual(report.verdict, EXTENDIBLE)
        self.assertEqual(report.qualifier, "empty set")
        self.assertEqual(report.complement_dim, 6)

    def test_inconclusive_when_rank_bound_fails_and_oracle_finds_nothing(self) -> None:
        facts = ComplementFacts(
            passed=False,
            complement=SubspaceBasis((2, 3)),
            column_support=(0, 1, 2),
            generic_rank=2,
        )
        oracle = OracleResult(max_sigma_min=0.4, best=None, per_restart=(0.4,), seed=0, iters=60)
        with mock.patch(
            "umeb_builder.verification.structural_unextendibility", return_value=facts
        ), mock.patch("umeb_builder.verification.numeric_unextendibility_oracle", return_value=oracle):
            report = verify_umeb(fixture_umeb_2x3(), FAST)

        self.assertEqual(report.verdict, INCONCLUSIVE)
        self.assertEqual(report.qualifier, INCONCLUSIVE_QUALIFIER)
        self.assertFalse(report.passed)

    def test_composed_partition_blocks(self) -> None:
        block = theorem2_construct(PartitionSpec.from_parts(3, 5, (4,)))
        report = verify_umeb(compose_direct_sum(block, block, 5), FAST)

        self.assertEqual(report.verdict, UMEB)
        self.assertEqual(report.member_count, 24)
        self.assertEqual(report.complement_column_support, [4, 9])
        self.assertEqual(report.complement_generic_rank, 2)

    def test_example2_is_umeb(self) -> None:
        report = verify_umeb(fixture_basis("ex2"), FAST)
        self.assertEqual(report.verdict, UMEB)
        self.assertEqual(report.member_count, 50)
        self.assertLess(report.complement_generic_rank, 5)

    def test_permutation_invariance(self) -> None:
        basis = theorem1_construct(HolePattern.parse(4, 6, "0:2,1:5,2:2,3:5"))
        row_perm, col_perm = [2, 0, 3, 1], [4, 1, 5, 0, 3, 2]
        permuted = BasisSet(
            4,
            6,
            tuple(PureState(4, 6, s.coeffs[np.ix_(row_perm, col_perm)]) for s in basis.states),
            basis.labels,
            basis.provenance,
        )

        a = verify_umeb(basis, FAST)
        b = verify_umeb(permuted, FAST)

        self.assertEqual(a.verdict, b.verdict)
        self.assertEqual(a.complement_dim, b.complement_dim)
        self.assertEqual(a.complement_generic_rank, b.complement_generic_rank)
        self.assertEqual(len(a.complement_column_support), len(b.complement_column_support))
        self.assertAlmostEqual(a.orthonormality.deviation, b.orthonormality.deviation, delta=1e-10)
        self.assertAlmostEqual(a.max_entanglement.deviation, b.max_entanglement.deviation, delta=1e-10)
        self.assertLess(a.numeric_oracle_max_sigma_min, 1e-8)
        self.assertLess(b.numeric_oracle_max_sigma_min, 1e-8)

    def test_report_echoes_settings(self) -> None:
        report = verify_umeb(fixture_umeb_2x3(), VerifyConfig(seed=7, oracle_restarts=2, oracle_iters=30, generic_trials=55))
        data = report.to_dict()

        self.assertEqual(data["seed"], 7)
        self.assertEqual(data["oracle_restarts"], 2)
        self.assertEqual(data["oracle_iters"], 30)
        self.assertEqual(data["generic_trials"], 55)
        self.assertEqual(data["complement_column_support"], [2])
        self.assertEqual(data["verdict"], UMEB)
        self.assertTrue(data["orthonormality"]["passed"])

    def test_verbose_writes_one_line_per_step(self) -> None:
        with mock.patch("sys.stderr", new_callable=io.StringIO) as fake_err:
            verify_umeb(fixture_umeb_2x3(), FAST, verbose=True)

        text = fake_err.getvalue()
        for step in ("orthonormality:", "entanglement:", "complement:", "oracle:"):
            self.assertIn(step, text)


class TestVerifyUpb(unittest.TestCase):
    def test_tiles_pass_and_four_tiles_fail(self) -> None:
        tiles = fixture_upb_3x3()
        self.assertTrue(verify_upb(tiles).passed)
        self.assertFalse(verify_upb(tiles[:4]).passed)

    def test_computational_basis_minus_one_fails(self) -> None:
        states = [PureState.from_kets(2, 2, [(1.0, k, l)]) for k in range(2) for l in range(2)]
        self.assertFalse(verify_upb(states[:3], grid_resolution=10).passed)

    def test_non_product_input_raises(self) -> None:
        with self.assertRaises(ValueError):
            verify_upb(list(bell_basis().states[:1]), grid_resolution=1)


if __name__ == "__main__":
    unittest.main()
