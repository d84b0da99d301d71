import math
import unittest

from umeb_builder.constructions import BasisSet, PartitionSpec, theorem2_construct
from umeb_builder.correspondence import PureState
from umeb_builder.fixtures import bell_basis, example1, fixture_upb_3x3
from umeb_builder.search import numeric_unextendibility_oracle, product_factors, search_orthogonal_product


def _bell_minus_one() -> BasisSet:
    bell = bell_basis()
    return BasisSet(2, 2, bell.states[:3], bell.labels[:3], bell.provenance)


def _computational_basis_2x2():
    return [PureState.from_kets(2, 2, [(1.0, k, l)]) for k in range(2) for l in range(2)]


class TestNumericOracle(unittest.TestCase):
    def test_finds_missing_bell_state(self) -> None:
        result = numeric_unextendibility_oracle(_bell_minus_one(), restarts=2, iters=50, seed=0)
        self.assertAlmostEqual(result.max_sigma_min, 1.0, delta=1e-6)
        self.assertIsNotNone(result.best)

    def test_rank_deficient_complements_give_zero(self) -> None:
        for basis in (theorem2_construct(PartitionSpec.from_parts(3, 10, (4, 5))), example1(pullback=False)):
            with self.subTest(d_prime=basis.d_prime):
                result = numeric_unextendibility_oracle(basis, restarts=3, iters=60, seed=0)
                self.assertLess(result.max_sigma_min, 1e-8)
                self.assertGreaterEqual(result.max_sigma_min, 0.0)

    def test_deterministic_monotone_and_worker_independent(self) -> None:
        basis = _bell_minus_one()
        a = numeric_unextendibility_oracle(basis, restarts=4, iters=20, seed=3)
        b = numeric_unextendibility_oracle(basis, restarts=4, iters=20, seed=3, workers=3)
        longer = numeric_unextendibility_oracle(basis, restarts=6, iters=20, seed=3)

        self.assertEqual(a.per_restart, b.per_restart)
        self.assertEqual(a.max_sigma_min, b.max_sigma_min)
        self.assertEqual(longer.per_restart[:4], a.per_restart)
        self.assertGreaterEqual(longer.max_sigma_min, a.max_sigma_min)

    def test_complete_basis_has_no_complement(self) -> None:
        with self.assertRaises(ValueError):
            numeric_unextendibility_oracle(bell_basis(), restarts=1, iters=1, seed=0)

    def test_rejects_non_positive_budgets(self) -> None:
        with self.assertRaises(ValueError):
            numeric_unextendibility_oracle(_bell_minus_one(), restarts=0, iters=10, seed=0)


class TestProductSearch(unittest.TestCase):
    def test_factors_reconstruct_state(self) -> None:
        state = fixture_upb_3x3()[1]
        x, y = product_factors(state)
        rebuilt = PureState.product(x, y)
        self.assertAlmostEqual(abs(rebuilt.inner(state)), 1.0, places=12)

    def test_upb_has_no_orthogonal_product_state(self) -> None:
        result = search_orthogonal_product(fixture_upb_3x3(), restarts=40, seed=0)
        self.assertTrue(result.passed)
        self.assertGreater(result.best_residual, 1e-6)

    def test_removing_a_tile_reopens_the_gap(self) -> None:
        result = search_orthogonal_product(fixture_upb_3x3()[:4], restarts=100, seed=0)
        self.assertFalse(result.passed)
        self.assertLess(result.best_residual, 1e-6)

    def test_finds_missing_computational_state(self) -> None:
        states = _computational_basis_2x2()
        result = search_orthogonal_product(states[:3], restarts=10, seed=1)

        self.assertFalse(result.passed)
        self.assertAlmostEqual(abs(result.best_candidate.inner(states[3])), 1.0, places=6)

    def test_repeatable_and_split_across_workers(self) -> None:
        states = _computational_basis_2x2()[:3]
        a = search_orthogonal_product(states, restarts=8, seed=4)
        again = search_orthogonal_product(states, restarts=8, seed=4)
        split = search_orthogonal_product(states, restarts=8, seed=4, workers=3)

        self.assertEqual(a.best_residual, again.best_residual)
        self.assertFalse(split.passed)
        self.assertLess(split.best_residual, 1e-6)
        self.assertAlmostEqual(abs(split.best_candidate.inner(_computational_basis_2x2()[3])), 1.0, places=6)

    def test_rejects_entangled_or_overlapping_inputs(self) -> None:
        r2 = 1 / math.sqrt(2)
        bell = PureState.from_kets(2, 2, [(r2, 0, 0), (r2, 1, 1)])
        with self.assertRaises(ValueError) as ctx:
            search_orthogonal_product([bell], restarts=1)
        self.assertIn("not a product state", str(ctx.exception))

        same = _computational_basis_2x2()[0]
        with self.assertRaises(ValueError) as ctx:
            search_orthogonal_product([same, same], restarts=1)
        self.assertIn("not orthogonal", str(ctx.exception))

        with self.assertRaises(ValueError):
            search_orthogonal_product([], restarts=1)


if __name__ == "__main__":
    unittest.main()
