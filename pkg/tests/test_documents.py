import json
import os
import tempfile
import unittest

import numpy as np

from umeb_builder.constructions import BasisSet
from umeb_builder.correspondence import PureState
from umeb_builder.documents import (
    FORMAT_VERSION,
    MalformedDocumentError,
    basis_to_document,
    dumps_basis,
    load_basis,
    loads_basis,
    save_basis,
)
from umeb_builder.fixtures import FIXTURES, fixture_basis, fixture_umeb_2x3


class TestRoundTrip(unittest.TestCase):
    def test_save_load_save_is_byte_identical(self) -> None:
        bases = {name: fixture_basis(name) for name in FIXTURES}
        bases["empty"] = BasisSet.empty(3, 10)
        with tempfile.TemporaryDirectory() as tmp:
            for name, basis in bases.items():
                with self.subTest(name=name):
                    first = os.path.join(tmp, f"{name}.json")
                    second = os.path.join(tmp, f"{name}.again.json")
                    save_basis(basis, first)
                    save_basis(load_basis(first), second)
                    with open(first, "rb") as a, open(second, "rb") as b:
                        self.assertEqual(a.read(), b.read())

    def test_loaded_basis_keeps_structure(self) -> None:
        basis = fixture_basis("ex3a")
        loaded = loads_basis(dumps_basis(basis))

        self.assertEqual((loaded.d, loaded.d_prime), (3, 10))
        self.assertEqual(loaded.labels, basis.labels)
        self.assertEqual(loaded.provenance.kind, "theorem2")
        for a, b in zip(loaded.states, basis.states):
            self.assertTrue(np.array_equal(a.coeffs, b.coeffs))

    def test_composition_keeps_children(self) -> None:
        doc = basis_to_document(fixture_basis("ex2"))
        self.assertEqual(doc["construction"]["kind"], "composition")
        self.assertEqual(len(doc["construction"]["children"]), 2)
        self.assertEqual(doc["format_version"], FORMAT_VERSION)
        self.assertEqual(len(doc["states"][0]["coeffs"]), 60)

    def test_unnormalized_states_are_not_rescaled(self) -> None:
        basis = fixture_umeb_2x3()
        doc = basis_to_document(basis)
        doc["states"][0]["coeffs"][0] = [2.0, 0.0]

        loaded = loads_basis(json.dumps(doc))
        self.assertEqual(complex(loaded.states[0].coeffs[0, 0]), 2.0)
        self.assertGreater(loaded.states[0].norm(), 1.5)


class TestMalformed(unittest.TestCase):
    def _doc(self) -> dict:
        return basis_to_document(fixture_umeb_2x3())

    def test_invalid_json(self) -> None:
        with self.assertRaises(MalformedDocumentError) as ctx:
            loads_basis("{not json")
        self.assertIn("invalid JSON", str(ctx.exception))

    def test_schema_violations(self) -> None:
        cases = []

        doc = self._doc()
        doc["format_version"] = "2"
        cases.append(("version", doc, "format_version"))

        doc = self._doc()
        doc["states"][1]["coeffs"] = doc["states"][1]["coeffs"][:-1]
        cases.append(("short coeffs", doc, "6 [re, im] pairs"))

        doc = self._doc()
        doc["d"] = True
        cases.append(("bool d", doc, "'d' must be an integer"))

        doc = self._doc()
        doc["construction"]["kind"] = "theorem3"
        cases.append(("unknown kind", doc, "unknown construction kind"))

        doc = self._doc()
        doc["states"][0]["label"] = ["a"]
        cases.append(("label", doc, "'label'"))

        doc = self._doc()
        doc["d"], doc["d_prime"] = 3, 2
        cases.append(("dims", doc, "1 <= d <= d'"))

        for name, doc, fragment in cases:
            with self.subTest(name=name):
                with self.assertRaises(MalformedDocumentError) as ctx:
                    loads_basis(json.dumps(doc))
                self.assertIn(fragment, str(ctx.exception))

    def test_non_finite_coefficient(self) -> None:
        text = dumps_basis(fixture_umeb_2x3()).replace("0.7071067811865475", "NaN", 1)
        with self.assertRaises(MalformedDocumentError) as ctx:
            loads_basis(text)
        self.assertIn("non-finite", str(ctx.exception))

    def test_missing_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(MalformedDocumentError) as ctx:
                load_basis(os.path.join(tmp, "absent.json"))
        self.assertIn("cannot read", str(ctx.exception))

    def test_malformed_is_a_value_error(self) -> None:
        self.assertTrue(issubclass(MalformedDocumentError, ValueError))

    def test_unchecked_state_survives_round_trip(self) -> None:
        coeffs = np.zeros((2, 3), dtype=np.complex128)
        coeffs[0, 0] = 3.0
        basis = BasisSet(2, 3, (PureState.unchecked(2, 3, coeffs),), ((0,),), fixture_umeb_2x3().provenance)
        self.assertEqual(dumps_basis(loads_basis(dumps_basis(basis))), dumps_basis(basis))


if __name__ == "__main__":
    unittest.main()
