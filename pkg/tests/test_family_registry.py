import unittest

from pzf_lab.core.errors import FamilyNotFoundError
from pzf_lab.core.registry import FamilyRegistry
from pzf_lab.modules.graph_core.generators import build_family_registry


class FamilyRegistryTest(unittest.TestCase):
    def test_register_and_resolve(self):
        registry = FamilyRegistry()
        registry.register("mock", lambda size: {"size": size})

        self.assertTrue(registry.has("mock"))
        payload = registry.resolve("mock", size=3)
        self.assertEqual(payload["size"], 3)
        self.assertEqual(registry.list_ids(), ["mock"])

    def test_unknown_family_names_known_ones(self):
        registry = build_family_registry()

        with self.assertRaises(FamilyNotFoundError) as caught:
            registry.resolve("wheel", n=5)
        self.assertIn("star_chain", str(caught.exception))

    def test_builtin_families(self):
        self.assertEqual(
            build_family_registry().list_ids(),
            ["complete", "cycle", "gnp", "path", "spider", "star", "star_chain"],
        )


if __name__ == "__main__":
    unittest.main()
