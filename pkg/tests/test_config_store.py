import tempfile
import unittest
from pathlib import Path

import yaml

from pzf_lab.config import DEFAULT_SEED, AppConfig
from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.services.config_store import ConfigStore


class ConfigStoreTest(unittest.TestCase):
    def test_load_creates_default_and_save_round_trip(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "config" / "settings.yaml"
            store = ConfigStore(config_path=config_path)

            loaded = store.load()
            self.assertTrue(config_path.exists())
            self.assertEqual(loaded.solver.default_cap, 16)
            self.assertEqual(loaded.cli.default_seed, DEFAULT_SEED)

            updated = loaded.model_copy(
                update={
                    "estimator": loaded.estimator.model_copy(update={"default_trials": 500})
                }
            )
            store.save(updated)

            reloaded = store.load()
            self.assertEqual(reloaded.estimator.default_trials, 500)
            self.assertEqual(reloaded.engine.max_steps_factor, 64)

    def test_patch_merges_nested_sections(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            store = ConfigStore(config_path=Path(tmpdir) / "settings.yaml")
            patched = store.patch({"solver": {"default_cap": 12}})

            self.assertEqual(patched.solver.default_cap, 12)
            self.assertEqual(patched.solver.hard_cap, 22)
            self.assertEqual(store.load().solver.default_cap, 12)

    def test_default_cap_is_clamped_to_hard_cap(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "settings.yaml"
            config_path.write_text(
                yaml.safe_dump({"solver": {"default_cap": 20, "hard_cap": 18}}),
                encoding="utf-8",
            )
            loaded = ConfigStore(config_path=config_path).load()

            self.assertEqual(loaded.solver.default_cap, 18)

    def test_non_mapping_file_is_rejected(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "settings.yaml"
            config_path.write_text("- just\n- a list\n", encoding="utf-8")

            with self.assertRaises(InvalidParameterError):
                ConfigStore(config_path=config_path).load()

    def test_relative_out_paths_use_output_root(self):
        config = AppConfig()
        self.assertEqual(config.resolve_out(Path("sweep.csv")), Path("output") / "sweep.csv")
        absolute = Path(tempfile.gettempdir()) / "sweep.csv"
        self.assertEqual(config.resolve_out(absolute), absolute)


if __name__ == "__main__":
    unittest.main()
