import tempfile
import unittest
from pathlib import Path

from pzf_lab import __version__
from pzf_lab.config import AppConfig
from pzf_lab.core.utils import loads_json
from pzf_lab.schemas import Command
from pzf_lab.services.command_runner import CommandRunner, run_command


class CommandRunnerTest(unittest.TestCase):
    def setUp(self):
        self.runner = CommandRunner(AppConfig())

    def run_ok(self, **fields):
        result = self.runner.run(Command(**fields))
        self.assertEqual(result.exit_code, 0, result.text)
        return result

    def test_exact_envelope(self):
        result = self.run_ok(subcommand="exact", graph="path:3", start="0", seed=9)
        payload = loads_json(result.text)
        self.assertEqual(payload["version"], __version__)
        self.assertEqual(payload["command"], "exact")
        self.assertEqual(payload["seed"], 9)
        self.assertEqual(payload["params"]["graph"], "path:3")
        self.assertEqual(payload["params"]["start"], [0])
        self.assertAlmostEqual(payload["ept"], 2.0)
        self.assertEqual(payload["start"], "{0}")
        self.assertFalse(payload["start_chosen"])

    def test_exact_best_start_reports_center(self):
        result = self.run_ok(subcommand="exact", graph="path:4")
        self.assertAlmostEqual(result.payload["ept"], 8 / 3)
        self.assertIn(result.payload["start"], {"{1}", "{2}"})
        self.assertTrue(result.payload["start_chosen"])

    def test_exact_over_cap_fails(self):
        result = run_command(Command(subcommand="exact", graph="path:30"))
        self.assertEqual(result.exit_code, 1)
        self.assertIn("16", result.text)
        self.assertTrue(result.text.startswith("error:"))

    def test_cap_override_above_hard_cap_fails(self):
        result = self.runner.run(
            Command(subcommand="exact", graph="path:3", cap_override=40)
        )
        self.assertEqual(result.exit_code, 1)

    def test_throttle_path_three(self):
        payload = self.run_ok(subcommand="throttle", graph="path:3").payload
        self.assertAlmostEqual(payload["thpzf"], 3.0)
        self.assertEqual(payload["argmin"], "{0}")
        self.assertEqual(payload["argmin_bits"], "0x1")

    def test_estimate_complete_two(self):
        payload = self.run_ok(
            subcommand="estimate", graph="complete:2", start="0", trials=50, seed=3
        ).payload
        self.assertAlmostEqual(payload["mean"], 1.0)
        self.assertEqual(payload["trials"], 50)

    def test_couple_check_reports_no_violations(self):
        payload = self.run_ok(
            subcommand="couple-check",
            graph="path:6",
            start="0",
            superset="0,1",
            steps=20,
            trials=500,
            seed=2,
        ).payload
        self.assertTrue(payload["subset_ok"])
        self.assertEqual(payload["violations"], 0)
        self.assertEqual(payload["trials"], 500)
        self.assertIsNone(payload["first_violation_seed"])

    def test_star_tails_defaults_to_csv(self):
        result = self.run_ok(subcommand="star-tails", n_max=10)
        header = result.text.splitlines()[0]
        self.assertEqual(header, "n,k,threshold,expected_increase,tail,meets_floor")
        self.assertEqual(len(result.text.strip().splitlines()), 1 + sum(range(3, 11)))
        self.assertTrue(result.payload["all_meet_floor"])

    def test_star_tails_json_on_request(self):
        result = self.run_ok(subcommand="star-tails", n_max=4, format="json")
        payload = loads_json(result.text)
        self.assertEqual(len(payload["rows"]), 3 + 4)
        self.assertEqual(payload["floor"], 0.2)

    def test_modified_single_run(self):
        payload = self.run_ok(subcommand="modified", graph="path:5", seed=4).payload
        self.assertFalse(payload["stalled"])
        self.assertEqual(
            payload["total_steps"],
            payload["phase4_steps"] + payload["phase6_steps"] + payload["phase7_steps"],
        )

    def test_modified_corpus_rows(self):
        result = self.run_ok(
            subcommand="modified", graph="spider:3,2", seed=4, trials=20, format="csv"
        )
        lines = result.text.strip().splitlines()
        self.assertEqual(len(lines), 21)
        self.assertTrue(lines[0].startswith("seed,phase4_steps"))
        self.assertEqual(result.payload["runs"], 20)

    def test_bounds_rows(self):
        payload = self.run_ok(subcommand="bounds", graph="path:5").payload
        self.assertTrue(payload["all_satisfied"])
        self.assertEqual(payload["start"], "{2}")
        self.assertIn("path_closed_form", {row["name"] for row in payload["rows"]})

    def test_generate_prints_edge_list(self):
        result = self.run_ok(subcommand="generate", graph="path:3")
        self.assertEqual(result.text.splitlines()[0], "3 2")

    def test_out_writes_file(self):
        with tempfile.TemporaryDirectory() as tmp_dir:
            out = Path(tmp_dir) / "nested" / "throttle.json"
            result = self.run_ok(subcommand="throttle", graph="path:3", out=out)
            written = out.read_text(encoding="utf-8")
            self.assertTrue(written.endswith("\n"))
            self.assertEqual(loads_json(written), loads_json(result.text))

    def test_graph_error_exits_one(self):
        result = self.runner.run(Command(subcommand="cornerstones", graph="nope:3"))
        self.assertEqual(result.exit_code, 1)
        self.assertIn("nope", result.text)


if __name__ == "__main__":
    unittest.main()
