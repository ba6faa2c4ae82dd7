import unittest

import networkx as nx
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from pzf_lab.core.errors import (
    DisconnectedGraphError,
    InvalidParameterError,
    InvalidStartError,
    PreconditionError,
)
from pzf_lab.core.types import ColorState, Trajectory
from pzf_lab.core.utils import derive_seed
from pzf_lab.modules.graph_core.generators import complete_graph, path_graph, star_graph
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import connected_graphs
from pzf_lab.modules.pzf_engine.engine import (
    PZF_RULE,
    ThinnedRule,
    advance,
    blue_probability,
    coupled_rule_run,
    coupled_run,
    expected_increase,
    force_probability,
    run,
    step,
)
from pzf_lab.modules.pzf_engine.randomness import EdgeStream, uniform, uniform_draws

SIX_VERTEX_GRAPHS = list(connected_graphs(6, labeled=False))


class RandomnessTest(unittest.TestCase):
    def test_draw_is_pure_in_seed_edge_and_step(self):
        block = uniform_draws(42, 3, 16)
        self.assertEqual(uniform(42, 5, 3), float(block[5]))
        np.testing.assert_array_equal(block, uniform_draws(42, 3, 16))
        self.assertFalse(np.array_equal(block, uniform_draws(42, 4, 16)))
        self.assertFalse(np.array_equal(block, uniform_draws(43, 3, 16)))

    def test_prefix_does_not_depend_on_count(self):
        np.testing.assert_array_equal(uniform_draws(7, 1, 4), uniform_draws(7, 1, 32)[:4])

    def test_child_streams_are_derived(self):
        stream = EdgeStream(9)
        self.assertEqual(stream.child(2).seed, derive_seed(9, 2))
        self.assertNotEqual(derive_seed(9, 2), derive_seed(9, 3))


class ForcingProbabilityTest(unittest.TestCase):
    def test_force_probability(self):
        star = star_graph(3)
        self.assertAlmostEqual(force_probability(star, ColorState.of(4, [0]), 0, 1), 1 / 3)
        self.assertAlmostEqual(force_probability(star, ColorState.of(4, [0, 1]), 0, 2), 2 / 3)
        self.assertEqual(force_probability(path_graph(3), ColorState.of(3, [0]), 0, 1), 1.0)

    def test_force_probability_preconditions(self):
        star = star_graph(3)
        with self.assertRaises(PreconditionError):
            force_probability(star, ColorState.of(4, [1]), 0, 2)
        with self.assertRaises(PreconditionError):
            force_probability(star, ColorState.of(4, [0, 1]), 0, 1)
        with self.assertRaises(PreconditionError):
            force_probability(star, ColorState.of(4, [1]), 1, 2)

    def test_blue_probability_combines_forcers(self):
        triangle = complete_graph(3)
        self.assertEqual(blue_probability(triangle, ColorState.of(3, [0, 1]), 2), 1.0)
        self.assertAlmostEqual(blue_probability(triangle, ColorState.of(3, [0]), 1), 0.5)
        with self.assertRaises(PreconditionError):
            blue_probability(triangle, ColorState.of(3, [0]), 0)

    def test_expected_increase_on_star(self):
        self.assertAlmostEqual(expected_increase(star_graph(4), ColorState.of(5, [0])), 1.0)

    def test_expected_increase_is_at_least_one_on_small_graphs(self):
        for n in range(2, 7):
            for graph in connected_graphs(n, labeled=False):
                for bits in range(1, (1 << n) - 1):
                    state = ColorState(n=n, bits=bits)
                    increase = expected_increase(graph, state)
                    self.assertGreaterEqual(
                        increase, 1.0 - 1e-9, msg=f"{list(graph.edges())} {state.label()}"
                    )

    def test_vectorized_rule_matches_pointwise(self):
        graph = star_graph(4)
        state = ColorState.of(5, [0, 2])
        probabilities = PZF_RULE.edge_probabilities(graph, state.to_mask())
        index = graph.directed_edge_index(0, 3)
        self.assertAlmostEqual(probabilities[index], force_probability(graph, state, 0, 3))


class StepAndRunTest(unittest.TestCase):
    def test_k2_finishes_in_one_step(self):
        trajectory = run(complete_graph(2), ColorState.of(2, [0]), seed=1)
        self.assertTrue(trajectory.terminated)
        self.assertEqual(trajectory.steps, 1)

    def test_path_from_endpoint_is_deterministic(self):
        graph = path_graph(3)
        for seed in range(5):
            trajectory = run(graph, ColorState.of(3, [0]), seed=seed)
            self.assertEqual([state.label() for state in trajectory.states], ["{0}", "{0,1}", "{0,1,2}"])

    def test_replay_is_identical(self):
        graph = star_graph(8)
        start = ColorState.of(9, [0])
        first = run(graph, start, seed=2024)
        second = run(graph, start, seed=2024)
        self.assertEqual(first.to_payload(), second.to_payload())

    def test_trajectory_payload_restores(self):
        trajectory = run(star_graph(5), ColorState.of(6, [0]), seed=11)
        restored = Trajectory.from_payload(6, trajectory.to_payload())
        self.assertEqual(restored, trajectory)

    def test_trajectory_must_grow(self):
        with self.assertRaises(ValidationError):
            Trajectory(seed=0, states=[ColorState.of(3, [0, 1]), ColorState.of(3, [0])])

    def test_truncated_run_is_flagged(self):
        trajectory = run(star_graph(10), ColorState.of(11, [0]), seed=3, max_steps=0)
        self.assertFalse(trajectory.terminated)
        self.assertEqual(trajectory.steps, 0)

    def test_step_never_loses_blue(self):
        graph = star_graph(6)
        state = ColorState.of(7, [0, 3])
        nxt = step(graph, state, EdgeStream(5), t=1)
        self.assertTrue(state.issubset(nxt))

    def test_bad_starts(self):
        with self.assertRaises(DisconnectedGraphError):
            run(Graph(4, [(0, 1), (2, 3)]), ColorState.of(4, [0]), seed=0)
        with self.assertRaises(InvalidStartError):
            run(path_graph(3), ColorState(n=3, bits=0), seed=0)
        with self.assertRaises(InvalidStartError):
            ColorState.of(3, [3])

    def test_advance_on_single_vertex(self):
        blue = np.array([True])
        np.testing.assert_array_equal(advance(Graph(1, []), blue, np.empty(0)), blue)


class CouplingTest(unittest.TestCase):
    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=0, max_value=len(SIX_VERTEX_GRAPHS) - 1),
        st.integers(min_value=0, max_value=5),
        st.integers(min_value=0, max_value=5),
        st.integers(min_value=0, max_value=2**32),
    )
    def test_superset_start_dominates_pathwise(self, index, v, w, seed):
        graph = SIX_VERTEX_GRAPHS[index]
        lower = ColorState.of(6, [v])
        upper = ColorState.of(6, [v, w])
        result = coupled_run(graph, lower, upper, seed, steps=30)
        self.assertTrue(result.subset_ok)
        self.assertIsNone(result.first_violation)

    def test_coupled_run_requires_subset(self):
        with self.assertRaises(InvalidStartError):
            coupled_run(path_graph(4), ColorState.of(4, [0, 1]), ColorState.of(4, [1]), 0, 5)

    def test_thinned_rule_stays_inside_true_process(self):
        graph = Graph.from_networkx(nx.lollipop_graph(4, 3))
        start = ColorState.of(graph.n, [0])
        for seed in range(50):
            result = coupled_rule_run(graph, start, ThinnedRule(PZF_RULE, 0.5), seed, steps=40)
            self.assertTrue(result.subset_ok)

    def test_thinned_rule_factor_range(self):
        with self.assertRaises(InvalidParameterError):
            ThinnedRule(PZF_RULE, 1.5)


if __name__ == "__main__":
    unittest.main()
