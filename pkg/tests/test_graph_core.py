import tempfile
import unittest
from pathlib import Path

from pzf_lab.config import AppConfig
from pzf_lab.core.errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    InvalidParameterError,
    MalformedLineError,
    SelfLoopError,
    VertexRangeError,
)
from pzf_lab.modules.graph_core.generators import (
    gnp_graph,
    spider_graph,
    star_chain_graph,
    star_graph,
)
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.io import parse_graph, read_graph, serialize_graph, write_graph
from pzf_lab.modules.graph_core.schemas import GraphFamilySpec
from pzf_lab.modules.graph_core.service import GraphService
from pzf_lab.modules.graph_core.topology import (
    center_vertices,
    connected_graphs,
    is_connected,
    is_path,
    radius,
    require_connected,
)


class GraphFamilySpecTest(unittest.TestCase):
    def test_positional_and_named_params(self):
        spider = GraphFamilySpec.parse("spider:3,4")
        self.assertEqual((spider.legs, spider.length), (3, 4))

        chain = GraphFamilySpec.parse("star_chain:r=2,s=10")
        self.assertEqual((chain.r, chain.s), (2, 10))
        self.assertEqual(chain.label(), "star_chain:r=2,s=10")

        star = GraphFamilySpec.parse("star:L=5")
        self.assertEqual(star.leaves, 5)

    def test_invalid_specs(self):
        for text in ["bogus:3", "path:0", "cycle:2", "path:3,4", "star_chain:r=2", "gnp:n=5,p=2"]:
            with self.subTest(text=text):
                with self.assertRaises(InvalidParameterError):
                    GraphFamilySpec.parse(text)


class GeneratorTest(unittest.TestCase):
    def setUp(self):
        self.service = GraphService(AppConfig())

    def test_family_sizes(self):
        cases = {
            "path:5": (5, 4),
            "cycle:6": (6, 6),
            "complete:4": (4, 6),
            "star:L=4": (5, 4),
            "spider:3,4": (13, 12),
            "star_chain:r=1,s=3": (9, 8),
        }
        for text, (n, m) in cases.items():
            with self.subTest(spec=text):
                graph = self.service.generate(text)
                self.assertEqual((graph.n, graph.m), (n, m))
                self.assertTrue(is_connected(graph))

    def test_star_chain_radius_is_r_plus_one(self):
        for r, s in [(1, 3), (2, 10), (3, 2)]:
            with self.subTest(r=r, s=s):
                graph = star_chain_graph(r, s)
                self.assertEqual(graph.n, (2 * r + 1) * s)
                self.assertEqual(radius(graph), r + 1)
                self.assertEqual(center_vertices(graph), [r])

    def test_star_center_is_zero(self):
        graph = star_graph(6)
        self.assertEqual(graph.degree[0], 6)
        self.assertEqual(center_vertices(graph), [0])

    def test_spider_radius(self):
        self.assertEqual(radius(spider_graph(3, 4)), 4)

    def test_gnp_is_reproducible_and_connected(self):
        first = gnp_graph(20, 0.3, seed=7)
        second = gnp_graph(20, 0.3, seed=7)
        self.assertEqual(first, second)
        self.assertTrue(is_connected(first))

    def test_gnp_gives_up_when_never_connected(self):
        with self.assertRaises(DisconnectedGraphError):
            gnp_graph(10, 0.01, seed=1, retries=3)


class EdgeListFormatTest(unittest.TestCase):
    def test_parse_and_serialize(self):
        graph = parse_graph("4 3\n0 1\n\n1 2\n2 3\n")
        self.assertEqual(graph.edges(), [(0, 1), (1, 2), (2, 3)])
        self.assertEqual(serialize_graph(graph), "4 3\n0 1\n1 2\n2 3")

    def test_file_round_trip(self):
        graph = star_chain_graph(1, 3)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_graph(Path(tmpdir) / "graphs" / "chain.txt", graph)
            self.assertEqual(read_graph(path), graph)
            self.assertEqual(GraphService(AppConfig()).load(file=path), graph)

    def test_malformed_inputs(self):
        cases = {
            "": MalformedLineError,
            "x y": MalformedLineError,
            "3 2\n0 1\n": MalformedLineError,
            "3 1\n0 1 2": MalformedLineError,
            "3 1\n0 3": VertexRangeError,
            "3 1\n1 1": SelfLoopError,
            "3 2\n0 1\n1 0": DuplicateEdgeError,
        }
        for text, error in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(error):
                    parse_graph(text)

    def test_service_requires_one_source(self):
        service = GraphService(AppConfig())
        with self.assertRaises(InvalidParameterError):
            service.load()
        with self.assertRaises(InvalidParameterError):
            service.load(graph="path:3", file=Path("graph.txt"))


class TopologyTest(unittest.TestCase):
    def test_labeled_connected_graph_counts(self):
        self.assertEqual(sum(1 for _ in connected_graphs(3)), 4)
        self.assertEqual(sum(1 for _ in connected_graphs(4)), 38)

    def test_atlas_isomorphism_classes(self):
        self.assertEqual(sum(1 for _ in connected_graphs(4, labeled=False)), 6)
        self.assertEqual(sum(1 for _ in connected_graphs(5, labeled=False)), 21)
        with self.assertRaises(InvalidParameterError):
            next(connected_graphs(8, labeled=False))

    def test_require_connected(self):
        with self.assertRaises(DisconnectedGraphError):
            require_connected(Graph(4, [(0, 1), (2, 3)]))

    def test_is_path(self):
        self.assertTrue(is_path(GraphService(AppConfig()).generate("path:6")))
        self.assertFalse(is_path(star_graph(3)))
        self.assertFalse(is_path(Graph(3, [(0, 1), (1, 2), (0, 2)])))

    def test_induced_subgraph_relabels(self):
        graph = star_chain_graph(1, 3)
        sub, labels = graph.induced_subgraph([5, 1, 2, 7])
        self.assertEqual(labels, (1, 2, 5, 7))
        # Edges 1-2, 1-5 and 2-7 survive.
        self.assertEqual(sub.edges(), [(0, 1), (0, 2), (1, 3)])


if __name__ == "__main__":
    unittest.main()
