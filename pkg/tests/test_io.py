import json

import numpy as np
import pytest

from geomgraph.errors import DomainError
from geomgraph.generators import gen_gbm, gen_rag, gen_vrg_union, naive_oracle, rule_for
from geomgraph.io import dump_instance, load_instance, read_edge_list, write_edge_list
from geomgraph.graph import Graph


@pytest.mark.parametrize("make", [
    lambda: gen_gbm(200, 0.05, 0.01, seed=3),
    lambda: gen_rag(150, 3, 0.2, 0.9, seed=4),
    lambda: gen_vrg_union(300, 1.0, 2.0, 5.0, seed=5),
])
def test_instance_round_trip(tmp_path, make):
    inst = make()
    path = tmp_path / "inst.json"
    dump_instance(inst, path)
    back = load_instance(path)
    assert back.model == inst.model and back.dim_t == inst.dim_t and back.seed == inst.seed
    assert np.array_equal(back.positions, inst.positions)
    assert back.graph == inst.graph
    assert back.params == inst.params
    assert (back.truth is None) == (inst.truth is None)
    if inst.truth is not None:
        assert np.array_equal(back.truth, inst.truth)
    assert back.graph == naive_oracle(back.positions, rule_for(back))


def test_instance_header_fields(tmp_path):
    path = tmp_path / "inst.json"
    dump_instance(gen_gbm(4, 0.2, 0.1, seed=1), path)
    data = json.loads(path.read_text())
    assert {"format", "version", "model", "n", "t", "params", "seed", "truth", "positions", "edges"} <= set(data)


def test_bad_instance_files(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(DomainError):
        load_instance(p)
    p.write_text(json.dumps({"format": "geomgraph-instance", "model": "vrg"}))
    with pytest.raises(DomainError):
        load_instance(p)
    with pytest.raises(OSError):
        load_instance(tmp_path / "missing.json")


def test_edge_list_round_trip(tmp_path):
    g = Graph.from_edges(5, [0, 3, 1], [4, 1, 2])
    p = tmp_path / "g.txt"
    write_edge_list(g, p)
    assert p.read_text() == "5 3\n0 4\n1 2\n1 3\n"
    assert read_edge_list(p) == g
    write_edge_list(Graph.empty(3), p)
    assert read_edge_list(p) == Graph.empty(3)
    p.write_text("3 2\n0 1\n")
    with pytest.raises(DomainError):
        read_edge_list(p)
