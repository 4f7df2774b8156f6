"""Circuit files and DOT export."""

import json
import random

import pytest

from wavelogic import (
    FileFormatError,
    ValidationError,
    circuit_from_dict,
    circuit_to_dict,
    equivalent,
    export_dot,
    is_isomorphic,
    load_circuit,
    mk_const,
    mk_maj,
    mk_var,
    save_circuit,
    truth_table,
    variables,
)
from conftest import random_circuit


def test_save_load_round_trip(tmp_path):
    rng = random.Random(88)
    for i in range(25):
        c = random_circuit(rng)
        path = tmp_path / f"c{i}.json"
        save_circuit(c, path)
        loaded = load_circuit(path)
        assert is_isomorphic(loaded, c)
        names = variables(c)
        assert truth_table(loaded, vars=names) == truth_table(c, vars=names)


def test_rejects_wrong_version(tmp_path):
    data = circuit_to_dict(mk_var("a"))
    data["version"] = 99
    path = tmp_path / "v.json"
    path.write_text(json.dumps(data))
    with pytest.raises(FileFormatError):
        load_circuit(path)


def test_rejects_non_json(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("not json {")
    with pytest.raises(FileFormatError):
        load_circuit(path)


def test_load_reports_all_violations():
    data = {
        "version": 1,
        "nodes": [
            {"id": 0, "kind": "source", "param": None},
            {"id": 1, "kind": "merge", "param": None},
            {"id": 2, "kind": "output", "param": None},
        ],
        "edges": [
            {"from": 0, "from_port": 0, "to": 1, "to_port": 0},
            {"from": 1, "from_port": 0, "to": 2, "to_port": 0},
        ],
        "outputs": [2],
    }
    with pytest.raises(ValidationError) as err:
        circuit_from_dict(data)
    assert len(err.value.violations) >= 2  # merge ports 1 and 2 both unfed


def test_rejects_malformed_param():
    data = circuit_to_dict(mk_var("a"))
    for node in data["nodes"]:
        if node["kind"] == "shift":
            node["param"] = {"const": 3}
    with pytest.raises(FileFormatError):
        circuit_from_dict(data)


def test_dot_labels_variable_shift():
    dot = export_dot(mk_var("a"))
    assert dot.count('label="a"') == 1
    assert "rankdir=BT" in dot


def test_dot_majority_node_inventory():
    dot = export_dot(mk_maj(mk_var("a"), mk_var("b"), mk_var("c")))
    assert dot.count("⎇") == 1  # copy
    assert dot.count("Σ") == 1  # merge
    assert dot.count("shape=box") == 3  # the three shifts


def test_dot_constant_labels():
    dot = export_dot(mk_maj(mk_var("a"), mk_const(0), mk_const(1)))
    assert 'label="θ=0"' in dot
    assert 'label="θ=π"' in dot


def test_dot_output_deterministic():
    rng = random.Random(11)
    for _ in range(10):
        c = random_circuit(rng)
        assert export_dot(c) == export_dot(c)


def test_dot_equal_for_equal_constructions():
    first = mk_maj(mk_var("a"), mk_var("b"), mk_const(0))
    second = mk_maj(mk_var("a"), mk_var("b"), mk_const(0))
    assert export_dot(first) == export_dot(second)
