import json

import pytest

from torvan.core.errors import InvalidInput, NotRegularSequence
from torvan.schemas.files import ModuleFile, RingFile
from torvan.services.module_service import dim_length
from torvan.services.resolution_service import status_flags
from torvan.services.storage_service import (
    canonical_file_text,
    case_modules,
    case_ring,
    corpus_dir,
    corpus_input_files,
    load_cases,
    load_module,
    load_ring,
    module_to_file,
    read_module_file,
    read_ring_file,
    ring_to_file,
    write_canonical,
)


def write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.mark.parametrize("path", corpus_input_files(), ids=lambda p: f"{p.parent.name}/{p.name}")
def test_corpus_inputs_survive_canonical_form(path):
    model_cls = RingFile if path.parent.name == "rings" else ModuleFile
    model = model_cls.model_validate(json.loads(path.read_text(encoding="utf-8")))
    text = canonical_file_text(model)
    assert text.endswith("\n")
    assert model_cls.model_validate(json.loads(text)) == model


@pytest.mark.parametrize("name", ["node.json", "xx_yy.json", "a1.json"])
def test_rings_round_trip(name):
    path = corpus_dir() / "rings" / name
    R = load_ring(path)
    assert ring_to_file(R) == read_ring_file(path)


@pytest.mark.parametrize("name", ["rx.json", "rx2.json", "ry.json", "rxy.json", "k_xy.json", "free.json"])
def test_node_modules_round_trip(name):
    R = load_ring(corpus_dir() / "rings" / "node.json")
    path = corpus_dir() / "modules" / name
    assert module_to_file(load_module(R, path)) == read_module_file(path)


def test_direct_sum_file(node):
    M = load_module(node, corpus_dir() / "modules" / "rx_plus_ry.json")
    assert M.ngens == 2
    assert status_flags(M).is_mcm


def test_write_canonical(tmp_path, node):
    path = write_canonical(ring_to_file(node), tmp_path / "out" / "node.json")
    text = path.read_text(encoding="utf-8")
    assert text == canonical_file_text(read_ring_file(path))
    assert list(json.loads(text)) == sorted(json.loads(text))


def test_missing_file(tmp_path):
    with pytest.raises(InvalidInput) as err:
        load_ring(tmp_path / "absent.json")
    assert "absent.json" in err.value.field


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{ not json", encoding="utf-8")
    with pytest.raises(InvalidInput):
        read_ring_file(path)


def test_unknown_keys_are_named(tmp_path):
    path = write(tmp_path / "r.json", {"prime": 101, "vars": ["x"], "colour": "red"})
    with pytest.raises(InvalidInput) as err:
        read_ring_file(path)
    assert err.value.field == "colour"


def test_bad_polynomial_names_its_field(tmp_path):
    path = write(tmp_path / "r.json", {"prime": 101, "vars": ["x", "y"], "relations": ["x*w"]})
    with pytest.raises(InvalidInput) as err:
        load_ring(path)
    assert err.value.field == "relations"


def test_non_regular_relations(tmp_path):
    path = write(tmp_path / "r.json", {"prime": 101, "vars": ["x", "y", "z"], "relations": ["x*y", "x*z"]})
    with pytest.raises(NotRegularSequence):
        load_ring(path)


def test_module_shape_checked(tmp_path, node):
    path = write(tmp_path / "m.json", {"gens": [0, 0], "relations": [["x"]]})
    with pytest.raises(InvalidInput):
        load_module(node, path)


def test_syzygy_module_file(tmp_path, node):
    path = write(tmp_path / "m.json", {"syzygy": {"index": 1, "of": {"gens": [0], "relations": [["x"], ["y"]]}}})
    M = load_module(node, path)
    assert M.gens == (1, 1)
    assert dim_length(M).dim == 1


def test_corpus_cases_load_sorted():
    cases = load_cases()
    ids = [c.id for c in cases]
    assert ids == sorted(ids)
    assert "node-rx-rx2" in ids
    case = next(c for c in cases if c.id == "node-rx-rx2")
    R = case_ring(case)
    assert R.name == "node"
    assert set(case_modules(case, R)) == {"M", "N"}


def test_duplicate_case_ids(tmp_path):
    (tmp_path / "cases").mkdir()
    case = {
        "id": "same",
        "ring": "node.json",
        "modules": {"M": "rx.json"},
        "steps": [{"op": "depth", "provenance": "TRIVIAL"}],
    }
    write(tmp_path / "cases" / "a.json", case)
    write(tmp_path / "cases" / "b.json", case)
    with pytest.raises(InvalidInput) as err:
        load_cases(tmp_path)
    assert err.value.field == "id"


def test_missing_cases_directory(tmp_path):
    with pytest.raises(InvalidInput) as err:
        load_cases(tmp_path)
    assert err.value.field == "corpus"
