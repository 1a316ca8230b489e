import json

import pytest

from tatekit.catalog import catalog_entries, catalog_group, load_group, load_module, parse_subgroup
from tatekit.errors import InputError


def test_entries_cover_modular_primes():
    entries = dict.fromkeys(catalog_entries())
    assert ("C6", 2) in entries and ("C6", 3) in entries
    assert ("A4", 3) in entries and ("A4", 5) not in entries


def test_load_group_from_table_and_permutations(tmp_path):
    g = load_group({"name": "Z3", "mult_table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]})
    assert g.order == 3
    path = tmp_path / "s3.json"
    path.write_text(json.dumps({"name": "S3p", "permutation_generators": [[1, 2, 0], [1, 0, 2]]}))
    assert load_group(str(path)).order == 6


@pytest.mark.parametrize("data,needle", [
    ({"mult_table": [[0, 1], [1, 1]]}, "inverse"),
    ({"name": "x"}, "mult_table"),
    ({"mult_table": [[0, 1], [1, 0]], "order": 3}, "order"),
])
def test_load_group_errors(data, needle):
    with pytest.raises(InputError, match=needle):
        load_group(data)


def test_unknown_names_and_files(tmp_path):
    with pytest.raises(InputError, match="unknown group"):
        load_group("X9")
    with pytest.raises(InputError, match="no such file"):
        load_group(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(InputError, match="JSON"):
        load_group(str(bad))


def test_load_module_checks_dimension_and_prime():
    g = catalog_group("C2")
    good = {"prime": 2, "group": "C2", "action": {"1": [[1, 1], [0, 1]]}}
    assert load_module(good).dim == 2
    with pytest.raises(InputError, match="declared dim"):
        load_module({**good, "dim": 3})
    with pytest.raises(InputError, match="F_2"):
        load_module(good, g, 3)
    with pytest.raises(InputError):
        load_module({"prime": 2, "action": {"1": [[1, 1], [1, 1]]}}, g)


def test_parse_subgroup():
    g = catalog_group("S3")
    assert parse_subgroup(g, "C3").group.order == 3
    assert parse_subgroup(g, "G").group.order == 6
    assert parse_subgroup(g, "1").group.order == 1
    with pytest.raises(InputError):
        parse_subgroup(g, "C4")
    with pytest.raises(InputError):
        parse_subgroup(g, "a,b")
