import json

import pytest

from tatekit.catalog import catalog_group, standard_module
from tatekit.errors import InputError
from tatekit.modrep import hom_basis, regular_module, trivial_module
from tatekit.resolution import (
    TensorResolution,
    complete_resolution,
    diagonal_approximation,
    dump_resolution,
    free_cover,
    lift_chain_map,
    resolution,
)
from oracles import p_group_trivial_ranks


def test_c2_trivial_minimal_period_one():
    res = resolution(trivial_module(catalog_group("C2"), 2))
    assert res.ranks(5) == [1] * 6
    assert [res.syzygy(j).dim for j in range(6)] == [1] * 6
    res.check_exact(5)


def test_c3_syzygies_alternate():
    res = resolution(trivial_module(catalog_group("C3"), 3))
    assert res.ranks(5) == [1] * 6
    assert [res.syzygy(j).dim for j in range(6)] == [1, 2, 1, 2, 1, 2]


def test_c4_ranks_are_one():
    res = resolution(trivial_module(catalog_group("C4"), 2))
    assert res.ranks(6) == [1] * 7
    assert [res.syzygy(j).dim for j in range(5)] == [1, 3, 1, 3, 1]


@pytest.mark.parametrize("name", ["V4", "Q8", "D4", "C8"])
def test_minimal_ranks_match_oracle(name):
    g = catalog_group(name)
    res = resolution(trivial_module(g, 2))
    assert res.ranks(5) == p_group_trivial_ranks(g, 2, 5)


def test_regular_module_has_length_zero():
    res = resolution(regular_module(catalog_group("S3"), 3))
    assert res.rank(0) == 1 and res.syzygy(1).dim == 0


def test_non_minimal_cover_is_still_exact():
    m = standard_module(catalog_group("S3"), 2, "random", seed=2)
    cov = free_cover(m, minimal=False)
    assert cov.rank == m.dim
    res = resolution(m, minimal=False)
    res.check_exact(2)
    assert resolution(m).rank(0) <= cov.rank


@pytest.mark.parametrize("name,p", [("S3", 2), ("S3", 3), ("A4", 3), ("C6", 3)])
def test_resolutions_exact_for_non_p_groups(name, p):
    m = standard_module(catalog_group(name), p, "random", seed=5)
    resolution(m).check_exact(4)


def test_minimal_cover_rank_is_top_dimension():
    g = catalog_group("D4")
    m = standard_module(g, 2, "random", seed=1)
    assert free_cover(m).rank == 2


def test_chain_map_lift_commutes():
    g = catalog_group("V4")
    k = trivial_module(g, 2)
    m = standard_module(g, 2, "random", seed=0)
    f = hom_basis(m, k)[0]
    cm = lift_chain_map(f, resolution(m), resolution(k), 4)
    for j in range(1, 5):
        assert not cm.defect(j).any()


def test_tensor_resolution_exact_and_diagonal():
    g = catalog_group("C3")
    rk = resolution(trivial_module(g, 3))
    tr = TensorResolution(rk, rk)
    tr.check_exact(4)
    # F (x) F is free of rank |G|, and degree n has n + 1 such blocks
    assert [tr.rank(n) for n in range(4)] == [3, 6, 9, 12]
    diag = diagonal_approximation(rk, 3)
    for j in range(1, 4):
        assert not diag.defect(j).any()


def test_complete_resolution_cyclic_pattern():
    g = catalog_group("C3")
    cr = complete_resolution(trivial_module(g, 3), 4)
    cr.check_acyclic()
    assert set(cr.ranks.values()) == {1}
    # one differential is g - 1, the next the norm: their ranks are 2 and 1
    from tatekit import linalg as la

    pattern = {la.rank(cr.differential_matrix(j), 3) for j in range(-2, 3)}
    assert pattern == {1, 2}
    k = trivial_module(g, 3)
    assert all(cr.cohomology_dim(k, n) == 1 for n in range(-2, 3))


def test_complete_resolution_of_projective_is_contractible():
    reg = regular_module(catalog_group("C2"), 2)
    cr = complete_resolution(reg, 3)
    assert {j for j, r in cr.ranks.items() if r} == {0, -1}
    assert all(cr.cohomology_dim(trivial_module(reg.group, 2), n) == 0 for n in range(-2, 3))


def test_dump_resolution_is_json():
    res = resolution(trivial_module(catalog_group("C2"), 2))
    data = json.loads(dump_resolution(res, 3))
    assert data["ranks"] == [1, 1, 1, 1]
    assert data["differentials"]["1"] == [[1, 1], [1, 1]]


def test_max_dim_guard(monkeypatch):
    monkeypatch.setenv("TATEKIT_MAX_DIM", "10")
    with pytest.raises(InputError, match="TATEKIT_MAX_DIM"):
        from tatekit.modrep import free_module

        free_module(catalog_group("A4"), 2, 1)
