import numpy as np
import pytest

from tatekit.catalog import GROUP_NAMES, catalog_group, catalog_primes, random_submodule, standard_module
from tatekit.errors import InputError
from tatekit.modrep import (
    FiniteGroup,
    Module,
    ModuleMap,
    Subgroup,
    coinduce,
    direct_sum,
    dual_module,
    free_module,
    group_from_table,
    hom_basis,
    induce,
    is_projective,
    module_radical,
    quotient_module,
    radical_basis,
    regular_module,
    restrict,
    submodule,
    swap_map,
    tensor_module,
    trivial_module,
)
from oracles import hom_dim_bruteforce

ORDERS = {"C2": 2, "C3": 3, "C4": 4, "C5": 5, "C6": 6, "C8": 8, "V4": 4, "D4": 8, "Q8": 8, "S3": 6, "A4": 12}


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_catalog_groups_validate(name):
    g = catalog_group(name)
    assert g.order == ORDERS[name]
    # re-validating the table from scratch must succeed
    FiniteGroup(name, g.mult)


def test_nonassociative_table_is_rejected():
    table = [[0, 1, 2], [1, 0, 2], [2, 2, 0]]  # latin square fails here anyway
    with pytest.raises(InputError):
        group_from_table("bad", table)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InputError, match="associative"):
        group_from_table("loop", loop)


def test_missing_identity_is_rejected():
    with pytest.raises(InputError, match="identity"):
        group_from_table("shifted", [[1, 0], [0, 1]])


@pytest.mark.parametrize("name,p,dim", [
    ("S3", 2, 1), ("S3", 3, 4), ("A4", 2, 9), ("A4", 3, 2), ("C6", 2, 3), ("C6", 3, 4), ("D4", 2, 7),
])
def test_radical_dimensions(name, p, dim):
    assert radical_basis(catalog_group(name), p).shape[0] == dim


@pytest.mark.parametrize("name", ["C2", "C4", "V4", "Q8", "D4"])
def test_p_group_radical_is_augmentation_ideal(name):
    g = catalog_group(name)
    rad = radical_basis(g, 2)
    assert rad.shape[0] == g.order - 1
    assert not (rad.sum(axis=1) % 2).any()


def test_semisimple_radical_is_zero():
    assert radical_basis(catalog_group("C3"), 2).shape[0] == 0


def test_module_action_is_checked():
    g = catalog_group("C2")
    with pytest.raises(InputError):
        Module.from_generators(g, 2, {1: [[1, 1], [0, 0]]})


def test_tensor_unit_and_associativity_on_keys():
    g = catalog_group("S3")
    k = trivial_module(g, 3)
    m = standard_module(g, 3, "random", seed=3)
    assert tensor_module(k, m).key == m.key
    assert tensor_module(k, k).key == k.key
    r = regular_module(g, 3)
    left = tensor_module(tensor_module(m, r), k)
    right = tensor_module(m, tensor_module(r, k))
    assert left.key == right.key


def test_dual_of_dual_and_swap_equivariance():
    g = catalog_group("A4")
    m = standard_module(g, 2, "random", seed=1)
    assert dual_module(dual_module(m)).key == m.key
    sw = swap_map(m, trivial_module(g, 2))
    sw.check()


@pytest.mark.parametrize("name,p", [("C2", 2), ("C3", 3), ("V4", 2)])
def test_hom_dims_match_enumeration(name, p):
    g = catalog_group(name)
    mods = [trivial_module(g, p), regular_module(g, p)]
    if name == "C3":
        reg = regular_module(g, p)
        rad = module_radical(reg)
        mods.append(submodule(reg, rad)[0])
    for a in mods:
        for b in mods:
            if a.dim * b.dim > 12:
                continue
            ga = [a.action[x] for x in g.generators]
            gb = [b.action[x] for x in g.generators]
            assert len(hom_basis(a, b)) == hom_dim_bruteforce(ga, gb, p)


def test_module_map_check_catches_non_equivariant():
    g = catalog_group("C3")
    reg = regular_module(g, 3)
    k = trivial_module(g, 3)
    with pytest.raises(InputError):
        ModuleMap(reg, k, np.array([[1, 0, 0]]))
    ModuleMap(reg, k, np.array([[1, 1, 1]]))


def test_submodule_and_quotient_dimensions(rng):
    g = catalog_group("D4")
    m = standard_module(g, 2, "random", seed=4)
    basis = random_submodule(m, rng, 1)
    sub, inc = submodule(m, basis)
    quo, proj = quotient_module(m, basis)
    inc.check()
    proj.check()
    assert sub.dim + quo.dim == m.dim
    assert not (proj.matrix @ inc.matrix % 2).any()


def test_restrict_induce_coinduce_dimensions():
    g = catalog_group("S3")
    h = Subgroup.generated_by(g, [next(x for x in range(6) if g.element_order(x) == 3)])
    k_h = trivial_module(h.group, 3)
    assert induce(h, k_h).dim == 2
    assert coinduce(h, k_h).dim == 2
    assert restrict(h, regular_module(g, 3)).dim == 6
    # inducing the regular module of H gives the regular module of G up to isomorphism
    assert is_projective(induce(h, regular_module(h.group, 3)))


def test_projectivity():
    g = catalog_group("C6")
    assert is_projective(regular_module(g, 2))
    assert is_projective(direct_sum(free_module(g, 3, 1), free_module(g, 3, 1)))
    assert not is_projective(trivial_module(g, 2))
    # p not dividing the order: everything is projective
    assert is_projective(trivial_module(catalog_group("C3"), 2))


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_perm_and_random_modules_build(name):
    g = catalog_group(name)
    for p in catalog_primes(name):
        m = standard_module(g, p, "random", seed=0)
        assert m.dim > 0
        if getattr(g, "permutations", None) is not None:
            assert standard_module(g, p, "perm").dim == len(g.permutations[0])
