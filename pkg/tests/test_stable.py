import numpy as np
import pytest

from tatekit.catalog import catalog_group, standard_module
from tatekit.errors import InputError
from tatekit.modrep import ModuleMap, module_radical, regular_module, submodule, trivial_module
from tatekit.resolution import resolution
from tatekit.stable import lifting_test, omega_map, stable_hom, transition
from oracles import stable_dim_bruteforce


def _gens(m):
    return [m.action[g] for g in m.group.generators]


def _small_modules(name, p):
    g = catalog_group(name)
    reg = regular_module(g, p)
    mods = [trivial_module(g, p), reg]
    rad = module_radical(reg)
    if 0 < rad.shape[0] < reg.dim:
        mods.append(submodule(reg, rad)[0])
    return g, mods


@pytest.mark.parametrize("name,p", [("C2", 2), ("C3", 3), ("C4", 2)])
def test_stable_dims_match_enumeration(name, p):
    g, mods = _small_modules(name, p)
    free = _gens(regular_module(g, p))
    for a in mods:
        for b in mods:
            if a.dim * b.dim > 9:
                continue
            assert stable_hom(a, b).dim == stable_dim_bruteforce(_gens(a), _gens(b), free, p), (a.dim, b.dim)


def test_identity_of_projective_is_stably_zero():
    reg = regular_module(catalog_group("S3"), 3)
    st = stable_hom(reg, reg)
    assert st.dim == 0
    assert st.class_of(np.eye(reg.dim, dtype=np.int64)).is_zero()


def test_lifting_test_witness():
    g = catalog_group("C2")
    reg, k = regular_module(g, 2), trivial_module(g, 2)
    aug = ModuleMap(reg, k, np.array([[1, 1]]))
    gamma = lifting_test(aug)
    assert gamma is not None
    ident = ModuleMap(k, k, np.eye(1, dtype=np.int64))
    assert lifting_test(ident) is None


def test_class_arithmetic():
    k = trivial_module(catalog_group("C3"), 3)
    st = stable_hom(k, k)
    one = st.class_of(np.eye(1, dtype=np.int64))
    assert not one.is_zero()
    assert (one + one.scale(2)).is_zero()
    assert one.scale(3) == st.zero()
    other = stable_hom(regular_module(k.group, 3), k).zero()
    with pytest.raises(InputError):
        one + other


def test_omega_transition_is_bijective_for_periodic_module():
    g = catalog_group("C4")
    k = trivial_module(g, 2)
    rk = resolution(k)
    st = stable_hom(k, k)
    cls = st.class_of(np.eye(1, dtype=np.int64))
    nxt = transition(cls, rk, 0, rk, 0)
    assert not nxt.is_zero()
    m = omega_map(np.eye(1, dtype=np.int64), rk, 0, rk, 0)
    assert m.shape == (rk.syzygy(1).dim, rk.syzygy(1).dim)


def test_factoring_maps_through_random_module():
    g = catalog_group("A4")
    m = standard_module(g, 2, "random", seed=0)
    st = stable_hom(m, m)
    assert st.hom_dim >= st.dim > 0
    for rep in st.basis_representatives():
        ModuleMap(m, m, rep).check()
