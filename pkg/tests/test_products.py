import numpy as np
import pytest

from tatekit.catalog import catalog_group, standard_module
from tatekit.completion import CheckReport, completed_naive, covariant_map, ext_ordinary, phi_canonical
from tatekit.errors import InputError
from tatekit.modrep import ModuleMap, hom_basis, tensor_module, trivial_module
from tatekit.products import (
    comparison_map,
    cup,
    external,
    ordinary_cup,
    ordinary_yoneda,
    ring_table,
    swap_check,
    unit,
    yoneda,
)
from tatekit.resolution import resolution
from tatekit.verify import _connecting_compat, uniserial_ses


def _gen(k, n):
    grp = completed_naive(k, k, n)
    assert grp.dim == 1
    return grp.basis()[0]


def test_c2_laurent_ring():
    table = ring_table(catalog_group("C2"), 2, -6, 6)
    assert all(d == 1 for d in table.dims.values())
    assert table.structure and all(list(v) == [1] for v in table.structure.values())
    assert table.checks == {"unit": True, "associativity": True}


def test_c3_relations():
    k = trivial_module(catalog_group("C3"), 3)
    u1, u2, um2 = _gen(k, 1), _gen(k, 2), _gen(k, -2)
    assert cup(u1, u1).is_zero()
    assert not cup(u2, um2).is_zero()
    assert not cup(u1, _gen(k, -2)).is_zero()


def test_unit_is_two_sided(rng):
    g = catalog_group("S3")
    k = trivial_module(g, 3)
    one = unit(k)
    for n in range(-3, 4):
        grp = completed_naive(k, k, n)
        for x in grp.basis():
            assert cup(one, x) == x and cup(x, one) == x


@pytest.mark.parametrize("name,p", [("C3", 3), ("V4", 2), ("S3", 3)])
def test_associativity_random_triples(name, p, rng):
    k = trivial_module(catalog_group(name), p)
    for _ in range(8):
        degs = rng.integers(-2, 3, size=3)
        xs = [completed_naive(k, k, int(d)).element(rng.integers(0, p, completed_naive(k, k, int(d)).dim))
              for d in degs]
        x, y, z = xs
        assert cup(cup(x, y), z) == cup(x, cup(y, z))


@pytest.mark.parametrize("name,p", [("C3", 3), ("C5", 5), ("V4", 2)])
def test_graded_commutativity_with_coefficients(name, p, rng):
    g = catalog_group(name)
    k = trivial_module(g, p)
    m = standard_module(g, p, "random", seed=1)
    for a, b in ((1, 1), (1, 2), (-1, 1), (2, -3)):
        ga, gb = completed_naive(k, m, a), completed_naive(k, k, b)
        x = ga.element(rng.integers(0, p, ga.dim))
        y = gb.element(rng.integers(0, p, gb.dim))
        assert swap_check(x, y)


def test_odd_degree_square_vanishes_at_odd_prime():
    k = trivial_module(catalog_group("C5"), 5)
    for n in (-3, -1, 1, 3):
        if abs(2 * n) <= 6:
            assert cup(_gen(k, n), _gen(k, n)).is_zero()


@pytest.mark.parametrize("name,p", [("C3", 3), ("C5", 5), ("S3", 3)])
def test_yoneda_equals_cup_for_trivial_coefficients(name, p):
    k = trivial_module(catalog_group(name), p)
    for m in range(-3, 4):
        for n in range(-3, 4):
            for x in completed_naive(k, k, m).basis():
                for y in completed_naive(k, k, n).basis():
                    assert yoneda(x, y) == cup(x, y)


@pytest.mark.parametrize("name,p", [("C3", 3), ("V4", 2), ("Q8", 2), ("S3", 3)])
def test_canonical_map_is_multiplicative(name, p):
    k = trivial_module(catalog_group(name), p)
    for m in (1, 2):
        for n in (1, 2):
            em, en, emn = ext_ordinary(k, k, m), ext_ordinary(k, k, n), ext_ordinary(k, k, m + n)
            pm, pn, pmn = phi_canonical(k, k, m), phi_canonical(k, k, n), phi_canonical(k, k, m + n)
            for i, x in enumerate(em.representatives()):
                for j, y in enumerate(en.representatives()):
                    big_x = completed_naive(k, k, m).element(pm[:, i])
                    big_y = completed_naive(k, k, n).element(pn[:, j])
                    c = emn.coords(ordinary_cup(k, k, m, n, x, y)[None])[0]
                    assert np.array_equal(pmn @ c % p, cup(big_x, big_y).coords)
                    yo = emn.coords(ordinary_yoneda(k, k, k, n, m, y, x)[None])[0]
                    assert np.array_equal(pmn @ yo % p, yoneda(big_x, big_y).coords)


@pytest.mark.parametrize("p", [2, 3])
def test_connecting_map_compatibility_with_sign(p, rng):
    ses = uniserial_ses(p)
    rep = CheckReport("connecting")
    _connecting_compat(ses, ses.left, rng, rep)
    assert rep.passed, rep.failures
    assert rep.checked >= 50


def test_external_product_natural_in_coefficients(rng):
    g = catalog_group("S3")
    p = 3
    k = trivial_module(g, p)
    m = standard_module(g, p, "random", seed=2)
    r = hom_basis(m, m)[-1]
    rk = ModuleMap(tensor_module(m, k), tensor_module(m, k), r.matrix, check=True)
    for a, b in ((1, 1), (-1, 2), (0, -2)):
        x = completed_naive(k, m, a).element(rng.integers(0, p, completed_naive(k, m, a).dim))
        y = completed_naive(k, k, b).element(rng.integers(0, p, completed_naive(k, k, b).dim))
        lhs = covariant_map(rk, k, a + b) @ external(x, y).coords % p
        rx = completed_naive(k, m, a).element(covariant_map(r, k, a) @ x.coords)
        assert np.array_equal(lhs, external(rx, y).coords)


def test_comparison_map_is_equivariant():
    g = catalog_group("C3")
    k = trivial_module(g, 3)
    m = standard_module(g, 3, "random", seed=0)
    mat = comparison_map(k, m, 1, 2)
    src = tensor_module(resolution(k).syzygy(1), resolution(m).syzygy(2))
    tgt = resolution(tensor_module(k, m)).syzygy(3)
    ModuleMap(src, tgt, mat).check()


def test_ring_table_json_and_limits():
    data = ring_table(catalog_group("C2"), 2, -2, 2).to_json()
    assert set(data) == {"group", "prime", "degrees", "dims", "unit", "products"}
    assert data["unit"] == ["u0_0"]
    with pytest.raises(InputError):
        ring_table(catalog_group("C2"), 2, -10, 10)
    with pytest.raises(InputError):
        ring_table(catalog_group("C2"), 2, 2, 1)


def test_cup_needs_trivial_source():
    u = uniserial_ses(3).middle
    x = completed_naive(u, trivial_module(u.group, 3), 1).basis()
    assert x
    with pytest.raises(InputError):
        cup(x[0], x[0])
