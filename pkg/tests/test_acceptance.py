"""The ten acceptance criteria; each prints one PASS/FAIL line.

Run under pytest (lines are repeated in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import contextlib
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

from tatekit import linalg as la  # noqa: E402
from tatekit.catalog import catalog_entries, catalog_group, parse_subgroup, standard_module  # noqa: E402
from tatekit.completion import (  # noqa: E402
    CheckReport,
    completed_naive,
    dimension_shift,
    eckmann_shapiro_compare,
    ext_ordinary,
    pd_detect,
    phi_canonical,
)
from tatekit.modrep import is_projective, regular_module, trivial_module  # noqa: E402
from tatekit.products import cup, ordinary_cup, ordinary_yoneda, ring_table, swap_check, yoneda  # noqa: E402
from tatekit.verify import _connecting_compat, random_ses, suite_constructions, suite_les, uniserial_ses  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running as a script
    ACCEPTANCE_LINES = []


@contextlib.contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget:.0f}s"
    except BaseException as exc:
        line = f"FAIL {number:>2}. {title}: {exc}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        raise
    line = f"PASS {number:>2}. {title} ({time.perf_counter() - start:.1f}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)


def test_01_cyclic_ring_table():
    with criterion(1, "C2/F2 ring table is the Laurent ring on [-6, 6]", 5):
        table = ring_table(catalog_group("C2"), 2, -6, 6)
        assert all(table.dims[n] == 1 for n in range(-6, 7))
        expected_pairs = sum(1 for m in range(-6, 7) for n in range(-6, 7) if -6 <= m + n <= 6)
        assert len(table.structure) == expected_pairs
        assert all(list(v) == [1] for v in table.structure.values())


def test_02_odd_prime():
    with criterion(2, "C3/F3 dims, u1^2 = 0, u2 u-2 != 0", 10):
        k = trivial_module(catalog_group("C3"), 3)
        assert all(completed_naive(k, k, n).dim == 1 for n in range(-4, 5))
        u1 = completed_naive(k, k, 1).basis()[0]
        u2 = completed_naive(k, k, 2).basis()[0]
        um2 = completed_naive(k, k, -2).basis()[0]
        assert cup(u1, u1).is_zero()
        assert not cup(u2, um2).is_zero()


def test_03_three_constructions():
    with criterion(3, "three constructions agree over the catalog on [-4, 4]", 180):
        result = suite_constructions(range(-4, 5))
        assert result.passed, result.reports[0].failures[:5]


def _semisimple_prime(order: int) -> int:
    return next(q for q in (2, 3, 5, 7, 11, 13) if order % q)


def test_04_vanishing_and_pd():
    with criterion(4, "projective vanishing and pd detection", 120):
        for g, p in catalog_entries():
            group = catalog_group(g)
            k = trivial_module(group, p)
            reg = regular_module(group, p)
            rnd = standard_module(group, p, "random", seed=0)
            for n in range(-3, 4):
                for a, b in ((reg, k), (k, reg), (reg, rnd), (rnd, reg)):
                    assert completed_naive(a, b, n).dim == 0, (g, p, n)
            assert not pd_detect(k).finite
            assert pd_detect(reg).finite
            assert pd_detect(rnd).finite == is_projective(rnd)
            q = _semisimple_prime(group.order)
            for kind in ("trivial", "random"):
                assert pd_detect(standard_module(group, q, kind, seed=0)).finite


def test_05_long_exact_sequences():
    with criterion(5, "LES exact and connecting maps natural on >= 100 sequences", 180):
        result = suite_les(seed=0, count=100, degrees=range(-3, 4))
        assert result.notes["sequences"] >= 100
        assert result.notes["ladders"] > 0
        for rep in result.reports:
            assert rep.passed, rep.failures[:5]


def _phi_product_check(k, m, n):
    p = k.p
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


def test_06_phi(monkeypatch=None):
    with criterion(6, "Phi is an isomorphism in degrees >= 1 and multiplicative", 300):
        for g, p in catalog_entries():
            group = catalog_group(g)
            k = trivial_module(group, p)
            rnd = standard_module(group, p, "random", seed=0)
            for a, b in ((k, k), (k, rnd), (rnd, k)):
                for n in range(1, 4):
                    mat = phi_canonical(a, b, n)
                    assert mat.shape[0] == mat.shape[1] and la.rank(mat, p) == mat.shape[0], (g, p, n)
            pairs = [(1, 1), (1, 2), (2, 1), (2, 2)] if group.order <= 8 else [(1, 1), (1, 2), (2, 1)]
            for m, n in pairs:
                _phi_product_check(k, m, n)
        # A4 over F2 has nothing in degree 1; its first product lives in degree 2 + 2
        old = os.environ.get("TATEKIT_MAX_DIM")
        os.environ["TATEKIT_MAX_DIM"] = "16384"
        try:
            _phi_product_check(trivial_module(catalog_group("A4"), 2), 2, 2)
        finally:
            if old is None:
                del os.environ["TATEKIT_MAX_DIM"]
            else:
                os.environ["TATEKIT_MAX_DIM"] = old


def test_07_eckmann_shapiro():
    with criterion(7, "Eckmann-Shapiro dims for C4 > C2 and S3 > C3 on [-3, 3]", 60):
        for group, sub, p in (("C4", "C2", 2), ("S3", "C3", 3)):
            g = catalog_group(group)
            h = parse_subgroup(g, sub)
            for a, b in ((trivial_module(h.group, p), trivial_module(g, p)),
                         (standard_module(h.group, p, "random", seed=1), standard_module(g, p, "random", seed=1))):
                rep = eckmann_shapiro_compare(h, a, b, range(-3, 4))
                assert rep.equal, (group, rep.induced, rep.coinduced)


def test_08_dimension_shifting():
    with criterion(8, "dimension shifting is invertible for all catalog pairs on [-3, 3]", 180):
        for g, p in catalog_entries():
            group = catalog_group(g)
            k = trivial_module(group, p)
            rnd = standard_module(group, p, "random", seed=0)
            for a, b in ((k, k), (k, rnd), (rnd, k), (rnd, rnd)):
                for n in range(-3, 4):
                    mat = dimension_shift(a, b, n)
                    assert mat.shape[0] == mat.shape[1]
                    assert not mat.size or la.rank(mat, p) == mat.shape[0]


def test_09_noncyclic_tables():
    with criterion(9, "V4 and Q8 completed cohomology dims", 300):
        k = trivial_module(catalog_group("V4"), 2)
        assert [completed_naive(k, k, n).dim for n in range(-4, 5)] == [n + 1 if n >= 0 else -n for n in range(-4, 5)]
        q = trivial_module(catalog_group("Q8"), 2)
        assert [completed_naive(q, q, n).dim for n in range(-8, 8)] == [[1, 2, 2, 1][n % 4] for n in range(-8, 8)]
        for name, lo, hi in (("V4", -3, 3), ("Q8", -2, 3)):
            table = ring_table(catalog_group(name), 2, lo, hi)
            assert all(table.checks.values())


def test_10_product_laws():
    with criterion(10, "unit, associativity, graded commutativity, connecting-map compatibility", 300):
        for name, p, lo, hi in (("C2", 2, -6, 6), ("C3", 3, -4, 4), ("C5", 5, -3, 3), ("V4", 2, -3, 3),
                                ("Q8", 2, -3, 3), ("S3", 3, -4, 4), ("S3", 2, -3, 3)):
            table = ring_table(catalog_group(name), p, lo, hi)  # raises unless unit and associativity hold
            assert table.checks == {"unit": True, "associativity": True}
        rng = np.random.default_rng(10)
        for name, p in (("C3", 3), ("V4", 2), ("S3", 3), ("D4", 2)):
            group = catalog_group(name)
            k = trivial_module(group, p)
            rnd = standard_module(group, p, "random", seed=0)
            for m in range(-2, 3):
                for n in range(-2, 3):
                    gx, gy = completed_naive(k, rnd, m), completed_naive(k, k, n)
                    x = gx.element(rng.integers(0, p, gx.dim))
                    y = gy.element(rng.integers(0, p, gy.dim))
                    assert swap_check(x, y), (name, m, n)
        report = CheckReport("connecting")
        for p in (2, 3):
            ses = uniserial_ses(p)
            _connecting_compat(ses, ses.left, rng, report)
        for name, p in (("C3", 3), ("S3", 3)):
            group = catalog_group(name)
            ses = None
            while ses is None:
                ses = random_ses(regular_module(group, p), rng)
            _connecting_compat(ses, trivial_module(group, p), rng, report, degrees=range(-1, 2))
        assert report.passed, report.failures[:5]


if __name__ == "__main__":
    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_")]:
        try:
            fn()
        except BaseException:  # noqa: BLE001 - the FAIL line is already printed
            failed += 1
    sys.exit(1 if failed else 0)
