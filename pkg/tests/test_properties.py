"""Property tests: hypothesis draws catalog entries, seeds and degrees."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tatekit import linalg as la
from tatekit.catalog import catalog_entries, catalog_group, standard_module
from tatekit.completion import completed_dims, completed_naive, dimension_shift, les_check
from tatekit.modrep import regular_module, trivial_module
from tatekit.products import cup, swap_check
from tatekit.verify import random_ses

SMALL = [(g, p) for g, p in catalog_entries() if catalog_group(g).order <= 8]
FAST = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])

entry = st.sampled_from(SMALL)
seed = st.integers(0, 10_000)
degree = st.integers(-3, 3)


@FAST
@given(entry, seed, degree)
def test_constructions_agree_on_random_modules(gp, s, n):
    g, p = gp
    m = standard_module(catalog_group(g), p, "random", seed=s)
    k = trivial_module(m.group, p)
    assert len(set(completed_dims(k, m, n).values())) == 1
    assert len(set(completed_dims(m, k, n).values())) == 1


@FAST
@given(entry, seed, degree)
def test_projectives_are_invisible(gp, s, n):
    g, p = gp
    group = catalog_group(g)
    m = standard_module(group, p, "random", seed=s)
    reg = regular_module(group, p)
    assert completed_naive(reg, m, n).dim == 0
    assert completed_naive(m, reg, n).dim == 0


@FAST
@given(entry, seed)
def test_long_exact_sequence_random(gp, s):
    g, p = gp
    rng = np.random.default_rng(s)
    y = standard_module(catalog_group(g), p, ["regular", "random"][s % 2], seed=s)
    ses = random_ses(y, rng)
    if ses is None:
        return
    assert les_check(ses, trivial_module(y.group, p), range(-2, 3)).passed


@FAST
@given(entry, seed, degree)
def test_dimension_shift_random(gp, s, n):
    g, p = gp
    m = standard_module(catalog_group(g), p, "random", seed=s)
    mat = dimension_shift(trivial_module(m.group, p), m, n)
    assert mat.shape[0] == mat.shape[1]
    if mat.size:
        assert la.rank(mat, p) == mat.shape[0]


@FAST
@given(st.sampled_from([("C2", 2), ("C3", 3), ("V4", 2), ("S3", 3)]), seed,
       st.integers(-2, 2), st.integers(-2, 2))
def test_graded_commutativity_random(gp, s, m, n):
    g, p = gp
    rng = np.random.default_rng(s)
    k = trivial_module(catalog_group(g), p)
    gx, gy = completed_naive(k, k, m), completed_naive(k, k, n)
    x, y = gx.element(rng.integers(0, p, gx.dim)), gy.element(rng.integers(0, p, gy.dim))
    assert swap_check(x, y)
    sign = -1 if (m * n) % 2 else 1
    assert cup(x, y) == cup(y, x).scale(sign)
