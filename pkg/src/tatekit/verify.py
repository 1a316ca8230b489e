"""Seeded verification suites behind ``tatekit verify``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .catalog import catalog_entries, catalog_group, random_submodule, standard_module
from .completion import (
    CheckReport,
    ShortExactSequence,
    bdd_check,
    completed_dims,
    completed_naive,
    connecting,
    covariant_map,
    dimension_shift,
    ext_ordinary,
    les_check,
    naturality_check,
    pd_detect,
    phi_canonical,
)
from .errors import InputError
from .modrep import (
    Module,
    ModuleMap,
    hom_basis,
    is_projective,
    module_radical,
    quotient_module,
    regular_module,
    submodule,
    submodule_hull,
    tensor_module,
    trivial_module,
)
from .products import (
    _check_table,
    cup,
    external,
    ordinary_cup,
    ordinary_yoneda,
    ring_table,
    swap_check,
    tensor_ses,
    unit,
    yoneda,
)

__all__ = ["SuiteResult", "SUITES", "run_suite", "random_ses", "pushout_ladder", "uniserial_ses"]


@dataclass
class SuiteResult:
    name: str
    reports: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": {r.name: {"passed": r.passed, "checked": r.checked, "failures": r.failures[:10]}
                       for r in self.reports},
            **self.notes,
        }


def random_ses(y: Module, rng: np.random.Generator) -> ShortExactSequence | None:
    """``0 -> X -> y -> y/X -> 0`` for the hull ``X`` of a random vector; ``None`` when degenerate."""
    basis = random_submodule(y, rng, 1)
    if basis.shape[0] in (0, y.dim):
        return None
    x, inc = submodule(y, basis)
    z, proj = quotient_module(y, basis)
    return ShortExactSequence(inc, proj)


def _section(proj: np.ndarray, p: int) -> np.ndarray:
    x, ok = la.solve_many(proj, np.eye(proj.shape[0], dtype=np.int64), p)
    assert ok.all()
    return x


def pushout_ladder(top: ShortExactSequence, rng: np.random.Generator):
    """Quotient ``top`` by a random submodule of its left term.

    Returns ``(bottom, left_map, right_map)`` or ``None`` when the random
    submodule is zero or everything.
    """
    x, y, z = top.left, top.middle, top.right
    p = x.p
    x0 = random_submodule(x, rng, 1)
    if x0.shape[0] in (0, x.dim):
        return None
    x1, px = quotient_module(x, x0)
    y0 = submodule_hull(y, (top.inclusion.matrix @ x0.T).T % p)
    y1, py = quotient_module(y, y0)
    inc1 = (py.matrix @ top.inclusion.matrix @ _section(px.matrix, p)) % p
    proj1 = (top.projection.matrix @ _section(py.matrix, p)) % p
    bottom = ShortExactSequence(ModuleMap(x1, y1, inc1), ModuleMap(y1, z, proj1))
    right = ModuleMap(z, z, np.eye(z.dim, dtype=np.int64))
    return bottom, px, right


def uniserial_ses(p: int) -> ShortExactSequence:
    """``0 -> k -> U -> k -> 0`` over ``C_p`` with ``U`` uniserial of length two (regular for ``p = 2``)."""
    g = catalog_group(f"C{p}")
    reg = regular_module(g, p)
    rad = module_radical(reg)
    rad_mod, rad_inc = submodule(reg, rad)
    rad2 = (module_radical(rad_mod) @ rad_inc.matrix.T) % p
    u, pr = quotient_module(reg, rad2) if rad2.shape[0] else (reg, ModuleMap(reg, reg, np.eye(p, dtype=np.int64)))
    soc = submodule_hull(u, (pr.matrix @ rad.T).T % p)
    s, inc = submodule(u, soc)
    q, proj = quotient_module(u, soc)
    return ShortExactSequence(inc, proj)


def _ses_pool(seed: int):
    """Endless round-robin stream of random short exact sequences over the catalog."""
    rng = np.random.default_rng(seed)
    entries = catalog_entries()
    kinds = ("regular", "random", "perm")
    for round_no in itertools.count():
        for g, p in entries:
            group = catalog_group(g)
            for kind in kinds:
                try:
                    y = standard_module(group, p, kind, seed=seed + round_no)
                except InputError:
                    continue
                if y.dim > 24:
                    continue
                ses = random_ses(y, rng)
                if ses is not None:
                    yield g, p, kind, ses, rng


def suite_les(seed: int = 0, count: int = 100, degrees=range(-3, 4)) -> SuiteResult:
    les = CheckReport("les")
    nat = CheckReport("naturality")
    done = 0
    ladders = 0
    for g, p, kind, ses, rng in _ses_pool(seed):
        if done >= count:
            break
        a = trivial_module(ses.left.group, p)
        before = len(les.failures)
        les_check(ses, a, degrees, les)
        if len(les.failures) > before:
            les.failures[before:] = [f"{g}/F{p} {kind} {ses.left.dim}->{ses.middle.dim}: {m}"
                                     for m in les.failures[before:]]
        ladder = pushout_ladder(ses, rng)
        if ladder is not None:
            bottom, left, right = ladder
            nb = len(nat.failures)
            naturality_check(ses, bottom, left, right, a, degrees, nat)
            if len(nat.failures) > nb:
                nat.failures[nb:] = [f"{g}/F{p} {kind}: {m}" for m in nat.failures[nb:]]
            ladders += 1
        done += 1
    return SuiteResult("les", [les, nat], {"sequences": done, "ladders": ladders})


def suite_constructions(degrees=range(-4, 5), seed: int = 0) -> SuiteResult:
    rep = CheckReport("agreement")
    rows = []
    for g, p in catalog_entries():
        group = catalog_group(g)
        k = trivial_module(group, p)
        for kind in ("trivial", "regular", "random"):
            m = standard_module(group, p, kind, seed=seed)
            pairs = [(m, m)] if kind != "random" else [(m, m), (k, m), (m, k)]
            for a, b in pairs:
                for n in degrees:
                    dims = completed_dims(a, b, n)
                    rep.checked += 1
                    rows.append((g, p, kind, n, dims))
                    if len(set(dims.values())) != 1:
                        rep.fail(f"{g}/F{p} {kind} degree {n}: {dims}")
    return SuiteResult("constructions", [rep], {"rows": len(rows)})


def suite_structure(degrees=range(-3, 4), seed: int = 0) -> SuiteResult:
    """Projective vanishing, pd detection, Phi, dimension shifting, windowed Bdd sequence."""
    vanish, pd, phi, shift, bdd = (CheckReport(n) for n in ("vanishing", "pd", "phi", "dimension_shift", "bdd"))
    for g, p in catalog_entries():
        group = catalog_group(g)
        k = trivial_module(group, p)
        reg = regular_module(group, p)
        rnd = standard_module(group, p, "random", seed=seed)
        for n in degrees:
            for a, b in ((reg, k), (k, reg), (reg, rnd), (rnd, reg)):
                vanish.checked += 1
                if completed_naive(a, b, n).dim:
                    vanish.fail(f"{g}/F{p} degree {n}: nonzero with a projective argument")
        for m, expect in ((k, False), (reg, True), (rnd, is_projective(rnd))):
            pd.checked += 1
            if pd_detect(m).finite != expect:
                pd.fail(f"{g}/F{p}: wrong verdict for {m.name or m.dim}")
        for n in range(1, 4):
            for a, b in ((k, k), (k, rnd)):
                mat = phi_canonical(a, b, n)
                phi.checked += 1
                if mat.shape[0] != mat.shape[1] or la.rank(mat, p) != mat.shape[0]:
                    phi.fail(f"{g}/F{p} degree {n}: Phi not invertible")
        for n in degrees:
            for a, b in ((k, k), (k, rnd), (rnd, k)):
                shift.checked += 1
                try:
                    dimension_shift(a, b, n)
                except Exception as exc:  # noqa: BLE001 - reported as a failure
                    shift.fail(f"{g}/F{p} degree {n}: {exc}")
    for g, p in (("C2", 2), ("C3", 3), ("C4", 2), ("S3", 3)):
        k = trivial_module(catalog_group(g), p)
        before = len(bdd.failures)
        bdd_check(k, k, range(-2, 3), report=bdd)
        bdd.failures[before:] = [f"{g}/F{p}: {m}" for m in bdd.failures[before:]]
    for p in (2, 5):
        group = catalog_group("C2" if p == 5 else "C3")
        # p not dividing the order: every module has finite projective dimension
        for kind in ("trivial", "random"):
            m = standard_module(group, p, kind)
            pd.checked += 1
            if not pd_detect(m).finite:
                pd.fail(f"{group.name}/F{p} {kind}: semisimple case reported infinite")
    return SuiteResult("structure", [vanish, pd, phi, shift, bdd])


def _rand_element(a, b, n, rng):
    grp = completed_naive(a, b, n)
    return grp.element(rng.integers(0, a.p, grp.dim))


def suite_products(seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    unit_r, assoc, comm, nat, conn, phi_r, yon = (
        CheckReport(n) for n in ("unit", "associativity", "graded_commutativity", "naturality",
                                 "connecting", "phi_products", "yoneda_vs_cup"))
    tables = {("C2", 2): (-4, 4), ("C3", 3): (-4, 4), ("V4", 2): (-3, 3), ("Q8", 2): (-3, 3), ("S3", 3): (-4, 4)}
    for (g, p), (lo, hi) in tables.items():
        table = ring_table(catalog_group(g), p, lo, hi, check=False)
        one = unit(trivial_module(catalog_group(g), p)).coords
        res = _check_table(table, one)
        unit_r.checked += 1
        assoc.checked += 1
        if not res["unit"]:
            unit_r.fail(f"{g}/F{p}: unit law fails in the table")
        if not res["associativity"]:
            assoc.fail(f"{g}/F{p}: associativity fails in the table")
    for g, p in catalog_entries():
        group = catalog_group(g)
        k = trivial_module(group, p)
        small = group.order <= 6
        for _ in range(20 if small else 6):
            span = 2 if small else 1
            m, n, l = (int(v) for v in rng.integers(-span, span + 1, size=3))
            x, y, z = (_rand_element(k, k, d, rng) for d in (m, n, l))
            assoc.checked += 1
            if cup(cup(x, y), z) != cup(x, cup(y, z)):
                assoc.fail(f"{g}/F{p}: ({m},{n},{l}) triple not associative")
        if small or g in ("V4",):
            mod = standard_module(group, p, "random", seed=seed)
            for m, n in ((1, 1), (-1, 2), (2, -1), (0, 1)):
                x, y = _rand_element(k, mod, m, rng), _rand_element(k, k, n, rng)
                comm.checked += 1
                if not swap_check(x, y):
                    comm.fail(f"{g}/F{p}: swap relation fails in degrees ({m},{n})")
                one = unit(k)
                unit_r.checked += 1
                if cup(one, y) != y or cup(y, one) != y:
                    unit_r.fail(f"{g}/F{p}: unit law fails in degree {n}")
            # naturality in the coefficients: (r (x) s)_*(x v y) = r_* x v s_* y
            maps = hom_basis(mod, mod)
            if maps:
                r = maps[int(rng.integers(len(maps)))]
                s = ModuleMap(k, k, np.eye(1, dtype=np.int64))
                rs = ModuleMap(tensor_module(mod, k), tensor_module(mod, k),
                               np.kron(r.matrix, s.matrix) % p, check=False)
                for m, n in ((1, 1), (-2, 1), (0, -1)):
                    x, y = _rand_element(k, mod, m, rng), _rand_element(k, k, n, rng)
                    lhs = (covariant_map(rs, k, m + n) @ external(x, y).coords) % p
                    rx = completed_naive(k, mod, m).element(covariant_map(r, k, m) @ x.coords)
                    rhs = external(rx, y).coords
                    nat.checked += 1
                    if not np.array_equal(lhs, rhs):
                        nat.fail(f"{g}/F{p}: naturality fails in degrees ({m},{n})")
        for m in range(1, 3):
            for n in range(1, 3):
                em, en, emn = ext_ordinary(k, k, m), ext_ordinary(k, k, n), ext_ordinary(k, k, m + n)
                if not (em.dim and en.dim):
                    continue
                pm, pn, pmn = phi_canonical(k, k, m), phi_canonical(k, k, n), phi_canonical(k, k, m + n)
                i, j = int(rng.integers(em.dim)), int(rng.integers(en.dim))
                x, y = em.representatives()[i], en.representatives()[j]
                big_x = completed_naive(k, k, m).element(pm[:, i])
                big_y = completed_naive(k, k, n).element(pn[:, j])
                c = emn.coords(ordinary_cup(k, k, m, n, x, y)[None])[0]
                yo = emn.coords(ordinary_yoneda(k, k, k, n, m, y, x)[None])[0]
                phi_r.checked += 2
                if not np.array_equal((pmn @ c) % p, cup(big_x, big_y).coords):
                    phi_r.fail(f"{g}/F{p}: Phi does not preserve cup in degrees ({m},{n})")
                if not np.array_equal((pmn @ yo) % p, yoneda(big_x, big_y).coords):
                    phi_r.fail(f"{g}/F{p}: Phi does not preserve Yoneda in degrees ({m},{n})")
        for m, n in ((1, 1), (-1, 2), (2, 2), (-2, -1)):
            x, y = _rand_element(k, k, m, rng), _rand_element(k, k, n, rng)
            yon.checked += 1
            if cup(x, y) != yoneda(x, y):
                yon.fail(f"{g}/F{p}: cup and Yoneda differ in degrees ({m},{n})")
    for p in (2, 3):
        ses = uniserial_ses(p)
        k = ses.left
        _connecting_compat(ses, k, rng, conn)
    return SuiteResult("products", [unit_r, assoc, comm, nat, conn, phi_r, yon])


def _connecting_compat(ses: ShortExactSequence, k: Module, rng, report: CheckReport, degrees=range(-2, 3)):
    """``d(x v y) = d(x) v y`` and ``d(y v x) = (-1)^m y v d(x)`` for ``y`` of degree ``m``."""
    p = k.p
    left_ses = tensor_ses(ses, k)
    right_ses = tensor_ses(ses, k, other_left=True)
    for m, n in itertools.product(degrees, repeat=2):
        x = _rand_element(k, ses.right, m, rng)
        y = _rand_element(k, k, n, rng)
        d = connecting(ses, k, m)
        dx = d.codomain.element(d.matrix @ x.coords)
        lhs = (connecting(left_ses, k, m + n).matrix @ external(x, y).coords) % p
        report.checked += 2
        if not np.array_equal(lhs, external(dx, y).coords):
            report.fail(f"F{p} degrees ({m},{n}): connecting map on the left factor")
        lhs2 = (connecting(right_ses, k, n + m).matrix @ external(y, x).coords) % p
        sign = -1 if n % 2 else 1
        if not np.array_equal(lhs2, (sign * external(y, dx).coords) % p):
            report.fail(f"F{p} degrees ({n},{m}): connecting map on the right factor")


SUITES = {
    "les": suite_les,
    "constructions": suite_constructions,
    "products": suite_products,
    "structure": suite_structure,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name in ("les", "products", "constructions", "structure"):
        return SUITES[name](seed=seed)
    return SUITES[name]()
