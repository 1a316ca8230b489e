"""External, cup and Yoneda products on completed Ext, and graded ring tables.

External product of ``x`` in degree ``m`` (``a -> b``) and ``y`` in degree
``n`` (``c -> e``).  Both factors are moved to even shifts ``2s`` and ``2t``
(smallest with ``m + 2s >= 1`` and ``n + 2t >= 1``).  With ``M = m + 2s`` and
``N = n + 2t`` they become ordinary cocycles ``u: F^a_M -> Omega^b_{2s}`` and
``v: F^c_N -> Omega^e_{2t}``.  The cochain ``(-1)^{MN} u (x) v`` lives on the
``F^a_M (x) F^c_N`` summand of the tensor resolution.  Pulled back along a
comparison chain map from the resolution of ``a (x) c``, it becomes a map
``Omega^{a(x)c}_{M+N} -> Omega^b_{2s} (x) Omega^e_{2t}``.  A fixed comparison
into ``Omega^{b(x)e}_{2s+2t}`` finishes the job.  That comparison is built one
syzygy step at a time, first along ``b`` and then along ``e``, from the
short exact sequences ``0 -> Omega_{i+1} (x) Y -> F_i (x) Y -> Omega_i (x) Y -> 0``
whose middle terms are free.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .completion import (
    CheckReport,
    CompletedExtElement,
    CompletedExtGroup,
    ShortExactSequence,
    completed_naive,
    connecting,
    contravariant_map,
    covariant_map,
    ext_ordinary,
    phi_canonical,
)
from .errors import CertificateError, InputError, VerificationError
from .modrep import FiniteGroup, Module, ModuleMap, swap_map, tensor_module, trivial_module
from .resolution import free_map, lift_chain_map, resolution, tensor_resolutions
from .stable import omega_map

__all__ = [
    "even_shift",
    "external",
    "external_many",
    "cup",
    "yoneda",
    "unit",
    "tensor_ses",
    "GradedRingTable",
    "ring_table",
    "ordinary_cup",
    "ordinary_yoneda",
    "swap_check",
]

_LOCK = threading.RLock()


def even_shift(m: int) -> int:
    """Smallest even ``2s >= 0`` with ``m + 2s >= 1``."""
    need = max(0, 1 - m)
    return need + (need % 2)


def _memo(table: dict, key, build):
    hit = table.get(key)
    if hit is not None:
        return hit
    value = build()
    with _LOCK:
        return table.setdefault(key, value)


def _free_tensor_lift(gen_images: np.ndarray, free: Module, other: Module, target: Module, free_left: bool) -> np.ndarray:
    """Equivariant map ``F (x) Y -> target`` (or ``Y (x) F``) from generator images.

    ``gen_images[l]`` is the ``dim target x dim Y`` block giving the images of
    ``e_{l,1} (x) y_t``.  Since ``e_{l,g} (x) y = g (e_{l,1} (x) g^{-1} y)`` the
    column for ``(l, g, s)`` is ``rho_T(g) L_l rho_Y(g^{-1}) e_s``.
    """
    G = free.group
    n = G.order
    r = free.dim // n
    dy = other.dim
    out = np.zeros((target.dim, r, n, dy), dtype=np.int64)
    yact = other.action
    for g in range(n):
        ginv = int(G.inverse[g])
        for l in range(r):
            block = gen_images[l] @ yact[ginv]
            out[:, l, g, :] = target.apply(g, block)
    out %= free.p
    if free_left:
        return out.reshape(target.dim, r * n * dy)
    return out.transpose(0, 3, 1, 2).reshape(target.dim, dy * r * n)


def _syzygy_step(res_free, i: int, other: Module, free_left: bool) -> np.ndarray:
    """``Omega_{i+1} (x) Y -> Omega_1(Omega_i (x) Y)`` (or with the factors swapped)."""
    p = other.p
    cov = res_free.cover(i)
    omega_i, omega_next = cov.module, cov.kernel
    z = tensor_module(omega_i, other) if free_left else tensor_module(other, omega_i)
    rz = resolution(z)
    cz = rz.cover(0)
    dy = other.dim
    eye = np.eye(dy, dtype=np.int64)
    blocks = []
    for l in range(cov.rank):
        g = cov.gens[:, l:l + 1]
        rhs = np.kron(g, eye) if free_left else np.kron(eye, g)
        x, ok = la.solve_many(cz.pi, rhs % p, p)
        if not ok.all():
            raise CertificateError("tensor cover lift failed")
        blocks.append(x)
    lift = _free_tensor_lift(blocks, cov.term, other, cz.term, free_left)
    inc = np.kron(cov.iota, eye) if free_left else np.kron(eye, cov.iota)
    restricted = (lift @ inc) % p
    if ((cz.pi @ restricted) % p).any():
        raise CertificateError("restricted tensor lift leaves the kernel")
    return cz.kernel_coords(restricted)


_COMPARISON: dict = {}


def comparison_map(b: Module, e: Module, i: int, j: int) -> np.ndarray:
    """Stable map ``Omega^b_i (x) Omega^e_j -> Omega^{b(x)e}_{i+j}``."""

    def build():
        rb, re = resolution(b), resolution(e)
        be = tensor_module(b, e)
        rbe = resolution(be)
        if i == 0 and j == 0:
            return np.eye(be.dim, dtype=np.int64)
        if j == 0:
            prev = comparison_map(b, e, i - 1, 0)
            z = tensor_module(rb.syzygy(i - 1), e)
            step = _syzygy_step(rb, i - 1, e, True)
            up = omega_map(prev, resolution(z), 0, rbe, i - 1)
            return (up @ step) % b.p
        prev = comparison_map(b, e, i, j - 1)
        x = rb.syzygy(i)
        z = tensor_module(x, re.syzygy(j - 1))
        step = _syzygy_step(re, j - 1, x, False)
        up = omega_map(prev, resolution(z), 0, rbe, i + j - 1)
        return (up @ step) % b.p

    return _memo(_COMPARISON, (b.key, e.key, i, j), build)


class _TensorLift:
    """Chain map ``R -> F^a (x) F^c`` over the identity of ``a (x) c``, extended on demand."""

    def __init__(self, a: Module, c: Module):
        self.a, self.c = a, c
        self.ra, self.rc = resolution(a), resolution(c)
        self.t = tensor_resolutions(self.ra, self.rc)
        self.r = resolution(self.t.module)
        self.chain = None

    def component(self, deg: int) -> np.ndarray:
        if self.chain is None or deg not in self.chain.components:
            with _LOCK:
                if self.chain is None or deg not in self.chain.components:
                    ident = ModuleMap(self.r.module, self.t.module, np.eye(self.t.module.dim, dtype=np.int64),
                                      check=False)
                    self.chain = lift_chain_map(ident, self.r, self.t, deg + 1)
        return self.chain.components[deg]

    def block(self, deg: int, i: int) -> np.ndarray:
        """Rows of the degree ``deg`` component landing in ``F^a_i (x) F^c_{deg-i}``."""
        for ii, off, size in self.t.blocks(deg):
            if ii == i:
                return self.component(deg)[off:off + size]
        raise InputError("no such tensor summand")


_TLIFT: dict = {}


def _tensor_lift(a: Module, c: Module) -> _TensorLift:
    return _memo(_TLIFT, (a.key, c.key), lambda: _TensorLift(a, c))


def _check_same_algebra(*mods: Module):
    first = mods[0]
    for m in mods[1:]:
        if m.group.key != first.group.key or m.p != first.p:
            raise InputError("factors live over different group algebras")


def external_many(xs: list[CompletedExtElement], ys: list[CompletedExtElement]) -> np.ndarray:
    """Coordinates (columns, ``x``-major) of all products ``x v y`` for ``x in xs``, ``y in ys``.

    All ``xs`` must lie in one group and all ``ys`` in one group.
    """
    gx, gy = xs[0].group, ys[0].group
    a, b, m = gx.a, gx.b, gx.degree
    c, e, n = gy.a, gy.b, gy.degree
    _check_same_algebra(a, b, c, e)
    p = a.p
    out_group = completed_naive(tensor_module(a, c), tensor_module(b, e), m + n)
    s2, t2 = even_shift(m), even_shift(n)
    M, N = m + s2, n + t2
    ra, rc = resolution(a), resolution(c)
    cov_a, cov_c = ra.cover(M), rc.cover(N)
    tl = _tensor_lift(a, c)
    chi = tl.block(M + N, M)
    rr = tl.r
    section = rr.cover(M + N).section
    pullback = (chi @ section) % p  # Omega^{a(x)c}_{M+N} -> F^a_M (x) F^c_N
    comp = comparison_map(b, e, s2, t2)
    sign = -1 if (M * N) % 2 else 1
    omega_b, omega_e = resolution(b).syzygy(s2), resolution(e).syzygy(t2)
    # cocycles f o pi on the free terms
    ub = [free_map(cov_a.term, omega_b, (x.representative(s2) @ cov_a.gens) % p) for x in xs]
    vb = [free_map(cov_c.term, omega_e, (y.representative(t2) @ cov_c.gens) % p) for y in ys]
    maps = []
    for u in ub:
        for v in vb:
            w = (sign * np.kron(u, v)) % p
            maps.append((comp @ ((w @ pullback) % p)) % p)
    if not maps:
        return np.zeros((out_group.dim, 0), dtype=np.int64)
    return out_group.coords_from_maps(maps, s2 + t2)


def external(x: CompletedExtElement, y: CompletedExtElement) -> CompletedExtElement:
    gx, gy = x.group, y.group
    out = completed_naive(tensor_module(gx.a, gy.a), tensor_module(gx.b, gy.b), gx.degree + gy.degree)
    if out.dim == 0:
        return out.zero()
    return out.element(external_many([x], [y])[:, 0])


def cup(x: CompletedExtElement, y: CompletedExtElement) -> CompletedExtElement:
    """Cup product on completed cohomology (both factors with trivial-module source)."""
    for z in (x, y):
        a = z.group.a
        if a.dim != 1 or (a.action != 1).any():
            raise InputError("cup product needs classes in completed cohomology (trivial source)")
    return external(x, y)


def unit(a: Module) -> CompletedExtElement:
    """Identity class in completed ``Ext^0(a, a)``."""
    grp = completed_naive(a, a, 0)
    om = resolution(a).syzygy(grp.shift)
    return grp.element_from_map(np.eye(om.dim, dtype=np.int64), grp.shift)


def yoneda(x: CompletedExtElement, y: CompletedExtElement) -> CompletedExtElement:
    """Composite ``x o y`` for ``y`` in degree ``m`` (``f -> h``) and ``x`` in degree ``n`` (``h -> j``)."""
    gx, gy = x.group, y.group
    if gx.a.key != gy.b.key:
        raise InputError("Yoneda product needs the middle modules to agree")
    n, m = gx.degree, gy.degree
    out = completed_naive(gy.a, gx.b, m + n)
    k = max(1, 1 - n, 1 - m - n)
    fx = x.representative(k)  # Omega^h_{n+k} -> Omega^j_k
    fy = y.representative(n + k)  # Omega^f_{m+n+k} -> Omega^h_{n+k}
    return out.element(out.coords_from_maps([(fx @ fy) % gx.a.p], k)[:, 0])


def tensor_ses(ses: ShortExactSequence, other: Module, other_left: bool = False) -> ShortExactSequence:
    """``ses (x) other`` (or ``other (x) ses``), exact because tensoring over a field is exact."""
    i, q = ses.inclusion, ses.projection
    p = other.p
    eye = np.eye(other.dim, dtype=np.int64)
    if other_left:
        mods = [tensor_module(other, m) for m in (ses.left, ses.middle, ses.right)]
        im, qm = np.kron(eye, i.matrix), np.kron(eye, q.matrix)
    else:
        mods = [tensor_module(m, other) for m in (ses.left, ses.middle, ses.right)]
        im, qm = np.kron(i.matrix, eye), np.kron(q.matrix, eye)
    return ShortExactSequence(ModuleMap(mods[0], mods[1], im % p, check=False),
                              ModuleMap(mods[1], mods[2], qm % p, check=False))


# --------------------------------------------------------------------------
# ordinary products (for comparison through the canonical morphism)


def ordinary_cup(a_coeff: Module, b_coeff: Module, m: int, n: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cocycle (generator coordinates) of ``x v y`` in ``Ext^{m+n}(k, a (x) b)`` from cocycles of ``x``, ``y``."""
    G, p = a_coeff.group, a_coeff.p
    k = trivial_module(G, p)
    rk = resolution(k)
    tl = _tensor_lift(k, k)
    u = free_map(rk.term(m), a_coeff, np.asarray(x).reshape(rk.rank(m), a_coeff.dim).T)
    v = free_map(rk.term(n), b_coeff, np.asarray(y).reshape(rk.rank(n), b_coeff.dim).T)
    sign = -1 if (m * n) % 2 else 1
    full = (sign * np.kron(u, v) @ tl.block(m + n, m)) % p
    gens = full[:, np.arange(tl.r.rank(m + n)) * G.order]
    return gens.T.reshape(-1) % p


def ordinary_yoneda(f: Module, h: Module, j: Module, m: int, n: int, y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cocycle of ``x o y`` for cocycles ``y`` of ``Ext^m(f, h)`` and ``x`` of ``Ext^n(h, j)``."""
    p = f.p
    order = f.group.order
    rf, rh = resolution(f), resolution(h)
    u = free_map(rf.term(m), h, np.asarray(y).reshape(rf.rank(m), h.dim).T)
    prev = None
    for d in range(n + 1):
        gens = np.arange(rf.rank(m + d)) * order
        if d == 0:
            rhs, surj = u[:, gens], rh.augmentation_matrix()
        else:
            rhs, surj = (prev @ rf.differential_matrix(m + d))[:, gens] % p, rh.differential_matrix(d)
        sol, ok = la.solve_many(surj, rhs % p, p)
        if not ok.all():
            raise CertificateError("cocycle does not lift to a chain map")
        prev = free_map(rf.term(m + d), rh.term(d), sol)
    v = free_map(rh.term(n), j, np.asarray(x).reshape(rh.rank(n), j.dim).T)
    full = (v @ prev) % p
    gens = full[:, np.arange(rf.rank(m + n)) * order]
    return gens.T.reshape(-1) % p


# --------------------------------------------------------------------------
# ring tables


@dataclass
class GradedRingTable:
    group: str
    prime: int
    degrees: tuple
    dims: dict
    labels: dict  # degree -> list of labels
    unit: list
    structure: dict = field(default_factory=dict)  # (m, i, n, j) -> coordinate vector in degree m + n
    checks: dict = field(default_factory=dict)

    def product(self, m: int, i: int, n: int, j: int) -> np.ndarray:
        return self.structure[(m, i, n, j)]

    def to_json(self) -> dict:
        prods = []
        for (m, i, n, j), vec in sorted(self.structure.items()):
            res = {self.labels[m + n][t]: int(c) for t, c in enumerate(vec) if c}
            prods.append({"a": self.labels[m][i], "b": self.labels[n][j], "result": res})
        return {
            "group": self.group,
            "prime": self.prime,
            "degrees": [self.degrees[0], self.degrees[1]],
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "unit": self.unit,
            "products": prods,
        }


MAX_TABLE_SPAN = 16


def ring_table(group: FiniteGroup, p: int, lo: int, hi: int, check: bool = True) -> GradedRingTable:
    """Completed cohomology ``H^n(G, F_p)`` for ``lo <= n <= hi`` with all in-range cup products.

    With ``check`` the unit laws and associativity of every in-range triple
    are verified; a failure raises :class:`VerificationError`.
    """
    if hi < lo:
        raise InputError("empty degree range")
    if hi - lo > MAX_TABLE_SPAN:
        raise InputError(f"degree span {hi - lo} exceeds the bound {MAX_TABLE_SPAN}")
    k = trivial_module(group, p)
    groups = {n: completed_naive(k, k, n) for n in range(lo, hi + 1)}
    dims = {n: g.dim for n, g in groups.items()}
    labels = {n: [f"u{n}_{i}" for i in range(d)] for n, d in dims.items()}
    structure = {}
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            if not lo <= m + n <= hi or not dims[m] or not dims[n]:
                continue
            coords = external_many(groups[m].basis(), groups[n].basis())
            for idx, (i, j) in enumerate(itertools.product(range(dims[m]), range(dims[n]))):
                structure[(m, i, n, j)] = coords[:, idx] % p
    unit_labels = []
    one = None
    if lo <= 0 <= hi and dims[0]:
        one = unit(k).coords
        unit_labels = [labels[0][t] for t, c in enumerate(one) if c]
    table = GradedRingTable(group.name, p, (lo, hi), dims, labels, unit_labels, structure)
    if check:
        table.checks = _check_table(table, one)
        bad = [name for name, ok in table.checks.items() if not ok]
        if bad:
            raise VerificationError(f"ring table fails: {', '.join(bad)}")
    return table


def _table_mul(table: GradedRingTable, m: int, x: np.ndarray, n: int, y: np.ndarray) -> np.ndarray:
    p = table.prime
    out = np.zeros(table.dims[m + n], dtype=np.int64)
    for i in np.flatnonzero(x):
        for j in np.flatnonzero(y):
            out = out + x[i] * y[j] * table.structure[(m, int(i), n, int(j))]
    return out % p


def _check_table(table: GradedRingTable, one) -> dict:
    lo, hi = table.degrees
    p = table.prime
    ok_unit = True
    if one is not None:
        for n in range(lo, hi + 1):
            for i in range(table.dims[n]):
                e = np.zeros(table.dims[n], dtype=np.int64)
                e[i] = 1
                if not np.array_equal(_table_mul(table, 0, one, n, e), e):
                    ok_unit = False
                if not np.array_equal(_table_mul(table, n, e, 0, one), e):
                    ok_unit = False
    ok_assoc = True
    degs = range(lo, hi + 1)
    for a, b, c in itertools.product(degs, repeat=3):
        if not (lo <= a + b <= hi and lo <= b + c <= hi and lo <= a + b + c <= hi):
            continue
        if not (table.dims[a] and table.dims[b] and table.dims[c]):
            continue
        for i, j, l in itertools.product(range(table.dims[a]), range(table.dims[b]), range(table.dims[c])):
            left = _table_mul(table, a + b, table.structure[(a, i, b, j)], c, np.eye(table.dims[c], dtype=np.int64)[l])
            right = _table_mul(table, a, np.eye(table.dims[a], dtype=np.int64)[i], b + c, table.structure[(b, j, c, l)])
            if not np.array_equal(left % p, right % p):
                ok_assoc = False
    return {"unit": ok_unit, "associativity": ok_assoc}


def swap_check(x: CompletedExtElement, y: CompletedExtElement) -> bool:
    """``swap_*(x v y) = (-1)^{mn} swap^*(y v x)`` for the swap isomorphisms of both tensor products."""
    gx, gy = x.group, y.group
    m, n = gx.degree, gy.degree
    p = gx.a.p
    xy = external(x, y)
    yx = external(y, x)
    # covariant swap on coefficients: b (x) e -> e (x) b
    cov = covariant_map(swap_map(gx.b, gy.b), tensor_module(gx.a, gy.a), m + n)
    moved = (cov @ xy.coords) % p
    # contravariant swap on sources: a (x) c -> c (x) a
    contra = contravariant_map(swap_map(gx.a, gy.a), tensor_module(gy.b, gx.b), m + n)
    target = (contra @ yx.coords) % p
    sign = -1 if (m * n) % 2 else 1
    return np.array_equal(moved % p, (sign * target) % p)
