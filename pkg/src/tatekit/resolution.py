"""Free resolutions, syzygies, chain-map lifting and complete resolutions.

Conventions
-----------
For a module ``M`` with resolution ``... -> F_1 -> F_0 -> M`` the syzygies are
``Omega_0 = M`` and ``Omega_{j+1} = ker(F_j -> Omega_j)``.  Level ``j`` of a
resolution is the free cover ``pi_j: F_j -> Omega_j``; the differential is
``d_j = iota_j pi_j`` with ``iota_j: Omega_j -> F_{j-1}`` the inclusion.

A map out of a free module ``F^r`` is stored by the images of its ``r``
generators ``e_{i,1}`` (a ``dim(target) x r`` matrix); :func:`free_map`
expands it to a full matrix.  ``Hom(F^r, X)`` is identified with ``X^r``
(generator-major layout), which is how all Hom complexes are built.

Complete resolutions splice the positive part with the dual of a resolution
of ``M*``: ``Abar_{-1-i} = (P_i)*`` and ``Abar_0 -> Abar_{-1}`` is
``eps_{M*}^T eps_M``.  The dual of a standard free module has the same
permutation action in the dual basis, so the dualised terms are again standard
free modules.
"""
from __future__ import annotations

import json
import threading
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import CertificateError, InputError
from .modrep import (
    Module,
    ModuleMap,
    direct_sum,
    dual_module,
    free_module,
    module_radical,
    submodule,
    submodule_hull,
    tensor_module,
    zero_module,
)

__all__ = [
    "FreeCover",
    "free_cover",
    "free_map",
    "generator_columns",
    "FreeResolution",
    "resolution",
    "extend_resolution",
    "ChainMap",
    "lift_chain_map",
    "lift_through",
    "TensorResolution",
    "tensor_resolutions",
    "CompleteResolution",
    "complete_resolution",
    "diagonal_approximation",
    "hom_precompose",
    "hom_postcompose",
    "dump_resolution",
]


def generator_columns(rank: int, order: int) -> np.ndarray:
    return np.arange(rank) * order


def free_map(source: Module, target: Module, images: np.ndarray) -> np.ndarray:
    """Matrix of the equivariant map ``source = F^r -> target`` sending ``e_{i,1}`` to ``images[:, i]``."""
    n = source.group.order
    r = source.dim // n if n else 0
    images = np.asarray(images, dtype=np.int64).reshape(target.dim, r)
    out = np.zeros((target.dim, r, n), dtype=np.int64)
    for g in range(n):
        out[:, :, g] = target.apply(g, images)
    return out.reshape(target.dim, r * n) % source.p


def lift_through(surj: np.ndarray, source: Module, target: Module, images: np.ndarray) -> np.ndarray:
    """Lift a map out of a free module through ``surj: target -> *``.

    ``images`` are the required values (in the codomain of ``surj``) of the
    generators of ``source``; returns generator images in ``target``.
    """
    x, ok = la.solve_many(surj, images, source.p)
    if not ok.all():
        raise CertificateError("lift through a surjection failed: the map is not surjective onto the images")
    return x


@dataclass
class FreeCover:
    module: Module
    rank: int
    gens: np.ndarray  # module.dim x rank
    term: Module
    pi: np.ndarray  # module.dim x term.dim
    kernel: Module
    iota: np.ndarray  # term.dim x kernel.dim, columns RREF basis of the kernel
    kernel_pivots: list
    minimal: bool

    @property
    def pi_map(self) -> ModuleMap:
        return ModuleMap(self.term, self.module, self.pi, check=False)

    @property
    def iota_map(self) -> ModuleMap:
        return ModuleMap(self.kernel, self.term, self.iota, check=False)

    @cached_property
    def section(self) -> np.ndarray:
        """Linear (not equivariant) right inverse of ``pi``, canonical."""
        x, ok = la.solve_many(self.pi, np.eye(self.module.dim, dtype=np.int64), self.module.p)
        assert ok.all()
        return x

    def kernel_coords(self, vecs: np.ndarray) -> np.ndarray:
        """Coordinates of vectors of ``term`` lying in the kernel."""
        return vecs[self.kernel_pivots] % self.module.p


def _choose_generators(m: Module) -> tuple[np.ndarray, bool]:
    p, d = m.p, m.dim
    rad = module_radical(m)
    gens: list[np.ndarray] = []
    generated = np.zeros((0, d), dtype=np.int64)

    def with_rad(basis):
        return la.rank(np.concatenate([basis, rad], axis=0), p) if basis.shape[0] + rad.shape[0] else 0

    current = with_rad(generated)
    for c in range(d):
        if current == d:
            break
        v = np.zeros(d, dtype=np.int64)
        v[c] = 1
        if with_rad(np.concatenate([generated, v[None]], axis=0)) == current:
            continue
        goal = with_rad(np.concatenate([generated, submodule_hull(m, v[None])], axis=0))
        merged = False
        for i in range(len(gens)):
            trial = list(gens)
            trial[i] = (trial[i] + v) % p
            hull = submodule_hull(m, np.array(trial))
            if with_rad(hull) == goal:
                gens, generated, merged = trial, hull, True
                break
        if not merged:
            gens.append(v)
            generated = submodule_hull(m, np.array(gens))
        current = with_rad(generated)
    if generated.shape[0] != d:
        raise CertificateError("generator selection did not reach the whole module (Nakayama check failed)")
    return np.array(gens, dtype=np.int64).T.reshape(d, len(gens)), True


def free_cover(m: Module, minimal: bool = True) -> FreeCover:
    """Free module ``F`` with a surjection onto ``m`` and its kernel.

    With ``minimal`` the generators are chosen modulo the radical ``J m`` so
    their number never exceeds ``dim(m / J m)`` (equality for ``p``-groups);
    otherwise the standard basis of ``m`` is used.
    """
    G, p = m.group, m.p
    if m.dim == 0:
        z = zero_module(G, p)
        f = free_module(G, p, 0)
        return FreeCover(m, 0, np.zeros((0, 0), dtype=np.int64), f, np.zeros((0, 0), dtype=np.int64),
                         z, np.zeros((0, 0), dtype=np.int64), [], minimal)
    used_minimal = minimal
    if minimal:
        try:
            gens, _ = _choose_generators(m)
        except CertificateError:
            warnings.warn("radical-based generator choice failed; using the standard basis")
            gens, used_minimal = np.eye(m.dim, dtype=np.int64), False
    else:
        gens = np.eye(m.dim, dtype=np.int64)
    r = gens.shape[1]
    term = free_module(G, p, r)
    pi = free_map(term, m, gens)
    kb = la.kernel_basis(pi, p)
    if kb.shape[0]:
        kernel, inc = submodule(term, kb)
        pivots = la.row_reduce(kb, p)[1]
        iota = inc.matrix
    else:
        kernel, iota, pivots = zero_module(G, p), np.zeros((term.dim, 0), dtype=np.int64), []
    return FreeCover(m, r, gens, term, pi, kernel, iota, pivots, used_minimal)


_REGISTRY: dict = {}
_REGISTRY_LOCK = threading.RLock()


class FreeResolution:
    """Lazily extended free resolution; shared per module through :func:`resolution`.

    ``tail(s)`` views the same data as a resolution of ``Omega_s``.  Extension
    is serialised by a lock; already computed levels are read without it.
    """

    def __init__(self, module: Module, minimal: bool = True, _parent=None, _offset: int = 0):
        self.module = module
        self.minimal = minimal
        self._parent = _parent
        self._offset = _offset
        if _parent is None:
            self._covers: list[FreeCover] = []
            self._lock = threading.RLock()

    @property
    def root(self) -> "FreeResolution":
        return self if self._parent is None else self._parent

    def tail(self, s: int) -> "FreeResolution":
        if s == 0:
            return self
        root = self.root
        off = self._offset + s
        return FreeResolution(root.syzygy(off), self.minimal, _parent=root, _offset=off)

    def cover(self, j: int) -> FreeCover:
        if j < 0:
            raise InputError("negative resolution level")
        if self._parent is not None:
            return self._parent.cover(j + self._offset)
        covers = self._covers
        if j < len(covers):
            return covers[j]
        with self._lock:
            while len(covers) <= j:
                src = self.module if not covers else covers[-1].kernel
                cov = free_cover(src, self.minimal)
                covers.append(cov)
                _register_tail(cov.kernel, self, len(covers))
        return covers[j]

    def extend(self, up_to: int) -> "FreeResolution":
        if up_to >= 0:
            self.cover(up_to)
        return self

    def syzygy(self, j: int) -> Module:
        return self.module if j == 0 else self.cover(j - 1).kernel

    def term(self, j: int) -> Module:
        return self.cover(j).term

    def rank(self, j: int) -> int:
        return self.cover(j).rank

    def differential_matrix(self, j: int) -> np.ndarray:
        """``d_j: F_j -> F_{j-1}`` for ``j >= 1``."""
        return (self.cover(j - 1).iota @ self.cover(j).pi) % self.module.p

    def differential(self, j: int) -> ModuleMap:
        return ModuleMap(self.term(j), self.term(j - 1), self.differential_matrix(j), check=False)

    def augmentation_matrix(self) -> np.ndarray:
        return self.cover(0).pi

    @property
    def augmentation(self) -> ModuleMap:
        return self.cover(0).pi_map

    def terms(self, up_to: int) -> list[Module]:
        return [self.term(j) for j in range(up_to + 1)]

    def ranks(self, up_to: int) -> list[int]:
        return [self.rank(j) for j in range(up_to + 1)]

    def check_exact(self, up_to: int) -> None:
        """Exactness at ``F_0 .. F_{up_to - 1}`` and at ``M`` by rank counting."""
        p = self.module.p
        if la.rank(self.augmentation_matrix(), p) != self.module.dim:
            raise CertificateError("augmentation is not surjective")
        prev = self.augmentation_matrix()
        for j in range(1, up_to + 1):
            d = self.differential_matrix(j)
            if (prev @ d % p).any():
                raise CertificateError(f"d_{j - 1} d_{j} != 0")
            if la.rank(prev, p) + la.rank(d, p) != self.term(j - 1).dim:
                raise CertificateError(f"not exact at degree {j - 1}")
            prev = d

    def __repr__(self):
        return f"<FreeResolution of {self.module!r}, {len(self.root._covers)} levels>"


def _register_tail(mod: Module, root: FreeResolution, offset: int) -> None:
    key = (mod.key, root.minimal)
    with _REGISTRY_LOCK:
        if key not in _REGISTRY:
            _REGISTRY[key] = FreeResolution(mod, root.minimal, _parent=root, _offset=offset)


def resolution(m: Module, minimal: bool = True) -> FreeResolution:
    """Shared resolution of ``m`` (one per module content and minimality flag)."""
    key = (m.key, minimal)
    with _REGISTRY_LOCK:
        res = _REGISTRY.get(key)
        if res is None:
            res = _REGISTRY[key] = FreeResolution(m, minimal)
    return res


def extend_resolution(res: FreeResolution, up_to: int) -> FreeResolution:
    return res.extend(up_to)


@dataclass
class ChainMap:
    """Components ``f_k: source_k -> target_{k + shift}`` on a degree window."""

    source: object
    target: object
    shift: int
    components: dict = field(default_factory=dict)

    @property
    def window(self) -> tuple[int, int]:
        ks = sorted(self.components)
        return (ks[0], ks[-1]) if ks else (0, -1)

    def defect(self, k: int) -> np.ndarray:
        """``d^T f_k - f_{k-1} d^S`` (zero for a chain map)."""
        p = self.source.module.p
        dt = self.target.differential_matrix(k + self.shift)
        ds = self.source.differential_matrix(k)
        return (dt @ self.components[k] - self.components[k - 1] @ ds) % p


def lift_chain_map(f: ModuleMap, src: FreeResolution, tgt, up_to: int) -> ChainMap:
    """Comparison-theorem lift of ``f: src.module -> tgt.module``.

    ``tgt`` only needs ``term``, ``differential_matrix`` and
    ``augmentation_matrix``; its terms may be any modules as long as the
    complex is exact.  Solutions are canonical, so the lift is deterministic.
    """
    p = f.source.p
    n = f.source.group.order
    comps = {}
    prev = None
    for j in range(up_to + 1):
        s_term, t_term = src.term(j), tgt.term(j)
        gens = generator_columns(src.rank(j), n)
        if j == 0:
            rhs = (f.matrix @ src.augmentation_matrix()[:, gens]) % p
            surj = tgt.augmentation_matrix()
        else:
            rhs = (prev @ src.differential_matrix(j)[:, gens]) % p
            surj = tgt.differential_matrix(j)
        x, ok = la.solve_many(surj, rhs, p)
        if not ok.all():
            raise CertificateError(f"chain map lift failed in degree {j}: target complex not exact")
        comps[j] = free_map(s_term, t_term, x)
        prev = comps[j]
    return ChainMap(src, tgt, 0, comps)


class TensorResolution:
    """``(A (x) C)_n = sum_i A_i (x) C_{n-i}`` with the sign ``(-1)^i`` on ``id (x) c``."""

    def __init__(self, a: FreeResolution, c: FreeResolution):
        if a.module.group.key != c.module.group.key or a.module.p != c.module.p:
            raise InputError("resolutions live over different group algebras")
        self.a, self.c = a, c
        self.module = tensor_module(a.module, c.module)
        self._terms: dict = {}
        self._diffs: dict = {}

    def blocks(self, n: int) -> list[tuple[int, int, int]]:
        """``(i, offset, size)`` for the summands ``A_i (x) C_{n-i}``."""
        out, off = [], 0
        for i in range(n + 1):
            size = self.a.term(i).dim * self.c.term(n - i).dim
            out.append((i, off, size))
            off += size
        return out

    def term(self, n: int) -> Module:
        if n not in self._terms:
            parts = [tensor_module(self.a.term(i), self.c.term(n - i)) for i in range(n + 1)]
            self._terms[n] = direct_sum(*parts)
        return self._terms[n]

    def differential_matrix(self, n1: int) -> np.ndarray:
        """``D_{n+1}: T_{n+1} -> T_n`` with ``n1 = n + 1``."""
        if n1 in self._diffs:
            return self._diffs[n1]
        p = self.module.p
        n = n1 - 1
        src_blocks = self.blocks(n1)
        tgt_blocks = {i: (off, size) for i, off, size in self.blocks(n)}
        D = np.zeros((self.term(n).dim, self.term(n1).dim), dtype=np.int64)
        for k, soff, ssize in src_blocks:
            ak, ck = self.a.term(k), self.c.term(n1 - k)
            if k >= 1:
                toff, tsize = tgt_blocks[k - 1]
                blk = np.kron(self.a.differential_matrix(k), np.eye(ck.dim, dtype=np.int64))
                D[toff:toff + tsize, soff:soff + ssize] += blk
            if n1 - k >= 1:
                toff, tsize = tgt_blocks[k]
                sign = -1 if k % 2 else 1
                blk = np.kron(np.eye(ak.dim, dtype=np.int64), self.c.differential_matrix(n1 - k))
                D[toff:toff + tsize, soff:soff + ssize] += sign * blk
        D %= p
        self._diffs[n1] = D
        return D

    def augmentation_matrix(self) -> np.ndarray:
        return la.kronecker(self.a.augmentation_matrix(), self.c.augmentation_matrix(), self.module.p)

    def rank(self, n: int) -> int:
        return self.term(n).dim // self.module.group.order

    def check_exact(self, up_to: int) -> None:
        p = self.module.p
        prev = self.augmentation_matrix()
        if la.rank(prev, p) != self.module.dim:
            raise CertificateError("tensor augmentation is not surjective")
        for j in range(1, up_to + 1):
            d = self.differential_matrix(j)
            if (prev @ d % p).any():
                raise CertificateError(f"D_{j - 1} D_{j} != 0")
            if la.rank(prev, p) + la.rank(d, p) != self.term(j - 1).dim:
                raise CertificateError(f"tensor complex not exact at degree {j - 1}")
            prev = d


def tensor_resolutions(a: FreeResolution, c: FreeResolution, up_to: int | None = None) -> TensorResolution:
    t = TensorResolution(a, c)
    if up_to is not None:
        for n in range(1, up_to + 1):
            t.differential_matrix(n)
    return t


def diagonal_approximation(rres: FreeResolution, up_to: int) -> ChainMap:
    """Chain map ``R -> R (x) R`` lifting ``k = k (x) k``."""
    m = rres.module
    if m.dim != 1 or (m.action != 1).any():
        raise InputError("diagonal approximation needs a resolution of the trivial module")
    t = tensor_resolutions(rres, rres)
    ident = ModuleMap(m, t.module, np.eye(1, dtype=np.int64), check=False)
    return lift_chain_map(ident, rres, t, up_to)


@dataclass
class CompleteResolution:
    module: Module
    window: int
    terms: dict  # degree -> free Module
    ranks: dict
    differentials: dict  # degree j -> matrix Abar_j -> Abar_{j-1}

    def term(self, j: int) -> Module:
        return self.terms[j]

    def differential_matrix(self, j: int) -> np.ndarray:
        return self.differentials[j]

    def cochain_differential(self, x: Module, n: int) -> np.ndarray:
        """``Hom(Abar_n, X) -> Hom(Abar_{n+1}, X)`` in the ``X^rank`` layout."""
        return hom_precompose(self.differentials[n + 1], self.terms[n + 1], self.terms[n], x)

    def cohomology_dim(self, x: Module, n: int) -> int:
        """``dim H^n(Hom(Abar, X))`` for ``-window < n < window``."""
        p = self.module.p
        out = la.rank(self.cochain_differential(x, n), p)
        inc = la.rank(self.cochain_differential(x, n - 1), p)
        return self.ranks[n] * x.dim - out - inc

    def check_acyclic(self) -> None:
        p = self.module.p
        W = self.window
        for j in range(-W + 1, W):
            din, dout = self.differentials[j + 1], self.differentials[j]
            if (dout @ din % p).any():
                raise CertificateError(f"complete resolution: d d != 0 at degree {j}")
            if la.rank(din, p) + la.rank(dout, p) != self.terms[j].dim:
                raise CertificateError(f"complete resolution not acyclic at degree {j}")


def complete_resolution(a: Module, window: int) -> CompleteResolution:
    """Complete resolution on degrees ``[-window, window]``; checks acyclicity and Hom-into-regular acyclicity."""
    if window < 1:
        raise InputError("window must be positive")
    p, G = a.p, a.group
    pos = resolution(a).extend(window)
    neg = resolution(dual_module(a)).extend(window)
    terms, ranks, diffs = {}, {}, {}
    for j in range(window + 1):
        terms[j], ranks[j] = pos.term(j), pos.rank(j)
    for i in range(window):
        terms[-1 - i], ranks[-1 - i] = free_module(G, p, neg.rank(i)), neg.rank(i)
    for j in range(1, window + 1):
        diffs[j] = pos.differential_matrix(j)
    diffs[0] = (neg.augmentation_matrix().T @ pos.augmentation_matrix()) % p
    for j in range(-1, -window, -1):
        diffs[j] = neg.differential_matrix(-j).T % p
    cres = CompleteResolution(a, window, terms, ranks, diffs)
    cres.check_acyclic()
    reg = free_module(G, p, 1)
    if any(cres.cohomology_dim(reg, n) for n in range(-window + 1, window)):
        raise CertificateError("Hom(complete resolution, regular) is not acyclic")
    return cres


def hom_precompose(phi: np.ndarray, src: Module, tgt: Module, x: Module) -> np.ndarray:
    """Matrix of ``Hom(tgt, X) -> Hom(src, X)``, ``psi -> psi o phi``, for free ``src``, ``tgt``.

    Uses the ``X^rank`` layout on both sides; shape ``(r_src dX, r_tgt dX)``.
    """
    n = src.group.order
    rs, rt, dx = src.dim // n, tgt.dim // n, x.dim
    if rs == 0 or rt == 0 or dx == 0:
        return np.zeros((rs * dx, rt * dx), dtype=np.int64)
    coeff = phi[:, generator_columns(rs, n)].reshape(rt, n, rs)  # [i, g, l]
    out = np.einsum("igl,gab->laib", coeff, x.action, optimize=True)
    return out.reshape(rs * dx, rt * dx) % x.p


def hom_postcompose(f: np.ndarray, rank: int) -> np.ndarray:
    """``Hom(F^rank, X) -> Hom(F^rank, Y)`` for ``f: X -> Y``: block diagonal."""
    return np.kron(np.eye(rank, dtype=np.int64), f)


def dump_resolution(res: FreeResolution, length: int) -> str:
    """JSON with per-degree ranks and differential matrices (golden-file format)."""
    res.extend(length)
    data = {
        "group": res.module.group.name,
        "prime": res.module.p,
        "module_dim": res.module.dim,
        "minimal": res.minimal,
        "ranks": res.ranks(length),
        "augmentation": res.augmentation_matrix().tolist(),
        "differentials": {str(j): res.differential_matrix(j).tolist() for j in range(1, length + 1)},
    }
    return json.dumps(data, sort_keys=True)
