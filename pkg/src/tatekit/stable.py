"""Stable Hom groups: module maps modulo those factoring through a projective.

A map ``f: a -> x`` is stored by its values on the generators of the fixed
free cover ``F_0 -> a`` (``generator coordinates``, layout ``x^{r_0}``).  Such
tuples are exactly the kernel of precomposition with the first differential of
``a``'s resolution, which keeps every linear system proportional to
``dim x`` instead of ``dim a * dim x``.

The factoring subspace is the image of ``Hom(a, F_x) -> Hom(a, x)`` under the
free cover ``F_x -> x``: a map factors through some projective exactly when it
lifts along that cover.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import CertificateError, InputError
from .modrep import Module, ModuleMap
from .resolution import FreeResolution, free_map, hom_precompose, resolution

__all__ = [
    "HomSpace",
    "hom_space",
    "factoring_subspace",
    "StableHom",
    "StableClass",
    "stable_hom",
    "lifting_test",
    "omega_map",
    "syzygy_map",
    "transition",
]


def _check_pair(a: Module, b: Module) -> None:
    if a.group.key != b.group.key or a.p != b.p:
        raise InputError("modules live over different group algebras")


class HomSpace:
    """``Hom_G(a, x)`` in generator coordinates, with an RREF basis."""

    def __init__(self, a: Module, x: Module):
        _check_pair(a, x)
        self.source, self.target = a, x
        p = a.p
        self.resolution = resolution(a)
        cov0 = self.resolution.cover(0)
        self.cover = cov0
        self.rank = cov0.rank
        self.ambient = cov0.rank * x.dim
        if self.ambient == 0:
            self.basis = np.zeros((0, 0), dtype=np.int64)
        else:
            cov1 = self.resolution.cover(1)
            if cov1.rank == 0:
                self.basis = np.eye(self.ambient, dtype=np.int64)
            else:
                delta = hom_precompose(self.resolution.differential_matrix(1), cov1.term, cov0.term, x)
                self.basis = la.kernel_basis(delta, p)
        self.dim = self.basis.shape[0]

    def images(self, vec: np.ndarray) -> np.ndarray:
        """Generator images (``dim x`` by ``r_0``) of a coordinate vector."""
        return np.asarray(vec, dtype=np.int64).reshape(self.rank, self.target.dim).T

    def vector(self, images: np.ndarray) -> np.ndarray:
        return np.asarray(images, dtype=np.int64).T.reshape(-1) % self.source.p

    def matrix(self, vec: np.ndarray) -> np.ndarray:
        """Full matrix ``dim x`` by ``dim a`` of the map with these generator images."""
        full = free_map(self.cover.term, self.target, self.images(vec))
        return (full @ self.cover.section) % self.source.p

    def coordinates_of(self, f: np.ndarray) -> np.ndarray:
        """Generator coordinates of a map given as a full matrix."""
        return self.vector(np.asarray(f, dtype=np.int64) @ self.cover.gens)

    def maps(self) -> list[ModuleMap]:
        return [ModuleMap(self.source, self.target, self.matrix(v), check=False) for v in self.basis]


_CACHE: dict = {}
_CACHE_LOCK = threading.RLock()


def _cached(kind, a: Module, b: Module, build):
    key = (kind, a.key, b.key)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    value = build()
    with _CACHE_LOCK:
        return _CACHE.setdefault(key, value)


def hom_space(a: Module, x: Module) -> HomSpace:
    return _cached("hom", a, x, lambda: HomSpace(a, x))


def factoring_subspace(a: Module, b: Module) -> np.ndarray:
    """Spanning rows (generator coordinates) of the maps ``a -> b`` factoring through a projective."""
    _check_pair(a, b)
    cov_b = resolution(b).cover(0)
    hom = hom_space(a, b)
    if hom.ambient == 0 or cov_b.rank == 0:
        return np.zeros((0, hom.ambient), dtype=np.int64)
    through = hom_space(a, cov_b.term)
    r0 = hom.rank
    lifted = through.basis.reshape(-1, r0, cov_b.term.dim)
    pushed = np.einsum("krf,bf->krb", lifted, cov_b.pi, optimize=True) % a.p
    return la.span_basis(pushed.reshape(-1, hom.ambient), a.p)


class StableHom:
    """``[a, b] = Hom(a, b) / maps factoring through projectives`` with canonical coordinates."""

    def __init__(self, a: Module, b: Module):
        self.source, self.target = a, b
        self.hom = hom_space(a, b)
        self.factoring = factoring_subspace(a, b)
        self.quotient = la.Subquotient(self.hom.ambient, self.hom.basis, self.factoring, a.p)
        self.dim = self.quotient.dim

    @property
    def hom_dim(self) -> int:
        return self.hom.dim

    @property
    def factoring_dim(self) -> int:
        return self.quotient.denominator_dim

    def coords_of_vectors(self, vecs: np.ndarray) -> np.ndarray:
        return self.quotient.coords(vecs)

    def coords_of_matrices(self, mats) -> np.ndarray:
        """Class coordinates of maps given as full matrices (one row per map)."""
        mats = list(mats)
        if not mats:
            return np.zeros((0, self.dim), dtype=np.int64)
        gens = self.hom.cover.gens
        vecs = np.stack([self.hom.vector(np.asarray(m, dtype=np.int64) @ gens) for m in mats])
        return self.coords_of_vectors(vecs)

    def class_of(self, f) -> "StableClass":
        mat = f.matrix if isinstance(f, ModuleMap) else f
        return StableClass(self, self.coords_of_matrices([mat])[0])

    def representative_vector(self, coords) -> np.ndarray:
        return self.quotient.lift(coords)[0]

    def representative(self, coords) -> np.ndarray:
        return self.hom.matrix(self.representative_vector(coords))

    def basis_representatives(self) -> list[np.ndarray]:
        eye = np.eye(self.dim, dtype=np.int64)
        return [self.representative(row) for row in eye]

    def basis_classes(self) -> list["StableClass"]:
        return [StableClass(self, row) for row in np.eye(self.dim, dtype=np.int64)]

    def zero(self) -> "StableClass":
        return StableClass(self, np.zeros(self.dim, dtype=np.int64))

    def __repr__(self):
        return f"StableHom(dim {self.dim}; hom {self.hom_dim}, factoring {self.factoring_dim})"


def stable_hom(a: Module, b: Module) -> StableHom:
    return _cached("stable", a, b, lambda: StableHom(a, b))


@dataclass(frozen=True)
class StableClass:
    parent: StableHom
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=np.int64) % self.parent.source.p)

    @property
    def representative(self) -> np.ndarray:
        return self.parent.representative(self.coords)

    def is_zero(self) -> bool:
        return not self.coords.any()

    def _same(self, other: "StableClass") -> None:
        if (self.parent.source.key, self.parent.target.key) != (other.parent.source.key, other.parent.target.key):
            raise InputError("classes live in different stable Hom groups")

    def __add__(self, other: "StableClass") -> "StableClass":
        self._same(other)
        return StableClass(self.parent, self.coords + other.coords)

    def scale(self, c: int) -> "StableClass":
        return StableClass(self.parent, self.coords * c)

    def __eq__(self, other):
        if not isinstance(other, StableClass):
            return NotImplemented
        return (self.parent.source.key == other.parent.source.key
                and self.parent.target.key == other.parent.target.key
                and np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((self.parent.source.key, self.parent.target.key, self.coords.tobytes()))


def lifting_test(f: ModuleMap) -> np.ndarray | None:
    """A map ``gamma: source -> F`` with ``pi gamma = f`` for the cover ``pi: F -> target``, or ``None``."""
    a, b = f.source, f.target
    p = a.p
    cov_b = resolution(b).cover(0)
    if a.dim == 0:
        return np.zeros((cov_b.term.dim, 0), dtype=np.int64)
    if cov_b.rank == 0:
        return np.zeros((0, a.dim), dtype=np.int64) if not f.matrix.any() else None
    through = hom_space(a, cov_b.term)
    hom = hom_space(a, b)
    if through.dim == 0:
        return np.zeros((cov_b.term.dim, a.dim), dtype=np.int64) if not f.matrix.any() else None
    r0 = hom.rank
    lifted = through.basis.reshape(-1, r0, cov_b.term.dim)
    pushed = (np.einsum("krf,bf->krb", lifted, cov_b.pi, optimize=True) % p).reshape(through.dim, -1)
    target = hom.coordinates_of(f.matrix)
    c = la.solve(pushed.T, target, p)
    if c is None:
        return None
    gamma = through.matrix((c @ through.basis) % p)
    if ((cov_b.pi @ gamma - f.matrix) % p).any():
        raise CertificateError("factorisation witness does not reproduce the map")
    return gamma


def omega_map(f: np.ndarray, src: FreeResolution, j: int, tgt: FreeResolution, k: int) -> np.ndarray:
    """From ``f: Omega^src_j -> Omega^tgt_k`` build ``Omega^src_{j+1} -> Omega^tgt_{k+1}``.

    Lift ``f pi^src_j`` along ``pi^tgt_k`` generator by generator (canonical
    solutions) and restrict the lift to the kernels.
    """
    p = src.module.p
    cs, ct = src.cover(j), tgt.cover(k)
    ns = src.cover(j + 1)  # forces Omega_{j+1} to exist
    del ns
    if cs.kernel.dim == 0:
        return np.zeros((ct.kernel.dim, 0), dtype=np.int64)
    images = (np.asarray(f, dtype=np.int64) @ cs.gens) % p
    x, ok = la.solve_many(ct.pi, images, p)
    if not ok.all():
        raise CertificateError("lift along a free cover failed")
    lift = free_map(cs.term, ct.term, x)
    restricted = (lift @ cs.iota) % p
    return ct.kernel_coords(restricted)


_SYZ_CACHE: dict = {}
_SYZ_LOCK = threading.RLock()


def syzygy_map(phi: np.ndarray, src: FreeResolution, tgt: FreeResolution, level: int,
               src_start: int = 0, tgt_start: int = 0) -> np.ndarray:
    """Iterate :func:`omega_map` ``level`` times starting from ``phi: Omega^src_{src_start} -> Omega^tgt_{tgt_start}``."""
    phi = np.asarray(phi, dtype=np.int64) % src.module.p
    key = (src.root.module.key, src._offset + src_start, tgt.root.module.key, tgt._offset + tgt_start,
           phi.shape, phi.tobytes())
    with _SYZ_LOCK:
        chain = _SYZ_CACHE.setdefault(key, [phi])
    while len(chain) <= level:
        i = len(chain) - 1
        nxt = omega_map(chain[i], src, src_start + i, tgt, tgt_start + i)
        with _SYZ_LOCK:
            if len(chain) == i + 1:
                chain.append(nxt)
    return chain[level]


def transition(cls: StableClass, res_a: FreeResolution, j: int, res_b: FreeResolution, k: int) -> StableClass:
    """Class of ``[Omega^a_j, Omega^b_k]`` to its image in ``[Omega^a_{j+1}, Omega^b_{k+1}]``."""
    if cls.parent.source.key != res_a.syzygy(j).key or cls.parent.target.key != res_b.syzygy(k).key:
        raise InputError("class does not live at the given syzygy levels")
    nxt = stable_hom(res_a.syzygy(j + 1), res_b.syzygy(k + 1))
    m = omega_map(cls.representative, res_a, j, res_b, k)
    return nxt.class_of(m)
