"""Finite groups, modular group algebras and their finite-dimensional modules.

A :class:`Module` stores the action of *every* group element.  Permutation
modules (free modules, their tensor products, ...) keep index permutations
instead of dense matrices so that large free terms stay cheap.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property, lru_cache
from math import log

import numpy as np

from . import linalg as la
from .errors import InputError

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "Module",
    "ModuleMap",
    "group_from_table",
    "group_from_permutations",
    "trivial_module",
    "regular_module",
    "free_module",
    "zero_module",
    "hom_basis",
    "tensor_module",
    "dual_module",
    "direct_sum",
    "restrict",
    "induce",
    "coinduce",
    "submodule_hull",
    "submodule",
    "quotient_module",
    "radical_basis",
    "module_radical",
    "is_projective",
    "swap_map",
    "max_dim",
]


def max_dim() -> int:
    import os

    return int(os.environ.get("TATEKIT_MAX_DIM", "4096"))


class FiniteGroup:
    """Group given by its multiplication table; element 0 is the identity."""

    def __init__(self, name: str, mult_table, generators=None, check: bool = True):
        self.name = name
        self.mult = np.asarray(mult_table, dtype=np.int64)
        n = self.mult.shape[0]
        if self.mult.shape != (n, n) or n == 0:
            raise InputError(f"{name}: multiplication table must be a non-empty square table")
        self.order = n
        if check:
            self._validate()
        self.inverse = np.empty(n, dtype=np.int64)
        for g in range(n):
            self.inverse[g] = int(np.flatnonzero(self.mult[g] == 0)[0])
        if generators is None:
            generators = _small_generating_set(self.mult)
        self.generators = [int(g) for g in generators]
        if check:
            reached = _closure(self.mult, self.generators)
            if len(reached) != n:
                missing = min(set(range(n)) - reached)
                raise InputError(f"{name}: generators {self.generators} do not generate (element {missing} unreached)")

    def _validate(self):
        m, n = self.mult, self.order
        if m.min() < 0 or m.max() >= n:
            raise InputError(f"{self.name}: table entries must lie in 0..{n - 1}")
        ar = np.arange(n)
        if not (np.array_equal(m[0], ar) and np.array_equal(m[:, 0], ar)):
            bad = int(np.flatnonzero((m[0] != ar) | (m[:, 0] != ar))[0])
            raise InputError(f"{self.name}: element 0 is not an identity (fails at element {bad})")
        for g in range(n):
            if len(set(m[g].tolist())) != n or len(set(m[:, g].tolist())) != n:
                raise InputError(f"{self.name}: element {g} has no inverse (row/column is not a permutation)")
        lhs = m[m[:, :, None], ar[None, None, :]]  # (ab)c
        rhs = m[ar[:, None, None], m[None, :, :]]  # a(bc)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b, c = (int(x) for x in bad[0])
            raise InputError(f"{self.name}: not associative at (a,b,c)=({a},{b},{c})")

    @cached_property
    def key(self):
        return (self.name, self.order, self.mult.tobytes())

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mult[x, g])
            k += 1
        return k

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def left_perm(self, g: int) -> np.ndarray:
        """Permutation ``h -> g h`` of element indices."""
        return self.mult[g]

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


def _closure(mult, gens) -> set[int]:
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(mult[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _small_generating_set(mult) -> list[int]:
    n = mult.shape[0]
    gens: list[int] = []
    span = {0}
    for g in range(n):
        if g not in span:
            gens.append(g)
            span = _closure(mult, gens)
        if len(span) == n:
            break
    return gens


def group_from_table(name: str, mult_table, generators=None) -> FiniteGroup:
    return FiniteGroup(name, mult_table, generators)


def group_from_permutations(name: str, perm_generators) -> FiniteGroup:
    """Expand a permutation group by breadth-first closure of its Cayley graph.

    Composition is ``(a*b)(x) = a(b(x))``; elements are numbered in BFS order
    starting from the identity.
    """
    gens = [tuple(int(x) for x in g) for g in perm_generators]
    if not gens:
        raise InputError(f"{name}: need at least one permutation generator")
    deg = len(gens[0])
    for g in gens:
        if len(g) != deg or sorted(g) != list(range(deg)):
            raise InputError(f"{name}: {list(g)} is not a permutation of 0..{deg - 1}")
    ident = tuple(range(deg))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(x[s[i]] for i in range(deg))
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    n = len(elems)
    mult = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mult[i, j] = index[tuple(a[b[x]] for x in range(deg))]
    group = FiniteGroup(name, mult, [index[g] for g in gens])
    group.permutations = elems
    return group


class Subgroup:
    def __init__(self, parent: FiniteGroup, elements, name: str | None = None):
        self.parent = parent
        self.elements = sorted({int(e) for e in elements})
        els = set(self.elements)
        if 0 not in els:
            raise InputError("subgroup must contain the identity")
        for a in self.elements:
            if int(parent.inverse[a]) not in els:
                raise InputError(f"subgroup not closed under inverses at {a}")
            for b in self.elements:
                if int(parent.mult[a, b]) not in els:
                    raise InputError(f"subgroup not closed under multiplication at ({a},{b})")
        self.position = {e: i for i, e in enumerate(self.elements)}
        reps, covered = [], set()
        for g in range(parent.order):
            if g not in covered:
                reps.append(g)
                covered.update(int(parent.mult[g, h]) for h in self.elements)
        self.coset_reps = reps
        assert len(reps) * len(self.elements) == parent.order
        sub = parent.mult[np.ix_(self.elements, self.elements)]
        relabel = np.vectorize(self.position.__getitem__)
        self.group = FiniteGroup(name or f"{parent.name}>{len(self.elements)}", relabel(sub))

    @classmethod
    def generated_by(cls, parent: FiniteGroup, gens, name=None) -> "Subgroup":
        return cls(parent, _closure(parent.mult, [int(g) for g in gens]), name)

    @property
    def index(self) -> int:
        return len(self.coset_reps)

    def __repr__(self):
        return f"Subgroup({self.group.name!r} <= {self.parent.name!r}, index {self.index})"


def _perm_matrix(perm: np.ndarray) -> np.ndarray:
    d = perm.shape[0]
    m = np.zeros((d, d), dtype=np.int64)
    m[perm, np.arange(d)] = 1
    return m


def _as_perms(action: np.ndarray) -> np.ndarray | None:
    """Detect permutation matrices; return ``perms`` with ``rho(g) e_b = e_perm[b]``."""
    if action.size == 0 or action.max() > 1:
        return None
    if not (action.sum(axis=1) == 1).all() or not (action.sum(axis=2) == 1).all():
        return None
    return np.argmax(action, axis=1)


class Module:
    """Finite-dimensional ``F_p G``-module.

    Exactly one of ``action`` (shape ``(|G|, d, d)``) or ``perms`` (shape
    ``(|G|, d)``) is stored.  Equality is by content (:attr:`key`); module
    objects are used as cache keys throughout the package.
    """

    def __init__(self, group: FiniteGroup, p: int, action=None, perms=None, dim=None,
                 check: bool = True, name: str = ""):
        self.group = group
        self.p = int(p)
        self.name = name
        if perms is None and action is None:
            if dim is None:
                raise InputError("need an action or a dimension")
            action = np.zeros((group.order, dim, dim), dtype=np.int64)
            action[:] = np.eye(dim, dtype=np.int64)
        if action is not None:
            action = np.asarray(action, dtype=np.int64) % self.p
            if action.ndim != 3 or action.shape[0] != group.order or action.shape[1] != action.shape[2]:
                raise InputError(f"action must have shape (|G|, d, d), got {action.shape}")
            detected = _as_perms(action)
            if detected is not None:
                perms, action = detected, None
        if perms is not None:
            self._perms = np.asarray(perms, dtype=np.int64)
            self._action = None
            self.dim = self._perms.shape[1]
        else:
            self._perms = None
            self._action = action
            self.dim = action.shape[1]
        if self.dim > max_dim():
            raise InputError(f"module dimension {self.dim} exceeds TATEKIT_MAX_DIM={max_dim()}")
        if check:
            self.validate()

    @property
    def is_permutation(self) -> bool:
        return self._perms is not None

    @property
    def perms(self):
        return self._perms

    @cached_property
    def action(self) -> np.ndarray:
        if self._action is not None:
            return self._action
        return np.stack([_perm_matrix(pm) for pm in self._perms]) if self.dim else \
            np.zeros((self.group.order, 0, 0), dtype=np.int64)

    def rho(self, g: int) -> np.ndarray:
        return self.action[g]

    def apply(self, g: int, x: np.ndarray) -> np.ndarray:
        """``rho(g) @ x`` (``x`` a vector or a matrix with ``dim`` rows)."""
        if self._perms is not None:
            out = np.empty_like(x)
            out[self._perms[g]] = x
            return out
        return (self._action[g] @ x) % self.p

    def element_action(self, x: np.ndarray) -> np.ndarray:
        """Matrix of a group-algebra element ``sum_g x_g g``."""
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for g in np.flatnonzero(x):
            out += int(x[g]) * self.action[g]
        return out % self.p

    @cached_property
    def key(self):
        body = self._perms.tobytes() if self._perms is not None else self._action.tobytes()
        return (self.group.key, self.p, self.dim, self._perms is not None, body)

    def __eq__(self, other):
        return isinstance(other, Module) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def validate(self):
        G, p = self.group, self.p
        if self._perms is not None:
            ps = self._perms
            if not np.array_equal(ps[0], np.arange(self.dim)):
                raise InputError("identity does not act trivially")
            for g in range(G.order):
                for h in range(G.order):
                    if not np.array_equal(ps[g][ps[h]], ps[int(G.mult[g, h])]):
                        raise InputError(f"action is not a homomorphism at ({g},{h})")
            return
        a = self._action
        if not np.array_equal(a[0], np.eye(self.dim, dtype=np.int64)):
            raise InputError("identity does not act as the identity matrix")
        for g in range(G.order):
            prods = np.einsum("ij,hjk->hik", a[g], a) % p
            bad = np.flatnonzero(np.any(prods != a[G.mult[g]], axis=(1, 2)))
            if bad.size:
                raise InputError(f"action is not a homomorphism at ({g},{int(bad[0])})")

    @classmethod
    def from_generators(cls, group: FiniteGroup, p: int, gen_actions: dict, name: str = "") -> "Module":
        """Build the full action from generator matrices by Cayley-graph BFS."""
        if not gen_actions:
            raise InputError("no generator actions given")
        mats = {int(g): la.as_matrix(m, p) for g, m in gen_actions.items()}
        d = next(iter(mats.values())).shape[0]
        for g, m in mats.items():
            if m.shape != (d, d):
                raise InputError(f"generator {g}: action must be {d}x{d}")
            if not 0 <= g < group.order:
                raise InputError(f"generator index {g} out of range")
        action = np.zeros((group.order, d, d), dtype=np.int64)
        seen = np.zeros(group.order, dtype=bool)
        action[0] = np.eye(d, dtype=np.int64)
        seen[0] = True
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s, m in mats.items():
                y = int(group.mult[x, s])
                if not seen[y]:
                    action[y] = (action[x] @ m) % p
                    seen[y] = True
                    queue.append(y)
        if not seen.all():
            raise InputError("given generators do not generate the group")
        return cls(group, p, action, name=name)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Module{label} over F_{self.p}[{self.group.name}] dim {self.dim}>"


class ModuleMap:
    """Equivariant linear map; ``matrix`` has shape ``(target.dim, source.dim)``."""

    def __init__(self, source: Module, target: Module, matrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim) % source.p
        if check:
            self.check()

    def check(self):
        if self.source.group.key != self.target.group.key or self.source.p != self.target.p:
            raise InputError("source and target live over different group algebras")
        m = self.matrix
        for g in self.source.group.generators:
            lhs = self.target.apply(g, m)
            rhs = m @ self.source.action[g]
            if not np.array_equal(lhs % self.source.p, rhs % self.source.p):
                raise InputError(f"map is not equivariant for generator {g}")

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, (self.matrix @ other.matrix) % self.source.p, check=False)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def __repr__(self):
        return f"ModuleMap({self.source.dim} -> {self.target.dim})"


def _same_algebra(a: Module, b: Module):
    if a.group.key != b.group.key or a.p != b.p:
        raise InputError("modules live over different group algebras")


def trivial_module(group: FiniteGroup, p: int) -> Module:
    return Module(group, p, dim=1, name="trivial")


def zero_module(group: FiniteGroup, p: int) -> Module:
    return Module(group, p, perms=np.zeros((group.order, 0), dtype=np.int64), name="zero", check=False)


def free_module(group: FiniteGroup, p: int, rank: int) -> Module:
    """``F_p G^rank``; basis ``e_{i,g}`` has index ``i*|G| + g``, ``h e_{i,g} = e_{i,hg}``."""
    n = group.order
    perms = (np.arange(rank)[None, :, None] * n + group.mult[:, None, :]).reshape(n, rank * n)
    return Module(group, p, perms=perms, check=False, name=f"free{rank}")


def regular_module(group: FiniteGroup, p: int) -> Module:
    m = free_module(group, p, 1)
    m.name = "regular"
    return m


def hom_basis(a: Module, b: Module) -> list[ModuleMap]:
    """Basis of ``Hom_G(a, b)`` from the equivariance equations on generators.

    Maps are flattened row-major and the basis is returned in RREF order.
    """
    _same_algebra(a, b)
    p, da, db = a.p, a.dim, b.dim
    if da == 0 or db == 0:
        return []
    blocks = []
    eye_a, eye_b = np.eye(da, dtype=np.int64), np.eye(db, dtype=np.int64)
    for g in a.group.generators:
        # vec(f A) - vec(B f) for row-major vec
        blocks.append((np.kron(eye_b, a.rho(g).T) - np.kron(b.rho(g), eye_a)) % p)
    system = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, da * db), dtype=np.int64)
    ker = la.kernel_basis(system, p)
    return [ModuleMap(a, b, row.reshape(db, da), check=False) for row in ker]


@lru_cache(maxsize=4096)
def tensor_module(a: Module, b: Module) -> Module:
    """Diagonal action ``g(u (x) v) = gu (x) gv``."""
    _same_algebra(a, b)
    if a.is_permutation and b.is_permutation:
        perms = a.perms[:, :, None] * b.dim + b.perms[:, None, :]
        return Module(a.group, a.p, perms=perms.reshape(a.group.order, -1), check=False)
    action = np.einsum("gij,gkl->gikjl", a.action, b.action).reshape(a.group.order, a.dim * b.dim, a.dim * b.dim)
    return Module(a.group, a.p, action % a.p, check=False)


def dual_module(a: Module) -> Module:
    """Contragredient module: ``rho*(g) = rho(g^-1)^T``."""
    if a.is_permutation:
        return Module(a.group, a.p, perms=a.perms.copy(), check=False, name=f"{a.name}*" if a.name else "")
    action = np.transpose(a.action[a.group.inverse], (0, 2, 1))
    return Module(a.group, a.p, action, check=False, name=f"{a.name}*" if a.name else "")


def direct_sum(*mods: Module) -> Module:
    first = mods[0]
    for m in mods[1:]:
        _same_algebra(first, m)
    if all(m.is_permutation for m in mods):
        parts, off = [], 0
        for m in mods:
            parts.append(m.perms + off)
            off += m.dim
        return Module(first.group, first.p, perms=np.concatenate(parts, axis=1), check=False)
    d = sum(m.dim for m in mods)
    action = np.zeros((first.group.order, d, d), dtype=np.int64)
    off = 0
    for m in mods:
        action[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    return Module(first.group, first.p, action, check=False)


def restrict(h: Subgroup, m: Module) -> Module:
    if m.group.key != h.parent.key:
        raise InputError("module does not live over the subgroup's parent group")
    idx = h.elements
    if m.is_permutation:
        return Module(h.group, m.p, perms=m.perms[idx], check=False)
    return Module(h.group, m.p, m.action[idx], check=False)


def induce(h: Subgroup, m: Module) -> Module:
    """``Ind_H^G m``: block ``(j, i)`` of ``rho(g)`` is ``rho_m(h)`` where ``g r_i = r_j h``."""
    if m.group.key != h.group.key:
        raise InputError("module does not live over the subgroup")
    G, reps, d = h.parent, h.coset_reps, m.dim
    k = len(reps)
    rep_of = {}
    for j, r in enumerate(reps):
        for x in h.elements:
            rep_of[int(G.mult[r, x])] = (j, h.position[x])
    action = np.zeros((G.order, k * d, k * d), dtype=np.int64)
    for g in range(G.order):
        for i, r in enumerate(reps):
            j, hh = rep_of[int(G.mult[g, r])]
            action[g, j * d:(j + 1) * d, i * d:(i + 1) * d] = m.action[hh]
    return Module(G, m.p, action, check=False)


def coinduce(h: Subgroup, m: Module) -> Module:
    """``Coind_H^G m`` realised as ``(Ind_H^G m*)*``."""
    return dual_module(induce(h, dual_module(m)))


def submodule_hull(m: Module, vectors) -> np.ndarray:
    """RREF basis (rows) of the smallest submodule containing ``vectors``."""
    p = m.p
    vecs = np.asarray(vectors, dtype=np.int64).reshape(-1, m.dim) % p
    basis = la.span_basis(vecs, p)
    while True:
        images = [m.apply(g, basis.T).T for g in m.group.generators]
        new = la.span_basis(np.concatenate([basis] + images, axis=0), p)
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


def submodule(m: Module, basis: np.ndarray) -> tuple[Module, ModuleMap]:
    """Submodule spanned by RREF rows ``basis`` (assumed invariant) with its inclusion."""
    p = m.p
    b = np.asarray(basis, dtype=np.int64)
    if b.shape[0] == 0:
        z = zero_module(m.group, p)
        return z, ModuleMap(z, m, np.zeros((m.dim, 0), dtype=np.int64), check=False)
    b, pivots, rk = la.row_reduce(b, p)
    b = b[:rk]
    action = np.stack([m.apply(g, b.T)[pivots] for g in range(m.group.order)])
    sub = Module(m.group, p, action % p, check=False)
    return sub, ModuleMap(sub, m, b.T, check=False)


def quotient_module(m: Module, basis: np.ndarray) -> tuple[Module, ModuleMap]:
    """Quotient by the invariant subspace with row basis ``basis``, with the projection."""
    p = m.p
    coset, project = la.quotient_space(m.dim, basis, p)
    lift = coset.T
    action = np.stack([(project @ m.apply(g, lift)) % p for g in range(m.group.order)])
    q = Module(m.group, p, action, check=False)
    return q, ModuleMap(m, q, project, check=False)


def _ciw_radical(group: FiniteGroup, p: int) -> np.ndarray:
    """Radical of ``F_p G`` by iterated trace-form kernels on the regular representation.

    ``I_{-1} = A``; ``I_i`` keeps the ``x`` in ``I_{i-1}`` with ``g_i(xy) = 0``
    for all ``y``, where ``g_i(z) = (Tr(Z^{p^i}) mod p^{i+1}) / p^i`` for an
    integer lift ``Z`` of the left multiplication matrix.  ``I_l`` with
    ``l = floor(log_p |G|)`` is the radical.
    """
    n = group.order
    mult = group.mult
    basis = np.eye(n, dtype=np.int64)
    levels = int(log(n) / log(p) + 1e-9)
    for i in range(levels + 1):
        mod = p ** (i + 1)
        power = p ** i
        func = np.zeros((basis.shape[0], n), dtype=np.int64)
        for a, x in enumerate(basis):
            for y in range(n):
                z = np.zeros(n, dtype=np.int64)
                for g in np.flatnonzero(x):
                    z[mult[g, y]] += x[g]
                z %= p
                lmat = np.zeros((n, n), dtype=np.int64)
                for k in np.flatnonzero(z):
                    lmat[mult[k], np.arange(n)] += z[k]
                acc = np.eye(n, dtype=np.int64)
                base, e = lmat % mod, power
                while e:
                    if e & 1:
                        acc = (acc @ base) % mod
                    base = (base @ base) % mod
                    e >>= 1
                t = int(np.trace(acc)) % mod
                func[a, y] = (t // power) % p
        coeffs = la.kernel_basis(func.T, p)
        if coeffs.shape[0] == 0:
            return np.zeros((0, n), dtype=np.int64)
        basis = la.span_basis((coeffs @ basis) % p, p)
    return basis


@lru_cache(maxsize=None)
def _radical_cached(gkey, p: int, group_ref) -> np.ndarray:
    group = group_ref
    n = group.order
    if n % p:
        return np.zeros((0, n), dtype=np.int64)
    if group.is_p_group(p):
        basis = np.zeros((n - 1, n), dtype=np.int64)
        basis[:, 0] = p - 1
        basis[np.arange(n - 1), np.arange(1, n)] = 1
        return la.span_basis(basis, p)
    return _ciw_radical(group, p)


def radical_basis(group: FiniteGroup, p: int) -> np.ndarray:
    """Jacobson radical of ``F_p G`` as rows of group-algebra coordinates."""
    return _radical_cached(group.key, p, group)


def module_radical(m: Module) -> np.ndarray:
    """RREF basis of ``J(F_p G) m``."""
    j = radical_basis(m.group, m.p)
    if j.shape[0] == 0 or m.dim == 0:
        return np.zeros((0, m.dim), dtype=np.int64)
    cols = [m.element_action(x) for x in j]
    return la.span_basis(np.concatenate(cols, axis=1).T, m.p)


def is_projective(m: Module) -> bool:
    """``m`` is projective iff its identity factors through the free cover."""
    from .stable import lifting_test

    if m.dim == 0:
        return True
    ident = ModuleMap(m, m, np.eye(m.dim, dtype=np.int64), check=False)
    return lifting_test(ident) is not None


def swap_map(a: Module, b: Module) -> ModuleMap:
    """``a (x) b -> b (x) a``, ``u (x) v -> v (x) u``."""
    da, db = a.dim, b.dim
    m = np.zeros((da * db, da * db), dtype=np.int64)
    for i in range(da):
        for j in range(db):
            m[j * da + i, i * db + j] = 1
    return ModuleMap(tensor_module(a, b), tensor_module(b, a), m, check=False)
