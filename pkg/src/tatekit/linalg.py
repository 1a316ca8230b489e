"""Exact dense linear algebra over prime fields.

Matrices are numpy ``int64`` arrays whose entries are residues in ``[0, p)``.
Every routine takes the modulus ``p`` explicitly; nothing here ever touches
floating point.

Tensor index convention (used everywhere in the package): the basis vector
``e_i (x) f_j`` of ``U (x) V`` has index ``i * dim(V) + j``, which is exactly
what :func:`numpy.kron` produces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = [
    "PrimeField",
    "as_matrix",
    "row_reduce",
    "rank",
    "kernel_basis",
    "solve",
    "solve_many",
    "image_coords",
    "quotient_space",
    "kronecker",
    "span_basis",
    "inverse",
    "matmul",
    "Subquotient",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise InputError(f"{self.p!r} is not a prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(int(a), self.p - 2, self.p)

    def __str__(self):
        return f"F_{self.p}"


def as_matrix(m, p: int, shape=None) -> np.ndarray:
    a = np.array(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim == 1 and shape is None:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def _rref_inplace(m: np.ndarray, p: int, ncols: int | None = None) -> list[int]:
    """Reduce ``m`` in place, pivoting only on the first ``ncols`` columns."""
    rows, cols = m.shape
    limit = cols if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        col = m[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        if inv != 1:
            m[r] = (m[r] * inv) % p
        targets = np.flatnonzero(m[:, c])
        targets = targets[targets != r]
        if targets.size:
            m[targets] = (m[targets] - np.outer(m[targets, c], m[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def row_reduce(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int], int]:
    """Return ``(rref, pivots, rank)``; the input is not modified."""
    a = np.array(m, dtype=np.int64) % p
    if a.size == 0:
        return a, [], 0
    pivots = _rref_inplace(a, p)
    return a, pivots, len(pivots)


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return row_reduce(m, p)[2]


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Right null space of ``m``; rows form a basis in RREF."""
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots, rk = row_reduce(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = (-r[i, f]) % p
    if basis.shape[0] > 1:
        basis, _, _ = row_reduce(basis, p)
    return basis


def solve_many(m: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``m @ X = B`` column by column.

    Returns ``(X, ok)`` where ``ok[j]`` tells whether column ``j`` is
    consistent.  Solutions are canonical: free variables are zero.
    Inconsistent columns of ``X`` are zero.
    """
    rows, cols = m.shape
    if b.ndim != 2 or b.shape[0] != rows:
        raise InputError(f"right-hand side has {b.shape[0] if b.ndim else 0} rows, expected {rows}")
    nrhs = b.shape[1]
    if rows == 0:
        return np.zeros((cols, nrhs), dtype=np.int64), np.ones(nrhs, dtype=bool)
    aug = np.concatenate([np.asarray(m, dtype=np.int64) % p, np.asarray(b, dtype=np.int64) % p], axis=1)
    pivots = _rref_inplace(aug, p, ncols=cols)
    rk = len(pivots)
    x = np.zeros((cols, nrhs), dtype=np.int64)
    ok = ~np.any(aug[rk:, cols:], axis=0) if rk < rows else np.ones(nrhs, dtype=bool)
    if rk:
        x[pivots] = aug[:rk, cols:]
    x[:, ~ok] = 0
    return x, ok


def solve(m: np.ndarray, b, p: int) -> np.ndarray | None:
    """Canonical solution of ``m @ x = b`` or ``None`` when inconsistent."""
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != m.shape[0]:
        raise InputError(f"vector of length {b.shape[0]} against {m.shape[0]} rows")
    x, ok = solve_many(m, b.reshape(-1, 1), p)
    return x[:, 0] if ok[0] else None


def span_basis(vectors: np.ndarray, p: int) -> np.ndarray:
    """RREF basis (rows) of the row span of ``vectors``."""
    if vectors.shape[0] == 0:
        return np.zeros((0, vectors.shape[1]), dtype=np.int64)
    r, _, rk = row_reduce(vectors, p)
    return r[:rk]


def _check_independent(basis: np.ndarray, p: int) -> None:
    if basis.shape[0] and rank(basis, p) != basis.shape[0]:
        raise InputError("basis rows are linearly dependent")


def image_coords(basis: np.ndarray, v, p: int) -> np.ndarray | None:
    """Coordinates of ``v`` in the row basis ``basis``, or ``None`` if outside the span."""
    v = np.asarray(v, dtype=np.int64).reshape(-1) % p
    if basis.shape[0] == 0:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    _check_independent(basis, p)
    return solve(basis.T, v, p)


def quotient_space(ambient_dim: int, sub_basis: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Complement a subspace and project onto the quotient.

    Returns ``(coset_basis, project)``: ``coset_basis`` rows are the standard
    unit vectors at the non-pivot columns of the RREF of ``sub_basis`` and
    ``project`` (``q x ambient_dim``) maps a vector to its coset coordinates.
    """
    sub = _rows(sub_basis, ambient_dim) % p
    _check_independent(sub, p)
    s, pivots, rk = row_reduce(sub, p) if sub.shape[0] else (sub, [], 0)
    s = s[:rk]
    pset = set(pivots)
    nonpiv = [c for c in range(ambient_dim) if c not in pset]
    q = len(nonpiv)
    coset = np.zeros((q, ambient_dim), dtype=np.int64)
    coset[np.arange(q), nonpiv] = 1
    project = np.zeros((q, ambient_dim), dtype=np.int64)
    project[np.arange(q), nonpiv] = 1
    if rk:
        project[:, pivots] = (-s[:, nonpiv].T) % p
    return coset, project


def kronecker(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.kron(a, b) % p


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise InputError("only square matrices are invertible")
    x, ok = solve_many(m, np.eye(n, dtype=np.int64), p)
    if not ok.all() or (n and rank(m, p) != n):
        raise ZeroDivisionError("matrix is singular")
    return x


def _rows(x, ambient: int) -> np.ndarray:
    a = np.asarray(x, dtype=np.int64)
    if ambient == 0 or a.size == 0:
        count = a.shape[0] if a.ndim == 2 else 0
        return np.zeros((count, ambient), dtype=np.int64)
    return a.reshape(-1, ambient)


class Subquotient:
    """Canonical coordinates on ``span(big) / span(small)`` inside ``F_p^ambient``.

    ``big`` rows span the numerator (any spanning set); ``small`` rows must lie
    in it.  Vectors of the numerator get coordinates through the pivot entries
    of the RREF basis of ``big``, then through :func:`quotient_space`.
    """

    def __init__(self, ambient: int, big: np.ndarray, small: np.ndarray, p: int):
        self.p = p
        self.ambient = ambient
        self.basis = span_basis(_rows(big, ambient) % p, p)
        _, self.pivots, _ = row_reduce(self.basis, p) if self.basis.shape[0] else (None, [], 0)
        small = _rows(small, ambient) % p
        sub = self.coords_in_numerator(small)
        sub_basis = span_basis(sub, p) if sub.shape[0] else np.zeros((0, len(self.pivots)), dtype=np.int64)
        self.denominator_dim = sub_basis.shape[0]
        self.coset, self.project = quotient_space(len(self.pivots), sub_basis, p)

    @property
    def numerator_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.coset.shape[0]

    def coords_in_numerator(self, vecs: np.ndarray) -> np.ndarray:
        vecs = _rows(np.atleast_2d(vecs), self.ambient) % self.p
        c = vecs[:, self.pivots]
        if ((c @ self.basis - vecs) % self.p).any():
            raise InputError("vector outside the numerator subspace")
        return c

    def coords(self, vecs: np.ndarray) -> np.ndarray:
        """Quotient coordinates of the rows of ``vecs`` (shape ``(k, dim)``)."""
        return (self.coords_in_numerator(vecs) @ self.project.T) % self.p

    def lift(self, coords: np.ndarray) -> np.ndarray:
        """Canonical representatives (rows) of quotient coordinate rows."""
        c = _rows(np.atleast_2d(coords), self.dim)
        return (c @ self.coset @ self.basis) % self.p

    def contains_zero_class(self, vecs: np.ndarray) -> np.ndarray:
        return ~self.coords(vecs).any(axis=1)
