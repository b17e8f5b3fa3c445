"""Dense complex linear algebra underneath the tomography layers.

Operators are bare ``numpy.ndarray`` values with complex dtype; nothing in
this package wraps matrices in richer classes.  Vectorization is column
stacking everywhere: ``vec(M)`` concatenates the columns of ``M``, which
gives the identity ``vec(A @ X @ B) = kron(B.T, A) @ vec(X)``.  Composite
systems use row-major index order, so the basis vector ``|i>_A (x) |j>_B``
sits at position ``i * dim_b + j``.

Rank decisions follow a single tolerance rule: a singular value counts as
nonzero when it exceeds ``max(rows, cols) * s_max * 1e-12``, unless the
caller supplies a positive tolerance.  Certificates built on top of these
routines keep the singular values around the cut so the decision can be
audited afterwards.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

RANK_RTOL = 1e-12


def _rng(seed) -> np.random.Generator:
    """Coerce an integer seed (or an existing Generator) into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def as_operator(m) -> np.ndarray:
    """View ``m`` as a complex matrix, rejecting anything that is not 2-D."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got an array of shape {a.shape}")
    return a


def tensor(a, b) -> np.ndarray:
    """Kronecker product with row-major composite indexing (i_a * dim_b + i_b)."""
    return np.kron(as_operator(a), as_operator(b))


def vec(m) -> np.ndarray:
    """Stack the columns of ``m`` into a single vector."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Inverse of :func:`vec`.

    The result is square by default; pass ``shape=(rows, cols)`` to unstack
    into a rectangular matrix.
    """
    a = np.asarray(v, dtype=complex).reshape(-1)
    if shape is None:
        d = math.isqrt(a.size)
        if d * d != a.size:
            raise ValueError(f"cannot unvec a length-{a.size} vector into a square matrix")
        shape = (d, d)
    if shape[0] * shape[1] != a.size:
        raise ValueError(f"cannot unvec a length-{a.size} vector into shape {shape}")
    return a.reshape(shape, order="F")


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr[a^dag b] (conjugate-linear in ``a``)."""
    return complex(np.vdot(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def _split(m: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    da, db = int(dims[0]), int(dims[1])
    if da < 1 or db < 1:
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    n = da * db
    if m.shape != (n, n):
        raise ValueError(f"matrix of shape {m.shape} does not act on {da} x {db} = {n} dimensions")
    return m.reshape(da, db, da, db)


def partial_trace(m, dims: tuple[int, int], which: str = "A") -> np.ndarray:
    """Trace out one factor of a matrix acting on A (x) B.

    ``which`` names the subsystem that is traced out, so
    ``partial_trace(m, dims, "A")`` returns the operator left on B.
    """
    m4 = _split(as_operator(m), dims)
    if which == "A":
        return np.einsum("abad->bd", m4)
    if which == "B":
        return np.einsum("abcb->ac", m4)
    raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")


def partial_transpose(m, dims: tuple[int, int], which: str = "A") -> np.ndarray:
    """Transpose the indices of one tensor factor; applying it twice is a no-op."""
    m4 = _split(as_operator(m), dims)
    if which == "A":
        out = m4.transpose(2, 1, 0, 3)
    elif which == "B":
        out = m4.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")
    n = dims[0] * dims[1]
    return out.reshape(n, n)


class RankEvidence(NamedTuple):
    """Outcome of a thresholded rank decision together with its audit trail.

    ``smallest_kept`` and ``largest_dropped`` are the singular values on
    either side of the cut (0.0 when the respective side is empty), so
    ``gap_ratio`` tells how decisively the threshold separated them.
    """

    rank: int
    smallest_kept: float
    largest_dropped: float
    tol: float

    @property
    def gap_ratio(self) -> float:
        if self.largest_dropped <= 0.0:
            return math.inf
        return self.smallest_kept / self.largest_dropped


def default_rank_tol(shape: tuple[int, int], s_max: float) -> float:
    """Default singular value cutoff, max(rows, cols) * s_max * 1e-12."""
    return max(shape) * s_max * RANK_RTOL


def _resolve_tol(shape: tuple[int, int], s: np.ndarray, tol: float) -> float:
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if tol > 0:
        return tol
    s_max = float(s[0]) if s.size else 0.0
    return default_rank_tol(shape, s_max)


def _evidence(shape: tuple[int, int], s: np.ndarray, tol: float) -> RankEvidence:
    used = _resolve_tol(shape, s, tol)
    rank = int((s > used).sum())
    smallest_kept = float(s[rank - 1]) if rank > 0 else 0.0
    largest_dropped = float(s[rank]) if rank < s.size else 0.0
    return RankEvidence(rank, smallest_kept, largest_dropped, used)


def rank_evidence(m, tol: float = 0.0) -> RankEvidence:
    """Numerical rank of ``m`` with the singular values around the cut."""
    m = as_operator(m)
    s = np.linalg.svd(m, compute_uv=False)
    return _evidence(m.shape, s, tol)


def _svd_nullspace(m: np.ndarray, tol: float) -> tuple[RankEvidence, np.ndarray]:
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    ev = _evidence(m.shape, s, tol)
    return ev, vh[ev.rank:].conj().T


def rank_and_nullspace(m, tol: float = 0.0) -> tuple[int, np.ndarray]:
    """Numerical rank and an orthonormal basis of the right null space.

    Returns ``(rank, basis)`` where the columns of ``basis`` span the null
    space of ``m``; ``rank + basis.shape[1] == m.shape[1]`` always holds.
    With ``tol=0`` the default cutoff rule applies.
    """
    m = as_operator(m)
    ev, basis = _svd_nullspace(m, tol)
    return ev.rank, basis


def pseudo_inverse(m, tol: float = 0.0) -> np.ndarray:
    """Moore-Penrose inverse via SVD, using the package-wide tolerance rule."""
    m = as_operator(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    used = _resolve_tol(m.shape, s, tol)
    inv_s = np.zeros_like(s)
    keep = s > used
    inv_s[keep] = 1.0 / s[keep]
    return vh.conj().T @ (inv_s[:, None] * u.conj().T)


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed ``d x d`` unitary.

    QR of a complex Ginibre matrix with the R-diagonal phases folded back in,
    which makes the distribution invariant under left multiplication by any
    fixed unitary.  The same seed always reproduces the same matrix.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    g = _rng(seed)
    z = (g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    return q * (diag / np.abs(diag))


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal basis of the real space of ``d x d`` Hermitian matrices.

    Generalized Gell-Mann convention: the scaled identity first, then the
    symmetric off-diagonal elements, the antisymmetric ones, and finally the
    diagonal traceless elements.  For ``d=2`` this is exactly
    ``{1, sigma_x, sigma_y, sigma_z} / sqrt(2)``.  All pairs are orthonormal
    under the Hilbert-Schmidt inner product.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    basis = [np.eye(d, dtype=complex) / math.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0 / math.sqrt(2)
            basis.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / math.sqrt(2)
            m[k, j] = 1j / math.sqrt(2)
            basis.append(m)
    for level in range(1, d):
        diag = np.zeros(d)
        diag[:level] = 1.0
        diag[level] = -level
        basis.append(np.diag(diag).astype(complex) / math.sqrt(level * (level + 1)))
    return basis


def random_density(d: int, rank: int, seed) -> np.ndarray:
    """Random density matrix of the requested rank (normalized Wishart G G^dag)."""
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in 1..{d}, got {rank}")
    g = _rng(seed)
    gmat = (g.standard_normal((d, rank)) + 1j * g.standard_normal((d, rank))) / math.sqrt(2)
    rho = gmat @ gmat.conj().T
    return rho / np.trace(rho).real
