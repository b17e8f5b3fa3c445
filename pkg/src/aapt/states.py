"""Bipartite density matrices and the probe state families used throughout.

A :class:`BipartiteState` is a density matrix on A (x) B together with the
two subsystem dimensions.  Construction validates positivity and unit trace,
so every instance in circulation is a physical state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import _rng, as_operator, partial_trace, random_density, tensor

PSD_TOL = 1e-12
TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on A (x) B with recorded subsystem dimensions."""

    matrix: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError(f"subsystem dimensions must be positive, got ({self.dim_a}, {self.dim_b})")
        m = as_operator(self.matrix)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise ValueError(f"matrix of shape {m.shape} does not fit dimensions {self.dim_a} x {self.dim_b}")
        if np.linalg.norm(m - m.conj().T) > HERMITIAN_TOL * max(1.0, np.linalg.norm(m)):
            raise ValueError("state matrix is not Hermitian")
        eigs = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if eigs[0] < -PSD_TOL:
            raise ValueError(f"state matrix is not positive semidefinite (min eigenvalue {eigs[0]:.3e})")
        trace = np.trace(m).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"state matrix must have unit trace, got {trace!r}")
        frozen = m.copy()
        frozen.setflags(write=False)
        object.__setattr__(self, "matrix", frozen)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    def marginal(self, which: str = "A") -> np.ndarray:
        """Reduced density matrix on the named subsystem."""
        if which not in ("A", "B"):
            raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")
        return partial_trace(self.matrix, self.dims, "B" if which == "A" else "A")


def swap_sides(state: BipartiteState) -> BipartiteState:
    """Exchange the roles of A and B (an exact index permutation)."""
    da, db = state.dims
    m = state.matrix.reshape(da, db, da, db).transpose(1, 0, 3, 2).reshape(da * db, da * db)
    return BipartiteState(m, db, da)


def max_entangled(d: int) -> BipartiteState:
    """The maximally entangled state sum_ij |ii><jj| / d on d (x) d."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    phi = np.zeros(d * d, dtype=complex)
    phi[:: d + 1] = 1.0 / math.sqrt(d)
    return BipartiteState(np.outer(phi, phi.conj()), d, d)


def product_state(rho_a, rho_b) -> BipartiteState:
    """Tensor product of two density matrices."""
    a = as_operator(rho_a)
    b = as_operator(rho_b)
    return BipartiteState(tensor(a, b), a.shape[0], b.shape[0])


def random_state(dim_a: int, dim_b: int, rank: int | None = None, seed=0) -> BipartiteState:
    """Random bipartite state of the given rank (full rank by default)."""
    n = dim_a * dim_b
    if rank is None:
        rank = n
    return BipartiteState(random_density(n, rank, seed), dim_a, dim_b)


def _check_density(m: np.ndarray, label: str) -> np.ndarray:
    if np.linalg.norm(m - m.conj().T) > HERMITIAN_TOL * max(1.0, np.linalg.norm(m)):
        raise ValueError(f"{label} is not Hermitian")
    eigs = np.linalg.eigvalsh((m + m.conj().T) / 2)
    if eigs[0] < -PSD_TOL:
        raise ValueError(f"{label} is not positive semidefinite")
    if abs(np.trace(m).real - 1.0) > TRACE_TOL:
        raise ValueError(f"{label} does not have unit trace")
    return m


def cq_state(p, sigmas) -> BipartiteState:
    """Classical-quantum state sum_i p_i |i><i| (x) sigma_i.

    ``p`` is a probability vector over the A basis and ``sigmas`` one B state
    per entry.  The result commutes with every projective measurement that is
    diagonal in the chosen A basis, so it is never sensitive on A.
    """
    weights = np.asarray(p, dtype=float)
    if weights.ndim != 1 or weights.size < 1:
        raise ValueError("p must be a nonempty probability vector")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > TRACE_TOL:
        raise ValueError("p must be nonnegative and sum to 1")
    blocks = [_check_density(as_operator(s), f"sigma[{i}]") for i, s in enumerate(sigmas)]
    if len(blocks) != weights.size:
        raise ValueError("need exactly one B state per probability entry")
    db = blocks[0].shape[0]
    if any(b.shape != (db, db) for b in blocks):
        raise ValueError("all B states must share one dimension")
    da = weights.size
    out = np.zeros((da * db, da * db), dtype=complex)
    for i, (w, b) in enumerate(zip(weights, blocks)):
        out[i * db : (i + 1) * db, i * db : (i + 1) * db] = w * b
    return BipartiteState(out, da, db)


def unitary_faithful_state(spectrum) -> BipartiteState:
    """A state that pins down unitaries on A but has a rank-2 channel map.

    Built from a non-degenerate diagonal state and the uniform-superposition
    projector on A, each flagged by one basis state of a qubit B:

        rho = (diag(spectrum) (x) |0><0| + |+><+| (x) |1><1|) / 2

    The pair of A components transforms distinctly under every nontrivial
    unitary, yet the image of the associated B -> A map is only 2-dimensional,
    so the state cannot identify a general channel once |A| >= 2.
    """
    lam = np.asarray(spectrum, dtype=float)
    d = lam.size
    if lam.ndim != 1 or d < 2:
        raise ValueError("spectrum must be a vector of length at least 2")
    if np.any(lam <= 0) or abs(lam.sum() - 1.0) > TRACE_TOL:
        raise ValueError("spectrum must be strictly positive and sum to 1")
    diffs = np.abs(lam[:, None] - lam[None, :])[~np.eye(d, dtype=bool)]
    if diffs.min() <= 1e-12:
        raise ValueError("spectrum must be non-degenerate")
    e0 = np.zeros((2, 2), dtype=complex)
    e0[0, 0] = 1.0
    e1 = np.zeros((2, 2), dtype=complex)
    e1[1, 1] = 1.0
    uniform = np.full((d, d), 1.0 / d, dtype=complex)
    m = 0.5 * tensor(np.diag(lam).astype(complex), e0) + 0.5 * tensor(uniform, e1)
    return BipartiteState(m, d, 2)


def random_cq_state(dim_a: int, dim_b: int, seed=0) -> BipartiteState:
    """Classical-quantum state with Dirichlet weights and random B blocks."""
    g = _rng(seed)
    p = g.dirichlet(np.ones(dim_a))
    sigmas = [random_density(dim_b, dim_b, g) for _ in range(dim_a)]
    return cq_state(p, sigmas)
