"""State to map duality for bipartite probes, and the faithfulness certificate.

Every bipartite state rho on A (x) B induces two linear maps between the
subsystem operator spaces,

    sigma on A  ->  Tr_A[(sigma^T (x) 1_B) rho]   (the A -> B map),
    sigma on B  ->  Tr_B[(1_A (x) sigma^T) rho]   (the B -> A map),

with the transpose taken in the computational basis, fixed once for the whole
package.  In the conventions used here (column stacking, Choi on input (x)
output) the matrix of the A -> B map is exactly the Choi-to-transfer
reshuffle of rho itself, and the two directions are transposes of each other.

A state can identify an arbitrary unknown channel acting on A precisely when
its A -> B map is injective, i.e. the transfer matrix has full column rank
|A|^2.  ``certify_faithful`` decides that rank question numerically and keeps
the singular values around the cut as evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import choi_to_transfer, transfer_to_choi
from .linalg import (
    as_operator,
    hermitian_basis,
    hs_inner,
    rank_evidence,
    tensor,
    unvec,
    vec,
)
from .states import BipartiteState

DIRECTIONS = ("a_to_b", "b_to_a")
SIDES = ("A", "B")
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class TransferMatrix:
    """Matrix of a linear map on operator space, in column-stacking convention."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise ValueError("dimensions must be positive")
        m = as_operator(self.matrix)
        expected = (self.dim_out * self.dim_out, self.dim_in * self.dim_in)
        if m.shape != expected:
            raise ValueError(f"transfer matrix must have shape {expected}, got {m.shape}")
        frozen = m.copy()
        frozen.setflags(write=False)
        object.__setattr__(self, "matrix", frozen)

    def apply(self, m) -> np.ndarray:
        """Act on a single operator."""
        m = as_operator(m)
        if m.shape != (self.dim_in, self.dim_in):
            raise ValueError(f"operator of shape {m.shape} does not match input dimension {self.dim_in}")
        return unvec(self.matrix @ vec(m), (self.dim_out, self.dim_out))

    def choi(self) -> np.ndarray:
        return transfer_to_choi(self.matrix, self.dim_in, self.dim_out)

    def is_hermitian_preserving(self, tol: float = 1e-12) -> bool:
        c = self.choi()
        return bool(np.linalg.norm(c - c.conj().T) <= tol * max(1.0, np.linalg.norm(c)))


def state_to_map(state: BipartiteState, direction: str = "a_to_b") -> TransferMatrix:
    """Transfer matrix of the map a bipartite state induces between its sides.

    For ``a_to_b`` the state matrix, viewed as a Choi matrix with A as input
    and B as output, is reshuffled into the transfer form; ``b_to_a`` uses
    the mirrored permutation.  The two results are transposes of each other.
    """
    da, db = state.dims
    if direction == "a_to_b":
        return TransferMatrix(da, db, choi_to_transfer(state.matrix, da, db))
    if direction == "b_to_a":
        r4 = state.matrix.reshape(da, db, da, db)
        return TransferMatrix(db, da, r4.transpose(2, 0, 3, 1).reshape(da * da, db * db))
    raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def map_to_state(t: TransferMatrix, dims: tuple[int, int], direction: str = "a_to_b") -> BipartiteState:
    """Invert :func:`state_to_map`.

    Raises ValueError when the resulting matrix is not a valid density
    matrix, which signals that ``t`` was not induced by a state.
    """
    da, db = int(dims[0]), int(dims[1])
    if direction == "a_to_b":
        if (t.dim_in, t.dim_out) != (da, db):
            raise ValueError(f"transfer dims {t.dim_in} -> {t.dim_out} do not match state dims {dims}")
        m = transfer_to_choi(t.matrix, da, db)
    elif direction == "b_to_a":
        if (t.dim_in, t.dim_out) != (db, da):
            raise ValueError(f"transfer dims {t.dim_in} -> {t.dim_out} do not match state dims {dims}")
        t4 = t.matrix.reshape(da, da, db, db)
        m = t4.transpose(1, 3, 0, 2).reshape(da * db, da * db)
    else:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return BipartiteState(m, da, db)


def _support_isometry(marginal: np.ndarray, tol: float) -> np.ndarray:
    w, v = np.linalg.eigh((marginal + marginal.conj().T) / 2)
    keep = w > tol
    # columns ordered by descending eigenvalue for a deterministic basis
    return v[:, keep][:, ::-1]


def restrict_support(state: BipartiteState, tol: float = SUPPORT_TOL) -> BipartiteState:
    """Project both sides onto the supports of their marginals.

    States whose marginals are already full rank are returned unchanged.
    Otherwise the state is compressed onto the support eigenbases and
    renormalized, so the output has full-rank marginals on both sides.
    """
    pa = _support_isometry(state.marginal("A"), tol)
    pb = _support_isometry(state.marginal("B"), tol)
    if pa.shape[1] == state.dim_a and pb.shape[1] == state.dim_b:
        return state
    iso = tensor(pa, pb)
    m = iso.conj().T @ state.matrix @ iso
    m = m / np.trace(m).real
    return BipartiteState(m, pa.shape[1], pb.shape[1])


@dataclass(frozen=True)
class FaithfulnessCertificate:
    """Verdict on whether a probe state can identify arbitrary channels.

    ``rank`` is the numerical rank of the probe's channel map on the chosen
    side and ``required_rank`` the square of that side's dimension after
    support restriction; the state is faithful exactly when they agree.
    ``smallest_kept`` and ``largest_dropped`` are the singular values on
    either side of the rank cut.
    """

    faithful: bool
    side: str
    rank: int
    required_rank: int
    smallest_kept: float
    largest_dropped: float
    tol: float
    dims: tuple[int, int]
    input_dims: tuple[int, int]

    @property
    def gap_ratio(self) -> float:
        if self.largest_dropped <= 0.0:
            return float("inf")
        return self.smallest_kept / self.largest_dropped


def certify_faithful(state: BipartiteState, side: str = "A", tol: float = 0.0) -> FaithfulnessCertificate:
    """Decide faithfulness on one side by the rank of the induced map.

    The state is support-restricted first (recorded in ``dims``), since the
    question is only meaningful for full-rank marginals.  Faithfulness on A
    is full column rank |A|^2 of the A -> B map, equivalently full row rank
    of the B -> A direction.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    restricted = restrict_support(state)
    direction = "a_to_b" if side == "A" else "b_to_a"
    j = state_to_map(restricted, direction)
    ev = rank_evidence(j.matrix, tol)
    required = (restricted.dim_a if side == "A" else restricted.dim_b) ** 2
    return FaithfulnessCertificate(
        faithful=ev.rank == required,
        side=side,
        rank=ev.rank,
        required_rank=required,
        smallest_kept=ev.smallest_kept,
        largest_dropped=ev.largest_dropped,
        tol=ev.tol,
        dims=restricted.dims,
        input_dims=state.dims,
    )


def hermitian_restricted_rank(t: TransferMatrix, tol: float = 0.0) -> int:
    """Real rank of a map restricted to Hermitian operators.

    The map is expressed in orthonormal Hermitian bases of its input and
    output spaces; for a Hermitian-preserving map the resulting coefficient
    matrix is real and its real rank equals the complex rank of the full
    transfer matrix.
    """
    basis_in = hermitian_basis(t.dim_in)
    basis_out = hermitian_basis(t.dim_out)
    coeffs = np.empty((len(basis_out), len(basis_in)))
    for j, b_in in enumerate(basis_in):
        image = t.apply(b_in)
        coeffs[:, j] = [hs_inner(b_out, image).real for b_out in basis_out]
    return rank_evidence(coeffs, tol).rank
