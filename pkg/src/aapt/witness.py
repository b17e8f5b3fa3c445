"""Constructive certificates of non-faithfulness.

Any Hermitian-preserving map decomposes as a real combination of
conjugations, ``D = sum_i lambda_i V_i . V_i^dag`` with Hilbert-Schmidt
orthonormal V_i, by eigendecomposing its (Hermitian) Choi matrix.  When the
map additionally annihilates the trace, ``sum_i lambda_i V_i^dag V_i = 0``,
it can be rescaled into a difference of two genuine channels:

    alpha = || sum_{lambda_i >= 0} lambda_i V_i^dag V_i ||_inf,
    M     = sqrt(alpha 1 - sum_{lambda_i >= 0} lambda_i V_i^dag V_i),
    K0    = Kraus { sqrt(lambda_i / alpha) V_i : lambda_i >= 0 } u { M / sqrt(alpha) },
    K1    = Kraus { sqrt(-lambda_i / alpha) V_i : lambda_i < 0 } u { M / sqrt(alpha) },

with D = alpha (K0 - K1).  For a state that fails the faithfulness rank test
this turns the rank deficiency into a concrete pair of channels: pick a
Hermitian functional E orthogonal to the image of the state's B -> A map, a
traceless Hermitian G, and decompose D(X) = <E, X> G.  The resulting channels
differ (their Choi matrices are far apart) yet produce identical outputs on
the probe, which is exactly the information the probe cannot see.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply_on_A
from .duality import TransferMatrix, certify_faithful, restrict_support, state_to_map
from .linalg import hermitian_basis, hs_inner, rank_evidence, unvec, vec
from .states import BipartiteState, swap_sides

HERMITIAN_CHOI_TOL = 1e-12
TRACE_ANNIHILATION_TOL = 1e-10
TERM_DROP_RTOL = 1e-12
OUTPUT_GAP_TOL = 1e-9
CHANNEL_GAP_MIN = 1e-3


@dataclass(frozen=True)
class HermitianPreservingMap:
    """A linear map on operator space that sends Hermitian to Hermitian.

    Hermiticity preservation is validated through the Choi matrix.  With
    ``trace_annihilating=True`` the map must also send everything to
    traceless operators, i.e. its adjoint must kill the identity; that is
    the precondition for the channel-difference decomposition.
    """

    transfer: TransferMatrix
    trace_annihilating: bool = False

    def __post_init__(self):
        c = self.transfer.choi()
        scale = max(1.0, float(np.linalg.norm(c)))
        if np.linalg.norm(c - c.conj().T) > HERMITIAN_CHOI_TOL * scale:
            raise ValueError("map is not Hermitian preserving (its Choi matrix is not Hermitian)")
        if self.trace_annihilating:
            residual = np.linalg.norm(self.adjoint_identity())
            bound = TRACE_ANNIHILATION_TOL * max(1.0, float(np.linalg.norm(self.transfer.matrix)))
            if residual > bound:
                raise ValueError(f"map does not annihilate the trace (adjoint identity residual {residual:.3e})")

    @property
    def dim_in(self) -> int:
        return self.transfer.dim_in

    @property
    def dim_out(self) -> int:
        return self.transfer.dim_out

    def apply(self, m) -> np.ndarray:
        return self.transfer.apply(m)

    def adjoint_identity(self) -> np.ndarray:
        """The adjoint map applied to the identity, sum_i lambda_i V_i^dag V_i."""
        eye_out = np.eye(self.dim_out, dtype=complex)
        return unvec(self.transfer.matrix.conj().T @ vec(eye_out), (self.dim_in, self.dim_in))


@dataclass(frozen=True)
class WitnessPair:
    """Two channels a non-faithful probe cannot tell apart.

    ``output_gap`` is the Frobenius distance of the two output states on the
    probe (guaranteed tiny) and ``channel_gap`` the Frobenius distance of the
    Choi matrices (guaranteed macroscopic); ``alpha`` rescales the difference
    back to the underlying Hermitian-preserving map.
    """

    k0: Channel
    k1: Channel
    alpha: float
    output_gap: float
    channel_gap: float
    side: str


def conjugation_decomposition(m: HermitianPreservingMap) -> list[tuple[float, np.ndarray]]:
    """Write the map as a real combination of conjugations.

    Returns ``(weight, V)`` pairs, weights descending, with Hilbert-Schmidt
    orthonormal V; terms with a weight below 1e-12 of the largest are
    dropped.  ``sum_i weight_i V_i X V_i^dag`` reproduces the map's action.
    """
    c = m.transfer.choi()
    w, q = np.linalg.eigh((c + c.conj().T) / 2)
    if w.size == 0:
        return []
    cutoff = TERM_DROP_RTOL * float(np.abs(w).max())
    terms = [
        (float(w[i]), unvec(q[:, i], (m.dim_out, m.dim_in)))
        for i in range(w.size)
        if abs(w[i]) > cutoff
    ]
    terms.sort(key=lambda t: -t[0])
    return terms


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def decompose_channel_difference(m: HermitianPreservingMap) -> tuple[float, Channel, Channel]:
    """Split a trace-annihilating Hermitian-preserving map into alpha * (K0 - K1).

    Both returned channels are CPTP by construction and
    ``alpha * (K0(X) - K1(X))`` reproduces the map on every operator.
    Raises ValueError for the zero map, for non-square maps, and when the
    trace-annihilation precondition fails.
    """
    if m.dim_in != m.dim_out:
        raise ValueError("only square maps can be split into a channel difference")
    d = m.dim_in
    residual = np.linalg.norm(m.adjoint_identity())
    if residual > TRACE_ANNIHILATION_TOL * max(1.0, float(np.linalg.norm(m.transfer.matrix))):
        raise ValueError(f"map does not annihilate the trace (adjoint identity residual {residual:.3e})")
    terms = conjugation_decomposition(m)
    if not terms:
        raise ValueError("the zero map has no channel-difference decomposition")
    positive = [(lam, v) for lam, v in terms if lam >= 0]
    negative = [(lam, v) for lam, v in terms if lam < 0]
    p = np.zeros((d, d), dtype=complex)
    for lam, v in positive:
        p += lam * (v.conj().T @ v)
    alpha = float(np.linalg.eigvalsh((p + p.conj().T) / 2)[-1])
    if alpha <= 0.0:
        raise ValueError("the zero map has no channel-difference decomposition")
    slack = _psd_sqrt(alpha * np.eye(d) - p)
    extra = [] if np.linalg.norm(slack) <= 1e-12 * math.sqrt(alpha * d) else [slack / math.sqrt(alpha)]
    k0_ops = [math.sqrt(lam / alpha) * v for lam, v in positive] + extra
    k1_ops = [math.sqrt(-lam / alpha) * v for lam, v in negative] + extra
    return alpha, Channel.from_kraus(k0_ops), Channel.from_kraus(k1_ops)


def mix_with_identity(channel: Channel, eps: float) -> Channel:
    """Convex mixture (1 - eps) * channel + eps * identity, in Kraus form."""
    if not 0.0 <= eps < 1.0:
        raise ValueError("mixing weight must lie in [0, 1)")
    if channel.dim_in != channel.dim_out:
        raise ValueError("only square channels can be mixed with the identity")
    ops = [math.sqrt(1.0 - eps) * k for k in channel.kraus()]
    ops.append(math.sqrt(eps) * np.eye(channel.dim_in, dtype=complex))
    return Channel.from_kraus(ops)


def faithfulness_witness(state: BipartiteState, side: str = "A", tol: float = 0.0) -> WitnessPair | None:
    """Explicit channel pair a non-faithful probe cannot distinguish.

    Returns None exactly when :func:`certify_faithful` holds on the chosen
    side.  Otherwise the construction picks a unit Hermitian E orthogonal to
    the image of the probe's map into that side, a unit traceless Hermitian
    G, and decomposes D(X) = <E, X> G into channels.  D kills the whole
    image, so the two channels agree on the probe; their Choi matrices are
    E^T (x) G apart (scaled by 1/alpha), which keeps the channel gap
    macroscopic.  The state is support-restricted first, matching the
    certificate; the returned channels act on the restricted side.
    """
    cert = certify_faithful(state, side, tol)
    if cert.faithful:
        return None
    work = restrict_support(state)
    if side == "B":
        work = swap_sides(work)
    da = work.dim_a
    j = state_to_map(work, "b_to_a")
    basis_a = hermitian_basis(da)
    basis_b = hermitian_basis(work.dim_b)
    image_coords = np.empty((len(basis_a), len(basis_b)))
    for col, b_in in enumerate(basis_b):
        image = j.apply(b_in)
        image_coords[:, col] = [hs_inner(b_out, image).real for b_out in basis_a]
    u, s, _ = np.linalg.svd(image_coords)
    rank = rank_evidence(image_coords, tol).rank
    if rank >= da * da:
        raise ArithmeticError("rank certificate and image computation disagree; cannot build a witness")
    e_op = np.tensordot(u[:, rank], np.array(basis_a), axes=1)
    g_op = e_op - (np.trace(e_op) / da) * np.eye(da)
    g_norm = float(np.linalg.norm(g_op))
    if g_norm <= 1e-12:
        # unreachable for state-induced maps (the image never misses the
        # identity direction entirely), kept as a deterministic fallback
        g_op = basis_a[1]
    else:
        g_op = g_op / g_norm
    t_d = np.outer(vec(g_op), vec(e_op.T))
    hp = HermitianPreservingMap(TransferMatrix(da, da, t_d), trace_annihilating=True)
    alpha, k0, k1 = decompose_channel_difference(hp)
    out0 = apply_on_A(k0, work)
    out1 = apply_on_A(k1, work)
    output_gap = float(np.linalg.norm(out0.matrix - out1.matrix))
    channel_gap = float(np.linalg.norm(k0.choi() - k1.choi()))
    if output_gap > OUTPUT_GAP_TOL:
        raise ArithmeticError(f"witness channels separate the probe outputs by {output_gap:.3e}; construction failed")
    if channel_gap < CHANNEL_GAP_MIN:
        raise ArithmeticError(f"witness channels are numerically identical (Choi gap {channel_gap:.3e})")
    return WitnessPair(k0=k0, k1=k1, alpha=alpha, output_gap=output_gap, channel_gap=channel_gap, side=side)
