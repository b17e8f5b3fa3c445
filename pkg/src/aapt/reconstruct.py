"""Channel recovery from the output of a faithful probe.

Applying an unknown channel to one side of a correlated probe turns channel
tomography into state tomography: the output state's B -> A map is the
channel composed with the probe's B -> A map.  When the probe is faithful on
A its map has full row rank |A|^2, so a right pseudo-inverse recovers the
channel transfer matrix exactly,

    T = J_out @ pinv(J_in).

No regularization and no projection back onto the channel set is performed;
CP and TP violations of the recovered map are reported as first-class
numbers instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply_on_A, apply_on_B
from .duality import state_to_map
from .linalg import _rng, partial_trace, pseudo_inverse
from .states import BipartiteState, swap_sides

SIDES = ("A", "B")


class NotFaithfulProbeError(ValueError):
    """Raised when channel recovery is attempted through a rank-deficient probe."""


@dataclass(frozen=True)
class ReconstructionReport:
    """Recovered channel plus the physicality and conditioning diagnostics.

    ``cp_deviation`` is the negative part of the recovered Choi spectrum
    (clamped at 0), ``tp_deviation`` the distance of its output-trace from
    the identity, ``condition`` the singular value ratio of the probe's
    B -> A matrix over its required rank, and ``choi_error`` the Frobenius
    distance to the ground-truth Choi matrix when one was supplied.
    """

    channel: Channel
    condition: float
    cp_deviation: float
    tp_deviation: float
    choi_error: float | None = None


def reconstruct_channel(
    probe: BipartiteState,
    output: BipartiteState,
    side: str = "A",
    tol: float = 0.0,
    truth: Channel | None = None,
) -> ReconstructionReport:
    """Recover the channel that turned ``probe`` into ``output`` on one side.

    The probe must be faithful on that side without support restriction
    (rank deficiency leaves the linear system underdetermined, and the call
    refuses rather than silently regularizing).  When ``output`` really is
    the image of the probe under a channel, the recovery is exact up to
    floating point.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    if probe.dims != output.dims:
        raise ValueError(f"probe dims {probe.dims} and output dims {output.dims} differ")
    probe_w = probe if side == "A" else swap_sides(probe)
    output_w = output if side == "A" else swap_sides(output)
    d = probe_w.dim_a
    j_in = state_to_map(probe_w, "b_to_a")
    s = np.linalg.svd(j_in.matrix, compute_uv=False)
    required = d * d
    cutoff = tol if tol > 0 else max(j_in.matrix.shape) * float(s[0]) * 1e-12
    rank = int((s > cutoff).sum())
    if rank < required:
        raise NotFaithfulProbeError(
            f"probe is not faithful on {side} (map rank {rank} < {required}); reconstruction refused"
        )
    condition = float(s[0] / s[required - 1])
    j_out = state_to_map(output_w, "b_to_a")
    t = j_out.matrix @ pseudo_inverse(j_in.matrix, tol)
    channel = Channel.from_transfer(t, d, d)
    choi = channel.choi()
    choi = (choi + choi.conj().T) / 2
    cp_deviation = max(0.0, -float(np.linalg.eigvalsh(choi)[0]))
    tp_deviation = float(np.linalg.norm(partial_trace(choi, (d, d), "B") - np.eye(d)))
    choi_error = None
    if truth is not None:
        choi_error = float(np.linalg.norm(channel.choi() - truth.choi()))
    return ReconstructionReport(
        channel=channel,
        condition=condition,
        cp_deviation=cp_deviation,
        tp_deviation=tp_deviation,
        choi_error=choi_error,
    )


def _perturb(state: BipartiteState, noise: float, g: np.random.Generator) -> BipartiteState:
    """Add a traceless Hermitian kick of Frobenius norm ``noise``, then repair.

    The perturbed matrix is projected back to positive semidefinite by
    eigenvalue clamping and renormalized to unit trace.
    """
    n = state.matrix.shape[0]
    x = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    h = (x + x.conj().T) / 2
    h -= (np.trace(h) / n) * np.eye(n)
    h *= noise / np.linalg.norm(h)
    w, v = np.linalg.eigh(state.matrix + h)
    w = np.clip(w, 0.0, None)
    m = (v * w) @ v.conj().T
    m /= np.trace(m).real
    return BipartiteState(m, state.dim_a, state.dim_b)


def noise_stress(
    probe: BipartiteState,
    truth: Channel,
    noise: float,
    trials: int,
    seed,
    side: str = "A",
    tol: float = 0.0,
) -> list[ReconstructionReport]:
    """Reconstruction accuracy under perturbed output states.

    Each trial perturbs the true output by a random traceless Hermitian
    matrix of Frobenius norm ``noise`` (re-projected to a valid state) and
    reconstructs; ``noise=0`` reduces to the exact setting.  Trials use
    seeds spawned per index, so the report list is deterministic.
    """
    if noise < 0:
        raise ValueError("noise must be nonnegative")
    if trials < 1:
        raise ValueError("need at least one trial")
    base = apply_on_A(truth, probe) if side == "A" else apply_on_B(truth, probe)
    children = np.random.SeedSequence(seed).spawn(trials)
    reports = []
    for child in children:
        g = np.random.default_rng(child)
        perturbed = base if noise == 0 else _perturb(base, noise, g)
        reports.append(reconstruct_channel(probe, perturbed, side, tol, truth=truth))
    return reports
