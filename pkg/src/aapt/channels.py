"""Quantum channels and completely positive maps in three representations.

A :class:`Channel` stores one of

* ``kraus``: a tuple of ``dim_out x dim_in`` operators K_i acting as
  ``rho -> sum_i K_i rho K_i^dag``,
* ``choi``: the unnormalized Choi matrix ``C = sum_ij |i><j| (x) E(|i><j|)``
  living on input (x) output space, so Tr C = dim_in, complete positivity is
  C >= 0, and trace preservation is Tr_out C = 1,
* ``transfer``: the ``dim_out^2 x dim_in^2`` matrix acting on column-stacked
  operators,

and converts between them on demand.  With column stacking the three forms
are linked by ``C = sum_i vec(K_i) vec(K_i)^dag`` and
``T = sum_i conj(K_i) (x) K_i``; Choi and transfer matrices are entry
permutations of each other (the reshuffle below).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import _rng, as_operator, haar_unitary, partial_trace, tensor, unvec, vec
from .states import BipartiteState, swap_sides

_KINDS = ("kraus", "choi", "transfer")

CP_TOL = 1e-10
KRAUS_KEEP_RTOL = 1e-12


def kraus_to_choi(ops) -> np.ndarray:
    """Choi matrix sum_i vec(K_i) vec(K_i)^dag of a Kraus family."""
    vs = [vec(as_operator(k)) for k in ops]
    n = vs[0].size
    out = np.zeros((n, n), dtype=complex)
    for v in vs:
        out += np.outer(v, v.conj())
    return out


def kraus_to_transfer(ops) -> np.ndarray:
    """Transfer matrix sum_i conj(K_i) (x) K_i of a Kraus family."""
    ops = [as_operator(k) for k in ops]
    rows, cols = ops[0].shape
    out = np.zeros((rows * rows, cols * cols), dtype=complex)
    for k in ops:
        out += np.kron(k.conj(), k)
    return out


def transfer_to_choi(t, dim_in: int, dim_out: int) -> np.ndarray:
    """Reshuffle a transfer matrix into the corresponding Choi matrix."""
    t = as_operator(t)
    if t.shape != (dim_out * dim_out, dim_in * dim_in):
        raise ValueError(f"transfer matrix of shape {t.shape} does not match dims {dim_in} -> {dim_out}")
    t4 = t.reshape(dim_out, dim_out, dim_in, dim_in)
    return t4.transpose(3, 1, 2, 0).reshape(dim_in * dim_out, dim_in * dim_out)


def choi_to_transfer(c, dim_in: int, dim_out: int) -> np.ndarray:
    """Reshuffle a Choi matrix into the corresponding transfer matrix."""
    c = as_operator(c)
    n = dim_in * dim_out
    if c.shape != (n, n):
        raise ValueError(f"Choi matrix of shape {c.shape} does not match dims {dim_in} -> {dim_out}")
    c4 = c.reshape(dim_in, dim_out, dim_in, dim_out)
    return c4.transpose(3, 1, 2, 0).reshape(dim_out * dim_out, dim_in * dim_in)


def choi_to_kraus(c, dim_in: int, dim_out: int, tol: float = 0.0) -> tuple[np.ndarray, ...]:
    """Kraus operators from the eigendecomposition of a PSD Choi matrix.

    Eigenvectors with eigenvalue below the cutoff are dropped; an eigenvalue
    more negative than the CP tolerance means the map is not completely
    positive and no Kraus form exists.
    """
    c = as_operator(c)
    n = dim_in * dim_out
    if c.shape != (n, n):
        raise ValueError(f"Choi matrix of shape {c.shape} does not match dims {dim_in} -> {dim_out}")
    w, q = np.linalg.eigh((c + c.conj().T) / 2)
    scale = max(1.0, float(np.abs(w).max())) if w.size else 1.0
    if w.size and w[0] < -CP_TOL * scale:
        raise ValueError(f"Choi matrix is not positive semidefinite (min eigenvalue {w[0]:.3e}); the map is not CP")
    keep = tol if tol > 0 else KRAUS_KEEP_RTOL * n * scale
    ops = [math.sqrt(w[i]) * unvec(q[:, i], (dim_out, dim_in)) for i in range(w.size) if w[i] > keep]
    if not ops:
        ops = [np.zeros((dim_out, dim_in), dtype=complex)]
    return tuple(ops[::-1])


class Channel:
    """A completely positive map with lazily converted representations."""

    __slots__ = ("kind", "dim_in", "dim_out", "_data")

    def __init__(self, kind: str, data, dim_in: int, dim_out: int):
        if kind not in _KINDS:
            raise ValueError(f"representation must be one of {_KINDS}, got {kind!r}")
        if dim_in < 1 or dim_out < 1:
            raise ValueError("channel dimensions must be positive")
        if kind == "kraus":
            ops = tuple(as_operator(k) for k in data)
            if not ops:
                raise ValueError("need at least one Kraus operator")
            if any(k.shape != (dim_out, dim_in) for k in ops):
                raise ValueError(f"every Kraus operator must have shape ({dim_out}, {dim_in})")
            frozen = []
            for k in ops:
                k = k.copy()
                k.setflags(write=False)
                frozen.append(k)
            data = tuple(frozen)
        else:
            m = as_operator(data)
            expected = (
                (dim_in * dim_out, dim_in * dim_out)
                if kind == "choi"
                else (dim_out * dim_out, dim_in * dim_in)
            )
            if m.shape != expected:
                raise ValueError(f"{kind} matrix must have shape {expected}, got {m.shape}")
            data = m.copy()
            data.setflags(write=False)
        self.kind = kind
        self.dim_in = dim_in
        self.dim_out = dim_out
        self._data = data

    @classmethod
    def from_kraus(cls, ops) -> "Channel":
        ops = [as_operator(k) for k in ops]
        rows, cols = ops[0].shape
        return cls("kraus", ops, cols, rows)

    @classmethod
    def from_choi(cls, choi, dim_in: int, dim_out: int) -> "Channel":
        return cls("choi", choi, dim_in, dim_out)

    @classmethod
    def from_transfer(cls, t, dim_in: int, dim_out: int) -> "Channel":
        return cls("transfer", t, dim_in, dim_out)

    @classmethod
    def identity(cls, d: int) -> "Channel":
        return cls.from_kraus([np.eye(d, dtype=complex)])

    def kraus(self, tol: float = 0.0) -> tuple[np.ndarray, ...]:
        if self.kind == "kraus":
            return self._data
        return choi_to_kraus(self.choi(), self.dim_in, self.dim_out, tol)

    def choi(self) -> np.ndarray:
        if self.kind == "kraus":
            return kraus_to_choi(self._data)
        if self.kind == "choi":
            return self._data.copy()
        return transfer_to_choi(self._data, self.dim_in, self.dim_out)

    def transfer(self) -> np.ndarray:
        if self.kind == "kraus":
            return kraus_to_transfer(self._data)
        if self.kind == "transfer":
            return self._data.copy()
        return choi_to_transfer(self._data, self.dim_in, self.dim_out)

    def apply(self, m) -> np.ndarray:
        """Act on a single-system operator."""
        m = as_operator(m)
        if m.shape != (self.dim_in, self.dim_in):
            raise ValueError(f"operator of shape {m.shape} does not match input dimension {self.dim_in}")
        if self.kind == "kraus":
            out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
            for k in self._data:
                out += k @ m @ k.conj().T
            return out
        return unvec(self.transfer() @ vec(m), (self.dim_out, self.dim_out))

    def __repr__(self) -> str:
        return f"Channel(kind={self.kind!r}, dim_in={self.dim_in}, dim_out={self.dim_out})"


def convert(channel: Channel, target: str) -> Channel:
    """Re-express a channel in the target representation.

    The underlying linear map is unchanged; round-tripping through any chain
    of representations reproduces the same Choi matrix up to eigensolver
    noise (well below 1e-10 at the dimensions used here).
    """
    if target not in _KINDS:
        raise ValueError(f"representation must be one of {_KINDS}, got {target!r}")
    if target == channel.kind:
        return channel
    if target == "kraus":
        return Channel.from_kraus(channel.kraus())
    if target == "choi":
        return Channel.from_choi(channel.choi(), channel.dim_in, channel.dim_out)
    return Channel.from_transfer(channel.transfer(), channel.dim_in, channel.dim_out)


@dataclass(frozen=True)
class ChannelClassReport:
    """Membership residuals for the CP, trace-preserving, and unital classes.

    Residuals are spectral norms; each flag records whether its residual is
    within ``tol``.
    """

    is_cp: bool
    min_choi_eigenvalue: float
    is_tp: bool
    tp_residual: float
    is_unital: bool
    unitality_residual: float
    tol: float


def classify(channel: Channel, tol: float = 1e-10) -> ChannelClassReport:
    """Report how close a map is to being CP, trace preserving, and unital."""
    c = channel.choi()
    c = (c + c.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(c)[0])
    dims = (channel.dim_in, channel.dim_out)
    tp_gap = partial_trace(c, dims, "B") - np.eye(channel.dim_in)
    unital_gap = partial_trace(c, dims, "A") - np.eye(channel.dim_out)
    tp_res = float(np.linalg.norm(tp_gap, 2))
    unital_res = float(np.linalg.norm(unital_gap, 2))
    return ChannelClassReport(
        is_cp=min_eig >= -tol,
        min_choi_eigenvalue=min_eig,
        is_tp=tp_res <= tol,
        tp_residual=tp_res,
        is_unital=unital_res <= tol,
        unitality_residual=unital_res,
        tol=tol,
    )


def _apply_first_factor(channel: Channel, state: BipartiteState) -> BipartiteState:
    da, db = state.dims
    if channel.dim_in != channel.dim_out or channel.dim_in != da:
        raise ValueError(
            f"channel must map the {da}-dimensional subsystem to itself, "
            f"got {channel.dim_in} -> {channel.dim_out}"
        )
    eye_b = np.eye(db, dtype=complex)
    out = np.zeros_like(state.matrix)
    for k in channel.kraus():
        big = tensor(k, eye_b)
        out += big @ state.matrix @ big.conj().T
    return BipartiteState(out, da, db)


def apply_on_A(channel: Channel, state: BipartiteState) -> BipartiteState:
    """Apply ``channel (x) id_B`` to a bipartite state.

    The channel must be square on A, and must be trace preserving for the
    result to pass state validation.
    """
    return _apply_first_factor(channel, state)


def apply_on_B(channel: Channel, state: BipartiteState) -> BipartiteState:
    """Apply ``id_A (x) channel`` to a bipartite state."""
    return swap_sides(_apply_first_factor(channel, swap_sides(state)))


def random_cptp(d: int, env: int, seed) -> Channel:
    """Random channel from a Haar isometry into ``d * env`` dimensions.

    The Kraus operators are the ``env`` blocks of the isometry, so the Kraus
    count equals the environment dimension and ``env=1`` gives a unitary
    channel.
    """
    if env < 1:
        raise ValueError("environment dimension must be at least 1")
    u = haar_unitary(d * env, seed)
    v = u[:, :d]
    ops = [v[e * d : (e + 1) * d, :] for e in range(env)]
    return Channel.from_kraus(ops)


def random_unitary_mixture(d: int, k: int, seed) -> Channel:
    """Random unitary operation: a Dirichlet-weighted mixture of Haar unitaries."""
    if k < 1:
        raise ValueError("mixture size must be at least 1")
    g = _rng(seed)
    p = g.dirichlet(np.ones(k))
    ops = [math.sqrt(p[i]) * haar_unitary(d, g) for i in range(k)]
    return Channel.from_kraus(ops)


def schur_channel(corr) -> Channel:
    """Entrywise (Schur product) channel M -> corr * M.

    ``corr`` must be positive semidefinite with unit diagonal.  The channel
    is unital and trace preserving and fixes every diagonal matrix; the
    all-ones matrix gives the identity channel and the identity matrix gives
    full dephasing in the computational basis.
    """
    c = as_operator(corr)
    d = c.shape[0]
    if c.shape != (d, d):
        raise ValueError("correlation matrix must be square")
    if np.abs(np.diagonal(c) - 1.0).max() > CP_TOL:
        raise ValueError("correlation matrix must have unit diagonal")
    w, q = np.linalg.eigh((c + c.conj().T) / 2)
    if w[0] < -CP_TOL:
        raise ValueError(f"correlation matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    keep = KRAUS_KEEP_RTOL * d * max(1.0, float(w.max()))
    ops = [math.sqrt(w[i]) * np.diag(q[:, i]) for i in range(d) if w[i] > keep]
    return Channel.from_kraus(ops)
