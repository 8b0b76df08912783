"""
Quantum channels as Kraus sets, their Stinespring dilations, and the
information / loss / noise report of a single channel use.

The dilation convention is ``V|psi> = sum_k (K_k|psi>) (x) |k>_E``: the
environment starts in ``|0>`` and the Kraus index is written into it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidChannelError, InvalidStateError, LayoutConflictError
from .registers import (
    DensityState,
    PureState,
    RegisterLayout,
    complex_to_pairs,
    pairs_to_complex,
    purify,
)
from .venn import DERIVED_TOL, INEQ_SLACK, mutual_entropy, subset_entropy

#: Completeness / isometry tolerance.
CHANNEL_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    input_dim: int
    output_dim: int
    kraus: tuple[np.ndarray, ...]
    name: str = "channel"

    def __post_init__(self):
        ops = []
        for k in self.kraus:
            k = np.array(k, dtype=complex)
            if k.shape != (self.output_dim, self.input_dim):
                raise DimensionMismatchError(
                    f"Kraus operator shape {k.shape}, expected {(self.output_dim, self.input_dim)}"
                )
            k.setflags(write=False)
            ops.append(k)
        if not ops:
            raise InvalidChannelError("a channel needs at least one Kraus operator")
        dev = np.max(np.abs(sum(k.conj().T @ k for k in ops) - np.eye(self.input_dim)))
        if dev > CHANNEL_TOL:
            raise InvalidChannelError(f"Kraus completeness violated by {dev:.3e}")
        object.__setattr__(self, "kraus", tuple(ops))

    @property
    def num_kraus(self) -> int:
        return len(self.kraus)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Kraus action on a bare matrix."""
        return sum(k @ rho @ k.conj().T for k in self.kraus)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "input_dim": self.input_dim,
            "output_dim": self.output_dim,
            "kraus": [complex_to_pairs(k) for k in self.kraus],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuantumChannel":
        return cls(
            int(data["input_dim"]),
            int(data["output_dim"]),
            tuple(pairs_to_complex(k) for k in data["kraus"]),
            data.get("name", "channel"),
        )


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    isometry: np.ndarray
    input_dim: int
    output_dim: int
    env_dim: int
    env_label: str

    def kraus_action(self, rho: np.ndarray) -> np.ndarray:
        """Trace the environment out of ``V rho V^dagger``."""
        big = self.isometry @ rho @ self.isometry.conj().T
        t = big.reshape(self.output_dim, self.env_dim, self.output_dim, self.env_dim)
        return np.einsum("akbk->ab", t)


def _check_probability(p: float, upper: float = 1.0) -> float:
    p = float(p)
    if not 0.0 <= p <= upper:
        raise ValueError(f"probability {p} outside [0, {upper}]")
    return p


def identity_channel(dim: int = 2) -> QuantumChannel:
    return QuantumChannel(dim, dim, (np.eye(dim),), "identity")


def unitary_channel(unitary: np.ndarray, name: str = "unitary") -> QuantumChannel:
    u = np.asarray(unitary, dtype=complex)
    return QuantumChannel(u.shape[1], u.shape[0], (u,), name)


def make_depolarizing(p: float) -> QuantumChannel:
    """Each Pauli rotation applied with probability p/3."""
    p = _check_probability(p)
    a, b = np.sqrt(1 - p), np.sqrt(p / 3)
    return QuantumChannel(
        2, 2, (a * np.eye(2), b * PAULI_X, b * PAULI_Y, b * PAULI_Z), f"depolarizing:{p:g}"
    )


def make_erasure(p: float) -> QuantumChannel:
    """Qubit-to-qutrit erasure: with probability p the output is the flag ``|2>``."""
    p = _check_probability(p)
    keep = np.zeros((3, 2))
    keep[0, 0] = keep[1, 1] = 1
    flag0 = np.zeros((3, 2))
    flag0[2, 0] = 1
    flag1 = np.zeros((3, 2))
    flag1[2, 1] = 1
    return QuantumChannel(
        2, 3, (np.sqrt(1 - p) * keep, np.sqrt(p) * flag0, np.sqrt(p) * flag1), f"erasure:{p:g}"
    )


def chain(first: QuantumChannel, second: QuantumChannel) -> QuantumChannel:
    """Sequential composition: ``second`` after ``first``."""
    if first.output_dim != second.input_dim:
        raise DimensionMismatchError(
            f"cannot chain output dim {first.output_dim} into input dim {second.input_dim}"
        )
    ops = tuple(k2 @ k1 for k1 in first.kraus for k2 in second.kraus)
    return QuantumChannel(first.input_dim, second.output_dim, ops, f"{second.name}*{first.name}")


def mix_channels(channels: Sequence[QuantumChannel], weights: Sequence[float]) -> QuantumChannel:
    """Probabilistic selection among channels.

    The Kraus sets are scaled by ``sqrt(w)`` and concatenated, so the selector
    index ends up in an orthogonal block of the environment.
    """
    weights = np.asarray(weights, dtype=float)
    if len(channels) != len(weights) or not channels:
        raise ValueError("need one weight per channel")
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise ValueError("weights must be a probability distribution")
    d_in, d_out = channels[0].input_dim, channels[0].output_dim
    for ch in channels:
        if (ch.input_dim, ch.output_dim) != (d_in, d_out):
            raise DimensionMismatchError("mixed channels must share input and output dimensions")
    ops = tuple(np.sqrt(w) * k for ch, w in zip(channels, weights) if w > 0 for k in ch.kraus)
    return QuantumChannel(d_in, d_out, ops, "mixture")


def stinespring_dilation(ch: QuantumChannel, env_label: str = "E") -> StinespringIsometry:
    n = ch.num_kraus
    v = np.zeros((ch.output_dim * n, ch.input_dim), dtype=complex)
    for k, op in enumerate(ch.kraus):
        # row index = out * n + k (output more significant than environment)
        v[k::n, :] = op
    dev = np.max(np.abs(v.conj().T @ v - np.eye(ch.input_dim)))
    if dev > CHANNEL_TOL:
        raise InvalidChannelError(f"dilation is not an isometry (deviation {dev:.3e})")
    return StinespringIsometry(v, ch.input_dim, ch.output_dim, n, env_label)


def apply_with_environment(
    ch: QuantumChannel, state: PureState, target: str, env_label: str = "E"
) -> PureState:
    """Run ``target`` through the dilated channel.

    The target keeps its label (now with the output dimension) and the
    environment is appended as the last subsystem.
    """
    layout = state.layout
    axis = layout.index(target)
    if layout.dims[axis] != ch.input_dim:
        raise DimensionMismatchError(
            f"subsystem {target!r} has dimension {layout.dims[axis]}, channel expects {ch.input_dim}"
        )
    if env_label in layout:
        raise LayoutConflictError(f"environment label {env_label!r} already in use")
    dil = stinespring_dilation(ch, env_label)
    v = dil.isometry.reshape(ch.output_dim, dil.env_dim, ch.input_dim)
    psi = np.tensordot(v, state.tensor(), axes=([2], [axis]))
    # axes now: out, env, <other subsystems in order>
    psi = np.moveaxis(psi, 0, axis + 1)
    psi = np.moveaxis(psi, 0, -1)
    subsystems = list(layout.subsystems)
    subsystems[axis] = (target, ch.output_dim)
    subsystems.append((env_label, dil.env_dim))
    return PureState(RegisterLayout(tuple(subsystems)), psi.ravel())


@dataclass(frozen=True)
class ChannelReport:
    source_entropy_S: float
    information_I: float
    loss_L: float
    noise_N: float
    output_entropy: float
    residual_IL: float
    residual_IN: float

    def check(self) -> list[str]:
        broken = []
        if abs(self.residual_IL) > DERIVED_TOL:
            broken.append("I + L != 2S")
        if abs(self.residual_IN) > DERIVED_TOL:
            broken.append("I + N != 2S(Q')")
        for name in ("information_I", "loss_L", "noise_N"):
            if getattr(self, name) < -INEQ_SLACK:
                broken.append(f"{name} is negative")
        return broken

    def to_json(self) -> dict:
        return asdict(self)


def report_from_state(joint: PureState, ref: str = "R", out: str = "Q", env: str = "E") -> ChannelReport:
    """Information, loss and noise read off a purified post-channel state."""
    s = subset_entropy(joint, ref)
    s_out = subset_entropy(joint, out)
    i = mutual_entropy(joint, ref, out)
    loss = mutual_entropy(joint, ref, env)
    noise = mutual_entropy(joint, out, env)
    return ChannelReport(
        source_entropy_S=s,
        information_I=i,
        loss_L=loss,
        noise_N=noise,
        output_entropy=s_out,
        residual_IL=i + loss - 2 * s,
        residual_IN=i + noise - 2 * s_out,
    )


def channel_report(ch: QuantumChannel, input: DensityState) -> ChannelReport:
    """Purify ``input``, dilate ``ch`` and report (S, I, L, N)."""
    if input.layout.total_dim != ch.input_dim:
        raise DimensionMismatchError(
            f"input dimension {input.layout.total_dim} does not match channel input {ch.input_dim}"
        )
    q = RegisterLayout.of(("Q", ch.input_dim))
    rho = DensityState(q, input.matrix)
    joint = apply_with_environment(ch, purify(rho, "R"), "Q", "E")
    return report_from_state(joint)


@dataclass(frozen=True)
class DataProcessingRecord:
    L1: float
    L12: float
    I1: float
    I12: float
    N2: float
    N12: float
    I2: float
    source_entropy: float

    def violations(self) -> list[str]:
        broken = []
        if self.L1 < -INEQ_SLACK or self.L1 > self.L12 + DERIVED_TOL:
            broken.append("0 <= L1 <= L12")
        if self.I12 > self.I1 + DERIVED_TOL:
            broken.append("I12 <= I1")
        if self.N2 < -INEQ_SLACK or self.N2 > self.N12 + DERIVED_TOL:
            broken.append("0 <= N2 <= N12")
        if self.I12 > self.I2 + DERIVED_TOL:
            broken.append("I12 <= I2")
        return broken

    def to_json(self) -> dict:
        return asdict(self)


def data_processing_check(
    first: QuantumChannel, second: QuantumChannel, input: DensityState
) -> DataProcessingRecord:
    """Chain two channels with separate environments and compare losses.

    The second channel's own information ``I2`` uses ``R E'`` as the
    reference, since that is what purifies its input.
    """
    if first.output_dim != second.input_dim:
        raise DimensionMismatchError("channels are not chainable")
    if input.layout.total_dim != first.input_dim:
        raise DimensionMismatchError("input does not match first channel")
    rho = DensityState(RegisterLayout.of(("Q", first.input_dim)), input.matrix)
    psi = apply_with_environment(first, purify(rho, "R"), "Q", "E1")
    psi = apply_with_environment(second, psi, "Q", "E2")
    record = DataProcessingRecord(
        L1=mutual_entropy(psi, "R", "E1"),
        L12=mutual_entropy(psi, "R", {"E1", "E2"}),
        I1=mutual_entropy(psi, "R", {"Q", "E2"}),
        I12=mutual_entropy(psi, "R", "Q"),
        N2=mutual_entropy(psi, "Q", "E2"),
        N12=mutual_entropy(psi, "Q", {"E1", "E2"}),
        I2=mutual_entropy(psi, {"R", "E1"}, "Q"),
        source_entropy=subset_entropy(psi, "R"),
    )
    broken = record.violations()
    if broken:
        raise InvalidStateError(f"data-processing inequality violated: {broken}")
    return record
