"""
Shannon information, loss and noise of classical discrete channels.

Serves as the exact classical counterpart of the quantum report: ``I + L``
is the source entropy ``H(X)``, with no factor of two.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .channel import QuantumChannel, apply_with_environment
from .errors import DimensionMismatchError, InvalidStateError
from .registers import DensityState, PureState, RegisterLayout, spectrum_entropy
from .venn import conditional_mutual_entropy, mutual_entropy

CLASSICAL_TOL = 1e-12
BLOCK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Distribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float).ravel()
        if np.any(p < -CLASSICAL_TOL) or abs(p.sum() - 1.0) > CLASSICAL_TOL:
            raise InvalidStateError("probabilities must be non-negative and sum to 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @classmethod
    def uniform(cls, size: int) -> "Distribution":
        return cls(np.full(size, 1.0 / size))

    def __len__(self) -> int:
        return self.probabilities.size


@dataclass(frozen=True, eq=False)
class ClassicalChannel:
    """Transition matrix ``p(y|x)`` with rows indexed by ``x``."""

    transition: np.ndarray

    def __post_init__(self):
        t = np.array(self.transition, dtype=float)
        if t.ndim != 2:
            raise DimensionMismatchError("transition must be a matrix")
        for row in t:
            Distribution(row)
        t.setflags(write=False)
        object.__setattr__(self, "transition", t)

    @property
    def input_size(self) -> int:
        return self.transition.shape[0]

    @property
    def output_size(self) -> int:
        return self.transition.shape[1]

    def to_json(self) -> dict:
        return {"transition": self.transition.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "ClassicalChannel":
        return cls(np.asarray(data["transition"], dtype=float))


def binary_symmetric(q: float) -> ClassicalChannel:
    return ClassicalChannel(np.array([[1 - q, q], [q, 1 - q]]))


def entropy_bits(p: np.ndarray) -> float:
    return spectrum_entropy(np.ravel(p))


@dataclass(frozen=True)
class ClassicalReport:
    I: float
    L: float
    N: float
    H_X: float
    H_Y: float

    def to_json(self) -> dict:
        return asdict(self)


def _report_from_joint(joint: np.ndarray) -> ClassicalReport:
    h_xy = entropy_bits(joint)
    h_x = entropy_bits(joint.sum(axis=1))
    h_y = entropy_bits(joint.sum(axis=0))
    return ClassicalReport(I=h_x + h_y - h_xy, L=h_xy - h_y, N=h_xy - h_x, H_X=h_x, H_Y=h_y)


def classical_report(ch: ClassicalChannel, input: Distribution) -> ClassicalReport:
    """I = H(X:Y), L = H(X|Y), N = H(Y|X) from the joint ``p(x) p(y|x)``."""
    if len(input) != ch.input_size:
        raise DimensionMismatchError(f"input has {len(input)} symbols, channel expects {ch.input_size}")
    return _report_from_joint(input.probabilities[:, None] * ch.transition)


@dataclass(frozen=True)
class ClassicalBlockReport:
    n: int
    joint_I: float
    joint_L: float
    per_I: tuple[float, ...]
    per_L: tuple[float, ...]
    M: float
    H_X: float
    rate_bound: float

    def violations(self) -> list[str]:
        broken = []
        if self.joint_I > sum(self.per_I) + BLOCK_TOL:
            broken.append("I <= sum I_i")
        if self.joint_L > sum(self.per_L) + BLOCK_TOL:
            broken.append("L <= sum L_i")
        if self.joint_L < sum(self.per_L) - self.M - BLOCK_TOL:
            broken.append("sum L_i - M <= L")
        return broken

    def to_json(self) -> dict:
        data = asdict(self)
        data["per_I"], data["per_L"] = list(self.per_I), list(self.per_L)
        return data


def classical_block_report(channels: Sequence[ClassicalChannel], joint_input: np.ndarray) -> ClassicalBlockReport:
    """Joint and one-symbol quantities for independent parallel channels.

    ``joint_input`` has one axis per symbol (or is flat, row-major).
    """
    sizes = [ch.input_size for ch in channels]
    p = np.asarray(joint_input, dtype=float)
    if p.size != int(np.prod(sizes)):
        raise DimensionMismatchError(f"joint input has {p.size} entries, channels need {int(np.prod(sizes))}")
    p = Distribution(p.ravel()).probabilities.reshape(sizes)
    n = len(channels)

    transition = reduce(np.kron, (ch.transition for ch in channels))
    joint = _report_from_joint(p.ravel()[:, None] * transition)

    per_i, per_l, h_marg = [], [], []
    for i, ch in enumerate(channels):
        marginal = p.sum(axis=tuple(j for j in range(n) if j != i))
        rep = classical_report(ch, Distribution(marginal))
        per_i.append(rep.I)
        per_l.append(rep.L)
        h_marg.append(rep.H_X)
    report = ClassicalBlockReport(
        n=n,
        joint_I=joint.I,
        joint_L=joint.L,
        per_I=tuple(per_i),
        per_L=tuple(per_l),
        M=sum(h_marg) - joint.H_X,
        H_X=joint.H_X,
        rate_bound=sum(per_i) / n,
    )
    broken = report.violations()
    if broken:
        raise InvalidStateError(f"classical subadditivity violated: {broken}")
    return report


# ----------------------------------------------------------------------------
# Quantum embedding
# ----------------------------------------------------------------------------

def embed_classical_channel(ch: ClassicalChannel) -> QuantumChannel:
    """Dephasing embedding with Kraus operators ``sqrt(p(y|x)) |y><x|``."""
    ops = []
    for x in range(ch.input_size):
        for y in range(ch.output_size):
            if ch.transition[x, y] > 0:
                k = np.zeros((ch.output_size, ch.input_size))
                k[y, x] = np.sqrt(ch.transition[x, y])
                ops.append(k)
    return QuantumChannel(ch.input_size, ch.output_size, tuple(ops), "classical")


def classically_correlated_input(dist: Distribution) -> DensityState:
    """``sum_x p(x) |x><x|_R (x) |x><x|_Q``."""
    d = len(dist)
    m = np.zeros((d * d, d * d))
    for x, px in enumerate(dist.probabilities):
        m[x * d + x, x * d + x] = px
    return DensityState(RegisterLayout.of(("R", d), ("Q", d)), m)


def quantum_view(ch: ClassicalChannel, input: Distribution) -> dict:
    """Information and loss of the embedded channel with a classical reference.

    Since the reference is only classically correlated, the state of R, Q'
    and E' is mixed, and the loss is taken in its conditional form
    S(R:E'|Q'); the unconditional S(R:E') is returned alongside. The state is purified by
    an extra register ``X`` so the pure-state marginal machinery applies.
    """
    q = embed_classical_channel(ch)
    d = len(input)
    amps = np.zeros((d, d, d))
    for x, px in enumerate(input.probabilities):
        amps[x, x, x] = np.sqrt(px)
    psi = PureState(RegisterLayout.of(("X", d), ("R", d), ("Q", d)), amps.ravel())
    psi = apply_with_environment(q, psi, "Q", "E")
    return {
        "I": mutual_entropy(psi, "R", "Q"),
        "L": conditional_mutual_entropy(psi, "R", "E", "Q"),
        "S(R:E')": mutual_entropy(psi, "R", "E"),
    }
