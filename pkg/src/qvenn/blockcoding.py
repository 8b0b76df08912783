"""
Joint n-symbol use of memoryless channels.

Each symbol gets its own channel and its own fresh environment. Per-symbol
quantities treat every other input symbol as part of the reference, which is
what purifies a single symbol.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

from .channel import QuantumChannel, apply_with_environment
from .errors import DimensionMismatchError, LayoutConflictError
from .registers import PureState
from .venn import DERIVED_TOL, INEQ_SLACK, mutual_entropy, subset_entropy

MAX_SYMBOLS = 6


def default_env_labels(symbols: Sequence[str]) -> list[str]:
    return [f"E_{s}" for s in symbols]


def parallel_apply(
    channels: Sequence[QuantumChannel],
    input: PureState,
    symbols: Sequence[str],
    env_labels: Sequence[str] | None = None,
) -> PureState:
    """Apply ``channels[i]`` to ``symbols[i]`` with environment ``env_labels[i]``."""
    if len(channels) != len(symbols):
        raise DimensionMismatchError(f"{len(channels)} channels for {len(symbols)} symbols")
    env_labels = list(env_labels or default_env_labels(symbols))
    if len(env_labels) != len(symbols) or len(set(env_labels)) != len(env_labels):
        raise LayoutConflictError("need one distinct environment label per symbol")
    state = input
    for ch, sym, env in zip(channels, symbols, env_labels):
        state = apply_with_environment(ch, state, sym, env)
    return state


@dataclass(frozen=True)
class BlockReport:
    n: int
    source_entropy: float
    joint_I: float
    joint_L: float
    per_symbol_I: tuple[float, ...]
    per_symbol_L: tuple[float, ...]
    per_symbol_S: tuple[float, ...]
    correlation_M: float
    average_loss_l: float
    one_symbol_loss_l1: float
    rate_bound: float

    def violations(self) -> list[str]:
        broken = []
        if abs(self.joint_I + self.joint_L - 2 * self.source_entropy) > DERIVED_TOL:
            broken.append("joint I + L != 2 S(Q1...Qn)")
        sum_l = sum(self.per_symbol_L)
        if self.joint_L > sum_l + DERIVED_TOL:
            broken.append("L <= sum L_i")
        if self.joint_L < sum_l - 2 * self.correlation_M - DERIVED_TOL:
            broken.append("sum L_i - 2M <= L")
        if self.joint_I > sum(self.per_symbol_I) + DERIVED_TOL:
            broken.append("I <= sum I_i")
        if self.correlation_M < -INEQ_SLACK:
            broken.append("M >= 0")
        return broken

    def to_json(self) -> dict:
        data = asdict(self)
        data["per_symbol_I"] = list(self.per_symbol_I)
        data["per_symbol_L"] = list(self.per_symbol_L)
        data["per_symbol_S"] = list(self.per_symbol_S)
        return data


def block_report(
    channels: Sequence[QuantumChannel],
    input: PureState,
    symbols: Sequence[str],
    reference: str | Sequence[str] = "R",
) -> BlockReport:
    """Joint and one-symbol information and loss of a block of channel uses.

    ``reference`` may name several labels; all of them together purify the
    input symbols.
    """
    ref = {reference} if isinstance(reference, str) else set(reference)
    symbols = list(symbols)
    n = len(symbols)
    envs = default_env_labels(symbols)
    joint = parallel_apply(channels, input, symbols, envs)

    per_i, per_l, per_s = [], [], []
    for i, (ch, sym) in enumerate(zip(channels, symbols)):
        single = apply_with_environment(ch, input, sym, envs[i])
        enlarged = ref | (set(symbols) - {sym})
        per_i.append(mutual_entropy(single, enlarged, sym))
        per_l.append(mutual_entropy(single, enlarged, envs[i]))
        per_s.append(subset_entropy(input, sym))

    source = subset_entropy(input, symbols)
    joint_l = mutual_entropy(joint, ref, envs)
    return BlockReport(
        n=n,
        source_entropy=source,
        joint_I=mutual_entropy(joint, ref, symbols),
        joint_L=joint_l,
        per_symbol_I=tuple(per_i),
        per_symbol_L=tuple(per_l),
        per_symbol_S=tuple(per_s),
        correlation_M=sum(per_s) - source,
        average_loss_l=joint_l / n,
        one_symbol_loss_l1=sum(per_l) / n,
        rate_bound=sum(per_i) / (2 * n),
    )


def rate_bound_one_symbol(report: BlockReport) -> float:
    """Half the averaged one-symbol information, sum(I_i) / 2n.

    Upper bound on the rate S(Q1...Qn)/n of a block transmitted without loss.
    """
    return sum(report.per_symbol_I) / (2 * report.n)
