"""
Capacity bounds for the erasure and depolarizing channels.

The n-symbol channel is decomposed into a binomial mixture of "pattern"
channels, each of which either passes a symbol untouched or replaces it by
something independent of the reference (the erasure flag ``|2>``, or the
fully mixed qubit for depolarizing noise). Convexity of the information in
the output then bounds the joint information by the weighted pattern sum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blockcoding import MAX_SYMBOLS, parallel_apply
from .channel import QuantumChannel, identity_channel, make_depolarizing, make_erasure
from .errors import InvalidStateError
from .registers import PureState
from .venn import DERIVED_TOL, mutual_entropy, subset_entropy

MODELS = ("erasure", "depolarizing")
#: Largest depolarizing probability for which the channel is a mixture of
#: "untouched" and "fully randomized".
DEPOLARIZING_MIXTURE_MAX = 0.75


def dyadic_entropy(x: float) -> float:
    """Binary Shannon entropy H(x) in bits."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1 - x) * math.log2(1 - x))


def _check_model(model: str, p: float) -> None:
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    upper = DEPOLARIZING_MIXTURE_MAX if model == "depolarizing" else 1.0
    if not 0.0 <= p <= upper:
        raise ValueError(f"p={p} outside [0, {upper}] for the {model} model")


def weight_parameter(p: float, model: str) -> float:
    """Probability that a single symbol is replaced: p, or 4p/3 for depolarizing."""
    return p if model == "erasure" else 4.0 * p / 3.0


def dual_parameter(p: float, model: str) -> float:
    return 1.0 - p if model == "erasure" else DEPOLARIZING_MIXTURE_MAX - p


def noisy_channel(p: float, model: str) -> QuantumChannel:
    return make_erasure(p) if model == "erasure" else make_depolarizing(p)


def _pattern_channels(model: str) -> tuple[QuantumChannel, QuantumChannel]:
    # (untouched, replaced); the erasure pair keeps the qutrit output space
    if model == "erasure":
        return make_erasure(0.0), make_erasure(1.0)
    return identity_channel(2), make_depolarizing(DEPOLARIZING_MIXTURE_MAX)


@dataclass(frozen=True)
class MixtureAnalysis:
    n: int
    p: float
    model: str
    weight_parameter: float
    source_entropy: float
    joint_I: float
    joint_L: float
    convex_bound: float
    weights: tuple[tuple[tuple[int, ...], float], ...]
    per_pattern_I: tuple[float, ...]
    intermediate_bound: float

    def violations(self) -> list[str]:
        broken = []
        total = sum(w for _, w in self.weights)
        if abs(total - 1.0) > 1e-10:
            broken.append("weights do not sum to 1")
        if self.joint_I > self.convex_bound + DERIVED_TOL:
            broken.append("joint I exceeds the convex bound")
        return broken

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "model": self.model,
            "weight_parameter": self.weight_parameter,
            "source_entropy": self.source_entropy,
            "joint_I": self.joint_I,
            "joint_L": self.joint_L,
            "convex_bound": self.convex_bound,
            "intermediate_bound": self.intermediate_bound,
            "patterns": [
                {"replaced": list(pat), "weight": w, "I_c": i}
                for (pat, w), i in zip(self.weights, self.per_pattern_I)
            ],
        }


def _joint_information(
    channels: Sequence[QuantumChannel], input: PureState, symbols: Sequence[str], reference: str
) -> tuple[float, float]:
    envs = [f"E_{s}" for s in symbols]
    psi = parallel_apply(channels, input, symbols, envs)
    return mutual_entropy(psi, reference, symbols), mutual_entropy(psi, reference, envs)


def binomial_mixture_analysis(
    n: int,
    p: float,
    input: PureState,
    model: str = "erasure",
    symbols: Sequence[str] | None = None,
    reference: str = "R",
) -> MixtureAnalysis:
    """Joint information of the n-symbol channel against its convex bound.

    Patterns are 1-based tuples of replaced symbol positions. ``I_c`` is
    computed by actually running the pattern channel, not assumed to equal
    S(R:Q_u(c)).
    """
    _check_model(model, p)
    if n > MAX_SYMBOLS:
        raise ValueError(f"n={n} exceeds the cap of {MAX_SYMBOLS} symbols")
    if symbols is None:
        symbols = [label for label in input.layout.labels if label != reference]
    symbols = list(symbols)
    if len(symbols) != n:
        raise InvalidStateError(f"input carries {len(symbols)} symbols, expected {n}")

    q = weight_parameter(p, model)
    keep, replace = _pattern_channels(model)
    weights, per_pattern = [], []
    for mask in itertools.product((False, True), repeat=n):
        replaced = tuple(i + 1 for i, r in enumerate(mask) if r)
        e = len(replaced)
        w = q ** e * (1 - q) ** (n - e)
        chans = [replace if r else keep for r in mask]
        i_c, _ = _joint_information(chans, input, symbols, reference)
        weights.append((replaced, w))
        per_pattern.append(i_c)

    joint_i, joint_l = _joint_information([noisy_channel(p, model)] * n, input, symbols, reference)
    source = subset_entropy(input, reference)
    return MixtureAnalysis(
        n=n,
        p=p,
        model=model,
        weight_parameter=q,
        source_entropy=source,
        joint_I=joint_i,
        joint_L=joint_l,
        convex_bound=float(sum(w * i for (_, w), i in zip(weights, per_pattern))),
        weights=tuple(weights),
        per_pattern_I=tuple(per_pattern),
        intermediate_bound=source + n * (1 - 2 * q),
    )


@dataclass(frozen=True)
class DualRelation:
    p: float
    dual_p: float
    k: float
    I_p: float
    I_1mp: float
    L_p: float
    L_1mp: float

    @property
    def sum_I(self) -> float:
        return self.I_p + self.I_1mp

    @property
    def sum_L(self) -> float:
        return self.L_p + self.L_1mp

    def to_json(self) -> dict:
        return {
            "p": self.p, "dual_p": self.dual_p, "k": self.k,
            "I_p": self.I_p, "I_dual": self.I_1mp, "L_p": self.L_p, "L_dual": self.L_1mp,
            "sum_I": self.sum_I, "sum_L": self.sum_L,
        }


def dual_channel_relation(
    n: int,
    p: float,
    input: PureState,
    model: str = "erasure",
    symbols: Sequence[str] | None = None,
    reference: str = "R",
) -> DualRelation:
    """I(p) + I(p*) <= 2k and L(p) + L(p*) >= 2k for the dual parameter p*.

    The dual of p is 1 - p for erasure and 3/4 - p for depolarizing noise.
    """
    _check_model(model, p)
    if symbols is None:
        symbols = [label for label in input.layout.labels if label != reference]
    symbols = list(symbols)
    if len(symbols) != n:
        raise InvalidStateError(f"input carries {len(symbols)} symbols, expected {n}")
    dual = dual_parameter(p, model)
    i_p, l_p = _joint_information([noisy_channel(p, model)] * n, input, symbols, reference)
    i_d, l_d = _joint_information([noisy_channel(dual, model)] * n, input, symbols, reference)
    k = subset_entropy(input, reference)
    rel = DualRelation(p, dual, k, i_p, i_d, l_p, l_d)
    if rel.sum_I > 2 * k + DERIVED_TOL or rel.sum_L < 2 * k - DERIVED_TOL:
        raise InvalidStateError(f"dual-channel relation violated: {rel}")
    return rel


def average_loss_lower_bound(p: float, rate: float, model: str = "erasure") -> float:
    """Lower bound on the loss per symbol at a given rate: R + 2p - 1 or R + 8p/3 - 1."""
    _check_model(model, p)
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate {rate} outside [0, 1]")
    slope = 2.0 if model == "erasure" else 8.0 / 3.0
    return max(rate + slope * p - 1.0, 0.0)


def paired_pattern_terms(state: PureState, erased: Sequence[str], erased_prime: Sequence[str]) -> tuple[float, float]:
    """For two disjoint erasure patterns return the paired sum and 2 S(Q*).

    ``state`` must be pure over the reference and the symbols; every symbol
    that is in neither pattern belongs to the overlap ``Q*``. The paired sum
    is S(Q_u) - S(Q_e) + S(Q_u') - S(Q_e').
    """
    erased, erased_prime = set(erased), set(erased_prime)
    if erased & erased_prime:
        raise ValueError("paired patterns must be disjoint")
    symbols = [label for label in state.layout.labels if label != "R"]
    overlap = [s for s in symbols if s not in erased | erased_prime]
    unerased = [s for s in symbols if s not in erased]
    unerased_prime = [s for s in symbols if s not in erased_prime]

    def s(labels) -> float:
        return subset_entropy(state, labels) if labels else 0.0

    paired = s(unerased) - s(erased) + s(unerased_prime) - s(erased_prime)
    return paired, 2 * s(overlap)


# ----------------------------------------------------------------------------
# Bound catalog
# ----------------------------------------------------------------------------

FORMULA_IDS = (
    "erasure_1_2p",
    "errors_1_4p",
    "depol_8p3",
    "depol_cloning_4p",
    "depol_hashing_1_Hp",
    "stabilizer_H_bound",
)

#: validity interval of each formula, and the note printed with it
_VALIDITY = {
    "erasure_1_2p": ((0.0, 1.0), "erasure channel; exact capacity"),
    "errors_1_4p": ((0.0, 1.0), "p-bounded fraction of errors (Singleton, t errors = 2t erasures)"),
    "depol_8p3": ((0.0, 0.75), "depolarizing channel, entropic bound; not attainable"),
    "depol_cloning_4p": ((0.0, 0.75), "depolarizing channel, universal-cloning bound"),
    "depol_hashing_1_Hp": ((0.0, 0.5), "depolarizing channel, additive-code bound for a restricted range of p"),
    "stabilizer_H_bound": ((0.0, 0.25), "additive (stabilizer) codes, bounded fraction of errors"),
}

NONDEGENERATE_THRESHOLD = 1.0 / 6.0


def _clamp(x: float) -> float:
    return min(max(float(x), 0.0), 1.0)


def bound_value(formula_id: str, p: float) -> float:
    """Clamped rate ceiling R_max(p) for one catalog formula."""
    if formula_id == "erasure_1_2p":
        return _clamp(1 - 2 * p)
    if formula_id == "errors_1_4p":
        return _clamp(1 - 4 * p)
    if formula_id == "depol_8p3":
        return _clamp(1 - 8 * p / 3)
    if formula_id == "depol_cloning_4p":
        return _clamp(1 - 4 * p)
    if formula_id == "depol_hashing_1_Hp":
        return _clamp(1 - dyadic_entropy(min(p, 0.5)))
    if formula_id == "stabilizer_H_bound":
        if p >= 0.25:
            # rate of any code vanishes once 1 - 4p <= 0
            return 0.0
        return _clamp(dyadic_entropy(0.5 + math.sqrt(2 * p * (1 - 2 * p))))
    raise ValueError(f"unknown formula id {formula_id!r}")


@dataclass(frozen=True)
class CatalogEntry:
    formula_id: str
    r_max: float
    validity_note: str
    in_validity_range: bool


def capacity_bound_catalog(p: float) -> list[CatalogEntry]:
    """Every bound formula evaluated at ``p``, plus the nondegenerate-code flag."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    entries = []
    for fid in FORMULA_IDS:
        (lo, hi), note = _VALIDITY[fid]
        entries.append(CatalogEntry(fid, bound_value(fid, p), note, lo <= p <= hi))
    flag = p >= NONDEGENERATE_THRESHOLD
    entries.append(
        CatalogEntry(
            "nondegenerate_zero_rate_flag",
            0.0 if flag else 1.0,
            "R = 0 for nondegenerate codes when p >= 1/6" if flag else "p < 1/6: no nondegenerate-code constraint",
            flag,
        )
    )
    return entries


@dataclass(frozen=True)
class BoundCurve:
    name: str
    formula_id: str
    samples: tuple[tuple[float, float], ...] = field(default=())

    def is_monotone(self) -> bool:
        """Non-increasing over the formula's validity range."""
        (lo, hi), _ = _VALIDITY[self.formula_id]
        vals = [r for p, r in self.samples if lo <= p <= hi]
        return all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def bound_curve(formula_id: str, p_grid: Sequence[float]) -> BoundCurve:
    return BoundCurve(formula_id, formula_id, tuple((float(p), bound_value(formula_id, p)) for p in p_grid))


MODEL_FORMULAS = {
    "erasure": ("erasure_1_2p",),
    "depolarizing": ("depol_8p3", "depol_cloning_4p", "depol_hashing_1_Hp"),
    "errors": ("errors_1_4p", "stabilizer_H_bound"),
    "all": FORMULA_IDS,
}


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` inclusive of ``stop`` (within rounding)."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValueError(f"grid {text!r} is not start:stop:step") from None
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)
