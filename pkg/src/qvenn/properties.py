"""
Randomized invariant battery behind ``qvenn property-suite``.

Each check draws its own states from a seeded generator and returns the
worst slack it observed, so a failure says by how much it failed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .blockcoding import block_report
from .channel import (
    QuantumChannel,
    channel_report,
    make_depolarizing,
    make_erasure,
    mix_channels,
    unitary_channel,
)
from .registers import (
    DensityState,
    RegisterLayout,
    apply_local,
    entangled_block_input,
    purify,
    random_density,
    random_pure,
    random_unitary,
)
from .venn import (
    DERIVED_TOL,
    INEQ_SLACK,
    chain_rule_residual,
    conditional_mutual_entropy,
    mutual_entropy,
    subset_entropy,
    ternary_mutual_entropy,
)

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class PropertyResult:
    name: str
    trials: int
    worst: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def random_tripartite_layout(rng: np.random.Generator) -> RegisterLayout:
    dims = rng.integers(2, 4, size=3)
    return RegisterLayout.of(("X", int(dims[0])), ("Y", int(dims[1])), ("Z", int(dims[2])))


def random_channel(rng: np.random.Generator, d_in: int = 2, d_out: int = 2, kraus: int = 3) -> QuantumChannel:
    """Random CPTP map: the first ``d_in`` columns of a Haar unitary, cut into Kraus blocks."""
    u = random_unitary(d_out * kraus, rng)[:, :d_in]
    ops = tuple(u[i::kraus, :] for i in range(kraus))
    return QuantumChannel(d_in, d_out, ops, "random")


def check_subadditivity(rng, trials=200) -> PropertyResult:
    worst = np.inf
    for _ in range(trials):
        da, db = (int(x) for x in rng.integers(2, 5, size=2))
        rho = random_density(RegisterLayout.of(("A", da), ("B", db)), rng)
        worst = min(worst, mutual_entropy(rho, "A", "B"))
    return PropertyResult("subadditivity S(A:B) >= 0", trials, worst, INEQ_SLACK, worst >= -INEQ_SLACK)


def check_araki_lieb(rng, trials=200) -> PropertyResult:
    worst = -np.inf
    for _ in range(trials):
        da, db = (int(x) for x in rng.integers(2, 5, size=2))
        rho = random_density(RegisterLayout.of(("A", da), ("B", db)), rng)
        cap = 2 * min(subset_entropy(rho, "A"), subset_entropy(rho, "B"))
        worst = max(worst, mutual_entropy(rho, "A", "B") - cap)
    return PropertyResult("S(A:B) <= 2 min(S(A), S(B))", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_strong_subadditivity(rng, trials=200) -> PropertyResult:
    worst = np.inf
    for _ in range(trials):
        rho = random_density(random_tripartite_layout(rng), rng)
        worst = min(worst, conditional_mutual_entropy(rho, "X", "Y", "Z"))
    return PropertyResult("strong subadditivity S(X:Y|Z) >= 0", trials, worst, INEQ_SLACK, worst >= -INEQ_SLACK)


def check_chain_rule(rng, trials=200) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        rho = random_density(random_tripartite_layout(rng), rng)
        worst = max(worst, abs(chain_rule_residual(rho, "X", "Y", "Z")))
    return PropertyResult("chain rule residual", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_pure_center(rng, trials=100) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        psi = random_pure(random_tripartite_layout(rng), rng)
        worst = max(worst, abs(ternary_mutual_entropy(psi, "X", "Y", "Z")))
    return PropertyResult("pure state => S(X:Y:Z) = 0", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_unitary_invariance(rng, trials=100) -> PropertyResult:
    from .registers import von_neumann_entropy

    worst = 0.0
    for _ in range(trials):
        d = int(rng.integers(2, 7))
        rho = random_density(RegisterLayout.of(("A", d)), rng)
        u = random_unitary(d, rng)
        rotated = DensityState(rho.layout, u @ rho.matrix @ u.conj().T)
        worst = max(worst, abs(von_neumann_entropy(rho) - von_neumann_entropy(rotated)))
    return PropertyResult("entropy unitary invariance", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def _builtin_channels(rng) -> list[QuantumChannel]:
    p = float(rng.uniform(0, 1))
    return [make_depolarizing(p), make_erasure(p), random_channel(rng), unitary_channel(random_unitary(2, rng))]


def check_channel_identities(rng, trials=100) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        for ch in _builtin_channels(rng):
            rep = channel_report(ch, random_density(RegisterLayout.of(("Q", 2)), rng))
            worst = max(worst, abs(rep.residual_IL), abs(rep.residual_IN))
    return PropertyResult("I + L = 2S and I + N = 2S(Q')", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_concavity_in_input(rng, trials=30) -> PropertyResult:
    worst = -np.inf
    layout = RegisterLayout.of(("Q", 2))
    for _ in range(trials):
        ch = random_channel(rng)
        r1, r2 = random_density(layout, rng), random_density(layout, rng)
        i1, i2 = channel_report(ch, r1).information_I, channel_report(ch, r2).information_I
        for lam in (0.25, 0.5, 0.75):
            mixed = DensityState(layout, lam * r1.matrix + (1 - lam) * r2.matrix)
            gap = lam * i1 + (1 - lam) * i2 - channel_report(ch, mixed).information_I
            worst = max(worst, gap)
    return PropertyResult("I concave in the input", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_convexity_in_channel(rng, trials=30) -> PropertyResult:
    worst = -np.inf
    layout = RegisterLayout.of(("Q", 2))
    for _ in range(trials):
        c1, c2 = random_channel(rng), random_channel(rng)
        rho = random_density(layout, rng)
        i1, i2 = channel_report(c1, rho).information_I, channel_report(c2, rho).information_I
        for lam in (0.25, 0.5, 0.75):
            mixed = channel_report(mix_channels([c1, c2], [lam, 1 - lam]), rho).information_I
            worst = max(worst, mixed - (lam * i1 + (1 - lam) * i2))
    return PropertyResult("I convex in the channel", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_purification_independence(rng, trials=30) -> PropertyResult:
    from .channel import apply_with_environment, report_from_state

    worst = 0.0
    layout = RegisterLayout.of(("Q", 2))
    for _ in range(trials):
        ch = random_channel(rng)
        rho = random_density(layout, rng)
        base = channel_report(ch, rho)
        other = apply_local(purify(rho, "R"), "R", random_unitary(2, rng))
        alt = report_from_state(apply_with_environment(ch, other, "Q", "E"))
        worst = max(
            worst,
            abs(base.information_I - alt.information_I),
            abs(base.loss_L - alt.loss_L),
            abs(base.noise_N - alt.noise_N),
        )
    return PropertyResult("report independent of purification", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


def check_block_sandwich(rng, trials=50) -> PropertyResult:
    worst = -np.inf
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        inp = random_pure(RegisterLayout((("R", 2 ** n),) + tuple((f"Q{i}", 2) for i in range(1, n + 1))), rng)
        chans = [random_channel(rng, kraus=int(rng.integers(1, 4))) for _ in range(n)]
        rep = block_report(chans, inp, [f"Q{i}" for i in range(1, n + 1)])
        sum_l, sum_i = sum(rep.per_symbol_L), sum(rep.per_symbol_I)
        worst = max(
            worst,
            rep.joint_L - sum_l,
            sum_l - 2 * rep.correlation_M - rep.joint_L,
            rep.joint_I - sum_i,
        )
    return PropertyResult("block sandwich and information subadditivity", trials, worst, DERIVED_TOL, worst <= DERIVED_TOL)


CHECKS: dict[str, Callable[[np.random.Generator], PropertyResult]] = {
    "subadditivity": check_subadditivity,
    "araki_lieb": check_araki_lieb,
    "strong_subadditivity": check_strong_subadditivity,
    "chain_rule": check_chain_rule,
    "pure_center": check_pure_center,
    "unitary_invariance": check_unitary_invariance,
    "channel_identities": check_channel_identities,
    "concavity": check_concavity_in_input,
    "convexity": check_convexity_in_channel,
    "purification_independence": check_purification_independence,
    "block_sandwich": check_block_sandwich,
}


def run_property_suite(seed: int = DEFAULT_SEED) -> list[PropertyResult]:
    results = []
    for i, check in enumerate(CHECKS.values()):
        # one stream per check so adding a check never perturbs the others
        results.append(check(np.random.default_rng([seed, i])))
    return results
