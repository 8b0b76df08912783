"""
Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line. The lines are also collected
and repeated in the pytest terminal summary. Run standalone with
``python3 tests/test_acceptance.py``.
"""

import itertools
import sys

import numpy as np
import pytest

from qvenn.blockcoding import block_report
from qvenn.bounds import binomial_mixture_analysis, bound_value, dual_channel_relation, dyadic_entropy
from qvenn.channel import (
    apply_with_environment,
    channel_report,
    data_processing_check,
    identity_channel,
    make_depolarizing,
    make_erasure,
    report_from_state,
)
from qvenn.classical import ClassicalChannel, Distribution, binary_symmetric, classical_block_report, classical_report
from qvenn.codes import five_qubit_code, four_two_code, singleton_max_k, verify_erasure_code
from qvenn.properties import random_channel, random_tripartite_layout
from qvenn.registers import (
    DensityState,
    RegisterLayout,
    bell_state,
    clipped_spectrum,
    entangled_block_input,
    partial_trace,
    random_density,
    random_pure,
)
from qvenn.sidechannel import (
    build_teleportation_model,
    encode_with_side_channel,
    lossless_amplification_check,
    side_channel_diagram,
    verify_side_channel_code,
)
from qvenn.venn import (
    chain_rule_residual,
    conditional_mutual_entropy,
    mutual_entropy,
    subset_entropy,
    ternary_mutual_entropy,
)

SEED = 20240601
MIXED = DensityState.maximally_mixed(RegisterLayout.of(("Q", 2)))
RESULTS: list[str] = []


def _record(number: int, title: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number:2d} {status}: {title}"
    if failures:
        line += " | " + "; ".join(failures[:3])
    RESULTS.append(line)
    print(line)


def _near(name: str, value: float, target: float, tol: float, failures: list[str]) -> None:
    if not abs(value - target) <= tol:
        failures.append(f"{name}={value!r} expected {target!r} within {tol:g}")


def _holds(name: str, ok: bool, failures: list[str]) -> None:
    if not ok:
        failures.append(name)


# ----------------------------------------------------------------------------
# criteria
# ----------------------------------------------------------------------------

def criterion_1() -> list[str]:
    f = []
    rep = channel_report(make_depolarizing(0.75), MIXED)
    _near("I(3/4)", rep.information_I, 0.0, 1e-8, f)
    _near("L(3/4)", rep.loss_L, 2.0, 1e-8, f)
    rng = np.random.default_rng(SEED)
    inputs = [MIXED] + [random_density(RegisterLayout.of(("Q", 2)), rng) for _ in range(20)]
    for rho in inputs:
        rep = channel_report(identity_channel(), rho)
        _near("identity L", rep.loss_L, 0.0, 1e-8, f)
        _near("identity N", rep.noise_N, 0.0, 1e-8, f)
    return f


def criterion_2() -> list[str]:
    f = []
    for p in (0.0, 0.25, 0.5, 0.75):
        joint = apply_with_environment(make_depolarizing(p), bell_state("R", "Q"), "Q", "E")
        spec = np.sort(clipped_spectrum(partial_trace(joint, ["R", "Q"]).matrix))
        expected = np.sort([1 - p, p / 3, p / 3, p / 3])
        _holds(f"spectrum p={p}: {spec}", np.max(np.abs(spec - expected)) <= 1e-9, f)
        rep = report_from_state(joint)
        _near(f"I+L p={p}", rep.information_I + rep.loss_L, 2.0, 1e-8, f)
    return f


def criterion_3() -> list[str]:
    f = []
    for p in np.linspace(0, 1, 11):
        rep = channel_report(make_erasure(p), MIXED)
        _near(f"I({p:.1f})", rep.information_I, 2 * (1 - p), 1e-8, f)
        _near(f"L({p:.1f})", rep.loss_L, 2 * p, 1e-8, f)
        rel = dual_channel_relation(1, float(p), bell_state("R", "Q1"), "erasure")
        _near(f"L({p:.1f})+L(1-p)", rel.sum_L, 2.0, 1e-8, f)
    half = channel_report(make_erasure(0.5), MIXED).loss_L
    _holds(f"L(1/2)={half} >= 1", half >= 1 - 1e-8, f)
    return f


def criterion_4() -> list[str]:
    f = []
    five, four = five_qubit_code(), four_two_code()
    v = verify_erasure_code(five, 2)
    _holds(f"five-qubit e=2 correctable (worst {v.worst_pattern_loss:.2e})", v.correctable and v.worst_pattern_loss <= 1e-7, f)
    _holds("five-qubit e=2 checks 10 patterns", v.patterns_checked == 10, f)
    _holds("five-qubit e=3 not correctable", not verify_erasure_code(five, 3).correctable, f)
    v = verify_erasure_code(four, 1)
    _holds("four-two e=1 correctable over 4 patterns", v.correctable and v.patterns_checked == 4, f)
    _holds("k = n - 2e for five-qubit", five.k == singleton_max_k(5, 2), f)
    _holds("k = n - 2e for four-two", four.k == singleton_max_k(4, 1), f)
    return f


def criterion_5() -> list[str]:
    f = []
    _holds("erasure R_max(0.5) == 0", bound_value("erasure_1_2p", 0.5) == 0.0, f)
    _holds("depolarizing R_max(3/8) == 0", bound_value("depol_8p3", 3 / 8) == 0.0, f)
    _holds("cloning R_max(1/4) == 0", bound_value("depol_cloning_4p", 0.25) == 0.0, f)
    for p in np.linspace(0, 0.25, 101):
        _holds(f"1-4p <= 1-8p/3 at p={p}", bound_value("depol_cloning_4p", p) <= bound_value("depol_8p3", p), f)
    return f


def criterion_6() -> list[str]:
    f = []
    for n, p, entangled in itertools.product((1, 2, 3), (0.2, 0.5), (True, False)):
        a = binomial_mixture_analysis(n, p, entangled_block_input(n, entangled), "erasure")
        _holds(f"n={n} p={p} joint_I <= convex bound", a.joint_I <= a.convex_bound + 1e-8, f)
        if n == 1:
            _near(f"n=1 p={p} equality", a.joint_I, a.convex_bound, 1e-8, f)
    return f


def criterion_7() -> list[str]:
    f = []
    rng = np.random.default_rng(SEED + 7)
    for trial in range(50):
        n = int(rng.integers(1, 4))
        symbols = [f"Q{i}" for i in range(1, n + 1)]
        inp = random_pure(RegisterLayout((("R", 2 ** n),) + tuple((s, 2) for s in symbols)), rng)
        rep = block_report([random_channel(rng, kraus=int(rng.integers(1, 4))) for _ in range(n)], inp, symbols)
        sum_l = sum(rep.per_symbol_L)
        _holds(f"trial {trial} sandwich", sum_l - 2 * rep.correlation_M - 1e-8 <= rep.joint_L <= sum_l + 1e-8, f)
        _holds(f"trial {trial} I <= sum I_i", rep.joint_I <= sum(rep.per_symbol_I) + 1e-8, f)
    for n in (1, 2, 3):
        symbols = [f"Q{i}" for i in range(1, n + 1)]
        chans = [random_channel(rng) for _ in range(n)]
        rep = block_report(chans, entangled_block_input(n, entangled=False), symbols)
        _holds(f"independent n={n} M={rep.correlation_M:.2e}", abs(rep.correlation_M) <= 1e-9, f)
    return f


def criterion_8() -> list[str]:
    f = []
    rec = data_processing_check(make_depolarizing(0.25), make_depolarizing(0.25), MIXED)
    _holds(f"L12={rec.L12} >= L1={rec.L1}", rec.L12 >= rec.L1 - 1e-8, f)
    _holds(f"I12={rec.I12} <= I1={rec.I1}", rec.I12 <= rec.I1 + 1e-8, f)
    _holds(f"N2={rec.N2} <= N12={rec.N12}", rec.N2 <= rec.N12 + 1e-8, f)
    return f


def criterion_9() -> list[str]:
    f = []
    rng = np.random.default_rng(SEED + 9)
    for i in range(200):
        rho = random_density(random_tripartite_layout(rng), rng)
        _holds(f"SSA state {i}", conditional_mutual_entropy(rho, "X", "Y", "Z") >= -1e-9, f)
        _holds(f"subadditivity state {i}", mutual_entropy(rho, "X", "Y") >= -1e-9, f)
        cap = 2 * min(subset_entropy(rho, "X"), subset_entropy(rho, "Y"))
        _holds(f"Araki-Lieb state {i}", mutual_entropy(rho, "X", "Y") <= cap + 1e-8, f)
        _holds(f"chain rule state {i}", abs(chain_rule_residual(rho, "X", "Y", "Z")) <= 1e-8, f)
    for i in range(100):
        psi = random_pure(random_tripartite_layout(rng), rng)
        _holds(f"pure center state {i}", abs(ternary_mutual_entropy(psi, "X", "Y", "Z")) <= 1e-8, f)
    return f


def criterion_10() -> list[str]:
    f = []
    model = build_teleportation_model()
    _near("k", model.k, 1, 1e-7, f)
    _near("c", model.c, 2, 1e-7, f)
    _near("s", model.s, 1, 1e-7, f)
    d = side_channel_diagram(model)
    targets = {"S(R:C)": 0, "S(Q:C)": 0, "S(R:QC)": 2, "S(RQ|C)": 0, "S(R:Q:C)": -2}
    for key, value in targets.items():
        _near(key, d[key], value, 1e-7, f)
    _near("S(R:P)", lossless_amplification_check(model).mutual_RP, 0, 1e-7, f)
    return f


def criterion_11() -> list[str]:
    f = []
    model = encode_with_side_channel(five_qubit_code())
    _holds("side channel is nontrivial", model.c >= 1 - 1e-7, f)
    _holds("amplification lossless", lossless_amplification_check(model).lossless, f)
    _holds("passes at e=2", verify_side_channel_code(model, 2).correctable, f)
    _holds("fails at e=3", not verify_side_channel_code(model, 3).correctable, f)
    return f


def criterion_12() -> list[str]:
    f = []
    rep = classical_report(binary_symmetric(0.11), Distribution.uniform(2))
    _near("I(BSC 0.11)", rep.I, 1 - dyadic_entropy(0.11), 1e-10, f)
    rng = np.random.default_rng(SEED + 12)
    for trial in range(50):
        n = int(rng.integers(1, 4))
        sizes = [int(s) for s in rng.integers(2, 5, size=n)]
        chans = []
        for s in sizes:
            t = rng.random((s, int(rng.integers(2, 5)))) + 1e-3
            chans.append(ClassicalChannel(t / t.sum(axis=1, keepdims=True)))
        p = rng.random(int(np.prod(sizes)))
        block = classical_block_report(chans, p / p.sum())
        sum_l = sum(block.per_L)
        _holds(f"trial {trial} sandwich", sum_l - block.M - 1e-10 <= block.joint_L <= sum_l + 1e-10, f)
        _holds(f"trial {trial} I <= sum I_i", block.joint_I <= sum(block.per_I) + 1e-10, f)
        _holds(f"trial {trial} rate bound", block.joint_I / n <= block.rate_bound + 1e-10, f)
    return f


CRITERIA = {
    1: ("depolarizing fixed points and lossless identity", criterion_1),
    2: ("Werner spectrum and I + L = 2", criterion_2),
    3: ("erasure closed form and dual identity", criterion_3),
    4: ("codes saturate k = n - 2e", criterion_4),
    5: ("bound catalog values and ordering", criterion_5),
    6: ("binomial mixture convexity", criterion_6),
    7: ("block coding sandwich", criterion_7),
    8: ("data processing along a chain", criterion_8),
    9: ("entropy inequality battery", criterion_9),
    10: ("teleportation diagram", criterion_10),
    11: ("side channel does not beat the Singleton bound", criterion_11),
    12: ("classical oracle", criterion_12),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, check = CRITERIA[number]
    failures = check()
    _record(number, title, failures)
    assert not failures, failures


if __name__ == "__main__":
    failed = 0
    for number, (title, check) in sorted(CRITERIA.items()):
        failures = check()
        _record(number, title, failures)
        failed += bool(failures)
    sys.exit(1 if failed else 0)
