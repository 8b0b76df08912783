import json

import numpy as np
import pytest

from qvenn.blockcoding import block_report, parallel_apply, rate_bound_one_symbol
from qvenn.channel import apply_with_environment, identity_channel, make_depolarizing, make_erasure
from qvenn.errors import DimensionMismatchError
from qvenn.properties import random_channel
from qvenn.registers import RegisterLayout, bell_state, entangled_block_input, partial_trace, random_pure
from qvenn.venn import mutual_entropy

SYM2 = ["Q1", "Q2"]


def test_identity_leaves_state_unchanged():
    inp = entangled_block_input(2)
    out = parallel_apply([identity_channel()] * 2, inp, SYM2)
    np.testing.assert_allclose(partial_trace(out, ["R", "Q1", "Q2"]).matrix, inp.to_density().matrix, atol=1e-12)


def test_single_symbol_matches_channel_module():
    inp = bell_state("R", "Q1")
    ch = make_erasure(0.3)
    a = parallel_apply([ch], inp, ["Q1"])
    b = apply_with_environment(ch, inp, "Q1", "E_Q1")
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_channel_count_must_match():
    with pytest.raises((DimensionMismatchError, ValueError)):
        parallel_apply([identity_channel()], entangled_block_input(2), SYM2)


def test_product_input_has_no_correlation():
    rep = block_report([make_erasure(0.3), make_depolarizing(0.2)], entangled_block_input(2, entangled=False), SYM2)
    assert rep.correlation_M == pytest.approx(0.0, abs=1e-9)
    assert rep.joint_L == pytest.approx(sum(rep.per_symbol_L), abs=1e-8)


def test_correlated_erasure_block():
    rep = block_report([make_erasure(0.5)] * 2, entangled_block_input(2), SYM2)
    inp = entangled_block_input(2)
    q1q2 = mutual_entropy(inp, "Q1", "Q2")
    assert rep.average_loss_l >= rep.one_symbol_loss_l1 - q1q2 - 1e-8
    assert rep.average_loss_l <= rep.one_symbol_loss_l1 + 1e-8
    assert rep.violations() == []


def test_identity_block_is_lossless(rng):
    inp = random_pure(RegisterLayout.of(("R", 4), ("Q1", 2), ("Q2", 2)), rng)
    rep = block_report([identity_channel()] * 2, inp, SYM2)
    assert rep.joint_L == pytest.approx(0.0, abs=1e-8)
    assert max(abs(x) for x in rep.per_symbol_L) <= 1e-8


@pytest.mark.parametrize(
    "channel, entangled, expected",
    [(identity_channel(), False, 1.0), (make_depolarizing(0.75), False, 0.0), (make_erasure(0.5), False, 0.5)],
)
def test_rate_bound_values(channel, entangled, expected):
    rep = block_report([channel] * 2, entangled_block_input(2, entangled=entangled), SYM2)
    assert rate_bound_one_symbol(rep) == pytest.approx(expected, abs=1e-8)


def test_sandwich_randomized(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        symbols = [f"Q{i}" for i in range(1, n + 1)]
        inp = random_pure(RegisterLayout((("R", 2 ** n),) + tuple((s, 2) for s in symbols)), rng)
        rep = block_report([random_channel(rng, kraus=int(rng.integers(1, 4))) for _ in range(n)], inp, symbols)
        sum_l = sum(rep.per_symbol_L)
        assert sum_l - 2 * rep.correlation_M - 1e-8 <= rep.joint_L <= sum_l + 1e-8
        assert rep.joint_I <= sum(rep.per_symbol_I) + 1e-8
        if rep.joint_L <= 1e-8:
            assert 2 * rep.source_entropy <= sum(rep.per_symbol_I) + 1e-6


def test_report_json():
    rep = block_report([make_erasure(0.2)] * 2, entangled_block_input(2), SYM2)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["n"] == 2 and len(data["per_symbol_L"]) == 2
