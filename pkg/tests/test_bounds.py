import itertools
import math

import numpy as np
import pytest

from qvenn.bounds import (
    FORMULA_IDS,
    MODEL_FORMULAS,
    average_loss_lower_bound,
    binomial_mixture_analysis,
    bound_curve,
    bound_value,
    capacity_bound_catalog,
    dual_channel_relation,
    dyadic_entropy,
    paired_pattern_terms,
    parse_grid,
    weight_parameter,
)
from qvenn.registers import RegisterLayout, bell_state, entangled_block_input, random_pure


def test_dyadic_entropy():
    assert dyadic_entropy(0.5) == pytest.approx(1.0)
    assert dyadic_entropy(0.0) == 0.0 and dyadic_entropy(1.0) == 0.0
    assert dyadic_entropy(0.11) == pytest.approx(-(0.11 * math.log2(0.11) + 0.89 * math.log2(0.89)))


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.9])
def test_mixture_single_symbol_is_exact(p):
    a = binomial_mixture_analysis(1, p, bell_state("R", "Q1"), "erasure")
    assert a.convex_bound == pytest.approx(2 * (1 - p), abs=1e-8)
    assert a.joint_I == pytest.approx(a.convex_bound, abs=1e-8)


def test_mixture_depolarizing_full_randomization():
    a = binomial_mixture_analysis(1, 0.75, bell_state("R", "Q1"), "depolarizing")
    assert a.weight_parameter == pytest.approx(1.0)
    assert a.convex_bound == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("n, p, model, entangled", list(itertools.product([1, 2, 3], [0.2, 0.5], ["erasure", "depolarizing"], [True, False])))
def test_mixture_convexity(n, p, model, entangled):
    a = binomial_mixture_analysis(n, p, entangled_block_input(n, entangled), model)
    assert a.joint_I <= a.convex_bound + 1e-8
    assert sum(w for _, w in a.weights) == pytest.approx(1.0)
    assert a.violations() == []


def test_mixture_depolarizing_validity():
    with pytest.raises(ValueError):
        binomial_mixture_analysis(1, 0.8, bell_state("R", "Q1"), "depolarizing")


def test_weight_parameter():
    assert weight_parameter(0.3, "erasure") == pytest.approx(0.3)
    assert weight_parameter(0.3, "depolarizing") == pytest.approx(0.4)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_dual_erasure_equality(p):
    rel = dual_channel_relation(1, p, bell_state("R", "Q1"), "erasure")
    assert rel.sum_L == pytest.approx(2.0, abs=1e-8)
    assert rel.sum_I == pytest.approx(2.0, abs=1e-8)


def test_dual_depolarizing_zero_capacity_point():
    rel = dual_channel_relation(1, 0.375, bell_state("R", "Q1"), "depolarizing")
    assert rel.dual_p == pytest.approx(0.375)
    assert rel.L_p >= 1 - 1e-8


def test_dual_block(rng):
    for n in (2, 3):
        rel = dual_channel_relation(n, 0.3, entangled_block_input(n), "erasure")
        assert rel.sum_L >= 2 * rel.k - 1e-8


@pytest.mark.parametrize("p, rate, model, expected", [(0.25, 0.5, "erasure", 0.0), (0.5, 0.5, "erasure", 0.5), (0.0, 0.7, "erasure", 0.0), (0.375, 0.1, "depolarizing", 0.1)])
def test_average_loss_lower_bound(p, rate, model, expected):
    assert average_loss_lower_bound(p, rate, model) == pytest.approx(expected, abs=1e-12)


def test_average_loss_lower_bound_range():
    with pytest.raises(ValueError):
        average_loss_lower_bound(0.5, 1.5)


def test_paired_pattern_step(rng):
    for n in (2, 3, 4):
        symbols = [f"Q{i}" for i in range(1, n + 1)]
        for _ in range(20):
            psi = random_pure(RegisterLayout((("R", 2),) + tuple((s, 2) for s in symbols)), rng)
            paired, twice_overlap = paired_pattern_terms(psi, ["Q1"], ["Q2"])
            assert paired <= twice_overlap + 1e-8


def test_paired_pattern_rejects_overlap():
    with pytest.raises(ValueError):
        paired_pattern_terms(entangled_block_input(2), ["Q1"], ["Q1"])


@pytest.mark.parametrize(
    "fid, p, expected",
    [("erasure_1_2p", 0.5, 0.0), ("depol_8p3", 0.375, 0.0), ("depol_cloning_4p", 0.25, 0.0), ("errors_1_4p", 0.25, 0.0), ("erasure_1_2p", 0.25, 0.5), ("depol_hashing_1_Hp", 0.5, 0.0)],
)
def test_bound_values(fid, p, expected):
    assert bound_value(fid, p) == expected


def test_stabilizer_bound():
    assert bound_value("stabilizer_H_bound", 0.0) == pytest.approx(1.0)
    assert bound_value("stabilizer_H_bound", 0.25) == 0.0


def test_bound_ordering():
    for p in np.linspace(0, 0.25, 26):
        assert bound_value("depol_cloning_4p", p) <= bound_value("depol_8p3", p) + 1e-15


@pytest.mark.parametrize("fid", FORMULA_IDS)
def test_curves_are_monotone_and_clamped(fid):
    curve = bound_curve(fid, np.linspace(0, 1, 101))
    assert curve.is_monotone()
    assert all(0.0 <= r <= 1.0 for _, r in curve.samples)


def test_catalog():
    entries = {e.formula_id: e for e in capacity_bound_catalog(0.375)}
    assert entries["depol_8p3"].r_max == 0.0
    flag = {e.formula_id: e for e in capacity_bound_catalog(0.2)}["nondegenerate_zero_rate_flag"]
    assert flag.in_validity_range and flag.r_max == 0.0
    flag = {e.formula_id: e for e in capacity_bound_catalog(0.1)}["nondegenerate_zero_rate_flag"]
    assert not flag.in_validity_range and flag.r_max == 1.0


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1.0])
    assert len(parse_grid("0:1:0.01")) == 101
    with pytest.raises(ValueError):
        parse_grid("0:1")


def test_model_formulas():
    assert list(MODEL_FORMULAS["erasure"]) == ["erasure_1_2p"]
    assert set(MODEL_FORMULAS["depolarizing"]) >= {"depol_8p3", "depol_cloning_4p"}
