import numpy as np
import pytest

from qvenn.codes import encode_entangled, five_qubit_code, singleton_max_k, verify_erasure_code
from qvenn.errors import AddressingError, InvalidStateError
from qvenn.registers import PureState, RegisterLayout, bell_state, tensor_product
from qvenn.sidechannel import (
    amplify_precursor,
    build_teleportation_model,
    encode_with_side_channel,
    lossless_amplification_check,
    random_lossless_model,
    side_channel_diagram,
    side_channel_erasure_check,
    trivial_side_channel,
    verify_side_channel_code,
)
from qvenn.venn import mutual_entropy, subset_entropy

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_teleportation_diagram():
    model = build_teleportation_model()
    assert (model.k, model.c, model.s) == pytest.approx((1, 2, 1), abs=1e-7)
    d = side_channel_diagram(model)
    for key, value in {"S(R:C)": 0, "S(Q:C)": 0, "S(R:QC)": 2, "S(RQ|C)": 0, "S(R:Q:C)": -2, "S(R:Q)": 0, "S(R:PC)": 2}.items():
        assert d[key] == pytest.approx(value, abs=1e-7)
    check = lossless_amplification_check(model)
    assert check.lossless and check.mutual_RP == pytest.approx(0.0, abs=1e-7)


def test_trivial_side_channel():
    model = trivial_side_channel(bell_state("R", "Q"))
    assert model.c == pytest.approx(0.0, abs=1e-9)
    d = side_channel_diagram(model)
    assert d["S(R:C)"] == pytest.approx(0.0, abs=1e-7)
    assert d["S(Q:C)"] == pytest.approx(0.0, abs=1e-7)
    assert lossless_amplification_check(model).mutual_RP == pytest.approx(0.0, abs=1e-7)


def test_mixed_precursor_gives_one_bit():
    # P is half of a Bell pair with an output qubit, so it is maximally mixed given R and Q
    psi = tensor_product(bell_state("R", "Q1"), bell_state("Q2", "P"))
    model = amplify_precursor(psi, q_labels=["Q1", "Q2"])
    assert model.c == pytest.approx(1.0)
    assert mutual_entropy(model.state, "C", "P") == pytest.approx(1.0)
    assert lossless_amplification_check(model).lossless


def test_non_orthonormal_basis_rejected():
    with pytest.raises(InvalidStateError):
        amplify_precursor(tensor_product(bell_state("R", "Q"), bell_state("P", "X")), np.ones((2, 2)), q_labels=["Q"])


def test_precursor_carrying_reference_is_lossy():
    # the precursor holds half of R's entanglement; copying it into C in any
    # basis leaves R correlated with P, so amplification is not lossless
    from qvenn.sidechannel import SideChannelIdentityError

    psi = tensor_product(bell_state("R", "P"), PureState(RegisterLayout.qubits("Q"), np.array([1.0, 0.0])))
    for basis in (None, H):
        model = amplify_precursor(psi, basis, q_labels=["Q"])
        check = lossless_amplification_check(model)
        assert check.mutual_RP > 0.5 and not check.lossless
        with pytest.raises(SideChannelIdentityError):
            side_channel_diagram(model)


def test_random_lossless_models(rng):
    for _ in range(20):
        k = int(rng.integers(1, 3))
        model = random_lossless_model(k, int(rng.integers(0, 2)), int(rng.integers(1, 5)), rng)
        assert model.parameters_consistent()
        d = side_channel_diagram(model)
        assert d["S(C|RQ)"] == pytest.approx(0.0, abs=1e-7)
        assert 0 - 1e-8 <= model.s - model.k <= model.c + 1e-8


def test_five_qubit_with_side_channel():
    model = encode_with_side_channel(five_qubit_code())
    assert (model.k, model.c) == pytest.approx((1, 2), abs=1e-7)
    assert lossless_amplification_check(model).lossless
    assert verify_side_channel_code(model, 2).correctable
    assert not verify_side_channel_code(model, 3).correctable


def test_trivial_side_channel_reduces_to_code_check():
    code = five_qubit_code()
    model = trivial_side_channel(encode_entangled(code))
    for e in (2, 3):
        assert verify_side_channel_code(model, e).correctable == verify_erasure_code(code, e).correctable
    assert side_channel_erasure_check(model, (1, 2)).mutual_R_QeP == pytest.approx(0.0, abs=1e-9)


def test_side_channel_verdicts_respect_singleton(rng):
    models = [encode_with_side_channel(five_qubit_code()), build_teleportation_model()]
    models += [random_lossless_model(1, 1, 2, rng) for _ in range(5)]
    for model in models:
        n = len(model.q_labels)
        for e in range(n + 1):
            if verify_side_channel_code(model, e).correctable:
                assert round(model.k) <= singleton_max_k(n, e)


def test_teleportation_erasing_q():
    model = build_teleportation_model()
    loss = side_channel_erasure_check(model, [1])
    # the unamplified precursor with the erased output still holds everything
    assert loss.mutual_R_QeP == pytest.approx(2.0, abs=1e-7)
    assert subset_entropy(model.state, "R") == pytest.approx(1.0)


def test_pattern_out_of_range():
    with pytest.raises(AddressingError):
        side_channel_erasure_check(build_teleportation_model(), [2])
