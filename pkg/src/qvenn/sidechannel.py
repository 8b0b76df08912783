"""
Quantum channels supplemented by a classical side channel.

The encoder output is a pure state over the reference ``R``, the quantum
output ``Q`` (one or more labels), and a precursor ``P`` holding the
classical record. Amplification copies ``P`` into a classical register ``C``
in a chosen orthonormal basis, which keeps the global state pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codes import CORRECTABLE_TOL, EncodingIsometry, ErasureVerdict, encode_entangled, pauli_string
from .errors import AddressingError, InvalidStateError, LayoutConflictError
from .registers import (
    PureState,
    RegisterLayout,
    apply_local,
    bell_state,
    merge_subsystems,
    permute,
    random_unitary,
    tensor_product,
)
from .venn import (
    conditional_entropy,
    conditional_mutual_entropy,
    mutual_entropy,
    subset_entropy,
    ternary_mutual_entropy,
)

#: Tolerance on the side-channel entropy identities.
IDENTITY_TOL = 1e-7
#: Tolerance on the parameter inequalities and the P/C correlation.
PARAM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SideChannelState:
    state: PureState
    amplification_basis: np.ndarray
    q_labels: tuple[str, ...]
    k: float
    c: float
    s: float
    reference: str = "R"
    precursor: str = "P"
    classical: str = "C"

    def parameters_consistent(self) -> bool:
        """0 <= s - k <= c <= s + k."""
        return (
            -PARAM_TOL <= self.s - self.k
            and self.s - self.k <= self.c + PARAM_TOL
            and self.c <= self.s + self.k + PARAM_TOL
        )


def amplify_precursor(
    state: PureState,
    basis: np.ndarray | None = None,
    q_labels: Sequence[str] | None = None,
    reference: str = "R",
    precursor: str = "P",
    classical: str = "C",
) -> SideChannelState:
    """Copy the precursor into a fresh classical register in ``basis``.

    ``basis`` holds the orthonormal vectors as columns (computational basis
    when omitted). Each ``|phi_i>_P`` becomes ``|phi_i>_P |phi_i>_C``; the
    classical register is appended last and has the dimension of ``P``.
    """
    layout = state.layout
    d = layout.dim(precursor)
    if classical in layout:
        raise LayoutConflictError(f"label {classical!r} already in use")
    b = np.eye(d, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if b.shape != (d, d) or np.max(np.abs(b.conj().T @ b - np.eye(d))) > 1e-10:
        raise InvalidStateError("amplification basis is not orthonormal")
    if q_labels is None:
        q_labels = [label for label in layout.labels if label not in (reference, precursor)]
    axis = layout.index(precursor)
    psi = np.moveaxis(state.tensor(), axis, -1)
    coeff = psi @ b.conj()  # amplitude on |phi_i>
    copied = np.einsum("...i,pi,ci->...pc", coeff, b, b)
    copied = np.moveaxis(copied, -2, axis)
    new_layout = RegisterLayout(layout.subsystems + ((classical, d),))
    out = PureState(new_layout, copied.ravel())

    c_ent = subset_entropy(out, classical)
    p_ent = subset_entropy(out, precursor)
    cp_ent = subset_entropy(out, [classical, precursor])
    if max(abs(c_ent - p_ent), abs(c_ent - cp_ent)) > PARAM_TOL:
        raise InvalidStateError("precursor and classical copy are not fully correlated")
    return SideChannelState(
        state=out,
        amplification_basis=b,
        q_labels=tuple(q_labels),
        k=subset_entropy(out, reference),
        c=c_ent,
        s=subset_entropy(out, list(q_labels)),
        reference=reference,
        precursor=precursor,
        classical=classical,
    )


@dataclass(frozen=True)
class LosslessCheck:
    mutual_RP: float
    mutual_RQC: float
    lossless: bool


def lossless_amplification_check(model: SideChannelState) -> LosslessCheck:
    """Amplification is lossless iff S(R:P) = 0, equivalently S(R:QC) = 2k."""
    psi, r = model.state, model.reference
    rp = mutual_entropy(psi, r, model.precursor)
    rqc = mutual_entropy(psi, r, list(model.q_labels) + [model.classical])
    lossless = rp <= IDENTITY_TOL and rqc >= 2 * model.k - IDENTITY_TOL
    return LosslessCheck(rp, rqc, lossless)


class SideChannelIdentityError(InvalidStateError):
    """An entropy identity of a lossless side-channel model failed."""


def side_channel_diagram(model: SideChannelState) -> dict:
    """All entropies of the R, Q, C diagram after amplification.

    Raises :class:`SideChannelIdentityError` naming the identity that broke.
    """
    check = lossless_amplification_check(model)
    if not check.lossless:
        raise SideChannelIdentityError(
            f"amplification is lossy: S(R:P) = {check.mutual_RP:.3e}, S(R:QC) = {check.mutual_RQC:.6f}"
        )
    psi = model.state
    r, c, p = model.reference, model.classical, model.precursor
    q = list(model.q_labels)
    k, s, cc = model.k, model.s, model.c
    rec = {
        "k": k,
        "s": s,
        "c": cc,
        "S(R)": subset_entropy(psi, r),
        "S(Q)": subset_entropy(psi, q),
        "S(C)": subset_entropy(psi, c),
        "S(RQ)": subset_entropy(psi, [r] + q),
        "S(RC)": subset_entropy(psi, [r, c]),
        "S(QC)": subset_entropy(psi, q + [c]),
        "S(RQC)": subset_entropy(psi, [r] + q + [c]),
        "S(R:C)": mutual_entropy(psi, r, c),
        "S(Q:C)": mutual_entropy(psi, q, c),
        "S(R:Q)": mutual_entropy(psi, r, q),
        "S(R:Q:C)": ternary_mutual_entropy(psi, r, q, c),
        "S(RQ|C)": conditional_entropy(psi, [r] + q, c),
        "S(C|RQ)": conditional_entropy(psi, c, [r] + q),
        "S(R:QC)": check.mutual_RQC,
        "S(R:P)": check.mutual_RP,
        "S(R:C|Q)": conditional_mutual_entropy(psi, r, c, q),
        "S(R:PC)": mutual_entropy(psi, r, [p, c]),
    }
    expected = {
        "S(R:C)": 0.0,
        "S(Q:C)": s - k,
        "S(QC)": k + cc,
        "S(RC)": k + cc,
        "S(RQ)": cc,
        "S(RQC)": cc,
        "S(RQ|C)": 0.0,
        "S(C|RQ)": 0.0,
        "S(R:Q:C)": s - k - cc,
        "S(R:Q)": k + s - cc,
        "S(R:C|Q)": k + cc - s,
    }
    residuals = {key: rec[key] - val for key, val in expected.items()}
    broken = [key for key, res in residuals.items() if abs(res) > IDENTITY_TOL]
    if broken:
        raise SideChannelIdentityError(f"identities failed: {broken}")
    rec["residuals"] = residuals
    return rec


def _bell_measurement_unitary() -> np.ndarray:
    """CNOT(first -> second) then H on the first: Bell basis to computational basis."""
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    return np.kron(h, np.eye(2)) @ cnot


def build_teleportation_model() -> SideChannelState:
    """Teleportation as a side-channel encoder with k = 1, c = 2, s = 1.

    R-L and A-Q start as Bell pairs; a unitary Bell measurement on (L, A)
    writes the outcome into the two-qubit precursor P, which is then copied
    into C in the computational basis.
    """
    psi = tensor_product(bell_state("R", "L"), bell_state("A", "Q"))
    psi = merge_subsystems(psi, ["L", "A"], "P")
    psi = apply_local(psi, "P", _bell_measurement_unitary())
    psi = permute(psi, ["R", "Q", "P"])
    return amplify_precursor(psi, q_labels=["Q"])


def trivial_side_channel(state: PureState, reference: str = "R") -> SideChannelState:
    """Attach a precursor fixed in ``|0>`` (c = 0) to a pure state over R and Q."""
    q_labels = [label for label in state.layout.labels if label != reference]
    zero = PureState(RegisterLayout.of(("P", 2)), np.array([1, 0]))
    return amplify_precursor(tensor_product(state, zero), q_labels=q_labels, reference=reference)


def encode_with_side_channel(
    code: EncodingIsometry,
    paulis: Sequence[str] = ("IIIII", "XIIII", "YIIII", "ZIIII"),
    probabilities: Sequence[float] | None = None,
    basis: np.ndarray | None = None,
) -> SideChannelState:
    """Encoder that applies Pauli ``paulis[i]`` to the codeword with probability p_i.

    The choice ``i`` is recorded in the precursor and amplified. Because each
    branch differs from the plain codeword by a unitary on Q only, the
    reference marginal is the same in every branch and the amplification is
    lossless.
    """
    m = len(paulis)
    probs = np.full(m, 1.0 / m) if probabilities is None else np.asarray(probabilities, dtype=float)
    if len(probs) != m or abs(probs.sum() - 1) > 1e-12 or np.any(probs < 0):
        raise ValueError("probabilities must be a distribution over the Pauli branches")
    for word in paulis:
        if len(word) != code.n:
            raise AddressingError(f"Pauli word {word!r} does not act on {code.n} qubits")
    base = encode_entangled(code)
    branches = []
    for word, pr in zip(paulis, probs):
        op = np.kron(np.eye(2 ** code.k), pauli_string(word))
        branches.append(np.sqrt(pr) * (op @ base.amplitudes))
    amps = np.stack(branches, axis=-1)  # (R Q..., P)
    layout = base.layout.concat(RegisterLayout.of(("P", m)))
    pre = PureState(layout, amps.ravel())
    return amplify_precursor(pre, basis, q_labels=code.physical_labels)


def random_lossless_model(
    k: int, extra_qubits: int, branches: int, rng: np.random.Generator
) -> SideChannelState:
    """Random lossless encoder with ``branches`` classical outcomes.

    Branch ``i`` applies ``W P_i W'`` to the k logical qubits, where ``P_i``
    are distinct Pauli strings and ``W, W'`` are Haar random, so the branch
    states are orthogonal. Each branch also prepares its own random ancilla
    state on ``extra_qubits`` qubits, which moves s between k and k + c, and
    a shared Haar-random unitary then mixes the whole output. Outcome
    probabilities are a flat-Dirichlet sample.
    """
    if not 1 <= branches <= 4 ** k:
        raise ValueError(f"need 1 <= branches <= {4 ** k}")
    dr = 2 ** k
    nq = k + extra_qubits
    words = ["".join(w) for w in itertools.product("IXYZ", repeat=k)]
    chosen = rng.choice(len(words), size=branches, replace=False)
    w_left, w_right = random_unitary(dr, rng), random_unitary(dr, rng)
    mix = random_unitary(2 ** nq, rng)
    phi = np.eye(dr) / np.sqrt(dr)  # amplitude[j, l]
    probs = rng.dirichlet(np.ones(branches))
    cols = []
    for idx, pr in zip(chosen, probs):
        u = w_left @ pauli_string(words[idx]) @ w_right
        anc = random_unitary(2 ** extra_qubits, rng)[:, 0]
        branch = np.kron(phi @ u.T, anc) @ mix.T
        cols.append(np.sqrt(pr) * branch.ravel())
    amps = np.stack(cols, axis=-1)
    q_labels = [f"Q{i}" for i in range(1, nq + 1)]
    layout = RegisterLayout((("R", dr),) + tuple((q, 2) for q in q_labels) + (("P", branches),))
    return amplify_precursor(PureState.normalized(layout, amps.ravel()), q_labels=q_labels)


@dataclass(frozen=True)
class SideErasureLoss:
    pattern: tuple[int, ...]
    mutual_R_QeP: float
    mutual_R_QuC: float


def side_channel_erasure_check(model: SideChannelState, pattern: Sequence[int]) -> SideErasureLoss:
    """S(R:Q_e P) for a 1-based pattern of erased quantum outputs.

    Zero means the erasure is recoverable by a decoder that sees Q_u and C.
    """
    n = len(model.q_labels)
    pattern = tuple(sorted(set(int(i) for i in pattern)))
    bad = [i for i in pattern if not 1 <= i <= n]
    if bad:
        raise AddressingError(f"erasure indices {bad} outside 1..{n}")
    erased = [model.q_labels[i - 1] for i in pattern]
    kept = [q for q in model.q_labels if q not in erased]
    psi, r = model.state, model.reference
    loss = mutual_entropy(psi, r, erased + [model.precursor])
    gain = mutual_entropy(psi, r, kept + [model.classical])
    return SideErasureLoss(pattern, loss, gain)


def verify_side_channel_code(model: SideChannelState, e: int) -> ErasureVerdict:
    """Exhaustive check of all erasure patterns of size ``e`` with classical help."""
    n = len(model.q_labels)
    if not 0 <= e <= n:
        raise AddressingError(f"erasure count {e} outside 0..{n}")
    worst, worst_pattern, count = 0.0, (), 0
    for pattern in itertools.combinations(range(1, n + 1), e):
        loss = side_channel_erasure_check(model, pattern).mutual_R_QeP
        count += 1
        if count == 1 or loss > worst:
            worst, worst_pattern = loss, pattern
    return ErasureVerdict(worst <= CORRECTABLE_TOL, worst, tuple(worst_pattern), count)
