"""
Entropic checks of erasure-correcting codes.

A code is an isometry from ``k`` logical qubits into ``n`` physical qubits.
Its encoded entangled state carries a ``2**k``-dimensional reference ``R``
maximally entangled with the logical input; physical qubits are labeled
``Q1 .. Qn`` and erasure patterns use those 1-based indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from .errors import AddressingError, InvalidStateError
from .registers import PureState, RegisterLayout, complex_to_pairs, pairs_to_complex
from .venn import mutual_entropy

ISOMETRY_TOL = 1e-10
#: Largest tolerated S(R:Q_e) for a pattern to count as correctable.
CORRECTABLE_TOL = 1e-7

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_Y = 1j * _X @ _Z
_PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


@dataclass(frozen=True, eq=False)
class EncodingIsometry:
    k: int
    n: int
    matrix: np.ndarray
    name: str = "code"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2 ** self.n, 2 ** self.k):
            raise InvalidStateError(f"isometry shape {m.shape}, expected {(2 ** self.n, 2 ** self.k)}")
        dev = np.max(np.abs(m.conj().T @ m - np.eye(2 ** self.k)))
        if dev > ISOMETRY_TOL:
            raise InvalidStateError(f"V^dagger V deviates from identity by {dev:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def physical_labels(self) -> tuple[str, ...]:
        return tuple(f"Q{i}" for i in range(1, self.n + 1))

    def to_json(self) -> dict:
        return {"name": self.name, "k": self.k, "n": self.n, "matrix": complex_to_pairs(self.matrix)}

    @classmethod
    def from_json(cls, data: dict) -> "EncodingIsometry":
        return cls(int(data["k"]), int(data["n"]), pairs_to_complex(data["matrix"]), data.get("name", "code"))


def pauli_string(word: str) -> np.ndarray:
    return reduce(np.kron, (_PAULI[c] for c in word))


def stabilizer_codewords(generators: Iterable[str], seeds: Iterable[np.ndarray]) -> np.ndarray:
    """Project seed kets onto the joint +1 eigenspace of ``generators``."""
    gens = [pauli_string(g) for g in generators]
    dim = gens[0].shape[0]
    proj = reduce(lambda acc, g: acc @ (np.eye(dim) + g) / 2, gens, np.eye(dim, dtype=complex))
    cols = []
    for seed in seeds:
        v = proj @ seed
        cols.append(v / np.linalg.norm(v))
    return np.column_stack(cols)


def five_qubit_code() -> EncodingIsometry:
    """The ((5,1)) perfect code, stabilized by the cyclic shifts of XZZXI."""
    gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    zero = np.zeros(32, dtype=complex)
    zero[0] = 1
    logical_zero = stabilizer_codewords(gens, [zero])[:, 0]
    logical_one = pauli_string("XXXXX") @ logical_zero
    return EncodingIsometry(1, 5, np.column_stack([logical_zero, logical_one]), "five-qubit")


def four_two_code() -> EncodingIsometry:
    """The ((4,2)) erasure code stabilized by XXXX and ZZZZ."""
    def ket(bits: str) -> np.ndarray:
        v = np.zeros(16, dtype=complex)
        v[int(bits, 2)] = 1
        return v

    seeds = [ket("0000"), ket("0011"), ket("0101"), ket("0110")]
    return EncodingIsometry(2, 4, stabilizer_codewords(["XXXX", "ZZZZ"], seeds), "four-two")


BUILTIN_CODES = {"five-qubit": five_qubit_code, "four-two": four_two_code}


def builtin_code(name: str) -> EncodingIsometry:
    try:
        return BUILTIN_CODES[name]()
    except KeyError:
        raise AddressingError(f"unknown builtin code {name!r}; choose from {sorted(BUILTIN_CODES)}") from None


def random_isometry(k: int, n: int, rng: np.random.Generator) -> EncodingIsometry:
    z = rng.standard_normal((2 ** n, 2 ** k)) + 1j * rng.standard_normal((2 ** n, 2 ** k))
    q, _ = np.linalg.qr(z)
    return EncodingIsometry(k, n, q, "random")


def encode_entangled(code: EncodingIsometry, reference: str = "R") -> PureState:
    """``(1_R (x) V)|Phi>`` with ``|Phi>`` maximally entangled between R and the logical input."""
    layout = RegisterLayout(((reference, 2 ** code.k),) + tuple((q, 2) for q in code.physical_labels))
    # amplitude[j, x] = <x|V|j> / sqrt(2^k)
    amps = code.matrix.T / np.sqrt(2 ** code.k)
    return PureState(layout, amps.ravel())


def _pattern_labels(code: EncodingIsometry, pattern: Iterable[int]) -> tuple[list[str], list[str]]:
    pattern = set(int(i) for i in pattern)
    bad = [i for i in pattern if not 1 <= i <= code.n]
    if bad:
        raise AddressingError(f"erasure indices {sorted(bad)} outside 1..{code.n}")
    erased = [f"Q{i}" for i in sorted(pattern)]
    kept = [f"Q{i}" for i in range(1, code.n + 1) if i not in pattern]
    return erased, kept


@dataclass(frozen=True)
class ErasureLoss:
    pattern: tuple[int, ...]
    mutual_RQe: float
    mutual_RQu: float


def erasure_pattern_loss(code: EncodingIsometry, pattern: Iterable[int], encoded: PureState | None = None) -> ErasureLoss:
    """S(R:Q_e) and S(R:Q_u) for one erasure pattern."""
    erased, kept = _pattern_labels(code, pattern)
    psi = encoded if encoded is not None else encode_entangled(code)
    rqe = mutual_entropy(psi, "R", erased) if erased else 0.0
    rqu = mutual_entropy(psi, "R", kept) if kept else 0.0
    return ErasureLoss(tuple(int(e[1:]) for e in erased), rqe, rqu)


@dataclass(frozen=True)
class ErasureVerdict:
    correctable: bool
    worst_pattern_loss: float
    worst_pattern: tuple[int, ...]
    patterns_checked: int

    def to_json(self) -> dict:
        return {
            "correctable": self.correctable,
            "worst_pattern_loss": self.worst_pattern_loss,
            "worst_pattern": list(self.worst_pattern),
            "patterns_checked": self.patterns_checked,
            "tolerance": CORRECTABLE_TOL,
        }


def verify_erasure_code(code: EncodingIsometry, e: int) -> ErasureVerdict:
    """Check every pattern of ``e`` erased qubits."""
    if not 0 <= e <= code.n:
        raise AddressingError(f"erasure count {e} outside 0..{code.n}")
    psi = encode_entangled(code)
    worst, worst_pattern, count = 0.0, (), 0
    for pattern in itertools.combinations(range(1, code.n + 1), e):
        loss = erasure_pattern_loss(code, pattern, psi).mutual_RQe
        count += 1
        if loss > worst or count == 1:
            worst, worst_pattern = loss, pattern
    return ErasureVerdict(worst <= CORRECTABLE_TOL, worst, tuple(worst_pattern), count)


def singleton_max_k(n: int, e: int) -> int:
    """Largest k allowed by k <= n - 2e."""
    if n < 1 or e < 0:
        raise ValueError("need n >= 1 and e >= 0")
    return max(n - 2 * e, 0)


def bounded_fraction_rate_bounds(p: float, model: str = "erasures") -> float:
    """Rate ceiling for a p-bounded fraction of erasures (1 - 2p) or errors (1 - 4p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"fraction {p} outside [0, 1]")
    if model in ("erasures", "erasure"):
        return max(1.0 - 2.0 * p, 0.0)
    if model in ("errors", "error"):
        # t errors are correctable as 2t erasures
        return max(1.0 - 4.0 * p, 0.0)
    raise ValueError(f"unknown model {model!r}")
