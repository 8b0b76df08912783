"""
Labeled multi-subsystem registers.

A register layout is an ordered list of ``(label, dim)`` pairs. The leftmost
label is the most significant tensor factor, so a state over ``[("A", 2),
("B", 3)]`` is indexed as ``a * 3 + b``. Every operation here preserves that
convention; partial traces keep the surviving subsystems in layout order no
matter how the caller orders ``keep``.

States are immutable: the underlying arrays are flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import AddressingError, InvalidStateError, LayoutConflictError

#: Hermiticity, trace and norm tolerance for state validation.
STATE_TOL = 1e-10
#: Eigenvalues in ``[-EIG_CLIP, 0)`` are treated as exact zeros.
EIG_CLIP = 1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered, uniquely labeled subsystems with their dimensions."""

    subsystems: tuple[tuple[str, int], ...]

    def __post_init__(self):
        subsystems = tuple((str(label), int(dim)) for label, dim in self.subsystems)
        labels = [label for label, _ in subsystems]
        if len(set(labels)) != len(labels):
            raise LayoutConflictError(f"duplicate labels in layout {labels}")
        for label, dim in subsystems:
            if dim < 1:
                raise InvalidStateError(f"subsystem {label!r} has dimension {dim}")
        object.__setattr__(self, "subsystems", subsystems)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "RegisterLayout":
        return cls(tuple(pairs))

    @classmethod
    def qubits(cls, *labels: str) -> "RegisterLayout":
        return cls(tuple((label, 2) for label in labels))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.subsystems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.subsystems)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.subsystems else 1

    def __len__(self) -> int:
        return len(self.subsystems)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AddressingError(f"unknown label {label!r}; layout has {self.labels}") from None

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def ordered(self, labels: Iterable[str]) -> tuple[str, ...]:
        """Return ``labels`` sorted into layout order, validating each one."""
        wanted = set(_as_labels(labels))
        for label in wanted:
            self.index(label)
        return tuple(label for label in self.labels if label in wanted)

    def sub(self, labels: Iterable[str]) -> "RegisterLayout":
        keep = self.ordered(labels)
        return RegisterLayout(tuple((label, self.dim(label)) for label in keep))

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LayoutConflictError(f"labels {sorted(clash)} present in both layouts")
        return RegisterLayout(self.subsystems + other.subsystems)

    def renamed(self, mapping: Mapping[str, str]) -> "RegisterLayout":
        for label in mapping:
            self.index(label)
        return RegisterLayout(tuple((mapping.get(label, label), dim) for label, dim in self.subsystems))

    def to_json(self) -> list[dict]:
        return [{"label": label, "dim": dim} for label, dim in self.subsystems]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "RegisterLayout":
        return cls(tuple((entry["label"], entry["dim"]) for entry in data))


def _as_labels(labels: str | Iterable[str]) -> tuple[str, ...]:
    # a bare string is one label, not an iterable of characters
    if isinstance(labels, str):
        return (labels,)
    return tuple(labels)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector over a :class:`RegisterLayout`."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape != (self.layout.total_dim,):
            raise InvalidStateError(
                f"amplitude vector has length {amps.size}, layout needs {self.layout.total_dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_TOL:
            raise InvalidStateError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, layout: RegisterLayout, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(layout, amps / np.linalg.norm(amps))

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped with one axis per subsystem."""
        return self.amplitudes.reshape(self.layout.dims)

    def to_density(self) -> "DensityState":
        return DensityState(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def relabel(self, mapping: Mapping[str, str]) -> "PureState":
        return PureState(self.layout.renamed(mapping), self.amplitudes)

    def to_json(self) -> dict:
        return {"layout": self.layout.to_json(), "amplitudes": complex_to_pairs(self.amplitudes)}

    @classmethod
    def from_json(cls, data: Mapping) -> "PureState":
        return cls(RegisterLayout.from_json(data["layout"]), pairs_to_complex(data["amplitudes"]))


@dataclass(frozen=True, eq=False)
class DensityState:
    """Hermitian, positive semidefinite, unit-trace matrix over a layout."""

    layout: RegisterLayout
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen(self.matrix)
        d = self.layout.total_dim
        if mat.shape != (d, d):
            raise InvalidStateError(f"matrix shape {mat.shape} does not match layout dimension {d}")
        herm = np.max(np.abs(mat - mat.conj().T)) if d else 0.0
        if herm > STATE_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (deviation {herm:.3e})")
        trace = np.trace(mat).real
        if abs(trace - 1.0) > STATE_TOL:
            raise InvalidStateError(f"trace is {trace!r}, expected 1")
        lowest = hermitian_eigvalsh(mat)[0]
        if lowest < -EIG_CLIP:
            raise InvalidStateError(f"matrix has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def maximally_mixed(cls, layout: RegisterLayout) -> "DensityState":
        d = layout.total_dim
        return cls(layout, np.eye(d) / d)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    def relabel(self, mapping: Mapping[str, str]) -> "DensityState":
        return DensityState(self.layout.renamed(mapping), self.matrix)

    def to_json(self) -> dict:
        return {"layout": self.layout.to_json(), "matrix": complex_to_pairs(self.matrix)}

    @classmethod
    def from_json(cls, data: Mapping) -> "DensityState":
        return cls(RegisterLayout.from_json(data["layout"]), pairs_to_complex(data["matrix"]))


State = PureState | DensityState


def complex_to_pairs(array: np.ndarray) -> list:
    """Nested ``[re, im]`` lists, row-major."""
    array = np.asarray(array, dtype=complex)
    pairs = np.stack([array.real, array.imag], axis=-1)
    return pairs.tolist()


def pairs_to_complex(data) -> np.ndarray:
    pairs = np.asarray(data, dtype=float)
    if pairs.shape[-1] != 2:
        raise InvalidStateError("complex entries must be [re, im] pairs")
    return pairs[..., 0] + 1j * pairs[..., 1]


# ----------------------------------------------------------------------------
# Hermitian eigendecomposition through the real-symmetric embedding
# ----------------------------------------------------------------------------

def _embed(matrix: np.ndarray) -> np.ndarray:
    h = np.asarray(matrix, dtype=complex)
    h = (h + h.conj().T) / 2
    a, b = h.real, h.imag
    return np.block([[a, -b], [b, a]])


def hermitian_eigvalsh(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix.

    The d x d complex problem is solved as the 2d x 2d real symmetric problem
    ``[[A, -B], [B, A]]`` whose spectrum is that of ``A + iB`` with every
    eigenvalue doubled.
    """
    if np.asarray(matrix).size == 0:
        return np.zeros(0)
    doubled = np.linalg.eigvalsh(_embed(matrix))
    return doubled[::2]


def hermitian_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal complex eigenvectors (columns).

    Each complex eigenvector ``v`` appears in the embedding twice, as
    ``(Re v, Im v)`` and ``(-Im v, Re v)``. Degenerate clusters are resolved
    by an SVD of the candidate columns, which keeps half of them.
    """
    h = np.asarray(matrix, dtype=complex)
    d = h.shape[0]
    vals, vecs = np.linalg.eigh(_embed(h))
    candidates = vecs[:d] + 1j * vecs[d:]
    scale = max(1.0, float(np.max(np.abs(vals))))
    out_vals, out_vecs = [], []
    start = 0
    while start < 2 * d:
        stop = start + 1
        while stop < 2 * d and vals[stop] - vals[stop - 1] <= 1e-9 * scale:
            stop += 1
        block = candidates[:, start:stop]
        rank = (stop - start + 1) // 2
        u, _, _ = np.linalg.svd(block, full_matrices=False)
        basis = u[:, :rank]
        for col in range(rank):
            v = basis[:, col]
            out_vecs.append(v)
            out_vals.append(float(np.real(v.conj() @ h @ v)))
        start = stop
    vecs_c = np.column_stack(out_vecs)
    vals_c = np.asarray(out_vals)
    order = np.argsort(vals_c, kind="stable")
    return vals_c[order], vecs_c[:, order]


def clipped_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues with bounded negative noise zeroed and sum renormalized to 1."""
    vals = hermitian_eigvalsh(matrix)
    if vals.size and vals[0] < -EIG_CLIP:
        raise InvalidStateError(f"negative eigenvalue {vals[0]:.3e} beyond clipping threshold")
    vals = np.where(vals < EIG_CLIP, 0.0, vals)
    total = vals.sum()
    if total <= 0:
        raise InvalidStateError("matrix has no positive spectrum")
    return vals / total


def spectrum_entropy(probabilities: np.ndarray) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = np.asarray(probabilities, dtype=float)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def von_neumann_entropy(rho: DensityState | np.ndarray) -> float:
    """Von Neumann entropy ``-Tr(rho log2 rho)`` in bits."""
    matrix = rho.matrix if isinstance(rho, DensityState) else np.asarray(rho)
    return spectrum_entropy(clipped_spectrum(matrix))


# ----------------------------------------------------------------------------
# Register algebra
# ----------------------------------------------------------------------------

def tensor_product(a: State, b: State) -> State:
    """Kronecker product; pure inputs stay pure, otherwise a density state."""
    layout = a.layout.concat(b.layout)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(layout, np.kron(a.amplitudes, b.amplitudes))
    ma = a.to_density().matrix if isinstance(a, PureState) else a.matrix
    mb = b.to_density().matrix if isinstance(b, PureState) else b.matrix
    return DensityState(layout, np.kron(ma, mb))


def reduced_matrix(state: State, keep: str | Iterable[str]) -> np.ndarray:
    """Matrix of the marginal on ``keep`` (kept subsystems in layout order)."""
    layout = state.layout
    keep = layout.ordered(_as_labels(keep))
    if not keep:
        raise AddressingError("partial trace needs at least one kept label")
    keep_axes = [layout.index(label) for label in keep]
    drop_axes = [i for i in range(len(layout)) if i not in keep_axes]
    dk = int(np.prod([layout.dims[i] for i in keep_axes], dtype=np.int64))
    dt = int(np.prod([layout.dims[i] for i in drop_axes], dtype=np.int64))
    if isinstance(state, PureState):
        psi = np.transpose(state.tensor(), keep_axes + drop_axes).reshape(dk, dt)
        return psi @ psi.conj().T
    n = len(layout)
    t = state.matrix.reshape(layout.dims + layout.dims)
    perm = keep_axes + drop_axes
    t = np.transpose(t, perm + [n + i for i in perm]).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_trace(state: State, keep: str | Iterable[str]) -> DensityState:
    """Trace out everything except ``keep``."""
    return DensityState(state.layout.sub(_as_labels(keep)), reduced_matrix(state, keep))


def subset_spectrum(state: State, subset: str | Iterable[str]) -> np.ndarray:
    """Clipped spectrum of a marginal.

    For a pure global state the smaller side of the bipartition is
    diagonalized; both sides share the nonzero spectrum.
    """
    layout = state.layout
    subset = layout.ordered(_as_labels(subset))
    if not subset:
        raise AddressingError("subset must name at least one label")
    if isinstance(state, PureState):
        rest = [label for label in layout.labels if label not in subset]
        if not rest:
            return np.array([1.0])
        if layout.sub(rest).total_dim < layout.sub(subset).total_dim:
            subset = tuple(rest)
    return clipped_spectrum(reduced_matrix(state, subset))


def purify(rho: DensityState, reference_label: str) -> PureState:
    """Purify ``rho`` with a reference of full dimension placed first.

    The result is the Schmidt form ``sum_i sqrt(l_i) |i>_R |e_i>`` with the
    eigenvalues in descending order, so a pure input becomes ``|0>_R|psi>``.
    """
    if reference_label in rho.layout:
        raise LayoutConflictError(f"reference label {reference_label!r} already in layout")
    d = rho.layout.total_dim
    vals, vecs = hermitian_eigh(rho.matrix)
    if vals[0] < -EIG_CLIP:
        raise InvalidStateError(f"cannot purify: eigenvalue {vals[0]:.3e}")
    vals, vecs = vals[::-1], vecs[:, ::-1]
    weights = np.sqrt(np.clip(vals, 0.0, None))
    # amplitude[i, q] = sqrt(l_i) <q|e_i>
    amps = (vecs * weights).T
    layout = RegisterLayout(((reference_label, d),)).concat(rho.layout)
    return PureState.normalized(layout, amps.ravel())


def apply_local(state: PureState, label: str, operator: np.ndarray) -> PureState:
    """Apply a square (norm-preserving) operator to one subsystem."""
    axis = state.layout.index(label)
    psi = np.moveaxis(state.tensor(), axis, 0)
    psi = np.tensordot(operator, psi, axes=([1], [0]))
    return PureState(state.layout, np.moveaxis(psi, 0, axis).ravel())


def permute(state: PureState, order: Sequence[str]) -> PureState:
    """Reorder the subsystems of a pure state."""
    layout = state.layout
    if sorted(order) != sorted(layout.labels):
        raise AddressingError(f"permutation {list(order)} does not match labels {layout.labels}")
    axes = [layout.index(label) for label in order]
    new_layout = RegisterLayout(tuple((label, layout.dim(label)) for label in order))
    return PureState(new_layout, np.transpose(state.tensor(), axes).ravel())


# ----------------------------------------------------------------------------
# Random states for property checks
# ----------------------------------------------------------------------------

def random_density(layout: RegisterLayout, rng: np.random.Generator) -> DensityState:
    """Full-rank sample: ``G G^dagger`` with standard complex normal ``G``, trace-normalized."""
    d = layout.total_dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityState(layout, m / np.trace(m).real)


def random_pure(layout: RegisterLayout, rng: np.random.Generator) -> PureState:
    d = layout.total_dim
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.normalized(layout, v)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


# ----------------------------------------------------------------------------
# Common fixtures
# ----------------------------------------------------------------------------

def bell_state(a: str = "A", b: str = "B") -> PureState:
    """(|00> + |11>)/sqrt(2)."""
    return PureState.normalized(RegisterLayout.qubits(a, b), [1, 0, 0, 1])


def ghz_state(*labels: str) -> PureState:
    labels = labels or ("A", "B", "C")
    d = 2 ** len(labels)
    amps = np.zeros(d, dtype=complex)
    amps[0] = amps[-1] = 1
    return PureState.normalized(RegisterLayout.qubits(*labels), amps)


def basis_state(layout: RegisterLayout, index: int | Sequence[int] = 0) -> PureState:
    """Computational basis ket; ``index`` is flat or one digit per subsystem."""
    if not isinstance(index, (int, np.integer)):
        index = int(np.ravel_multi_index(tuple(index), layout.dims))
    amps = np.zeros(layout.total_dim, dtype=complex)
    amps[index] = 1
    return PureState(layout, amps)


def maximally_entangled(ref_labels: Sequence[str], sys_labels: Sequence[str], dim: int = 2) -> PureState:
    """Each ``ref_labels[i]`` maximally entangled with ``sys_labels[i]``; refs first."""
    if len(ref_labels) != len(sys_labels):
        raise AddressingError("reference and system label lists differ in length")
    pair = np.eye(dim).ravel() / np.sqrt(dim)
    state = PureState(RegisterLayout.of((ref_labels[0], dim), (sys_labels[0], dim)), pair)
    for r, s in zip(ref_labels[1:], sys_labels[1:]):
        state = tensor_product(state, PureState(RegisterLayout.of((r, dim), (s, dim)), pair))
    return permute(state, list(ref_labels) + list(sys_labels))


def merge_subsystems(state: PureState, labels: Sequence[str], new_label: str) -> PureState:
    """Fuse ``labels`` (in the given order) into one subsystem placed first."""
    rest = [label for label in state.layout.labels if label not in labels]
    if new_label in rest:
        raise LayoutConflictError(f"label {new_label!r} already in use")
    ordered = permute(state, list(labels) + rest)
    dim = int(np.prod([state.layout.dim(label) for label in labels], dtype=np.int64))
    layout = RegisterLayout(((new_label, dim),) + tuple((label, state.layout.dim(label)) for label in rest))
    return PureState(layout, ordered.amplitudes)


def entangled_block_input(n: int, entangled: bool = True, reference: str = "R") -> PureState:
    """Reference ``R`` plus qubit symbols ``Q1..Qn``.

    ``entangled=False`` gives each symbol its own maximally entangled
    reference qubit (all fused into ``R``), so the symbols are independent.
    ``entangled=True`` gives the GHZ state over ``R, Q1..Qn``: one qubit of
    source entropy shared by mutually correlated symbols.
    """
    syms = [f"Q{i}" for i in range(1, n + 1)]
    if entangled:
        return ghz_state(reference, *syms)
    refs = [f"{reference}{i}" for i in range(1, n + 1)]
    return merge_subsystems(maximally_entangled(refs, syms), refs, reference)
