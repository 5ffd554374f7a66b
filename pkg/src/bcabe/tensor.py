"""Dense linear algebra for small multi-qubit pure states and density matrices.

Qubits are numbered 1..n and qubit 1 is the most significant bit of the
computational-basis index, so a basis label |a1 a2 ... an> reads left to
right.  Everything is dense complex128 and sized for desk-scale systems;
dimensions are capped at 2**MAX_QUBITS per object.

All operations are pure functions: inputs are never mutated and the wrapped
numpy arrays are marked read-only on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

MAX_QUBITS = 12

STATE_ATOL = 1e-12      # state equality, norms, traces
OPERATOR_ATOL = 1e-10   # PSD floor, idempotence, unitarity, hermiticity
ZERO_PROB_ATOL = 1e-14  # branches below this probability are not renormalized

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


class ZeroProbabilityBranch(Exception):
    """A projective measurement branch has probability below ZERO_PROB_ATOL."""

    def __init__(self, probability: float):
        super().__init__(f"zero-probability branch (p = {probability:.3e})")
        self.probability = probability


def _qubit_count_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or dim != 2 ** n:
        raise ValueError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    return n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class QubitSubset:
    """Strictly increasing 1-based qubit positions."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 1 for i in idx):
            raise ValueError(f"qubit indices are 1-based, got {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"qubit indices must be strictly increasing, got {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, source: Union["QubitSubset", Iterable[int]]) -> "QubitSubset":
        if isinstance(source, QubitSubset):
            return source
        idx = sorted(int(i) for i in source)
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate qubit index in {idx}")
        return cls(tuple(idx))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def check_range(self, num_qubits: int) -> None:
        if self.indices and self.indices[-1] > num_qubits:
            raise ValueError(
                f"qubit {self.indices[-1]} out of range for {num_qubits} qubits"
            )


@dataclass(frozen=True)
class PureState:
    """Unit-norm state vector over num_qubits qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        n = _qubit_count_for(a.size)
        if n != self.num_qubits:
            raise ValueError(f"amplitude length {a.size} does not match {self.num_qubits} qubits")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > STATE_ATOL:
            raise ValueError(f"state norm {norm} deviates from 1 by more than {STATE_ATOL}")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @classmethod
    def from_amplitudes(cls, amplitudes: Iterable[complex]) -> "PureState":
        a = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes)
        return cls(_qubit_count_for(a.size), a)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational-basis state |bits>, bits read qubit 1 first."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"bits must be a nonempty 0/1 string, got {bits!r}")
        a = np.zeros(2 ** len(bits), dtype=complex)
        a[int(bits, 2)] = 1.0
        return cls(len(bits), a)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.num_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD (within tolerance) operator on num_qubits qubits."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        n = _qubit_count_for(m.shape[0])
        if n != self.num_qubits:
            raise ValueError(f"matrix dimension {m.shape[0]} does not match {self.num_qubits} qubits")
        if np.abs(m - m.conj().T).max() > STATE_ATOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > STATE_ATOL:
            raise ValueError(f"trace {tr} deviates from 1 by more than {STATE_ATOL}")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -OPERATOR_ATOL:
            raise ValueError(f"matrix has eigenvalue {lo} below the -{OPERATOR_ATOL} PSD floor")
        object.__setattr__(self, "entries", _frozen(m))

    @classmethod
    def from_entries(cls, entries: np.ndarray) -> "DensityMatrix":
        m = np.asarray(entries)
        return cls(_qubit_count_for(m.shape[0]), m)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        d = 2 ** num_qubits
        return cls(num_qubits, np.eye(d, dtype=complex) / d)


@dataclass(frozen=True)
class Projector:
    """Hermitian idempotent operator (within OPERATOR_ATOL) on num_qubits qubits."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"projector must be square, got shape {m.shape}")
        n = _qubit_count_for(m.shape[0])
        if n != self.num_qubits:
            raise ValueError(f"matrix dimension {m.shape[0]} does not match {self.num_qubits} qubits")
        if np.abs(m - m.conj().T).max() > OPERATOR_ATOL:
            raise ValueError("projector is not Hermitian within tolerance")
        if np.abs(m @ m - m).max() > OPERATOR_ATOL:
            raise ValueError("projector is not idempotent within tolerance")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.entries).real)))


# --- low-level reshape helpers -------------------------------------------------

def permute_qubits_vector(amplitudes: np.ndarray, perm: Iterable[int]) -> np.ndarray:
    """Rearrange qubits of a state vector: output qubit k is input qubit perm[k-1]."""
    a = np.asarray(amplitudes)
    n = _qubit_count_for(a.size)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"perm must be a bijection of 1..{n}, got {perm}")
    axes = [p - 1 for p in perm]
    return a.reshape((2,) * n).transpose(axes).reshape(-1)


def permute_qubits_matrix(entries: np.ndarray, perm: Iterable[int]) -> np.ndarray:
    """Rearrange qubits of an operator: output qubit k is input qubit perm[k-1]."""
    m = np.asarray(entries)
    n = _qubit_count_for(m.shape[0])
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"perm must be a bijection of 1..{n}, got {perm}")
    axes = [p - 1 for p in perm]
    t = m.reshape((2,) * (2 * n)).transpose(axes + [n + x for x in axes])
    return t.reshape(m.shape)


def embed_operator(op: np.ndarray, positions: Iterable[int], num_qubits: int) -> np.ndarray:
    """Extend an operator on the listed qubit positions by identity elsewhere.

    positions are 1-based and strictly increasing; the k-th tensor slot of op
    acts on positions[k].
    """
    subset = QubitSubset.of(positions)
    subset.check_range(num_qubits)
    k = len(subset)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2 ** k, 2 ** k):
        raise ValueError(f"operator shape {op.shape} does not match {k} qubits")
    rest = [q for q in range(1, num_qubits + 1) if q not in subset.indices]
    order = list(subset.indices) + rest
    full = np.kron(op, np.eye(2 ** len(rest), dtype=complex))
    # slot i of `full` is physical qubit order[i]; transpose back to 1..n
    src = [order.index(q) for q in range(1, num_qubits + 1)]
    t = full.reshape((2,) * (2 * num_qubits))
    t = t.transpose(src + [num_qubits + s for s in src])
    return t.reshape(2 ** num_qubits, 2 ** num_qubits)


def _apply_to_slots_vector(a: np.ndarray, n: int, u: np.ndarray, slots: list[int]) -> np.ndarray:
    k = len(slots)
    ut = u.reshape((2,) * (2 * k))
    t = np.tensordot(ut, a.reshape((2,) * n), axes=(list(range(k, 2 * k)), slots))
    return np.moveaxis(t, list(range(k)), slots).reshape(-1)


def _apply_to_slots_matrix(m: np.ndarray, n: int, u: np.ndarray, slots: list[int]) -> np.ndarray:
    # U rho U^dag: contract u into the row slots and conj(u) into the column slots
    k = len(slots)
    t = m.reshape((2,) * (2 * n))
    ut = u.reshape((2,) * (2 * k))
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), slots))
    t = np.moveaxis(t, list(range(k)), slots)
    col = [n + s for s in slots]
    t = np.tensordot(ut.conj(), t, axes=(list(range(k, 2 * k)), col))
    t = np.moveaxis(t, list(range(k)), col)
    return t.reshape(m.shape)


# --- public operations ---------------------------------------------------------

State = Union[PureState, DensityMatrix]


def tensor_product(a: State, b: State) -> State:
    """Combine two states, with operand a occupying the lower-numbered qubits."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.num_qubits + b.num_qubits, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(a.num_qubits + b.num_qubits, np.kron(a.entries, b.entries))
    raise TypeError(f"operands must be the same kind, got {type(a).__name__} and {type(b).__name__}")


def partial_trace(rho: DensityMatrix, discard: Union[QubitSubset, Iterable[int]]) -> DensityMatrix:
    """Trace out the listed qubits, returning the state of the remaining ones.

    The surviving qubits keep their relative order and are renumbered 1..k.
    """
    discard = QubitSubset.of(discard)
    discard.check_range(rho.num_qubits)
    if len(discard) == 0:
        return rho
    n = rho.num_qubits
    keep = [q for q in range(1, n + 1) if q not in discard.indices]
    if not keep:
        raise ValueError("cannot discard every qubit")
    t = rho.entries.reshape((2,) * (2 * n))
    perm = (
        [q - 1 for q in keep]
        + [n + q - 1 for q in keep]
        + [q - 1 for q in discard]
        + [n + q - 1 for q in discard]
    )
    dk, dd = 2 ** len(keep), 2 ** len(discard)
    t = t.transpose(perm).reshape(dk, dk, dd, dd)
    return DensityMatrix(len(keep), np.einsum("abcc->ab", t))


def partial_transpose(rho: DensityMatrix, subset: Union[QubitSubset, Iterable[int]]) -> np.ndarray:
    """Transpose the listed qubits' indices, returning a raw Hermitian matrix.

    The result is generally not PSD, which is the point: its negative
    eigenvalues witness entanglement across the subset/rest split.
    """
    subset = QubitSubset.of(subset)
    subset.check_range(rho.num_qubits)
    n = rho.num_qubits
    axes = list(range(2 * n))
    for q in subset:
        axes[q - 1], axes[n + q - 1] = axes[n + q - 1], axes[q - 1]
    t = rho.entries.reshape((2,) * (2 * n)).transpose(axes)
    return np.array(t.reshape(rho.entries.shape), copy=True)


def hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > OPERATOR_ATOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(m)


def fidelity_with_pure(rho: DensityMatrix, psi: PureState) -> float:
    """<psi| rho |psi> as a real number."""
    if rho.num_qubits != psi.num_qubits:
        raise ValueError("state sizes do not match")
    v = psi.amplitudes
    return float(np.real(v.conj() @ rho.entries @ v))


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference; accepts DensityMatrix or ndarray."""
    ma = a.entries if isinstance(a, DensityMatrix) else np.asarray(a, dtype=complex)
    mb = b.entries if isinstance(b, DensityMatrix) else np.asarray(b, dtype=complex)
    if ma.shape != mb.shape:
        raise ValueError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return float(0.5 * np.abs(np.linalg.eigvalsh(ma - mb)).sum())


def apply_unitary_on_subset(state: State, u: np.ndarray,
                            subset: Union[QubitSubset, Iterable[int]]) -> State:
    """Apply a unitary on the listed qubits (slot k of u acts on subset[k])."""
    subset = QubitSubset.of(subset)
    subset.check_range(state.num_qubits)
    k = len(subset)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2 ** k, 2 ** k):
        raise ValueError(f"unitary shape {u.shape} does not match {k} qubits")
    if np.abs(u @ u.conj().T - np.eye(2 ** k)).max() > OPERATOR_ATOL:
        raise ValueError("operator is not unitary within tolerance")
    slots = [q - 1 for q in subset]
    if isinstance(state, PureState):
        return PureState(state.num_qubits,
                         _apply_to_slots_vector(state.amplitudes, state.num_qubits, u, slots))
    if isinstance(state, DensityMatrix):
        return DensityMatrix(state.num_qubits,
                             _apply_to_slots_matrix(state.entries, state.num_qubits, u, slots))
    raise TypeError(f"unsupported state kind {type(state).__name__}")


def project_and_renormalize(rho: DensityMatrix, p: Projector) -> tuple[DensityMatrix, float]:
    """Condition rho on projector p, returning (normalized state, probability).

    Raises ZeroProbabilityBranch instead of dividing when the branch
    probability falls below ZERO_PROB_ATOL.
    """
    if rho.num_qubits != p.num_qubits:
        raise ValueError("projector size does not match state")
    post = p.entries @ rho.entries @ p.entries
    prob = float(np.trace(post).real)
    if prob < ZERO_PROB_ATOL:
        raise ZeroProbabilityBranch(prob)
    return DensityMatrix(rho.num_qubits, post / prob), prob
