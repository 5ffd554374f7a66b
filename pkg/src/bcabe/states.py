"""The four 2N-qubit GHZ-diagonal state families and their structure checks.

Basis strings split into two parity classes over 2N qubits: "p" strings have
first bit 0 and an even number of 0s overall, "q" strings have first bit 0 and
an odd number of 0s.  Each class has 2**(2N-2) members, and together with
their bitwise complements they cover all 2**(2N) computational labels.

Cat states over these classes,

    (|s> + sign |s_bar>) / sqrt(2),

form an orthonormal basis of the full Hilbert space.  The four families are
the uniform mixtures of the cat-state projectors: rho+/- over the "p" class
with sign +/-, sigma+/- over the "q" class.  At two_n = 2 the classes reduce
to {00} and {01} and the mixtures reduce to the four Bell projectors, which
is the base of the recursion implemented by verify_recursion: each family at
size 2N is an equal four-way mixture of (Bell projector on a qubit pair)
tensor (family at size 2N-2), with the Bell label and lower family sign
locked together.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tensor import (
    STATE_ATOL,
    DensityMatrix,
    Projector,
    PureState,
    apply_unitary_on_subset,
    PAULIS,
    fidelity_with_pure,
    permute_qubits_matrix,
    permute_qubits_vector,
    tensor_product,
    trace_distance,
)


class FamilyLabel(Enum):
    RHO_PLUS = "rho+"
    RHO_MINUS = "rho-"
    SIGMA_PLUS = "sigma+"
    SIGMA_MINUS = "sigma-"

    @property
    def parity_class(self) -> str:
        return "p" if self in (FamilyLabel.RHO_PLUS, FamilyLabel.RHO_MINUS) else "q"

    @property
    def sign(self) -> int:
        return +1 if self in (FamilyLabel.RHO_PLUS, FamilyLabel.SIGMA_PLUS) else -1


class BellLabel(Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


# fixed enumeration order used everywhere tuples of Bell labels are listed
BELL_ORDER = (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS, BellLabel.PSI_PLUS, BellLabel.PSI_MINUS)

_BELL_BITS = {
    BellLabel.PHI_PLUS: ("00", +1),
    BellLabel.PHI_MINUS: ("00", -1),
    BellLabel.PSI_PLUS: ("01", +1),
    BellLabel.PSI_MINUS: ("01", -1),
}

# single-qubit Pauli (applied to the first qubit of the pair) that maps each
# Bell state onto phi+; ZX means apply X then Z and equals Y up to phase
BELL_CORRECTIONS = {
    BellLabel.PHI_PLUS: "I",
    BellLabel.PHI_MINUS: "Z",
    BellLabel.PSI_PLUS: "X",
    BellLabel.PSI_MINUS: "ZX",
}

CORRECTION_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "Z": PAULIS["Z"],
    "X": PAULIS["X"],
    "ZX": PAULIS["Z"] @ PAULIS["X"],
}


class NotBellCorrelated(Exception):
    """The state is not a mixture of Bell-label products over the given pairing."""


@dataclass(frozen=True)
class BasisString:
    """Computational-basis label of even length, read qubit 1 first."""

    bits: str

    def __post_init__(self):
        if set(self.bits) - {"0", "1"}:
            raise ValueError(f"bits must be 0/1, got {self.bits!r}")
        if len(self.bits) < 2 or len(self.bits) % 2:
            raise ValueError(f"length must be even and >= 2, got {len(self.bits)}")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return int(self.bits, 2)


def complement(s: BasisString) -> BasisString:
    """Flip every bit."""
    return BasisString("".join("1" if c == "0" else "0" for c in s.bits))


def _parity_strings(two_n: int, parity_class: str) -> list[BasisString]:
    # first bit fixed to 0; total number of 0s even for "p", odd for "q"
    want_even = parity_class == "p"
    out = []
    for rest in range(2 ** (two_n - 1)):
        bits = "0" + format(rest, f"0{two_n - 1}b")
        if (bits.count("0") % 2 == 0) == want_even:
            out.append(BasisString(bits))
    return out


def enumerate_parity_strings(two_n: int, parity_class: str) -> list[BasisString]:
    """All canonical strings of one parity class, in lexicographic order.

    Canonical means the first bit is 0; the complements are the remaining
    labels.  Each class has exactly 2**(two_n - 2) members.
    """
    if two_n < 4 or two_n % 2:
        raise ValueError(f"two_n must be even and >= 4, got {two_n}")
    if parity_class not in ("p", "q"):
        raise ValueError(f"parity class must be 'p' or 'q', got {parity_class!r}")
    return _parity_strings(two_n, parity_class)


@dataclass(frozen=True)
class GhzBasisState:
    """Cat state (|base> + sign |base_bar>)/sqrt(2) with canonical base (first bit 0)."""

    base: BasisString
    sign: int
    state: PureState


def ghz_state(base: BasisString, sign: int) -> GhzBasisState:
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if base.bits[0] != "0":
        raise ValueError(f"canonical base must start with 0, got {base.bits!r}")
    n = len(base)
    amps = np.zeros(2 ** n, dtype=complex)
    amps[base.index] = 1.0 / np.sqrt(2.0)
    amps[complement(base).index] = sign / np.sqrt(2.0)
    return GhzBasisState(base, sign, PureState(n, amps))


def ghz_basis(two_n: int) -> list[GhzBasisState]:
    """All 2**two_n cat states: both parity classes, both signs, lexicographic bases."""
    out = []
    for cls in ("p", "q"):
        for base in _parity_strings(two_n, cls):
            for sign in (+1, -1):
                out.append(ghz_state(base, sign))
    return out


def bell_state(label: BellLabel) -> PureState:
    bits, sign = _BELL_BITS[label]
    return ghz_state(BasisString(bits), sign).state


def build_family(two_n: int, label: FamilyLabel) -> DensityMatrix:
    """Uniform mixture of the family's cat-state projectors.

    two_n = 2 is allowed as the recursion base and yields the Bell projector
    matching the label (phi+/- for rho+/-, psi+/- for sigma+/-).
    """
    if two_n < 2 or two_n % 2:
        raise ValueError(f"two_n must be even and >= 2, got {two_n}")
    strings = _parity_strings(two_n, label.parity_class)
    d = 2 ** two_n
    m = np.zeros((d, d), dtype=complex)
    for s in strings:
        v = ghz_state(s, label.sign).state.amplitudes
        m += np.outer(v, v.conj())
    return DensityMatrix(two_n, m / len(strings))


def family_support_projector(two_n: int, label: FamilyLabel) -> Projector:
    """Projector onto the span of the family's cat states (rank 2**(two_n-2))."""
    strings = _parity_strings(two_n, label.parity_class)
    d = 2 ** two_n
    m = np.zeros((d, d), dtype=complex)
    for s in strings:
        v = ghz_state(s, label.sign).state.amplitudes
        m += np.outer(v, v.conj())
    return Projector(two_n, m)


def recursion_blocks(label: FamilyLabel) -> tuple[tuple[BellLabel, FamilyLabel], ...]:
    """The four (Bell label, lower family) blocks whose equal mixture gives `label`.

    For rho with sign s: (phi+, rho s), (phi-, rho -s), (psi+, sigma s), (psi-, sigma -s).
    For sigma with sign s the phi and psi roles swap.
    """
    s = label.sign
    rho = {+1: FamilyLabel.RHO_PLUS, -1: FamilyLabel.RHO_MINUS}
    sig = {+1: FamilyLabel.SIGMA_PLUS, -1: FamilyLabel.SIGMA_MINUS}
    if label.parity_class == "p":
        return (
            (BellLabel.PHI_PLUS, rho[s]),
            (BellLabel.PHI_MINUS, rho[-s]),
            (BellLabel.PSI_PLUS, sig[s]),
            (BellLabel.PSI_MINUS, sig[-s]),
        )
    return (
        (BellLabel.PSI_PLUS, rho[s]),
        (BellLabel.PSI_MINUS, rho[-s]),
        (BellLabel.PHI_PLUS, sig[s]),
        (BellLabel.PHI_MINUS, sig[-s]),
    )


@dataclass(frozen=True)
class RecursionCheck:
    family: FamilyLabel
    block_position: str  # "leading" (Bell pair on qubits 1-2) or "trailing"
    distance: float


def verify_recursion(two_n: int) -> list[RecursionCheck]:
    """Check every family against its one-step recursion, both block placements.

    Returns 8 trace distances: 4 families x {leading, trailing} position of
    the Bell-pair block.  Both placements must agree because the families are
    permutation invariant; leading (qubits 1-2) is the documented convention.
    """
    if two_n < 4 or two_n % 2:
        raise ValueError(f"two_n must be even and >= 4, got {two_n}")
    lower = {f: build_family(two_n - 2, f) for f in FamilyLabel}
    bells = {b: bell_state(b).to_density() for b in BellLabel}
    out = []
    for label in FamilyLabel:
        target = build_family(two_n, label)
        blocks = recursion_blocks(label)
        leading = sum(tensor_product(bells[b], lower[f]).entries for b, f in blocks) / 4.0
        trailing = sum(tensor_product(lower[f], bells[b]).entries for b, f in blocks) / 4.0
        out.append(RecursionCheck(label, "leading", trace_distance(target.entries, leading)))
        out.append(RecursionCheck(label, "trailing", trace_distance(target.entries, trailing)))
    return out


def pauli_connection_search(a: FamilyLabel, b: FamilyLabel, two_n: int):
    """Find a single-qubit Pauli conjugation mapping family a onto family b.

    Scans qubits 1..two_n in order and X, Y, Z per qubit; returns the first
    (qubit, pauli name) hit or None.  Distinct families are all connected this
    way (any hit appears already on qubit 1).
    """
    rho_a = build_family(two_n, a)
    rho_b = build_family(two_n, b)
    for qubit in range(1, two_n + 1):
        for name in ("X", "Y", "Z"):
            moved = apply_unitary_on_subset(rho_a, PAULIS[name], [qubit])
            if trace_distance(moved, rho_b) < STATE_ATOL:
                return qubit, name
    return None


def bell_product_state(labels: tuple[BellLabel, ...], pairing: tuple[tuple[int, int], ...],
                       num_qubits: int) -> PureState:
    """Product of Bell states placed on the listed qubit pairs."""
    _check_pairing(pairing, num_qubits)
    v = np.ones(1, dtype=complex)
    for lbl in labels:
        v = np.kron(v, bell_state(lbl).amplitudes)
    slots = [q for pair in pairing for q in pair]
    # tensor slot order is `slots`; rearrange so output qubit k is physical k
    perm = [slots.index(q) + 1 for q in range(1, num_qubits + 1)]
    return PureState(num_qubits, permute_qubits_vector(v, perm))


def _check_pairing(pairing, num_qubits: int) -> None:
    flat = [q for pair in pairing for q in pair]
    if any(len(pair) != 2 for pair in pairing):
        raise ValueError(f"pairing must consist of qubit pairs, got {pairing}")
    if sorted(flat) != list(range(1, num_qubits + 1)):
        raise ValueError(f"pairing must cover qubits 1..{num_qubits} exactly once, got {pairing}")


def bell_tuple_decomposition(rho: DensityMatrix, pairing: tuple[tuple[int, int], ...]
                             ) -> list[tuple[tuple[BellLabel, ...], float]]:
    """Expand rho as a mixture of Bell-state products over the given pairing.

    Returns the tuples with weight above STATE_ATOL, in lexicographic
    BELL_ORDER enumeration order.  Raises NotBellCorrelated when the kept
    tuples fail to reconstruct rho to within STATE_ATOL trace distance.
    """
    _check_pairing(pairing, rho.num_qubits)
    n_pairs = len(pairing)
    kept: list[tuple[tuple[BellLabel, ...], float]] = []
    recon = np.zeros_like(rho.entries)
    for labels in itertools.product(BELL_ORDER, repeat=n_pairs):
        basis_state = bell_product_state(labels, pairing, rho.num_qubits)
        w = fidelity_with_pure(rho, basis_state)
        if w > STATE_ATOL:
            kept.append((labels, w))
            v = basis_state.amplitudes
            recon += w * np.outer(v, v.conj())
    gap = trace_distance(recon, rho.entries)
    if gap > STATE_ATOL:
        raise NotBellCorrelated(
            f"state is not Bell-correlated over pairing {pairing}: "
            f"reconstruction misses by trace distance {gap:.3e}")
    return kept


def permutation_invariance_check(two_n: int, label: FamilyLabel) -> float:
    """Max trace distance between the family and itself under any qubit transposition."""
    rho = build_family(two_n, label)
    worst = 0.0
    for i in range(1, two_n + 1):
        for j in range(i + 1, two_n + 1):
            perm = list(range(1, two_n + 1))
            perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
            moved = permute_qubits_matrix(rho.entries, perm)
            worst = max(worst, trace_distance(moved, rho.entries))
    return worst
