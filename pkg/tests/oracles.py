"""Independent reference constructions used as oracles by the test suite.

Everything here is deliberately written with a different mechanism than the
package under test: explicit index loops instead of reshape/transpose tricks,
itertools filters instead of parity arithmetic, hand-entered Bell vectors.
Slow is fine; these only run on small systems.
"""

from __future__ import annotations

import itertools

import numpy as np

SQ2 = 1.0 / np.sqrt(2.0)

BELL_VECTORS = {
    "phi+": np.array([SQ2, 0, 0, SQ2], dtype=complex),
    "phi-": np.array([SQ2, 0, 0, -SQ2], dtype=complex),
    "psi+": np.array([0, SQ2, SQ2, 0], dtype=complex),
    "psi-": np.array([0, SQ2, -SQ2, 0], dtype=complex),
}


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def ghz_vec(base: str, sign: int) -> np.ndarray:
    comp = "".join("1" if c == "0" else "0" for c in base)
    return (ket(base) + sign * ket(comp)) * SQ2


def proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def smolin_state() -> np.ndarray:
    """Equal mixture of the four two-Bell-pair products."""
    m = sum(np.kron(proj(b), proj(b)) for b in BELL_VECTORS.values())
    return m / 4.0


def parity_filter(two_n: int, family: str) -> list[str]:
    """Brute-force enumeration of the two parity-constrained string families.

    family "p": first bit 0, even number of 0s overall.
    family "q": first bit 0, odd number of 0s overall.
    """
    out = []
    for bits in itertools.product("01", repeat=two_n):
        s = "".join(bits)
        if s[0] != "0":
            continue
        zeros = s.count("0")
        if family == "p" and zeros % 2 == 0:
            out.append(s)
        elif family == "q" and zeros % 2 == 1:
            out.append(s)
    return out


def family_reference(two_n: int, kind: str, sign: int) -> np.ndarray:
    """Uniform GHZ-projector mixture over a parity family, by direct summation.

    kind "p" with sign +/-1 gives the rho families, kind "q" the sigma ones.
    """
    strings = parity_filter(two_n, kind)
    m = sum(proj(ghz_vec(s, sign)) for s in strings)
    return m / len(strings)


def pt_reference(rho: np.ndarray, subset: list[int], n: int) -> np.ndarray:
    """Partial transpose by explicit index manipulation (1-based subset)."""
    d = 2 ** n
    out = np.zeros_like(rho)
    for i in range(d):
        for j in range(d):
            ib = format(i, f"0{n}b")
            jb = format(j, f"0{n}b")
            ri = list(ib)
            rj = list(jb)
            for q in subset:
                ri[q - 1], rj[q - 1] = rj[q - 1], ri[q - 1]
            out[int("".join(ri), 2), int("".join(rj), 2)] = rho[i, j]
    return out


def ptrace_reference(rho: np.ndarray, keep: list[int], n: int) -> np.ndarray:
    """Partial trace keeping the 1-based qubits in `keep`, by summation."""
    discard = [q for q in range(1, n + 1) if q not in keep]
    dk = 2 ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)
    for i in range(dk):
        for j in range(dk):
            ib = format(i, f"0{len(keep)}b")
            jb = format(j, f"0{len(keep)}b")
            for e in itertools.product("01", repeat=len(discard)):
                row = [""] * n
                col = [""] * n
                for pos, q in enumerate(keep):
                    row[q - 1] = ib[pos]
                    col[q - 1] = jb[pos]
                for pos, q in enumerate(discard):
                    row[q - 1] = e[pos]
                    col[q - 1] = e[pos]
                out[i, j] += rho[int("".join(row), 2), int("".join(col), 2)]
    return out


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary from the QR decomposition of a complex Gaussian."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = z @ z.conj().T
    return m / np.trace(m).real
