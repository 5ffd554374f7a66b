"""Two-phase dense tableau simplex with Bland's anti-cycling rule.

Solves   minimize c.x   subject to   A x >= b,  x >= 0.

Written for the covering problems this package generates: tens of variables,
a handful of 0/1 constraint rows.  No external solver is used on purpose; at
this size a plain tableau is exact to well below 1e-9 and trivially
auditable.  Bland's rule (always pick the lowest-index eligible column, break
ratio ties by lowest basic index) guarantees termination.
"""

from __future__ import annotations

import numpy as np

PIVOT_TOL = 1e-9


class Infeasible(Exception):
    """The constraint system admits no nonnegative solution."""


class Unbounded(Exception):
    """The objective can be pushed to -infinity inside the feasible region."""


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and abs(tableau[r, col]) > 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _run(tableau: np.ndarray, basis: list[int], ncols: int) -> None:
    # tableau rows: m constraint rows then the objective row; last column is rhs
    m = tableau.shape[0] - 1
    while True:
        obj = tableau[m, :ncols]
        entering = -1
        for j in range(ncols):
            if obj[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return
        leaving, best = -1, np.inf
        for i in range(m):
            a = tableau[i, entering]
            if a > PIVOT_TOL:
                ratio = tableau[i, -1] / a
                if ratio < best - PIVOT_TOL or (
                        abs(ratio - best) <= PIVOT_TOL
                        and (leaving < 0 or basis[i] < basis[leaving])):
                    leaving, best = i, ratio
        if leaving < 0:
            raise Unbounded(f"column {entering} is unbounded")
        _pivot(tableau, basis, leaving, entering)


def solve_min(c: np.ndarray, a_ge: np.ndarray, b_ge: np.ndarray) -> tuple[float, np.ndarray]:
    """Minimize c.x over {A x >= b, x >= 0}; returns (optimal value, x)."""
    c = np.asarray(c, dtype=float)
    a = np.array(a_ge, dtype=float, ndmin=2)
    b = np.array(b_ge, dtype=float).reshape(-1)
    m, n = a.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError(f"inconsistent shapes: c {c.shape}, A {a.shape}, b {b.shape}")

    # equality form: A x - s = b, then flip rows so every rhs is nonnegative
    full = np.hstack([a, -np.eye(m)])
    rhs = b.copy()
    for i in range(m):
        if rhs[i] < 0:
            full[i] *= -1.0
            rhs[i] *= -1.0

    # phase 1: artificial basis, drive sum of artificials to zero
    nv = n + m           # structural + surplus columns
    ncols = nv + m       # + artificials
    tableau = np.zeros((m + 1, ncols + 1))
    tableau[:m, :nv] = full
    tableau[:m, nv:ncols] = np.eye(m)
    tableau[:m, -1] = rhs
    basis = [nv + i for i in range(m)]
    tableau[m, nv:ncols] = 1.0
    for i in range(m):  # price out the artificial basis
        tableau[m] -= tableau[i]
    _run(tableau, basis, ncols)
    if tableau[m, -1] < -PIVOT_TOL:
        raise Infeasible(f"phase-1 objective {-tableau[m, -1]:.3e} > 0")

    # remove artificials still sitting in the basis at level zero
    drop_rows = []
    for i in range(m):
        if basis[i] >= nv:
            piv = next((j for j in range(nv) if abs(tableau[i, j]) > PIVOT_TOL), None)
            if piv is None:
                drop_rows.append(i)  # redundant constraint row
            else:
                _pivot(tableau, basis, i, piv)
    if drop_rows:
        keep = [i for i in range(m) if i not in drop_rows] + [m]
        tableau = tableau[keep]
        basis = [basis[i] for i in range(m) if i not in drop_rows]
        m = len(basis)

    # phase 2: restore the real objective, priced out against the basis
    tableau[m, :] = 0.0
    tableau[m, :n] = c
    for i in range(m):
        if tableau[m, basis[i]] != 0.0:
            tableau[m] -= tableau[m, basis[i]] * tableau[i]
    _run(tableau, basis, nv)

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i, -1]
    return float(-tableau[m, -1]), x
