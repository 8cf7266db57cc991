"""Independent oracles used across the test suite.

These deliberately avoid the code paths they check: the chain oracle is a
dense linear solve of the balance equations, and the partition oracle uses
exact rational arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def dense_steady_state(n: int, mu: float, birth_rate) -> np.ndarray:
    """Steady state of a birth-death chain on 0..n by dense linear solve.

    ``birth_rate(i)`` is the upward rate out of state i; downward rate is i*mu.
    """
    q = np.zeros((n + 1, n + 1))
    for i in range(n):
        q[i, i + 1] = birth_rate(i)
    for i in range(1, n + 1):
        q[i, i - 1] = i * mu
    np.fill_diagonal(q, -q.sum(axis=1))
    # replace the last balance equation with the normalization constraint
    a = q.T.copy()
    a[-1, :] = 1.0
    b = np.zeros(n + 1)
    b[-1] = 1.0
    return np.linalg.solve(a, b)


def guard_birth_rate(limits, rates):
    """Birth-rate function for the guard-channel chain: classes with N_m > i."""

    def birth(i):
        return sum(lam for lam, n_m in zip(rates, limits) if n_m > i)

    return birth


def exact_partition(n: int, gamma: int, rates) -> tuple[list[int], list[int]]:
    """(y_m, N_m) by exact rational arithmetic; rates given as strings/Fractions."""
    fr = [Fraction(str(r)) for r in rates]
    total = sum(fr)
    y = [math.floor(sum(fr[m:]) / total * gamma) for m in range(len(fr))]
    limits = [n - gamma + ym for ym in y]
    return y, limits


def erlang_b_direct(servers: int, offered: float) -> float:
    """Erlang B from the definition, term sums in log domain."""
    logs = [k * math.log(offered) - math.lgamma(k + 1) if offered > 0 else (0.0 if k == 0 else -math.inf)
            for k in range(servers + 1)]
    top = max(logs)
    weights = [math.exp(l - top) for l in logs]
    return weights[-1] / sum(weights)
