"""Vectorized GP round counts for many failure patterns at once.

Used by the Monte Carlo and safety estimators; every result here equals
``hgp(k, row)`` for the corresponding row, which the tests check.
"""

from __future__ import annotations

import numpy as np


def batch_gp_rounds(success: np.ndarray) -> np.ndarray:
    """Round complexity of GP for each row of a (trials, k) 0/1 matrix.

    Row i, column j is 1 iff the j-th entry of the start list (position j+1)
    is a working processor. All lists stay arithmetic progressions over list
    positions, so each active list is (trial, first, length, step).
    """
    success = np.asarray(success, dtype=bool)
    trials, k = success.shape
    rounds = np.zeros(trials, dtype=np.int64)
    if k == 0 or trials == 0:
        return rounds

    tid = np.arange(trials, dtype=np.int64)
    first = np.zeros(trials, dtype=np.int64)
    length = np.full(trials, k, dtype=np.int64)
    step = np.ones(trials, dtype=np.int64)
    r = 0
    while tid.size:
        r += 1
        rounds[tid] = r
        ok = success[tid, first]
        rest = length - 1
        fail = ~ok
        tid = np.concatenate([tid[fail], tid[ok], tid[ok]])
        first = np.concatenate([first[fail] + step[fail], first[ok] + step[ok], first[ok] + 2 * step[ok]])
        length = np.concatenate([rest[fail], (rest[ok] + 1) // 2, rest[ok] // 2])
        step = np.concatenate([step[fail], 2 * step[ok], 2 * step[ok]])
        live = length > 0
        tid, first, length, step = tid[live], first[live], length[live], step[live]
    return rounds


def alive_matrix(orders: np.ndarray, failed) -> np.ndarray:
    """Success matrix for contact orders (rows of processor ids) and a failure set."""
    failed = np.asarray(sorted(failed), dtype=orders.dtype)
    return ~np.isin(orders, failed)
