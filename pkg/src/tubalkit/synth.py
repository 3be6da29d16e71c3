"""Seeded generators for synthetic recovery experiments and the
phase-transition grid runner.

All randomness flows through numpy's PCG64 via ``default_rng``. The grid
runner derives one child ``SeedSequence`` per (cell, trial) and splits it into
independent streams for the low-rank and sparse draws, so results do not
depend on evaluation order and are reproducible across platforms.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import ctranspose, tprod
from .core import fro_norm
from .errors import CountOutOfRange, RankOutOfRange
from .solver import SolverConfig, solve


def gen_low_tubal_rank(n1, n2, n3, r, seed):
    """Tubal-rank-r tensor p * q^T with factor entries N(0, 1/n1)."""
    if not 0 <= r <= min(n1, n2):
        raise RankOutOfRange(f"rank {r} outside [0, {min(n1, n2)}]")
    if r == 0:
        return np.zeros((n1, n2, n3))
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(n1)
    p = rng.normal(0.0, scale, size=(n1, r, n3))
    q = rng.normal(0.0, scale, size=(n2, r, n3))
    return tprod(p, ctranspose(q))


def gen_sparse_bernoulli(n1, n2, n3, m_or_rho, mode, seed):
    """Sparse sign tensor.

    mode="count": exactly ``m_or_rho`` support entries drawn uniformly without
    replacement, each +1 or -1 equiprobably.
    mode="rho": each entry independently +1 or -1 with probability rho/2 each,
    0 otherwise.
    """
    total = n1 * n2 * n3
    rng = np.random.default_rng(seed)
    out = np.zeros((n1, n2, n3))
    if mode == "count":
        m = int(m_or_rho)
        if not 0 <= m <= total:
            raise CountOutOfRange(f"count {m} outside [0, {total}]")
        if m > 0:
            support = rng.choice(total, size=m, replace=False)
            signs = rng.integers(0, 2, size=m) * 2.0 - 1.0
            out.ravel()[support] = signs
    elif mode == "rho":
        rho = float(m_or_rho)
        if not 0.0 <= rho <= 1.0:
            raise CountOutOfRange(f"rate {rho} outside [0, 1]")
        u = rng.random(size=(n1, n2, n3))
        out[u < rho / 2.0] = 1.0
        out[u > 1.0 - rho / 2.0] = -1.0
    else:
        raise ValueError(f"mode must be 'count' or 'rho', got {mode!r}")
    return out


@dataclass(frozen=True)
class PhaseCell:
    """Recovery statistics for one (rank fraction, sparsity rate) grid cell."""

    r_frac: float
    rho_s: float
    trials: int
    successes: int


def _round_half_up(x):
    return int(np.floor(x + 0.5))


def phase_grid(n, n3, r_fracs, rho_ss, trials, success_tol=1e-3, seed=0):
    """Run the recovery experiment over a grid of (r/n, rho_s) cells.

    Each cell solves ``trials`` independent n x n x n3 instances with the
    default lambda; a trial succeeds when the relative recovery error of the
    low-rank part is at most ``success_tol``. Returns a list of rows, one per
    r_frac, each a list of PhaseCell per rho_s.
    """
    r_fracs = list(r_fracs)
    rho_ss = list(rho_ss)
    if not r_fracs or not rho_ss:
        raise ValueError("grid axes must be nonempty")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    children = np.random.SeedSequence(seed).spawn(len(r_fracs) * len(rho_ss) * trials)
    grid = []
    for i, r_frac in enumerate(r_fracs):
        row = []
        for j, rho_s in enumerate(rho_ss):
            r = max(1, _round_half_up(r_frac * n))
            successes = 0
            for t in range(trials):
                cell_seq = children[(i * len(rho_ss) + j) * trials + t]
                lr_seed, sp_seed = cell_seq.spawn(2)
                l0 = gen_low_tubal_rank(n, n, n3, r, lr_seed)
                e0 = gen_sparse_bernoulli(n, n, n3, rho_s, "rho", sp_seed)
                sol = solve(l0 + e0, SolverConfig())
                rel = fro_norm(sol.l_hat - l0) / fro_norm(l0)
                if rel <= success_tol:
                    successes += 1
            row.append(PhaseCell(r_frac=r_frac, rho_s=rho_s, trials=trials, successes=successes))
        grid.append(row)
    return grid
