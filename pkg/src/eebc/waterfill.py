"""Energy-efficient waterfilling for one user's fractional subproblem.

With the other users frozen, user i maximizes

    (b_i + W log2|I + G_i^H Q_i G_i|) / (Tr(Q_i)/eta + a_i)

over Q_i >= 0. The parametric program

    Y(lam) = max_S  b_i + W sum_k log2(1 + s_k d_k) - lam (sum_k s_k / eta + a_i)

is strictly decreasing in lam, and the water level lam* with Y(lam*) = 0 is
the optimal ratio. At fixed lam the maximizer is the clipped waterfill
s_k = [W eta / (ln2 lam) - 1/d_k]^+.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from eebc import hermitian
from eebc.objective import UserDecomposition

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

DEFAULT_TOLERANCE = 1e-10
MAX_BRACKET_STEPS = 200


@dataclass(frozen=True)
class DiagonalProgram:
    """Diagonalized subproblem for one user.

    ``u`` is the N x N eigenbasis of G_i G_i^H; its first L columns carry the
    non-zero eigenvalues ``d`` (descending).
    """

    d: np.ndarray
    u: np.ndarray
    a: float
    b: float
    w: float
    eta: float

    @property
    def rank(self) -> int:
        return int(self.d.size)

    @property
    def degenerate(self) -> bool:
        """True when the effective channel is zero and Q_i = 0 is optimal."""
        return self.d.size == 0

    @property
    def level_cap(self) -> float:
        """Smallest lam at which every eigenchannel is switched off."""
        if self.degenerate:
            return 0.0
        return self.w * self.eta * float(self.d[0]) / LN2

    def numerator(self, s: np.ndarray) -> float:
        return self.b + self.w * float(np.sum(np.log2(1.0 + s * self.d)))

    def denominator(self, s: np.ndarray) -> float:
        return float(np.sum(s)) / self.eta + self.a


@dataclass(frozen=True)
class WaterfillSolution:
    s_diag: np.ndarray
    lambda_star: float
    q_star: np.ndarray
    achieved_value: float
    y_residual: float = 0.0


def build_parametric(dec: UserDecomposition, w: float, eta: float) -> DiagonalProgram:
    """Eigendecompose G_i G_i^H and keep its non-zero part."""
    gram = dec.g @ dec.g.conj().T
    eig = hermitian.eig_hermitian(gram)
    rank = eig.rank()
    d = eig.eigenvalues[:rank].copy()
    if rank == 0:
        logger.debug("user %d: zero effective channel, subproblem is degenerate", dec.user)
    return DiagonalProgram(d=d, u=eig.eigenvectors, a=dec.a, b=dec.b, w=w, eta=eta)


def _check_level(lam: float) -> None:
    if not lam > 0.0:
        raise ValueError(f"water level must be > 0, got {lam}")


def waterfill_at_level(prog: DiagonalProgram, lam: float) -> np.ndarray:
    """Per-eigenchannel powers [W*eta/(ln2*lam) - 1/d_k]^+."""
    _check_level(lam)
    if prog.degenerate:
        return np.zeros(0)
    level = prog.w * prog.eta / (LN2 * lam)
    return np.maximum(level - 1.0 / prog.d, 0.0)


def y_of_lambda(prog: DiagonalProgram, lam: float) -> float:
    """Optimal value of the parametric program at *lam* (bits/s)."""
    s = waterfill_at_level(prog, lam)
    return prog.numerator(s) - lam * prog.denominator(s)


def parametric_value(prog: DiagonalProgram, s_matrix: np.ndarray, lam: float) -> float:
    """G(S, lam) for a full L x L PSD S, not just a diagonal one."""
    root_d = np.sqrt(prog.d)
    inner = (root_d[:, None] * s_matrix) * root_d[None, :]
    rate = prog.b + prog.w * hermitian.logdet_eye_plus(hermitian.symmetrize(inner))
    return rate - lam * (hermitian.trace_real(s_matrix) / prog.eta + prog.a)


def _expand_upper(prog: DiagonalProgram, lo: float, hi: float) -> float:
    for _ in range(MAX_BRACKET_STEPS):
        if y_of_lambda(prog, hi) < 0.0:
            return hi
        hi = 2.0 * max(hi, lo)
    raise RuntimeError(f"could not bracket the water level after {MAX_BRACKET_STEPS} doublings")


def _shrink_lower(prog: DiagonalProgram, hi: float) -> float:
    lo = hi
    for _ in range(MAX_BRACKET_STEPS):
        lo *= 0.5
        if y_of_lambda(prog, lo) > 0.0:
            return lo
    raise RuntimeError(f"could not bracket the water level after {MAX_BRACKET_STEPS} halvings")


def solve_water_level(prog: DiagonalProgram, tol: float = DEFAULT_TOLERANCE) -> WaterfillSolution:
    """Find lam* with Y(lam*) = 0 and the matching waterfill.

    The bracket starts at b_i/a_i, where Y >= 0 because Q_i = 0 is feasible,
    and doubles the upper end until Y turns negative.
    """
    if not tol > 0.0:
        raise ValueError(f"tolerance must be > 0, got {tol}")

    base = prog.b / prog.a
    if prog.degenerate or base >= prog.level_cap:
        # Even the strongest eigenchannel cannot lift the ratio above b_i/a_i.
        s = np.zeros(prog.rank)
        return WaterfillSolution(
            s_diag=s,
            lambda_star=base,
            q_star=reconstruct_q(prog, s),
            achieved_value=base,
        )

    if base > 0.0:
        lo = base
        hi = _expand_upper(prog, lo, 2.0 * lo)
    else:
        hi = _expand_upper(prog, 0.0, prog.level_cap)
        lo = _shrink_lower(prog, hi)

    lam = optimize.brentq(
        lambda x: y_of_lambda(prog, x),
        lo,
        hi,
        xtol=1e-300,
        rtol=tol,
        maxiter=500,
    )
    s = waterfill_at_level(prog, lam)
    achieved = prog.numerator(s) / prog.denominator(s)
    residual = y_of_lambda(prog, lam)
    logger.debug("water level %.6e in [%.3e, %.3e], Y=%.3e, active=%d/%d",
                 lam, lo, hi, residual, int(np.count_nonzero(s)), prog.rank)
    return WaterfillSolution(
        s_diag=s,
        lambda_star=float(lam),
        q_star=reconstruct_q(prog, s),
        achieved_value=achieved,
        y_residual=residual,
    )


def reconstruct_q(prog: DiagonalProgram, sol: WaterfillSolution | np.ndarray) -> np.ndarray:
    """Q* = U diag(s, 0, ..., 0) U^H (N x N)."""
    s = sol.s_diag if isinstance(sol, WaterfillSolution) else np.asarray(sol, dtype=float)
    n = prog.u.shape[0]
    if s.size == 0:
        return np.zeros((n, n), dtype=complex)
    u = prog.u[:, : s.size]
    return hermitian.symmetrize((u * s) @ u.conj().T)


def solve_subproblem(
    dec: UserDecomposition,
    w: float,
    eta: float,
    tol: float = DEFAULT_TOLERANCE,
) -> tuple[DiagonalProgram, WaterfillSolution]:
    """Energy-efficient waterfilling for one user: diagonalize, find lam*, rebuild Q_i*."""
    prog = build_parametric(dec, w, eta)
    return prog, solve_water_level(prog, tol)
