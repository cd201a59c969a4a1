"""Zero modes of the generalized lowering operator.

Every even level 2n carries exactly one normalized state annihilated by
conj(alpha)*b- + conj(beta)*a-b+; odd levels carry none.  The state is

    sum_j gamma_j |j, 2(n-j)>,   j = 0..n,   gamma_0 = 1,

with coefficients fixed either by the two-term recursion obtained from the
annihilation condition,

    gamma_{j+1} = -(conj(alpha)/conj(beta))
                  * sqrt(2(n-j)) / (sqrt(j+1) sqrt(2(n-j)-1)) * gamma_j,

or by the equivalent closed form

    gamma_j = (-2 conj(alpha)/conj(beta))^j * n!/(n-j)!
              * sqrt((2(n-j))! / (j! (2n)!)).

The closed form is evaluated in log space (log-gamma differences,
exponentiated once per coefficient) so it stays accurate for n up to ~50;
the recursion is kept as an independent oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import FockVector, level_basis
from .operators import ModeParams, apply_lowering


def _check_n(n: int) -> int:
    if n < 0:
        raise DomainError(f"chain index n must be >= 0, got {n}")
    return int(n)


def _log_coeffs(n: int, p: ModeParams) -> tuple[np.ndarray, np.ndarray]:
    """log|gamma_j| and arg(gamma_j) for j = 0..n.

    For alpha = 0 all coefficients beyond j = 0 vanish; their log magnitude
    is -inf and the phase is 0.
    """
    ratio = -2.0 * p.alpha.conjugate() / p.beta.conjugate()
    j = np.arange(n + 1)
    log_mag = np.full(n + 1, -np.inf)
    phase = np.zeros(n + 1)
    lg = math.lgamma
    body = np.array(
        [
            lg(n + 1) - lg(n - jj + 1)
            + 0.5 * (lg(2 * (n - jj) + 1) - lg(jj + 1) - lg(2 * n + 1))
            for jj in range(n + 1)
        ]
    )
    if ratio == 0:
        log_mag[0] = body[0]
        return log_mag, phase
    log_mag = j * math.log(abs(ratio)) + body
    phase = j * cmath.phase(ratio)
    return log_mag, phase


def zero_mode_coeff(n: int, j: int, p: ModeParams) -> complex:
    """Closed-form expansion coefficient gamma_j of the level-2n zero mode."""
    n = _check_n(n)
    if not 0 <= j <= n:
        raise DomainError(f"coefficient index j must be in 0..{n}, got {j}")
    log_mag, phase = _log_coeffs(n, p)
    if log_mag[j] == -np.inf:
        return 0j
    return cmath.rect(math.exp(log_mag[j]), phase[j])


def zero_mode_coeffs_recursive(n: int, p: ModeParams) -> list[complex]:
    """All gamma_j by literal iteration of the two-term recursion (oracle)."""
    n = _check_n(n)
    ratio = -p.alpha.conjugate() / p.beta.conjugate()
    out = [1.0 + 0j]
    for j in range(n):
        step = ratio * math.sqrt(2 * (n - j)) / (
            math.sqrt(j + 1) * math.sqrt(2 * (n - j) - 1)
        )
        out.append(step * out[-1])
    return out


@dataclass(frozen=True)
class ZeroModeCoeffs:
    """Coefficients gamma_0..gamma_n of one zero mode plus their norm sum."""

    n: int
    gamma: tuple[complex, ...]
    norm_sq: float

    def __post_init__(self):
        if len(self.gamma) != self.n + 1:
            raise DomainError("need exactly n + 1 coefficients")
        if self.gamma[0] != 1:
            raise DomainError("gamma_0 must be 1")

    @classmethod
    def build(cls, n: int, p: ModeParams) -> "ZeroModeCoeffs":
        n = _check_n(n)
        log_mag, phase = _log_coeffs(n, p)
        gamma = tuple(
            cmath.rect(math.exp(lm), ph) if lm != -np.inf else 0j
            for lm, ph in zip(log_mag, np.broadcast_to(phase, log_mag.shape))
        )
        finite = log_mag[np.isfinite(log_mag)]
        norm_sq = float(np.exp(_logsumexp(2.0 * finite)))
        return cls(n=n, gamma=gamma, norm_sq=norm_sq)


def _logsumexp(logs: np.ndarray) -> float:
    logs = np.asarray(logs, dtype=float)
    if logs.size == 0:
        return -math.inf
    top = float(np.max(logs))
    if top == -math.inf:
        return -math.inf
    return top + math.log(float(np.sum(np.exp(logs - top))))


def zero_mode_state(n: int, p: ModeParams) -> FockVector:
    """Normalized level-2n zero mode sum_j gamma_j |j, 2(n-j)> / sqrt(N).

    Amplitudes are normalized in log space, so extreme alpha/beta ratios do
    not overflow even when the raw gamma_j would.
    """
    n = _check_n(n)
    log_mag, phase = _log_coeffs(n, p)
    phase = np.broadcast_to(phase, log_mag.shape)
    finite = log_mag[np.isfinite(log_mag)]
    log_norm = _logsumexp(2.0 * finite)
    amps = {}
    for j in range(n + 1):
        if log_mag[j] == -np.inf:
            continue
        amps[(j, 2 * (n - j))] = cmath.rect(
            math.exp(log_mag[j] - 0.5 * log_norm), phase[j]
        )
    return FockVector(amps)


def lowering_matrix(nu: int, p: ModeParams) -> np.ndarray:
    """Matrix of the generalized lowering operator restricted to level nu.

    Columns run over level_basis(nu), rows over level_basis(nu - 1); for
    nu = 0 the row space is empty and the matrix has shape (0, 1).
    """
    if nu < 0:
        raise DomainError(f"level index must be >= 0, got {nu}")
    cols = level_basis(nu)
    rows = level_basis(nu - 1) if nu >= 1 else []
    row_pos = {ket: i for i, ket in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for jcol, ket in enumerate(cols):
        img = apply_lowering(p, FockVector.basis(*ket))
        for idx, val in img.items():
            mat[row_pos[idx], jcol] = val
    return mat


def level_null_space_dim(nu: int, p: ModeParams, rel_tol: float = 1e-10) -> int:
    """Dimension of the kernel of the lowering operator inside level nu.

    Counted as the number of singular values below rel_tol times the largest
    one.  Generic parameters give 1 on even levels and 0 on odd levels.
    """
    mat = lowering_matrix(nu, p)
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return ncols
    svals = np.linalg.svd(mat, compute_uv=False)
    top = svals.max() if svals.size else 0.0
    if top == 0.0:
        return ncols
    rank = int(np.sum(svals > rel_tol * top))
    return ncols - rank
