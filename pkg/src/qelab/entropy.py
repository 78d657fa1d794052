"""Entropy functionals: von Neumann, relative, Renyi-relative, and CMI.

Everything is in nats.  Relative entropies are evaluated on supports:
S(rho || sigma) is finite exactly when supp(rho) is contained in supp(sigma),
which is decided by the leak norm ||(1 - P_sigma) rho (1 - P_sigma)||_inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadAlpha, SingularTerm, ZeroOverlap
from .linalg import (
    embed,
    herm_eig,
    hermitize,
    matrix_exp,
    matrix_log,
    matrix_power,
    matrix_sqrt,
    max_sv,
    real_trace,
    support_projector,
)
from .states import MultipartiteState, SubnormalizedOperator, require_tripartite
from .tolerances import RANK_CUTOFF, SUPPORT_LEAK_TOL


@dataclass(frozen=True)
class EntropyValue:
    """A possibly-infinite entropy value.

    ``value`` is math.inf exactly when ``infinite`` is set; finite values are
    plain floats in nats.
    """

    value: float
    infinite: bool = False

    def __post_init__(self):
        if self.infinite and not math.isinf(self.value):
            object.__setattr__(self, "value", math.inf)
        if not self.infinite and math.isinf(self.value):
            object.__setattr__(self, "infinite", True)

    @classmethod
    def inf(cls) -> "EntropyValue":
        return cls(math.inf, True)

    def to_json(self) -> dict:
        if self.infinite:
            return {"infinite": True}
        return {"value": self.value}

    def __float__(self) -> float:
        return self.value


def _as_matrix(op: SubnormalizedOperator | np.ndarray) -> np.ndarray:
    if isinstance(op, SubnormalizedOperator):
        return op.mat
    return np.asarray(op, dtype=complex)


def von_neumann(rho: SubnormalizedOperator | np.ndarray) -> float:
    """S(rho) = -Tr rho log rho over the support eigenvalues."""
    mat = _as_matrix(rho)
    vals = np.linalg.eigvalsh(hermitize(mat))
    top = max(float(vals[-1]), 1e-300)
    vals = vals[vals > RANK_CUTOFF * top]
    s = float(-np.sum(vals * np.log(vals)))
    # Clamp roundoff on (near-)pure states; S is nonnegative for trace <= 1.
    if -1e-12 < s < 0.0:
        s = 0.0
    return s


def relative_entropy(
    rho: SubnormalizedOperator | np.ndarray,
    sigma: SubnormalizedOperator | np.ndarray,
) -> EntropyValue:
    """Umegaki relative entropy S(rho || sigma) = Tr rho (log rho - log sigma).

    Returns the infinite flag when supp(rho) leaks out of supp(sigma).  The
    second argument may be any PSD operator (subnormalized references and
    exp-log combination surrogates are both used by the checkers); positivity
    of the value is only guaranteed when Tr sigma <= 1.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"shape mismatch {r.shape} vs {s.shape}")
    proj = support_projector(s)
    off = np.eye(s.shape[0]) - proj
    leak = max_sv(off @ r @ off)
    if leak >= SUPPORT_LEAK_TOL:
        return EntropyValue.inf()
    log_r = matrix_log(r, support_only=True)
    log_s = matrix_log(s, support_only=True)
    return EntropyValue(real_trace(r @ (log_r - log_s)))


def renyi(
    alpha: float,
    rho: SubnormalizedOperator | np.ndarray,
    sigma: SubnormalizedOperator | np.ndarray,
) -> EntropyValue:
    """Petz-Renyi relative entropy (log Tr rho^alpha sigma^(1-alpha)) / (alpha - 1).

    Only the concave window 0 < alpha < 1 is accepted; there the trace
    functional is finite for any pair, and the value is infinite exactly when
    the supports are orthogonal enough that the trace vanishes.
    """
    if not 0.0 < alpha < 1.0:
        raise BadAlpha(f"alpha must lie strictly between 0 and 1, got {alpha}")
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    r_pow = matrix_power(r, alpha)
    s_pow = matrix_power(s, 1.0 - alpha)
    overlap = real_trace(r_pow @ s_pow)
    if overlap <= 0.0:
        return EntropyValue.inf()
    return EntropyValue(math.log(overlap) / (alpha - 1.0))


def overlap_lower_bound(
    rho: SubnormalizedOperator | np.ndarray,
    sigma: SubnormalizedOperator | np.ndarray,
) -> float:
    """The root-overlap bound -2 log Tr sqrt(rho) sqrt(sigma).

    This quantity sits between the relative entropy and the squared
    Hilbert-Schmidt distance of the square roots whenever Tr sigma <= 1.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    overlap = real_trace(matrix_sqrt(r) @ matrix_sqrt(s))
    if overlap <= 0.0:
        raise ZeroOverlap("Tr sqrt(rho) sqrt(sigma) is not positive")
    return -2.0 * math.log(overlap)


def cmi(state: MultipartiteState) -> float:
    """Conditional mutual information I(A:C|B) = S(AB) + S(BC) - S(ABC) - S(B)."""
    require_tripartite(state)
    s_ab = von_neumann(state.marginal([0, 1]))
    s_bc = von_neumann(state.marginal([1, 2]))
    s_b = von_neumann(state.marginal([1]))
    s_abc = von_neumann(state.matrix)
    return s_ab + s_bc - s_abc - s_b


def cmi_relative_entropy_form(state: MultipartiteState) -> float:
    """I(A:C|B) as a difference of two relative entropies.

    Tracing out A is a channel, and with reference rho_AB (x) rho_C the
    monotonicity gap of that channel is exactly the CMI:
    S(rho_ABC || rho_AB (x) rho_C) - S(rho_BC || rho_B (x) rho_C).
    Used as an independent cross-check of the entropy-sum form.
    """
    require_tripartite(state)
    rho = state.matrix
    rho_ab = state.marginal([0, 1])
    rho_bc = state.marginal([1, 2])
    rho_b = state.marginal([1])
    rho_c = state.marginal([2])
    full = relative_entropy(rho, np.kron(rho_ab, rho_c))
    reduced = relative_entropy(rho_bc, np.kron(rho_b, rho_c))
    return full.value - reduced.value


def exp_log_combination(
    terms: Sequence[tuple[float, np.ndarray]],
    dims: Sequence[int] | None = None,
    supports: Sequence[Sequence[int]] | None = None,
) -> np.ndarray:
    """exp( sum_i sign_i log X_i ) for full-rank PSD terms X_i.

    Each term is a (sign, matrix) pair.  When ``dims``/``supports`` are given,
    term i acts on the subsystems supports[i] and is embedded into the full
    space first (log(X (x) 1) = log X (x) 1, so embedding before or after the
    log agrees; embedding first keeps every term on one common space).
    Raises SingularTerm when any term is singular at the rank cutoff.
    """
    if not terms:
        raise SingularTerm("need at least one term")
    prepared = []
    for i, (sign, mat) in enumerate(terms):
        mat = np.asarray(mat, dtype=complex)
        if dims is not None:
            where = supports[i] if supports is not None else range(len(dims))
            mat = embed(mat, dims, where)
        vals, _ = herm_eig(mat)
        if vals[0] <= RANK_CUTOFF * max(float(vals[-1]), 1e-300):
            raise SingularTerm(
                f"term {i} is singular (min eigenvalue {vals[0]:.3e}); "
                "exp-log combinations need full-rank terms"
            )
        prepared.append((float(sign), mat))
    acc = np.zeros_like(prepared[0][1])
    for sign, mat in prepared:
        acc = acc + sign * matrix_log(mat)
    return matrix_exp(hermitize(acc))
