"""Checkers for entropy inequalities, identities, and their refinements.

Each checker evaluates one statement on concrete inputs and returns a
CheckResult or ChainResult.  Slack is always oriented so that nonnegative
means "the statement holds with margin"; identity checks store the negated
absolute residual.  Tolerances are absolute and default to TOL_INEQ /
TOL_IDENTITY.

The refined monotonicity statements compare a relative-entropy gap against
distances to an exponentiated log-combination surrogate such as
exp(log rho_AB - log rho_B + log rho_BC); the common descending chain

    gap >= -2 log Tr sqrt(rho) sqrt(S) >= ||sqrt(rho)-sqrt(S)||_2^2
        >= (1/4) ||rho - S||_1^2

is shared by several checkers, together with the trace bound Tr S <= 1.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .channels import KrausChannel, petz_map, ptrace_channel, require_unital, twirl_exact, twirl_mc
from .entropy import (
    cmi,
    exp_log_combination,
    overlap_lower_bound,
    relative_entropy,
    renyi,
    von_neumann,
)
from .errors import BadAlpha, BadConfig, DimMismatch, MarginalMismatch, ZeroOverlap
from .linalg import (
    embed,
    herm_eig,
    hermitize,
    matrix_exp,
    matrix_log,
    matrix_power,
    matrix_sqrt,
    max_sv,
    ptrace,
    real_trace,
    trace_norm,
    unitary_power,
)
from .results import ChainResult, CheckResult, ExplorationReport
from .states import (
    DensityMatrix,
    MultipartiteState,
    SubnormalizedOperator,
    random_density,
    regularize,
    require_tripartite,
)
from .tolerances import DEFAULT_EPS, TOL_IDENTITY, TOL_INEQ, TOL_TRACE

DEFAULT_T_SAMPLES = (0.3, 0.7, 1.1, 1.9)
DEFAULT_TROTTER_NS = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_DW_ALPHAS = (0.9, 0.5, 0.1) + tuple(2.0**-k for k in range(2, 11))
DEFAULT_SBW_ALPHAS = tuple(2.0**-k for k in range(1, 13))


def _mat(op: SubnormalizedOperator | np.ndarray) -> np.ndarray:
    return op.mat if isinstance(op, SubnormalizedOperator) else np.asarray(op, dtype=complex)


def _same_dims(*states: MultipartiteState) -> tuple[int, ...]:
    dims = states[0].dims
    for st in states[1:]:
        if st.dims != dims:
            raise DimMismatch(f"states live on different dims: {st.dims} vs {dims}")
    return dims


def _tri_mats(state: MultipartiteState) -> dict[str, np.ndarray]:
    require_tripartite(state)
    return {
        "abc": state.matrix,
        "ab": state.marginal([0, 1]),
        "b": state.marginal([1]),
        "bc": state.marginal([1, 2]),
    }


def ssa_surrogate(state: MultipartiteState) -> np.ndarray:
    """exp(log rho_AB - log rho_B + log rho_BC) embedded on the full space."""
    m = _tri_mats(state)
    return exp_log_combination(
        [(1.0, m["ab"]), (-1.0, m["b"]), (1.0, m["bc"])],
        dims=state.dims,
        supports=[(0, 1), (1,), (1, 2)],
    )


def _unital_surrogate(
    rho_mat: np.ndarray, sigma_mat: np.ndarray, channel: KrausChannel
) -> np.ndarray:
    """exp(log sigma + Phi^*(log Phi rho) - Phi^*(log Phi sigma))."""
    dual = channel.dual()
    log_img_rho = matrix_log(channel.apply(rho_mat))
    log_img_sigma = matrix_log(channel.apply(sigma_mat))
    combo = matrix_log(sigma_mat) + dual.apply(log_img_rho) - dual.apply(log_img_sigma)
    return matrix_exp(hermitize(combo))


def _sqrt_chain(
    name: str,
    anchor_label: str,
    anchor: float,
    rho_mat: np.ndarray,
    surrogate: np.ndarray,
    tol: float,
    quantities: dict[str, float] | None = None,
    meta: dict | None = None,
    trace_bound: bool = True,
) -> ChainResult:
    """The shared descending chain anchored at a relative-entropy quantity."""
    s_rho = matrix_sqrt(rho_mat)
    s_srg = matrix_sqrt(surrogate)
    overlap = real_trace(s_rho @ s_srg)
    if overlap <= 0.0:
        raise ZeroOverlap("square-root overlap with the surrogate vanished")
    links = [
        (anchor_label, float(anchor)),
        ("overlap_bound", -2.0 * math.log(overlap)),
        ("sqrt_hs_sq", float(np.linalg.norm(s_rho - s_srg) ** 2)),
        ("quarter_td_sq", 0.25 * trace_norm(rho_mat - surrogate) ** 2),
    ]
    q = dict(quantities or {})
    tr_srg = real_trace(surrogate)
    q["trace_surrogate"] = tr_srg
    extra_ok = (tr_srg <= 1.0 + tol) if trace_bound else True
    return ChainResult(name, links, tol, q, meta or {}, extra_ok)


# ---------------------------------------------------------------------------
# Entropy comparisons
# ---------------------------------------------------------------------------

DEFAULT_RENYI_ALPHAS = tuple(k / 10.0 for k in range(1, 10))


def check_renyi_monotonicity(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    alphas: Sequence[float] = DEFAULT_RENYI_ALPHAS,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """The alpha-Renyi relative entropy is nondecreasing in alpha.

    When 0.5 is on the grid, its value is also cross-checked against the
    closed-form root overlap -2 log Tr sqrt(rho) sqrt(sigma).
    """
    alphas = [float(a) for a in alphas]
    if len(alphas) < 2 or sorted(alphas) != alphas:
        raise BadAlpha(f"need an ascending alpha grid, got {alphas}")
    values = [renyi(a, rho, sigma).value for a in alphas]
    quantities = {f"s_{a!r}": v for a, v in zip(alphas, values)}
    slack = min(values[i + 1] - values[i] for i in range(len(values) - 1))
    extra_ok = True
    if 0.5 in alphas:
        closed = overlap_lower_bound(rho, sigma)
        residual = abs(values[alphas.index(0.5)] - closed)
        quantities["half_alpha_residual"] = residual
        extra_ok = residual <= TOL_IDENTITY
    return CheckResult("renyi-monotone", quantities, slack, tol, extra_ok=extra_ok)


def check_overlap_chain(
    rho: DensityMatrix,
    sigma: SubnormalizedOperator,
    tol: float = TOL_INEQ,
) -> ChainResult:
    """Relative entropy against a subnormalized reference dominates the
    root-overlap bound, the squared root distance, and a quarter of the
    squared trace distance, in that order.

    When the reference is normalized, the stronger quadratic lower bound
    S >= ||rho - sigma||_1^2 / 2 is asserted as well.
    """
    s_val = relative_entropy(rho, sigma)
    s_rho = matrix_sqrt(rho.mat)
    s_sig = matrix_sqrt(sigma.mat)
    overlap = real_trace(s_rho @ s_sig)
    if overlap <= 0.0:
        raise ZeroOverlap("Tr sqrt(rho) sqrt(sigma) is not positive")
    td = trace_norm(rho.mat - sigma.mat)
    links = [
        ("relative_entropy", s_val.value),
        ("overlap_bound", -2.0 * math.log(overlap)),
        ("sqrt_hs_sq", float(np.linalg.norm(s_rho - s_sig) ** 2)),
        ("quarter_td_sq", 0.25 * td**2),
    ]
    quantities = {"trace_sigma": real_trace(sigma.mat)}
    extra_ok = True
    if abs(quantities["trace_sigma"] - 1.0) <= TOL_TRACE and not s_val.infinite:
        pinsker = s_val.value - 0.5 * td**2
        quantities["pinsker_slack"] = pinsker
        extra_ok = pinsker >= -tol
    return ChainResult("overlap-chain", links, tol, quantities, extra_ok=extra_ok)


# ---------------------------------------------------------------------------
# Data processing and its refinements
# ---------------------------------------------------------------------------


def check_monotonicity(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Relative entropy never increases under a channel."""
    before = relative_entropy(rho, sigma).value
    after = relative_entropy(channel.apply(rho.mat), channel.apply(sigma.mat)).value
    return CheckResult(
        "monotonicity",
        {"before": before, "after": after},
        before - after,
        tol,
    )


def check_stronger_monotonicity(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    tol: float = TOL_INEQ,
) -> ChainResult:
    """Refined data processing for unital channels.

    The monotonicity gap dominates the chain of distances to the surrogate
    exp(log sigma + Phi^*(log Phi rho) - Phi^*(log Phi sigma)), whose trace
    is itself at most one.
    """
    require_unital(channel)
    before = relative_entropy(rho, sigma).value
    after = relative_entropy(channel.apply(rho.mat), channel.apply(sigma.mat)).value
    surrogate = _unital_surrogate(rho.mat, sigma.mat, channel)
    return _sqrt_chain(
        "stronger-monotonicity",
        "relent_gap",
        before - after,
        rho.mat,
        surrogate,
        tol,
        quantities={"before": before, "after": after},
    )


def check_unital_trace_bound(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Tr exp(log sigma + Phi^*(log Phi rho) - Phi^*(log Phi sigma)) <= 1."""
    require_unital(channel)
    value = real_trace(_unital_surrogate(rho.mat, sigma.mat, channel))
    return CheckResult("unital-trace-bound", {"trace_value": value}, 1.0 - value, tol)


def check_ptrace_strengthening(
    rho_ab: MultipartiteState,
    sigma_ab: MultipartiteState,
    tol: float = TOL_INEQ,
) -> ChainResult:
    """Refined monotonicity for discarding the second subsystem.

    Surrogate: exp(log sigma_AB - log sigma_A + log rho_A), all embedded on AB.
    """
    dims = _same_dims(rho_ab, sigma_ab)
    if len(dims) != 2:
        raise DimMismatch(f"need a bipartite split, got {len(dims)} parts")
    rho_a = rho_ab.marginal([0])
    sigma_a = sigma_ab.marginal([0])
    before = relative_entropy(rho_ab.matrix, sigma_ab.matrix).value
    after = relative_entropy(rho_a, sigma_a).value
    surrogate = exp_log_combination(
        [(1.0, sigma_ab.matrix), (-1.0, sigma_a), (1.0, rho_a)],
        dims=dims,
        supports=[(0, 1), (0,), (0,)],
    )
    return _sqrt_chain(
        "ptrace-strengthening",
        "relent_gap",
        before - after,
        rho_ab.matrix,
        surrogate,
        tol,
        quantities={"before": before, "after": after},
    )


def check_ssa_strengthened(
    state: MultipartiteState, tol: float = TOL_INEQ
) -> ChainResult:
    """Strong subadditivity with the exp-log surrogate refinement.

    I(A:C|B) anchors the chain against exp(log rho_AB - log rho_B + log rho_BC);
    the surrogate trace bound Tr S <= 1 is asserted alongside.
    """
    i_val = cmi(state)
    surrogate = ssa_surrogate(state)
    return _sqrt_chain(
        "ssa", "cmi", i_val, state.matrix, surrogate, tol
    )


def check_trace_exp_bound(
    rho: MultipartiteState,
    sigma: MultipartiteState,
    tau: MultipartiteState,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Tr exp(log rho_AB - log sigma_B + log tau_BC) <= 1 under marginal matching.

    Requires rho_B = sigma_B or sigma_B = tau_B (spectral norm within
    TOL_IDENTITY); raises MarginalMismatch otherwise.
    """
    dims = _same_dims(rho, sigma, tau)
    require_tripartite(rho)
    rho_b = rho.marginal([1])
    sigma_b = sigma.marginal([1])
    tau_b = tau.marginal([1])
    dev_rs = max_sv(rho_b - sigma_b)
    dev_st = max_sv(sigma_b - tau_b)
    if min(dev_rs, dev_st) > TOL_IDENTITY:
        raise MarginalMismatch(
            f"need rho_B = sigma_B or sigma_B = tau_B; deviations are "
            f"{dev_rs:.3e} and {dev_st:.3e}"
        )
    value = real_trace(
        exp_log_combination(
            [(1.0, rho.marginal([0, 1])), (-1.0, sigma_b), (1.0, tau.marginal([1, 2]))],
            dims=dims,
            supports=[(0, 1), (1,), (1, 2)],
        )
    )
    matched = "rho_b=sigma_b" if dev_rs <= dev_st else "sigma_b=tau_b"
    return CheckResult(
        "trace-exp-bound",
        {"trace_value": value, "marginal_dev": float(min(dev_rs, dev_st))},
        1.0 - value,
        tol,
        meta={"matched": matched},
    )


def check_bsw_identity(
    rho: MultipartiteState,
    sigma: MultipartiteState,
    tau: MultipartiteState,
    omega: MultipartiteState,
    tol: float = TOL_IDENTITY,
) -> CheckResult:
    """Decomposition of a relative entropy against an exp-log reference.

    S(rho_ABC || exp(log sigma_AB + log tau_BC - log omega_B)) equals
    I(A:C|B) + S(rho_AB||sigma_AB) + S(rho_BC||tau_BC) - S(rho_B||omega_B).
    """
    dims = _same_dims(rho, sigma, tau, omega)
    require_tripartite(rho)
    target = exp_log_combination(
        [
            (1.0, sigma.marginal([0, 1])),
            (1.0, tau.marginal([1, 2])),
            (-1.0, omega.marginal([1])),
        ],
        dims=dims,
        supports=[(0, 1), (1, 2), (1,)],
    )
    lhs = relative_entropy(rho.matrix, target).value
    rhs = (
        cmi(rho)
        + relative_entropy(rho.marginal([0, 1]), sigma.marginal([0, 1])).value
        + relative_entropy(rho.marginal([1, 2]), tau.marginal([1, 2])).value
        - relative_entropy(rho.marginal([1]), omega.marginal([1])).value
    )
    residual = abs(lhs - rhs)
    return CheckResult(
        "bsw-identity",
        {"lhs": lhs, "rhs": rhs, "residual": residual},
        -residual,
        tol,
    )


def check_super_ssa(
    rho: MultipartiteState,
    sigma: MultipartiteState,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Relative entropy to a two-marginal exp-log reference dominates
    I(A:C|B) plus half the AB and BC relative entropies."""
    dims = _same_dims(rho, sigma)
    require_tripartite(rho)
    target = exp_log_combination(
        [
            (1.0, sigma.marginal([0, 1])),
            (1.0, sigma.marginal([1, 2])),
            (-1.0, sigma.marginal([1])),
        ],
        dims=dims,
        supports=[(0, 1), (1, 2), (1,)],
    )
    lhs = relative_entropy(rho.matrix, target).value
    rhs = (
        cmi(rho)
        + 0.5 * relative_entropy(rho.marginal([0, 1]), sigma.marginal([0, 1])).value
        + 0.5 * relative_entropy(rho.marginal([1, 2]), sigma.marginal([1, 2])).value
    )
    return CheckResult(
        "super-ssa", {"lhs": lhs, "rhs": rhs}, lhs - rhs, tol
    )


def check_three_state_chain(
    rho: MultipartiteState,
    sigma: MultipartiteState,
    tau: MultipartiteState,
    omega: MultipartiteState,
    tol: float = TOL_INEQ,
) -> ChainResult:
    """Distance chain to exp(log sigma_AB - log tau_B + log omega_BC).

    Needs sigma_B = tau_B or tau_B = omega_B so that the surrogate is
    subnormalized; then S(rho||S) dominates the square-root overlap chain.
    """
    dims = _same_dims(rho, sigma, tau, omega)
    require_tripartite(rho)
    sigma_b = sigma.marginal([1])
    tau_b = tau.marginal([1])
    omega_b = omega.marginal([1])
    dev_st = max_sv(sigma_b - tau_b)
    dev_to = max_sv(tau_b - omega_b)
    if min(dev_st, dev_to) > TOL_IDENTITY:
        raise MarginalMismatch(
            f"need sigma_B = tau_B or tau_B = omega_B; deviations are "
            f"{dev_st:.3e} and {dev_to:.3e}"
        )
    surrogate = exp_log_combination(
        [
            (1.0, sigma.marginal([0, 1])),
            (-1.0, tau_b),
            (1.0, omega.marginal([1, 2])),
        ],
        dims=dims,
        supports=[(0, 1), (1,), (1, 2)],
    )
    anchor = relative_entropy(rho.matrix, surrogate).value
    return _sqrt_chain(
        "three-state-chain",
        "relent_to_surrogate",
        anchor,
        rho.matrix,
        surrogate,
        tol,
        quantities={"marginal_dev": float(min(dev_st, dev_to))},
    )


def check_subadd_exp(state: MultipartiteState, tol: float = TOL_INEQ) -> ChainResult:
    """Subadditivity-flavoured chain with the two-marginal surrogate.

    Anchor S(AB) + S(BC) - S(ABC) against exp(log rho_AB + log rho_BC); the
    auxiliary product bound Tr S <= Tr(rho_AB rho_BC) = Tr rho_B^2 <= 1 is
    asserted through extra_ok (middle equality within 1e-10).
    """
    m = _tri_mats(state)
    dims = state.dims
    anchor = von_neumann(m["ab"]) + von_neumann(m["bc"]) - von_neumann(m["abc"])
    surrogate = exp_log_combination(
        [(1.0, m["ab"]), (1.0, m["bc"])], dims=dims, supports=[(0, 1), (1, 2)]
    )
    ab_full = embed(m["ab"], dims, (0, 1))
    bc_full = embed(m["bc"], dims, (1, 2))
    tr_product = real_trace(ab_full @ bc_full)
    tr_b_sq = real_trace(m["b"] @ m["b"])
    result = _sqrt_chain(
        "subadd-exp",
        "entropy_combo",
        anchor,
        m["abc"],
        surrogate,
        tol,
        quantities={"trace_product": tr_product, "trace_b_sq": tr_b_sq},
        trace_bound=False,
    )
    tr_srg = result.quantities["trace_surrogate"]
    gt_ok = (
        tr_srg <= tr_product + tol
        and abs(tr_product - tr_b_sq) <= 1e-10
        and tr_b_sq <= 1.0 + tol
    )
    result.extra_ok = bool(gt_ok)
    return result


# ---------------------------------------------------------------------------
# Markov structure
# ---------------------------------------------------------------------------


def markov_characterizations(
    state: MultipartiteState,
    t_samples: Sequence[float] = DEFAULT_T_SAMPLES,
    cmi_tol: float = 1e-8,
    residual_tol: float = 1e-6,
) -> CheckResult:
    """Evaluate four equivalent signatures of I(A:C|B) = 0 on one state.

    Quantities: the CMI itself, the log-combination residual
    ||log rho_ABC + log rho_B - log rho_AB - log rho_BC||_inf, the maximal
    commutation residual of complex powers over t_samples, and the trace-norm
    errors of the two one-sided reconstructions
    rho_AB^(1/2) rho_B^(-1/2) rho_BC rho_B^(-1/2) rho_AB^(1/2) (and mirrored).
    The check passes when all signatures agree with the CMI verdict: all
    small together (Markov) or all bounded away (non-Markov).  The state must
    be full rank.
    """
    m = _tri_mats(state)
    dims = state.dims
    i_val = cmi(state)

    log_combo = (
        matrix_log(m["abc"])
        + embed(matrix_log(m["b"]), dims, (1,))
        - embed(matrix_log(m["ab"]), dims, (0, 1))
        - embed(matrix_log(m["bc"]), dims, (1, 2))
    )
    r_log = max_sv(log_combo)

    r_petz = 0.0
    for t in t_samples:
        lhs = unitary_power(m["abc"], t) @ embed(unitary_power(m["bc"], -t), dims, (1, 2))
        rhs = embed(unitary_power(m["ab"], t), dims, (0, 1)) @ embed(
            unitary_power(m["b"], -t), dims, (1,)
        )
        r_petz = max(r_petz, max_sv(lhs - rhs))

    sqrt_ab = embed(matrix_sqrt(m["ab"]), dims, (0, 1))
    sqrt_bc = embed(matrix_sqrt(m["bc"]), dims, (1, 2))
    inv_sqrt_b = embed(matrix_power(m["b"], -0.5), dims, (1,))
    ab_full = embed(m["ab"], dims, (0, 1))
    bc_full = embed(m["bc"], dims, (1, 2))
    recon_from_ab = sqrt_ab @ inv_sqrt_b @ bc_full @ inv_sqrt_b @ sqrt_ab
    recon_from_bc = sqrt_bc @ inv_sqrt_b @ ab_full @ inv_sqrt_b @ sqrt_bc
    r_recon_ab = trace_norm(m["abc"] - recon_from_ab)
    r_recon_bc = trace_norm(m["abc"] - recon_from_bc)

    residuals = {
        "r_log": r_log,
        "r_petz": r_petz,
        "r_recon_ab": r_recon_ab,
        "r_recon_bc": r_recon_bc,
    }
    markov_like = i_val < cmi_tol
    flags = [r < residual_tol for r in residuals.values()]
    consistent = all(flags) if markov_like else not any(flags)
    quantities = {"cmi": i_val, **residuals}
    return CheckResult(
        "markov-characterizations",
        quantities,
        0.0,
        0.0,
        meta={"markov_like": markov_like, "cmi_tol": cmi_tol, "residual_tol": residual_tol},
        extra_ok=bool(consistent),
    )


def _psd_int_power(g: np.ndarray, n: int) -> np.ndarray:
    """g^n for PSD g: repeated squaring for powers of two, spectral otherwise."""
    if n < 1:
        raise BadAlpha(f"power must be a positive integer, got {n}")
    if n & (n - 1) == 0:
        out = g
        while n > 1:
            out = out @ out
            n >>= 1
        return out
    return matrix_power(g, float(n))


def trotter_sequence(
    state: MultipartiteState,
    n_values: Sequence[int] = DEFAULT_TROTTER_NS,
    tol: float = TOL_INEQ,
) -> ChainResult:
    """Compressed-product traces t_n converging to the surrogate trace.

    t_n = Tr[(rho_AB^(1/2n) rho_B^(-1/2n) rho_BC^(1/n) rho_B^(-1/2n)
    rho_AB^(1/2n))^n].  Every t_n <= 1 is asserted (through the chain link
    on the maximum); convergence is asserted through
    |t_last - Tr S| <= |t_first - Tr S| + tol.  Monotonicity of the sequence
    is recorded in the quantities but never asserted: it is an open question.
    """
    m = _tri_mats(state)
    dims = state.dims
    n_values = [int(n) for n in n_values]
    if not n_values or any(n < 1 for n in n_values):
        raise BadConfig(f"need positive compression orders, got {n_values}")
    trace_surrogate = real_trace(ssa_surrogate(state))
    quantities: dict[str, float] = {"trace_surrogate": trace_surrogate}
    table = []
    for n in n_values:
        ab_pow = embed(matrix_power(m["ab"], 0.5 / n), dims, (0, 1))
        b_neg = embed(matrix_power(m["b"], -0.5 / n), dims, (1,))
        bc_pow = embed(matrix_power(m["bc"], 1.0 / n), dims, (1, 2))
        g = hermitize(ab_pow @ b_neg @ bc_pow @ b_neg @ ab_pow)
        t_n = real_trace(_psd_int_power(g, n))
        quantities[f"t_{n}"] = t_n
        table.append((n, t_n, t_n - trace_surrogate))
    errs = [abs(t - trace_surrogate) for _, t, _ in table]
    quantities["err_first"] = errs[0]
    quantities["err_last"] = errs[-1]
    links = [("one", 1.0), ("max_compressed_trace", max(t for _, t, _ in table))]
    return ChainResult(
        "trotter-bound",
        links,
        tol,
        quantities,
        meta={"table": table, "n_values": n_values},
        extra_ok=bool(errs[-1] <= errs[0] + tol),
    )


# ---------------------------------------------------------------------------
# Finite-alpha quantities and the alpha -> 0 operator limit
# ---------------------------------------------------------------------------


def _alpha_compressed(
    rho_mat: np.ndarray,
    sigma_mat: np.ndarray,
    channel: KrausChannel,
    alpha: float,
) -> np.ndarray:
    """{sigma^(a/2) Phi^*(Phi(sigma)^(-a/2) Phi(rho)^a Phi(sigma)^(-a/2)) sigma^(a/2)}^(1/a)."""
    dual = channel.dual()
    img_rho = channel.apply(rho_mat)
    img_sigma = channel.apply(sigma_mat)
    mid = hermitize(
        matrix_power(img_sigma, -alpha / 2.0)
        @ matrix_power(img_rho, alpha)
        @ matrix_power(img_sigma, -alpha / 2.0)
    )
    s_half = matrix_power(sigma_mat, alpha / 2.0)
    inner = hermitize(s_half @ dual.apply(mid) @ s_half)
    return matrix_power(inner, 1.0 / alpha)


def check_dw_alpha(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    alpha: float,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Finite-alpha compressed trace bound: Tr of the alpha-compression <= 1."""
    if not 0.0 < alpha < 1.0:
        raise BadAlpha(f"alpha must lie strictly in (0, 1), got {alpha}")
    value = real_trace(_alpha_compressed(rho.mat, sigma.mat, channel, alpha))
    return CheckResult(
        "dw-alpha", {"alpha": float(alpha), "q_alpha": value}, 1.0 - value, tol
    )


def dw_alpha_profile(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    alphas: Sequence[float] = DEFAULT_DW_ALPHAS,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """check_dw_alpha over a whole alpha grid, merged into one result."""
    quantities: dict[str, float] = {}
    worst = math.inf
    for alpha in alphas:
        single = check_dw_alpha(rho, sigma, channel, alpha, tol)
        quantities[f"q_{alpha!r}"] = single.quantities["q_alpha"]
        worst = min(worst, single.slack)
    return CheckResult("dw-alpha", quantities, worst, tol)


def check_dw_tripartite(
    state: MultipartiteState,
    alphas: Sequence[float] = DEFAULT_DW_ALPHAS,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Tripartite specialization of the finite-alpha trace bound.

    Tr[(rho_AB^(a/2) rho_B^(-a/2) rho_BC^a rho_B^(-a/2) rho_AB^(a/2))^(1/a)] <= 1,
    evaluated directly; at the first alpha the generic channel route (trace
    out A, reference rho_AB (x) 1_C/d_C) is recomputed as a cross-check and
    the two routes must agree within TOL_IDENTITY.
    """
    m = _tri_mats(state)
    dims = state.dims
    quantities: dict[str, float] = {}
    worst = math.inf
    for alpha in alphas:
        if not 0.0 < alpha < 1.0:
            raise BadAlpha(f"alpha must lie strictly in (0, 1), got {alpha}")
        ab_pow = embed(matrix_power(m["ab"], alpha / 2.0), dims, (0, 1))
        b_neg = embed(matrix_power(m["b"], -alpha / 2.0), dims, (1,))
        bc_pow = embed(matrix_power(m["bc"], alpha), dims, (1, 2))
        g = hermitize(ab_pow @ b_neg @ bc_pow @ b_neg @ ab_pow)
        value = real_trace(matrix_power(g, 1.0 / alpha))
        quantities[f"q_{alpha!r}"] = value
        worst = min(worst, 1.0 - value)
    alpha0 = float(alphas[0])
    channel = ptrace_channel(dims, 0)
    reference = np.kron(m["ab"], np.eye(dims[2]) / dims[2])
    via_channel = real_trace(
        _alpha_compressed(m["abc"], reference, channel, alpha0)
    )
    consistency = abs(via_channel - quantities[f"q_{alpha0!r}"])
    quantities["route_residual"] = consistency
    return CheckResult(
        "dw-tripartite",
        quantities,
        worst,
        tol,
        extra_ok=bool(consistency <= TOL_IDENTITY),
    )


def check_sbw_limit(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    alphas: Sequence[float] = DEFAULT_SBW_ALPHAS,
    tol: float = TOL_INEQ,
    final_tol: float = 1e-4,
) -> CheckResult:
    """Operator convergence of the alpha-compression to the exp-log surrogate.

    e_alpha = ||compression_alpha - exp(log sigma + Phi^*(log Phi rho) -
    Phi^*(log Phi sigma))||_inf must decrease along the (descending) alpha
    sequence and end below final_tol.
    """
    alphas = [float(a) for a in alphas]
    if not alphas or any(not 0.0 < a < 1.0 for a in alphas):
        raise BadAlpha(f"alphas must lie strictly in (0, 1), got {alphas}")
    if sorted(alphas, reverse=True) != alphas:
        raise BadAlpha("alphas must be given in strictly descending order")
    surrogate = _unital_surrogate(rho.mat, sigma.mat, channel)
    errs = []
    quantities: dict[str, float] = {}
    for alpha in alphas:
        t_alpha = _alpha_compressed(rho.mat, sigma.mat, channel, alpha)
        e = max_sv(t_alpha - surrogate)
        errs.append(e)
        quantities[f"e_{alpha!r}"] = e
    decreasing = all(errs[i + 1] <= errs[i] + tol for i in range(len(errs) - 1))
    quantities["e_first"] = errs[0]
    quantities["e_last"] = errs[-1]
    return CheckResult(
        "sbw-limit",
        quantities,
        final_tol - errs[-1],
        0.0,
        meta={"alphas": alphas},
        extra_ok=bool(decreasing),
    )


# ---------------------------------------------------------------------------
# Concavity and trace inequalities
# ---------------------------------------------------------------------------


def _require_hermitian(x: np.ndarray) -> np.ndarray:
    herm_eig(x)  # raises NotHermitian when it is not
    return np.asarray(x, dtype=complex)


def check_lieb_concavity(
    h: np.ndarray,
    x1: np.ndarray,
    x2: np.ndarray,
    lam: float,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Concavity of X -> Tr exp(H + log X) on positive definite X."""
    if not 0.0 <= lam <= 1.0:
        raise BadAlpha(f"mixing weight must be in [0, 1], got {lam}")
    h = _require_hermitian(h)

    def f(x: np.ndarray) -> float:
        return real_trace(matrix_exp(hermitize(h + matrix_log(x))))

    x1 = _mat(x1)
    x2 = _mat(x2)
    mix = lam * x1 + (1.0 - lam) * x2
    f_mix = f(mix)
    f_avg = lam * f(x1) + (1.0 - lam) * f(x2)
    return CheckResult(
        "lieb-concavity",
        {"f_mix": f_mix, "f_avg": f_avg, "lam": lam},
        f_mix - f_avg,
        tol,
    )


def check_cl_concavity(
    m: np.ndarray,
    x1: np.ndarray,
    x2: np.ndarray,
    lam: float,
    alpha: float,
    tol: float = TOL_INEQ,
) -> CheckResult:
    """Concavity of X -> Tr (M X^(1/alpha) M^dag)^alpha for alpha >= 1."""
    if alpha < 1.0:
        raise BadAlpha(f"alpha must be >= 1, got {alpha}")
    if not 0.0 <= lam <= 1.0:
        raise BadAlpha(f"mixing weight must be in [0, 1], got {lam}")
    m = np.asarray(m, dtype=complex)

    def f(x: np.ndarray) -> float:
        core = hermitize(m @ matrix_power(x, 1.0 / alpha) @ m.conj().T)
        return real_trace(matrix_power(core, alpha))

    x1 = _mat(x1)
    x2 = _mat(x2)
    mix = lam * x1 + (1.0 - lam) * x2
    f_mix = f(mix)
    f_avg = lam * f(x1) + (1.0 - lam) * f(x2)
    return CheckResult(
        "carlen-lieb-concavity",
        {"f_mix": f_mix, "f_avg": f_avg, "lam": lam, "alpha": alpha},
        f_mix - f_avg,
        tol,
    )


def check_golden_thompson(
    a: np.ndarray, b: np.ndarray, tol: float = TOL_INEQ
) -> CheckResult:
    """Tr e^(A+B) <= Tr e^A e^B for Hermitian A, B."""
    a = _require_hermitian(a)
    b = _require_hermitian(b)
    t_sum = real_trace(matrix_exp(hermitize(a + b)))
    t_prod = real_trace(matrix_exp(a) @ matrix_exp(b))
    return CheckResult(
        "golden-thompson",
        {"trace_exp_sum": t_sum, "trace_exp_product": t_prod},
        t_prod - t_sum,
        tol,
    )


def check_audenaert_ps(
    m: SubnormalizedOperator | np.ndarray,
    n: SubnormalizedOperator | np.ndarray,
    t_values: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
    tol: float = TOL_INEQ,
) -> ChainResult:
    """Square-root norm chain plus the interpolated trace overlap bound.

    Chain: ||sqrt M - sqrt N||_2 ||sqrt M + sqrt N||_2 >= ||M - N||_1
           >= ||sqrt M - sqrt N||_2^2.
    Extra conditions folded into extra_ok: Tr M^t N^(1-t) >= (Tr M + Tr N -
    ||M-N||_1)/2 for each t, and -2 log Tr sqrt M sqrt N >= ||sqrt M - sqrt
    N||_2^2 whenever both traces are <= 1.
    """
    m_mat = _mat(m)
    n_mat = _mat(n)
    sm = matrix_sqrt(m_mat)
    sn = matrix_sqrt(n_mat)
    hs_diff = float(np.linalg.norm(sm - sn))
    hs_sum = float(np.linalg.norm(sm + sn))
    td = trace_norm(m_mat - n_mat)
    links = [
        ("norm_product", hs_diff * hs_sum),
        ("trace_distance", td),
        ("sqrt_hs_sq", hs_diff**2),
    ]
    tr_m = real_trace(m_mat)
    tr_n = real_trace(n_mat)
    half_min = 0.5 * (tr_m + tr_n - td)
    quantities = {"trace_m": tr_m, "trace_n": tr_n}
    extra_ok = True
    worst_aud = math.inf
    for t in t_values:
        if not 0.0 <= t <= 1.0:
            raise BadAlpha(f"interp parameter must be in [0, 1], got {t}")
        crossed = real_trace(matrix_power(m_mat, t) @ matrix_power(n_mat, 1.0 - t))
        slack_t = crossed - half_min
        quantities[f"audenaert_slack_{t!r}"] = slack_t
        worst_aud = min(worst_aud, slack_t)
    extra_ok = extra_ok and worst_aud >= -tol
    if tr_m <= 1.0 + TOL_TRACE and tr_n <= 1.0 + TOL_TRACE:
        overlap = real_trace(sm @ sn)
        if overlap > 0.0:
            bound_slack = -2.0 * math.log(overlap) - hs_diff**2
            quantities["overlap_bound_slack"] = bound_slack
            extra_ok = extra_ok and bound_slack >= -tol
    return ChainResult(
        "audenaert-powers-stormer",
        links,
        tol,
        quantities,
        extra_ok=bool(extra_ok),
    )


def check_squashed_proxy(
    state: MultipartiteState, tol: float = TOL_INEQ
) -> CheckResult:
    """Half the CMI dominates an eighth of the squared distance between the
    AC marginal and the AC reduction of the exp-log surrogate."""
    surrogate = ssa_surrogate(state)
    rho_ac = state.marginal([0, 2])
    srg_ac = ptrace(surrogate, state.dims, [0, 2])
    lhs = 0.5 * cmi(state)
    dist = trace_norm(rho_ac - srg_ac)
    rhs = 0.125 * dist**2
    return CheckResult(
        "squashed-proxy",
        {
            "half_cmi": lhs,
            "eighth_dist_sq": rhs,
            "trace_surrogate_ac": real_trace(srg_ac),
        },
        lhs - rhs,
        tol,
    )


def check_twirl_identity(
    x: np.ndarray,
    dims: Sequence[int],
    rng: np.random.Generator,
    samples: int = 10_000,
    over: int = 1,
) -> CheckResult:
    """Monte Carlo twirl agrees with the closed form within 5 ||X||_inf / sqrt(n)."""
    x = np.asarray(x, dtype=complex)
    exact = twirl_exact(x, dims, over=over)
    estimate = twirl_mc(x, dims, rng, samples, over=over)
    err = max_sv(estimate - exact)
    bound = 5.0 * max_sv(x) / math.sqrt(samples)
    return CheckResult(
        "twirl-identity",
        {"mc_error": err, "bound": bound, "samples": float(samples)},
        bound - err,
        0.0,
    )


# ---------------------------------------------------------------------------
# Conjecture exploration (never pass/fail)
# ---------------------------------------------------------------------------


def _flat_dim(dims: Sequence[int]) -> int:
    return int(np.prod([int(d) for d in dims]))


def _explore_stronger_mono_sample(rng, dims, eps):
    from .channels import random_channel

    d = _flat_dim(dims)
    return {
        "rho": regularize(random_density(d, rng), eps),
        "sigma": regularize(random_density(d, rng), eps),
        "channel": random_channel(d, 2, rng),
    }


def _explore_stronger_mono_eval(instance):
    rho: DensityMatrix = instance["rho"]
    sigma: DensityMatrix = instance["sigma"]
    channel: KrausChannel = instance["channel"]
    gap = (
        relative_entropy(rho, sigma).value
        - relative_entropy(channel.apply(rho.mat), channel.apply(sigma.mat)).value
    )
    recovered = petz_map(channel, sigma).apply(channel.apply(rho.mat))
    dist = trace_norm(rho.mat - recovered)
    return gap - 0.25 * dist**2, {"relent_gap": gap, "recovery_distance": dist}


def _explore_ptrace_petz_sample(rng, dims, eps):
    if len(dims) < 2:
        raise BadConfig(f"need at least two dims, got {dims}")
    da, db = int(dims[0]), int(dims[1])
    d = da * db
    return {
        "rho_ab": MultipartiteState(regularize(random_density(d, rng), eps), (da, db)),
        "sigma_ab": MultipartiteState(regularize(random_density(d, rng), eps), (da, db)),
    }


def _explore_ptrace_petz_eval(instance):
    rho_ab: MultipartiteState = instance["rho_ab"]
    sigma_ab: MultipartiteState = instance["sigma_ab"]
    dims = _same_dims(rho_ab, sigma_ab)
    channel = ptrace_channel(dims, 1)
    gap = (
        relative_entropy(rho_ab.matrix, sigma_ab.matrix).value
        - relative_entropy(rho_ab.marginal([0]), sigma_ab.marginal([0])).value
    )
    recovered = petz_map(channel, sigma_ab.state).apply(rho_ab.marginal([0]))
    dist = trace_norm(rho_ab.matrix - recovered)
    return gap - 0.25 * dist**2, {"relent_gap": gap, "recovery_distance": dist}


def _explore_cmi_petz_sample(rng, dims, eps):
    if len(dims) != 3:
        raise BadConfig(f"need exactly three dims, got {dims}")
    d = _flat_dim(dims)
    return {
        "rho": MultipartiteState(regularize(random_density(d, rng), eps), dims),
    }


def _explore_cmi_petz_eval(instance):
    state: MultipartiteState = instance["rho"]
    m = _tri_mats(state)
    dims = state.dims
    sqrt_ab = embed(matrix_sqrt(m["ab"]), dims, (0, 1))
    inv_sqrt_b = embed(matrix_power(m["b"], -0.5), dims, (1,))
    bc_full = embed(m["bc"], dims, (1, 2))
    recovered = sqrt_ab @ inv_sqrt_b @ bc_full @ inv_sqrt_b @ sqrt_ab
    dist = trace_norm(m["abc"] - recovered)
    i_val = cmi(state)
    return i_val - 0.25 * dist**2, {"cmi": i_val, "recovery_distance": dist}


def _explore_trotter_sample(rng, dims, eps):
    if len(dims) != 3:
        raise BadConfig(f"need exactly three dims, got {dims}")
    d = _flat_dim(dims)
    return {
        "rho": MultipartiteState(regularize(random_density(d, rng), eps), dims),
    }


def _explore_trotter_eval(instance):
    state: MultipartiteState = instance["rho"]
    result = trotter_sequence(state, n_values=(1, 2, 4, 8, 16))
    ts = [result.quantities[f"t_{n}"] for n in (1, 2, 4, 8, 16)]
    diffs = [ts[i] - ts[i + 1] for i in range(len(ts) - 1)]
    quantities = {f"t_{n}": t for n, t in zip((1, 2, 4, 8, 16), ts)}
    return min(diffs), quantities


EXPLORE_KINDS = {
    "stronger-mono": (_explore_stronger_mono_sample, _explore_stronger_mono_eval),
    "ptrace-petz": (_explore_ptrace_petz_sample, _explore_ptrace_petz_eval),
    "cmi-petz": (_explore_cmi_petz_sample, _explore_cmi_petz_eval),
    "trotter-monotone": (_explore_trotter_sample, _explore_trotter_eval),
}

_EXPLORE_INDEX = {kind: i for i, kind in enumerate(EXPLORE_KINDS)}


def explore_conjecture(
    kind: str,
    trials: int,
    dims: Sequence[int],
    seed: int,
    eps: float = DEFAULT_EPS,
    tol: float = TOL_INEQ,
    bins: int = 20,
) -> ExplorationReport:
    """Sweep random instances of an open inequality and report the slack law.

    Exploration never asserts: the report carries the minimum observed slack,
    a histogram, and the serialized worst instance.  A candidate
    counterexample is flagged when the minimum slack drops below -10 * tol.
    """
    if kind not in EXPLORE_KINDS:
        raise BadConfig(
            f"unknown exploration kind {kind!r}; choose from {sorted(EXPLORE_KINDS)}"
        )
    if trials < 1:
        raise BadConfig(f"need at least one trial, got {trials}")
    from .serialize import serialize_instance

    sample, evaluate = EXPLORE_KINDS[kind]
    dims = tuple(int(d) for d in dims)
    slacks = np.empty(trials)
    worst = (math.inf, -1, None)
    for trial in range(trials):
        rng = np.random.default_rng([seed, 100 + _EXPLORE_INDEX[kind], trial])
        instance = sample(rng, dims, eps)
        slack, _ = evaluate(instance)
        slacks[trial] = slack
        if slack < worst[0]:
            worst = (slack, trial, instance)
    counts, edges = np.histogram(slacks, bins=bins)
    min_slack = float(worst[0])
    return ExplorationReport(
        kind=kind,
        trials=trials,
        dims=dims,
        seed=seed,
        tolerance=tol,
        min_slack=min_slack,
        worst_trial=worst[1],
        histogram_edges=[float(e) for e in edges],
        histogram_counts=[int(c) for c in counts],
        worst_instance=serialize_instance(worst[2]),
        candidate_counterexample=bool(min_slack < -10.0 * tol),
    )
