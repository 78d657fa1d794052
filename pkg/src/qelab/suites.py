"""Named checker suites: samplers plus runners with a shared RNG discipline.

Each suite couples a sampler (rng, dims, eps) -> instance with a runner
(instance, tol, opts) -> result.  Instances hold only serializable values so
any trial can be dumped and replayed.  Trial randomness is keyed as
default_rng([seed, suite_index, trial]); results are therefore reproducible
from (seed, config) alone, independent of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import checks
from .channels import KrausChannel, random_channel, random_unital_channel
from .entropy import relative_entropy
from .errors import BadConfig
from .linalg import hermitize, kron, trace_norm
from .results import ChainResult, CheckResult
from .states import (
    MarkovSpec,
    MultipartiteState,
    SubnormalizedOperator,
    markov_state,
    normalized_weights,
    random_density,
    regularize,
)
from .tolerances import DEFAULT_EPS, TOL_IDENTITY, TOL_INEQ

# Thresholds for the exact-construction round trip (much tighter than the
# generic inequality tolerance: these are identities up to float noise).
MARKOV_CMI_TOL = 1e-10
MARKOV_RESIDUAL_TOL = 1e-7
# Block factors are regularized this hard so that the assembled state's
# smallest eigenvalue stays orders of magnitude above the rank cutoff, which
# keeps the matrix-log residuals at the 1e-9 level instead of drifting.
MARKOV_FACTOR_EPS = 3e-3
# Modest sample count for the suite sweep; the direct checker call is the
# place for the full n = 10^4 study.
TWIRL_SUITE_SAMPLES = 200
AUDENAERT_T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
CL_ALPHA_GRID = (1.5, 2.0, 4.0)


def _flat(dims: Sequence[int]) -> int:
    return int(np.prod([int(d) for d in dims]))


def _need_parts(dims: Sequence[int], n: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != n:
        raise BadConfig(f"this suite needs exactly {n} subsystem dims, got {list(dims)}")
    return dims


def _rand_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitize(g) / math.sqrt(d)


def _appendix_dim(dims: Sequence[int]) -> int:
    return min(_flat(dims), 6)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def _sample_pair(rng, dims, eps):
    d = _flat(dims)
    return {
        "rho": regularize(random_density(d, rng), eps),
        "sigma": regularize(random_density(d, rng), eps),
    }


def _sample_pair_generic_channel(rng, dims, eps):
    inst = _sample_pair(rng, dims, eps)
    inst["channel"] = random_channel(_flat(dims), 2, rng)
    return inst


def _sample_pair_unital_channel(rng, dims, eps):
    inst = _sample_pair(rng, dims, eps)
    d = _flat(dims)
    inst["channel"] = random_unital_channel(d, d, rng)
    return inst


def _sample_overlap(rng, dims, eps):
    inst = _sample_pair(rng, dims, eps)
    # Half the ensemble uses a strictly subnormalized reference mu * sigma.
    if rng.random() < 0.5:
        mu = float(rng.uniform(0.5, 1.0))
        inst["sigma_base"] = inst["sigma"]
        inst["mu"] = mu
        inst["sigma"] = SubnormalizedOperator(mu * inst["sigma_base"].mat)
    return inst


def _tri_state(rng, dims, eps):
    d = _flat(dims)
    return MultipartiteState(regularize(random_density(d, rng), eps), dims)


def _sample_tri(rng, dims, eps):
    dims = _need_parts(dims, 3)
    return {"rho": _tri_state(rng, dims, eps)}


def _sample_tri_pair(rng, dims, eps):
    dims = _need_parts(dims, 3)
    return {"rho": _tri_state(rng, dims, eps), "sigma": _tri_state(rng, dims, eps)}


def _sample_tri_quad(rng, dims, eps):
    dims = _need_parts(dims, 3)
    return {
        "rho": _tri_state(rng, dims, eps),
        "sigma": _tri_state(rng, dims, eps),
        "tau": _tri_state(rng, dims, eps),
        "omega": _tri_state(rng, dims, eps),
    }


def _perturb_edges(state: MultipartiteState, rng, env_dim: int = 2) -> MultipartiteState:
    """Random local channels on the outer subsystems; the middle marginal of
    the output equals that of the input exactly."""
    da, db, dc = state.dims
    ka = random_channel(da, env_dim, rng).kraus
    kc = random_channel(dc, env_dim, rng).kraus
    ops = [kron(kron(a, np.eye(db)), c) for a in ka for c in kc]
    channel = KrausChannel(ops)
    return MultipartiteState(channel.apply_to_state(state.state), state.dims)


def _sample_trace_exp(rng, dims, eps):
    dims = _need_parts(dims, 3)
    rho = _tri_state(rng, dims, eps)
    return {
        "rho": rho,
        "sigma": _perturb_edges(rho, rng),  # shares rho's middle marginal
        "tau": _tri_state(rng, dims, eps),
    }


def _sample_three_state(rng, dims, eps):
    dims = _need_parts(dims, 3)
    sigma = _tri_state(rng, dims, eps)
    return {
        "rho": _tri_state(rng, dims, eps),
        "sigma": sigma,
        "tau": _perturb_edges(sigma, rng),  # shares sigma's middle marginal
        "omega": _tri_state(rng, dims, eps),
    }


def _sample_bipartite_pair(rng, dims, eps):
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise BadConfig(f"this suite needs at least two subsystem dims, got {list(dims)}")
    da, db = dims[0], dims[1]
    d = da * db
    return {
        "rho_ab": MultipartiteState(regularize(random_density(d, rng), eps), (da, db)),
        "sigma_ab": MultipartiteState(regularize(random_density(d, rng), eps), (da, db)),
    }


def _sample_markov(rng, dims, eps):
    dims = _need_parts(dims, 3)
    d_a, d_c = dims[0], dims[2]
    n_blocks = int(rng.integers(1, 4))
    raw = rng.dirichlet(np.ones(n_blocks))
    weights = normalized_weights([0.8 * float(w) + 0.2 / n_blocks for w in raw])
    ab_factors = []
    bc_factors = []
    for _ in range(n_blocks):
        dl = int(rng.integers(1, 3))
        dr = int(rng.integers(1, 3))
        ab_factors.append(regularize(random_density(d_a * dl, rng), MARKOV_FACTOR_EPS))
        bc_factors.append(regularize(random_density(dr * d_c, rng), MARKOV_FACTOR_EPS))
    return {"spec": MarkovSpec(d_a, d_c, weights, tuple(ab_factors), tuple(bc_factors))}


def _sample_lieb(rng, dims, eps):
    d = _appendix_dim(dims)
    return {
        "h": _rand_hermitian(d, rng),
        "x1": regularize(random_density(d, rng), eps),
        "x2": regularize(random_density(d, rng), eps),
        "lam": float(rng.uniform(0.05, 0.95)),
    }


def _sample_cl(rng, dims, eps):
    d = _appendix_dim(dims)
    m = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(d)
    return {
        "m": m,
        "x1": regularize(random_density(d, rng), eps),
        "x2": regularize(random_density(d, rng), eps),
        "lam": float(rng.uniform(0.05, 0.95)),
    }


def _sample_gt(rng, dims, eps):
    d = _appendix_dim(dims)
    return {"a": _rand_hermitian(d, rng), "b": _rand_hermitian(d, rng)}


def _sample_audenaert(rng, dims, eps):
    d = _appendix_dim(dims)
    mu1 = float(rng.uniform(0.3, 1.0))
    mu2 = float(rng.uniform(0.3, 1.0))
    return {
        "m": SubnormalizedOperator(mu1 * regularize(random_density(d, rng), eps).mat),
        "n": SubnormalizedOperator(mu2 * regularize(random_density(d, rng), eps).mat),
    }


def _sample_twirl(rng, dims, eps):
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise BadConfig(f"this suite needs at least two subsystem dims, got {list(dims)}")
    da, db = dims[0], dims[1]
    x = _rand_hermitian(da * db, rng)
    return {
        "x": x,
        "d_a": da,
        "d_b": db,
        "mc_seed": int(rng.integers(0, 2**63 - 1)),
        "samples": TWIRL_SUITE_SAMPLES,
    }


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------


def _run_renyi(inst, tol, opts):
    return checks.check_renyi_monotonicity(inst["rho"], inst["sigma"], tol=tol)


def _run_overlap(inst, tol, opts):
    result = checks.check_overlap_chain(inst["rho"], inst["sigma"], tol=tol)
    if "mu" in inst:
        # The scaled reference obeys the exact shift rule
        # S(rho || mu sigma) = S(rho || sigma) - log mu.
        base = relative_entropy(inst["rho"], inst["sigma_base"]).value
        scaled = dict(result.links)["relative_entropy"]
        residual = abs(scaled - (base - math.log(inst["mu"])))
        result.quantities["scaling_residual"] = residual
        result.extra_ok = bool(result.extra_ok and residual <= TOL_IDENTITY)
    return result


def _run_monotonicity(inst, tol, opts):
    return checks.check_monotonicity(inst["rho"], inst["sigma"], inst["channel"], tol)


def _run_stronger(inst, tol, opts):
    return checks.check_stronger_monotonicity(
        inst["rho"], inst["sigma"], inst["channel"], tol
    )


def _run_unital_trace(inst, tol, opts):
    return checks.check_unital_trace_bound(
        inst["rho"], inst["sigma"], inst["channel"], tol
    )


def _run_ptrace(inst, tol, opts):
    return checks.check_ptrace_strengthening(inst["rho_ab"], inst["sigma_ab"], tol)


def _run_ssa(inst, tol, opts):
    return checks.check_ssa_strengthened(inst["rho"], tol)


def _run_trace_exp(inst, tol, opts):
    return checks.check_trace_exp_bound(inst["rho"], inst["sigma"], inst["tau"], tol)


def _run_bsw(inst, tol, opts):
    return checks.check_bsw_identity(
        inst["rho"], inst["sigma"], inst["tau"], inst["omega"]
    )


def _run_super_ssa(inst, tol, opts):
    return checks.check_super_ssa(inst["rho"], inst["sigma"], tol)


def _run_three_state(inst, tol, opts):
    return checks.check_three_state_chain(
        inst["rho"], inst["sigma"], inst["tau"], inst["omega"], tol
    )


def _run_subadd(inst, tol, opts):
    return checks.check_subadd_exp(inst["rho"], tol)


def _run_markov(inst, tol, opts):
    spec = inst["spec"]
    state = markov_state(spec)
    t_samples = opts.get("t_samples", checks.DEFAULT_T_SAMPLES)
    chars = checks.markov_characterizations(state, t_samples=t_samples)
    quantities = dict(chars.quantities)
    surrogate = checks.ssa_surrogate(state)
    quantities["r_surrogate"] = trace_norm(state.matrix - surrogate)
    slacks = [MARKOV_CMI_TOL - quantities["cmi"]] + [
        MARKOV_RESIDUAL_TOL - quantities[key]
        for key in ("r_log", "r_petz", "r_recon_ab", "r_recon_bc", "r_surrogate")
    ]
    return CheckResult(
        "markov-roundtrip",
        quantities,
        min(slacks),
        0.0,
        meta={
            "cmi_tol": MARKOV_CMI_TOL,
            "residual_tol": MARKOV_RESIDUAL_TOL,
            "n_blocks": len(spec.weights),
        },
    )


def _run_trotter(inst, tol, opts):
    n_values = opts.get("n_values", checks.DEFAULT_TROTTER_NS)
    return checks.trotter_sequence(inst["rho"], n_values=n_values, tol=tol)


def _run_dw_alpha(inst, tol, opts):
    alphas = opts.get("alphas", checks.DEFAULT_DW_ALPHAS)
    return checks.dw_alpha_profile(
        inst["rho"], inst["sigma"], inst["channel"], alphas, tol
    )


def _run_dw_tripartite(inst, tol, opts):
    alphas = opts.get("alphas", checks.DEFAULT_DW_ALPHAS)
    return checks.check_dw_tripartite(inst["rho"], alphas, tol)


def _run_sbw(inst, tol, opts):
    alphas = opts.get("sbw_alphas", checks.DEFAULT_SBW_ALPHAS)
    return checks.check_sbw_limit(
        inst["rho"], inst["sigma"], inst["channel"], alphas, tol
    )


def _run_lieb(inst, tol, opts):
    return checks.check_lieb_concavity(
        inst["h"], inst["x1"], inst["x2"], float(inst["lam"]), tol
    )


def _run_cl(inst, tol, opts):
    quantities = {}
    worst = math.inf
    for alpha in CL_ALPHA_GRID:
        single = checks.check_cl_concavity(
            inst["m"], inst["x1"], inst["x2"], float(inst["lam"]), alpha, tol
        )
        quantities[f"slack_{alpha!r}"] = single.slack
        worst = min(worst, single.slack)
    return CheckResult("carlen-lieb-concavity", quantities, worst, tol)


def _run_gt(inst, tol, opts):
    return checks.check_golden_thompson(inst["a"], inst["b"], tol)


def _run_audenaert(inst, tol, opts):
    return checks.check_audenaert_ps(inst["m"], inst["n"], AUDENAERT_T_GRID, tol)


def _run_squashed(inst, tol, opts):
    return checks.check_squashed_proxy(inst["rho"], tol)


def _run_twirl(inst, tol, opts):
    rng = np.random.default_rng(int(inst["mc_seed"]))
    return checks.check_twirl_identity(
        inst["x"],
        (int(inst["d_a"]), int(inst["d_b"])),
        rng,
        samples=int(inst["samples"]),
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    name: str
    sample: Callable
    run: Callable
    description: str


SUITES: dict[str, Suite] = {}


def _register(name: str, sample, run, description: str) -> None:
    SUITES[name] = Suite(name, sample, run, description)


_register(
    "renyi-monotone",
    _sample_pair,
    _run_renyi,
    "Renyi relative entropy nondecreasing in alpha on (0,1)",
)
_register(
    "overlap-chain",
    _sample_overlap,
    _run_overlap,
    "relative entropy >= root-overlap bound >= sqrt distances (Tr sigma <= 1)",
)
_register(
    "monotonicity",
    _sample_pair_generic_channel,
    _run_monotonicity,
    "data processing: S(rho||sigma) >= S(Phi rho||Phi sigma)",
)
_register(
    "stronger-monotonicity",
    _sample_pair_unital_channel,
    _run_stronger,
    "refined data processing chain for unital channels",
)
_register(
    "unital-trace-bound",
    _sample_pair_unital_channel,
    _run_unital_trace,
    "Tr exp(log sigma + dual logs) <= 1 for unital channels",
)
_register(
    "ptrace-strengthening",
    _sample_bipartite_pair,
    _run_ptrace,
    "refined monotonicity for the partial trace",
)
_register(
    "ssa",
    _sample_tri,
    _run_ssa,
    "strong subadditivity chain against the exp-log surrogate",
)
_register(
    "trace-exp-bound",
    _sample_trace_exp,
    _run_trace_exp,
    "Tr exp(log rho_AB - log sigma_B + log tau_BC) <= 1 with matched middles",
)
_register(
    "bsw-identity",
    _sample_tri_quad,
    _run_bsw,
    "exact decomposition of relative entropy to an exp-log reference",
)
_register(
    "super-ssa",
    _sample_tri_pair,
    _run_super_ssa,
    "CMI plus half relative entropies lower-bounds the exp-log distance",
)
_register(
    "three-state-chain",
    _sample_three_state,
    _run_three_state,
    "distance chain to a three-state exp-log surrogate with matched middles",
)
_register(
    "subadd-exp",
    _sample_tri,
    _run_subadd,
    "subadditivity chain with the two-marginal surrogate and product bound",
)
_register(
    "markov-roundtrip",
    _sample_markov,
    _run_markov,
    "constructed short-chain states satisfy every Markov signature",
)
_register(
    "trotter-bound",
    _sample_tri,
    _run_trotter,
    "compressed product traces stay <= 1 and converge to the surrogate trace",
)
_register(
    "dw-alpha",
    _sample_pair_unital_channel,
    _run_dw_alpha,
    "finite-alpha compressed trace bound over an alpha grid",
)
_register(
    "dw-tripartite",
    _sample_tri,
    _run_dw_tripartite,
    "tripartite specialization of the finite-alpha bound plus route cross-check",
)
_register(
    "sbw-limit",
    _sample_pair_unital_channel,
    _run_sbw,
    "alpha -> 0 operator convergence to the exp-log surrogate",
)
_register(
    "lieb-concavity",
    _sample_lieb,
    _run_lieb,
    "concavity of X -> Tr exp(H + log X)",
)
_register(
    "carlen-lieb-concavity",
    _sample_cl,
    _run_cl,
    "concavity of X -> Tr (M X^(1/alpha) M+)^alpha for alpha >= 1",
)
_register(
    "golden-thompson",
    _sample_gt,
    _run_gt,
    "Tr e^(A+B) <= Tr e^A e^B",
)
_register(
    "audenaert-powers-stormer",
    _sample_audenaert,
    _run_audenaert,
    "square-root norm chain and interpolated trace overlap bound",
)
_register(
    "squashed-proxy",
    _sample_tri,
    _run_squashed,
    "half CMI >= eighth of squared distance to the surrogate's AC reduction",
)
_register(
    "twirl-identity",
    _sample_twirl,
    _run_twirl,
    "Monte Carlo twirl matches the closed form within the sampling bound",
)

SUITE_INDEX = {name: i for i, name in enumerate(SUITES)}


def trial_rng(seed: int, suite_name: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, SUITE_INDEX[suite_name], trial])


def run_trial(
    suite: Suite,
    dims: Sequence[int],
    seed: int,
    trial: int,
    eps: float,
    tol: float,
    opts: dict | None = None,
):
    """One seeded trial; returns (instance, result)."""
    rng = trial_rng(seed, suite.name, trial)
    instance = suite.sample(rng, dims, eps)
    result = suite.run(instance, tol, opts or {})
    return instance, result


def run_suite(
    name: str,
    dims: Sequence[int],
    trials: int,
    seed: int,
    eps: float = DEFAULT_EPS,
    tol: float = TOL_INEQ,
    opts: dict | None = None,
) -> list[tuple[int, dict, CheckResult | ChainResult]]:
    """Run ``trials`` seeded instances of one suite.

    Returns (trial, instance, result) triples ordered by trial index.
    """
    if name not in SUITES:
        raise BadConfig(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if trials < 1:
        raise BadConfig(f"need at least one trial, got {trials}")
    suite = SUITES[name]
    return [
        (trial, *run_trial(suite, dims, seed, trial, eps, tol, opts))
        for trial in range(trials)
    ]
