"""Quantum channels in Kraus form, their duals, and recovery maps.

A channel is held as a list of Kraus operators K_i (shape d_out x d_in) with
sum_i K_i^dag K_i = 1 enforced at construction.  The Hilbert-Schmidt dual
Phi^*(Y) = sum_i K_i^dag Y K_i is available as a (generally not
trace-preserving) Kraus map, which is what the entropy checkers need.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimMismatch, NotUnital, SingularSigma
from .linalg import (
    hermitize,
    kron,
    matrix_power,
    matrix_sqrt,
    max_sv,
    ptrace,
)
from .states import (
    DensityMatrix,
    SubnormalizedOperator,
    matrix_from_json,
    matrix_to_json,
    random_unitary,
)
from .tolerances import PETZ_EPS, RANK_CUTOFF, TOL_RECON


def _is_hermitian(x: np.ndarray, rel: float = 1e-12) -> bool:
    return max_sv(x - x.conj().T) <= rel * max(max_sv(x), 1e-300)


class KrausChannel:
    """Completely positive map given by Kraus operators.

    With require_tp=True (the default) the operators must satisfy
    sum K^dag K = 1 within TOL_RECON; duals of channels are built with
    require_tp=False since they need not be trace preserving.
    """

    def __init__(self, kraus: Sequence[np.ndarray], require_tp: bool = True):
        ops = [np.asarray(k, dtype=complex) for k in kraus]
        if not ops:
            raise DimMismatch("need at least one Kraus operator")
        d_out, d_in = ops[0].shape
        for k in ops:
            if k.ndim != 2 or k.shape != (d_out, d_in):
                raise DimMismatch(
                    f"all Kraus operators must share shape ({d_out}, {d_in})"
                )
        self.kraus = tuple(ops)
        self.d_in = d_in
        self.d_out = d_out
        gram = sum(k.conj().T @ k for k in ops)
        self._tp_dev = max_sv(gram - np.eye(d_in))
        if require_tp and self._tp_dev > TOL_RECON:
            raise DimMismatch(
                f"Kraus operators violate trace preservation by {self._tp_dev:.3e}"
            )
        env = sum(k @ k.conj().T for k in ops)
        self._unital_dev = max_sv(env - np.eye(d_out))

    @property
    def is_trace_preserving(self) -> bool:
        return self._tp_dev <= TOL_RECON

    @property
    def is_unital(self) -> bool:
        """True when the channel maps the identity to the identity."""
        return self._unital_dev <= TOL_RECON

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.d_in, self.d_in):
            raise DimMismatch(f"input shape {x.shape}, channel expects {self.d_in}")
        out = sum(k @ x @ k.conj().T for k in self.kraus)
        if _is_hermitian(x):
            out = hermitize(out)
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x)

    def apply_to_state(self, state: DensityMatrix) -> DensityMatrix:
        return DensityMatrix(self.apply(state.mat))

    def dual(self) -> "KrausChannel":
        """Hilbert-Schmidt adjoint Phi^*, with Kraus operators K_i^dag.

        The dual of a trace-preserving map is unital (it fixes the identity)
        but generally not trace preserving, so validation is relaxed.
        """
        return KrausChannel([k.conj().T for k in self.kraus], require_tp=False)

    def to_json(self) -> dict:
        return {
            "d_in": self.d_in,
            "d_out": self.d_out,
            "kraus": [matrix_to_json(k) for k in self.kraus],
        }

    @classmethod
    def from_json(cls, obj: dict, require_tp: bool = True) -> "KrausChannel":
        ops = [matrix_from_json(k) for k in obj["kraus"]]
        ch = cls(ops, require_tp=require_tp)
        if ch.d_in != int(obj["d_in"]) or ch.d_out != int(obj["d_out"]):
            raise DimMismatch("stored dimensions disagree with Kraus shapes")
        return ch

    def __repr__(self) -> str:
        return (
            f"KrausChannel(d_in={self.d_in}, d_out={self.d_out}, "
            f"n_kraus={len(self.kraus)}, unital={self.is_unital})"
        )


def require_unital(channel: KrausChannel) -> KrausChannel:
    if not channel.is_unital:
        raise NotUnital(
            f"channel maps identity away from identity by {channel._unital_dev:.3e}"
        )
    return channel


class PetzMap:
    """Transpose-channel recovery map of a channel with respect to a reference.

    For channel Phi and reference sigma this is
        X  |->  sigma^{1/2} Phi^*( Phi(sigma)^{-1/2} X Phi(sigma)^{-1/2} ) sigma^{1/2}.
    It always fixes the pushed-forward reference: apply(Phi(sigma)) = sigma.
    A singular Phi(sigma) is handled by mixing in PETZ_EPS of the maximally
    mixed state before the inverse square root (pseudo-inverse on the support
    alone would silently drop weight for inputs leaking off the support).
    """

    def __init__(self, channel: KrausChannel, sigma: SubnormalizedOperator):
        if sigma.dim != channel.d_in:
            raise DimMismatch(
                f"reference dim {sigma.dim} does not match channel input {channel.d_in}"
            )
        image = channel.apply(sigma.mat)
        tr = float(np.trace(image).real)
        if tr <= RANK_CUTOFF:
            raise SingularSigma("channel output of the reference has ~zero trace")
        eigs = np.linalg.eigvalsh(hermitize(image))
        if eigs[0] <= RANK_CUTOFF * max(eigs[-1], 1e-300):
            d = image.shape[0]
            image = (1.0 - PETZ_EPS) * image + (PETZ_EPS * tr / d) * np.eye(d)
        self.channel = channel
        self.sigma = sigma
        self._sqrt_sigma = matrix_sqrt(sigma.mat)
        self._inv_sqrt_image = matrix_power(hermitize(image), -0.5)
        self._dual = channel.dual()

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.channel.d_out, self.channel.d_out):
            raise DimMismatch(
                f"input shape {x.shape}, recovery map expects {self.channel.d_out}"
            )
        inner = self._inv_sqrt_image @ x @ self._inv_sqrt_image
        out = self._sqrt_sigma @ self._dual.apply(inner) @ self._sqrt_sigma
        if _is_hermitian(x):
            out = hermitize(out)
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x)


def petz_map(channel: KrausChannel, sigma: SubnormalizedOperator) -> PetzMap:
    return PetzMap(channel, sigma)


def ptrace_channel(dims: Sequence[int], traced: int) -> KrausChannel:
    """Partial trace over one subsystem as an explicit Kraus channel."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if not 0 <= traced < n:
        raise DimMismatch(f"traced={traced} out of range for {n} subsystems")
    d_pre = int(np.prod(dims[:traced])) if traced > 0 else 1
    d_post = int(np.prod(dims[traced + 1 :])) if traced + 1 < n else 1
    d_t = dims[traced]
    ops = []
    for i in range(d_t):
        bra = np.zeros((1, d_t))
        bra[0, i] = 1.0
        ops.append(kron(kron(np.eye(d_pre), bra), np.eye(d_post)))
    return KrausChannel(ops)


def random_unital_channel(
    d: int, n_kraus: int, rng: np.random.Generator
) -> KrausChannel:
    """Mixed-unitary channel: Kraus sqrt(p_i) U_i with Haar unitaries U_i."""
    if n_kraus < 1:
        raise DimMismatch(f"need at least one Kraus operator, got {n_kraus}")
    probs = rng.dirichlet(np.ones(n_kraus))
    # Keep every branch comfortably populated so the channel stays full rank.
    probs = 0.9 * probs + 0.1 / n_kraus
    ops = [np.sqrt(p) * random_unitary(d, rng) for p in probs]
    return KrausChannel(ops)


def random_channel(d: int, env_dim: int, rng: np.random.Generator) -> KrausChannel:
    """Generic channel from a Haar-random isometry into d x env_dim."""
    if env_dim < 1:
        raise DimMismatch(f"environment dimension must be >= 1, got {env_dim}")
    g = rng.standard_normal((d * env_dim, d)) + 1j * rng.standard_normal(
        (d * env_dim, d)
    )
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    ops = [q[i * d : (i + 1) * d, :] for i in range(env_dim)]
    return KrausChannel(ops)


def _check_bipartite(x: np.ndarray, dims: Sequence[int]) -> tuple[int, int]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimMismatch(f"twirl needs exactly two subsystems, got {dims}")
    total = dims[0] * dims[1]
    if x.shape != (total, total):
        raise DimMismatch(f"operator shape {x.shape} does not match dims {dims}")
    return dims


def twirl_exact(x: np.ndarray, dims: Sequence[int], over: int = 1) -> np.ndarray:
    """Average of (1 (x) U) X (1 (x) U)^dag over Haar U on one factor.

    The closed form replaces the twirled factor by its maximally mixed state:
    twirling over B sends X to Tr_B(X) (x) 1_B / d_B.
    """
    x = np.asarray(x, dtype=complex)
    da, db = _check_bipartite(x, dims)
    if over == 1:
        return kron(ptrace(x, (da, db), [0]), np.eye(db) / db)
    if over == 0:
        return kron(np.eye(da) / da, ptrace(x, (da, db), [1]))
    raise DimMismatch(f"over must be 0 or 1, got {over}")


def twirl_mc(
    x: np.ndarray,
    dims: Sequence[int],
    rng: np.random.Generator,
    samples: int,
    over: int = 1,
) -> np.ndarray:
    """Monte Carlo estimate of the one-sided twirl with ``samples`` Haar draws."""
    x = np.asarray(x, dtype=complex)
    da, db = _check_bipartite(x, dims)
    if over not in (0, 1):
        raise DimMismatch(f"over must be 0 or 1, got {over}")
    if samples < 1:
        raise DimMismatch(f"need at least one sample, got {samples}")
    acc = np.zeros_like(x)
    for _ in range(samples):
        u = random_unitary(dims[over], rng)
        w = kron(np.eye(da), u) if over == 1 else kron(u, np.eye(db))
        acc += w @ x @ w.conj().T
    out = acc / samples
    if _is_hermitian(x):
        out = hermitize(out)
    return out
