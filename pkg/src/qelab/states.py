"""Density operators, multipartite wrappers and random-state ensembles.

States are immutable: the wrapped array is frozen at construction and every
operation returns a new object.  Randomness always flows through an explicit
``numpy.random.Generator`` so that every ensemble is reproducible from its
seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadConfig,
    BadRank,
    BadTrace,
    DimMismatch,
    InconsistentBlocks,
    NotHermitian,
    NotPSD,
    NotTripartite,
)
from .linalg import hermitize, kron, max_sv, ptrace
from .tolerances import TOL_HERM, TOL_PSD, TOL_TRACE


def _validated_matrix(mat: np.ndarray, tol_herm: float, tol_psd: float) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {mat.shape}")
    dev = max_sv(mat - mat.conj().T)
    scale = max(max_sv(mat), 1e-300)
    if dev > tol_herm * scale:
        raise NotHermitian(f"operator deviates from Hermitian by {dev:.3e}")
    mat = hermitize(mat)
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    if min_eig < -tol_psd:
        raise NotPSD(f"minimum eigenvalue {min_eig:.3e} below -{tol_psd:.1e}")
    mat = mat.copy()
    mat.setflags(write=False)
    return mat


class SubnormalizedOperator:
    """Hermitian PSD operator with 0 <= trace <= 1 (within tolerance)."""

    def __init__(self, mat: np.ndarray):
        self._mat = _validated_matrix(mat, TOL_HERM, TOL_PSD)
        tr = float(np.trace(self._mat).real)
        if tr < -TOL_TRACE or tr > 1.0 + TOL_TRACE:
            raise BadTrace(f"trace {tr!r} outside [0, 1]")
        self._trace = tr

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    @property
    def trace(self) -> float:
        return self._trace

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, trace={self._trace:.6f})"


class DensityMatrix(SubnormalizedOperator):
    """Unit-trace special case of SubnormalizedOperator."""

    def __init__(self, mat: np.ndarray):
        mat = np.asarray(mat, dtype=complex)
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > TOL_TRACE:
            raise BadTrace(f"trace {tr!r} deviates from 1 beyond {TOL_TRACE:.1e}")
        super().__init__(mat)


_DEFAULT_LABELS = "ABCDEFGH"


class MultipartiteState:
    """A density matrix together with its subsystem dimensions.

    The first subsystem owns the slowest index: for dims (dA, dB, dC) the
    flat basis index of |a, b, c> is ((a * dB) + b) * dC + c.
    """

    def __init__(
        self,
        state: DensityMatrix | np.ndarray,
        dims: Sequence[int],
        labels: Sequence[str] | None = None,
    ):
        if not isinstance(state, DensityMatrix):
            state = DensityMatrix(state)
        dims = tuple(int(d) for d in dims)
        if int(np.prod(dims)) != state.dim:
            raise DimMismatch(f"dims {dims} do not multiply to {state.dim}")
        if labels is None:
            labels = tuple(_DEFAULT_LABELS[: len(dims)])
        if len(labels) != len(dims):
            raise DimMismatch("one label per subsystem required")
        self.state = state
        self.dims = dims
        self.labels = tuple(labels)

    @property
    def matrix(self) -> np.ndarray:
        return self.state.mat

    @property
    def n_parts(self) -> int:
        return len(self.dims)

    def reduce(self, keep: Sequence[int]) -> "MultipartiteState":
        """Partial trace down to the subsystems in ``keep``."""
        keep = sorted(set(int(k) for k in keep))
        red = ptrace(self.matrix, self.dims, keep)
        return MultipartiteState(
            DensityMatrix(red),
            tuple(self.dims[k] for k in keep),
            tuple(self.labels[k] for k in keep),
        )

    def marginal(self, keep: Sequence[int]) -> np.ndarray:
        """Raw matrix of the reduction onto ``keep`` (no re-validation)."""
        return ptrace(self.matrix, self.dims, keep)

    def __repr__(self) -> str:
        parts = ",".join(f"{l}:{d}" for l, d in zip(self.labels, self.dims))
        return f"MultipartiteState({parts})"


def require_tripartite(state: MultipartiteState) -> MultipartiteState:
    if state.n_parts != 3:
        raise NotTripartite(f"need exactly 3 subsystems, got {state.n_parts}")
    return state


@dataclass(frozen=True)
class MarkovSpec:
    """Block data for an exact short-chain state on A:B:C.

    B decomposes as a direct sum over blocks k of bL_k (x) bR_k; block k
    carries weight p_k, a joint state on A (x) bL_k and a joint state on
    bR_k (x) C.  Blocks are laid out consecutively along the B index with
    bL slow inside each block.
    """

    d_a: int
    d_c: int
    weights: tuple[float, ...]
    ab_factors: tuple[DensityMatrix, ...] = field(repr=False)
    bc_factors: tuple[DensityMatrix, ...] = field(repr=False)

    def __post_init__(self):
        if self.d_a < 1 or self.d_c < 1:
            raise InconsistentBlocks("edge dimensions must be >= 1")
        n = len(self.weights)
        if n == 0 or len(self.ab_factors) != n or len(self.bc_factors) != n:
            raise InconsistentBlocks("need one weight and one factor pair per block")
        if any(p < 0 for p in self.weights):
            raise InconsistentBlocks("block weights must be nonnegative")
        total = float(sum(self.weights))
        if abs(total - 1.0) > TOL_TRACE:
            raise InconsistentBlocks(
                f"block weights sum to {total!r}; renormalize before building the spec"
            )
        for ab, bc in zip(self.ab_factors, self.bc_factors):
            if ab.dim % self.d_a != 0:
                raise InconsistentBlocks(
                    f"A-side factor dim {ab.dim} not divisible by d_a={self.d_a}"
                )
            if bc.dim % self.d_c != 0:
                raise InconsistentBlocks(
                    f"C-side factor dim {bc.dim} not divisible by d_c={self.d_c}"
                )

    @property
    def block_dims(self) -> tuple[tuple[int, int], ...]:
        """(d_bL, d_bR) per block."""
        return tuple(
            (ab.dim // self.d_a, bc.dim // self.d_c)
            for ab, bc in zip(self.ab_factors, self.bc_factors)
        )

    @property
    def d_b(self) -> int:
        return sum(dl * dr for dl, dr in self.block_dims)


def normalized_weights(raw: Sequence[float]) -> tuple[float, ...]:
    """Renormalize weights whose sum is within TOL_TRACE of 1; reject others."""
    if any(p < 0 for p in raw):
        raise InconsistentBlocks(f"weights must be nonnegative, got {tuple(raw)}")
    total = float(sum(raw))
    if abs(total - 1.0) > TOL_TRACE:
        raise InconsistentBlocks(f"weights sum to {total!r}, not 1")
    return tuple(float(p) / total for p in raw)


def markov_state(spec: MarkovSpec) -> MultipartiteState:
    """Assemble the tripartite state described by a MarkovSpec.

    The result has vanishing conditional mutual information I(A:C|B) by
    construction: conditioned on the block, A correlates only with bL and C
    only with bR.
    """
    d_a, d_c, d_b = spec.d_a, spec.d_c, spec.d_b
    total = d_a * d_b * d_c
    out = np.zeros((total, total), dtype=complex)
    offset = 0
    for p, ab, bc, (dl, dr) in zip(
        spec.weights, spec.ab_factors, spec.bc_factors, spec.block_dims
    ):
        block = kron(ab.mat, bc.mat)  # index order (A, bL, bR, C), A slowest
        idx = np.empty(d_a * dl * dr * d_c, dtype=np.intp)
        pos = 0
        for a in range(d_a):
            for l in range(dl):
                for r in range(dr):
                    b = offset + l * dr + r
                    base = (a * d_b + b) * d_c
                    idx[pos : pos + d_c] = np.arange(base, base + d_c)
                    pos += d_c
        out[np.ix_(idx, idx)] += p * block
        offset += dl * dr
    return MultipartiteState(DensityMatrix(out), (d_a, d_b, d_c))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix.

    The R-diagonal phases are divided out so the distribution is exactly
    Haar rather than QR-convention dependent.
    """
    if d < 1:
        raise DimMismatch(f"dimension must be >= 1, got {d}")
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return q


def random_density(
    d: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Random density matrix G G^dag / Tr from a d x rank complex Gaussian G."""
    if d < 1:
        raise DimMismatch(f"dimension must be >= 1, got {d}")
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise BadRank(f"rank must be in 1..{d}, got {rank}")
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat).real)


def random_tripartite(
    dims: Sequence[int], rng: np.random.Generator, rank: int | None = None
) -> MultipartiteState:
    """Random tripartite state on dims = (dA, dB, dC)."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise NotTripartite(f"need 3 dimensions, got {dims}")
    total = int(np.prod(dims))
    return MultipartiteState(random_density(total, rng, rank=rank), dims)


def regularize(state: DensityMatrix | np.ndarray, eps: float) -> DensityMatrix:
    """Full-rank mixture (1 - eps) rho + eps * I/d."""
    if not 0.0 < eps < 1.0:
        raise BadConfig(f"regularization weight must be in (0, 1), got {eps}")
    mat = state.mat if isinstance(state, SubnormalizedOperator) else np.asarray(state)
    d = mat.shape[0]
    mixed = (1.0 - eps) * mat + (eps / d) * np.eye(d)
    return DensityMatrix(mixed)


def regularize_tripartite(state: MultipartiteState, eps: float) -> MultipartiteState:
    return MultipartiteState(regularize(state.state, eps), state.dims, state.labels)


# --------------------------------------------------------------------------
# JSON serialization.  Matrices are stored as separate real/imaginary nested
# lists; states carry their subsystem dimensions.
# --------------------------------------------------------------------------


def matrix_to_json(mat: np.ndarray) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {"re": mat.real.tolist(), "im": mat.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != im.shape:
        raise DimMismatch("re/im parts have different shapes")
    return re + 1j * im


def state_to_json(state: DensityMatrix | MultipartiteState) -> dict:
    if isinstance(state, MultipartiteState):
        dims = list(state.dims)
        mat = state.matrix
    else:
        dims = [state.dim]
        mat = state.mat
    out = {"dims": dims}
    out.update(matrix_to_json(mat))
    return out


def state_from_json(obj: dict) -> DensityMatrix | MultipartiteState:
    mat = matrix_from_json(obj)
    dims = [int(d) for d in obj["dims"]]
    dm = DensityMatrix(mat)
    if len(dims) == 1:
        if dims[0] != dm.dim:
            raise DimMismatch(f"dims {dims} do not match matrix of size {dm.dim}")
        return dm
    return MultipartiteState(dm, dims)


def markov_spec_to_json(spec: MarkovSpec) -> dict:
    return {
        "d_a": spec.d_a,
        "d_c": spec.d_c,
        "blocks": [
            {
                "weight": p,
                "ab": matrix_to_json(ab.mat),
                "bc": matrix_to_json(bc.mat),
            }
            for p, ab, bc in zip(spec.weights, spec.ab_factors, spec.bc_factors)
        ],
    }


def markov_spec_from_json(obj: dict) -> MarkovSpec:
    try:
        blocks = obj["blocks"]
        d_a = int(obj["d_a"])
        d_c = int(obj["d_c"])
        raw = [float(b["weight"]) for b in blocks]
        abs_ = [DensityMatrix(matrix_from_json(b["ab"])) for b in blocks]
        bcs = [DensityMatrix(matrix_from_json(b["bc"])) for b in blocks]
    except (KeyError, TypeError, ValueError) as exc:
        raise InconsistentBlocks(f"malformed Markov block data: {exc}") from exc
    return MarkovSpec(d_a, d_c, normalized_weights(raw), tuple(abs_), tuple(bcs))
