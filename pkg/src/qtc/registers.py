"""Dense state vectors and operators on labeled qudit registers.

Registers are ordered collections of named subsystems; amplitudes are stored
flat in row-major mixed-radix order over the label order (first label is the
most significant digit).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DEFAULT_ATOL",
    "PROB_FLOOR",
    "DensityMatrix",
    "MeasurementBranch",
    "MemoryBudgetError",
    "Operator",
    "StateVector",
    "apply",
    "basis_state",
    "complete_unitary",
    "fidelity",
    "haar_random_state",
    "measure_projective",
    "memory_budget",
    "partial_trace",
    "tensor",
]

DEFAULT_ATOL = 1e-10
NORM_ATOL = 1e-12
PROB_FLOOR = 1e-14
DEFAULT_MEMORY_BUDGET = 1 << 26


class MemoryBudgetError(MemoryError):
    """Raised when a register would exceed the amplitude budget."""


def memory_budget() -> int:
    """Amplitude budget for any single register (QTC_MEM_BUDGET overrides)."""
    raw = os.environ.get("QTC_MEM_BUDGET")
    return int(raw) if raw else DEFAULT_MEMORY_BUDGET


def check_memory(total_amplitudes: int) -> None:
    budget = memory_budget()
    if total_amplitudes > budget:
        raise MemoryBudgetError(
            f"register of {total_amplitudes} amplitudes exceeds the budget of "
            f"{budget}; set QTC_MEM_BUDGET to raise it"
        )


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state on a labeled qudit register.

    ``amps[i]`` is the amplitude of the computational basis state whose
    mixed-radix digits (most significant first, radix ``dims``) encode ``i``.
    Normalization is enforced unless the state is explicitly flagged as an
    unnormalized branch remnant.
    """

    dims: tuple[int, ...]
    labels: tuple[str, ...]
    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        labels = tuple(str(lb) for lb in self.labels)
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if any(d < 1 for d in dims):
            raise ValueError("subsystem dimensions must be positive")
        if len(labels) != len(dims):
            raise ValueError("labels and dims must have equal length")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate register labels: {labels}")
        if amps.ndim != 1 or amps.size != math.prod(dims):
            raise ValueError(
                f"amplitude vector of length {amps.size} does not match dims {dims}"
            )
        if self.normalized:
            nrm = np.linalg.norm(amps)
            if abs(nrm - 1.0) > NORM_ATOL:
                raise ValueError(f"state norm {nrm!r} deviates from 1 beyond {NORM_ATOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no subsystem labeled {label!r} in {self.labels}") from None

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def overlap(self, other: "StateVector") -> complex:
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")
        return complex(np.vdot(self.amps, other.amps))

    def reordered(self, labels: Sequence[str]) -> "StateVector":
        """Same state with subsystems permuted into the given label order."""
        labels = tuple(labels)
        if sorted(labels) != sorted(self.labels):
            raise ValueError(f"{labels} is not a permutation of {self.labels}")
        perm = [self.axis(lb) for lb in labels]
        arr = np.transpose(self.tensor_view(), perm)
        return StateVector(
            tuple(self.dims[p] for p in perm), labels, arr.reshape(-1), self.normalized
        )


def basis_state(d: int, k: int, label: str = "X") -> StateVector:
    amps = np.zeros(d, dtype=np.complex128)
    amps[k % d] = 1.0
    return StateVector((d,), (label,), amps)


@dataclass(frozen=True, eq=False)
class Operator:
    """Linear map between labeled-register spaces, stored dense."""

    dims_in: tuple[int, ...]
    dims_out: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims_in = tuple(int(d) for d in self.dims_in)
        dims_out = tuple(int(d) for d in self.dims_out)
        matrix = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if matrix.shape != (math.prod(dims_out), math.prod(dims_in)):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match dims {dims_out}x{dims_in}"
            )
        matrix.flags.writeable = False
        object.__setattr__(self, "dims_in", dims_in)
        object.__setattr__(self, "dims_out", dims_out)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def square(cls, matrix: np.ndarray, dims: Sequence[int]) -> "Operator":
        dims = tuple(dims)
        return cls(dims, dims, matrix)

    def dagger(self) -> "Operator":
        return Operator(self.dims_out, self.dims_in, self.matrix.conj().T)

    def is_unitary(self, atol: float = DEFAULT_ATOL) -> bool:
        if self.dims_in != self.dims_out:
            return False
        eye = np.eye(self.matrix.shape[0])
        return bool(np.allclose(self.matrix.conj().T @ self.matrix, eye, atol=atol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state on a labeled register; Hermiticity and unit trace enforced."""

    dims: tuple[int, ...]
    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        labels = tuple(str(lb) for lb in self.labels)
        matrix = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        n = math.prod(dims)
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} does not match dims {dims}")
        if len(labels) != len(dims) or len(set(labels)) != len(labels):
            raise ValueError(f"bad labels {labels} for dims {dims}")
        if not np.allclose(matrix, matrix.conj().T, atol=NORM_ATOL):
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = np.trace(matrix).real
        if abs(tr - 1.0) > DEFAULT_ATOL:
            raise ValueError(f"density matrix trace {tr!r} deviates from 1")
        matrix.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", matrix)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def validate(self, atol: float = DEFAULT_ATOL) -> None:
        """Full positivity check; raises if any eigenvalue dips below -atol."""
        lo = self.min_eigenvalue()
        if lo < -atol:
            raise ValueError(f"density matrix has negative eigenvalue {lo}")


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; ``a``'s subsystems become the leading digits."""
    clash = set(a.labels) & set(b.labels)
    if clash:
        raise ValueError(f"label collision in tensor product: {sorted(clash)}")
    check_memory(a.dim * b.dim)
    return StateVector(
        a.dims + b.dims,
        a.labels + b.labels,
        np.kron(a.amps, b.amps),
        a.normalized and b.normalized,
    )


def _target_axes(state: StateVector, targets: Sequence[str]) -> list[int]:
    axes = [state.axis(t) for t in targets]
    if len(set(axes)) != len(axes):
        raise ValueError(f"repeated target labels: {tuple(targets)}")
    return axes


def apply(op: Operator, state: StateVector, targets: Sequence[str]) -> StateVector:
    """Apply ``op`` to the named subsystems, leaving the rest untouched."""
    axes = _target_axes(state, targets)
    if op.dims_in != tuple(state.dims[ax] for ax in axes):
        raise ValueError(
            f"operator dims {op.dims_in} do not match targets "
            f"{tuple(state.dims[ax] for ax in axes)}"
        )
    if op.dims_in != op.dims_out:
        raise ValueError("in-place apply requires a square operator")
    arr = np.moveaxis(state.tensor_view(), axes, range(len(axes)))
    head = math.prod(op.dims_in)
    flat = arr.reshape(head, -1)
    out = (op.matrix @ flat).reshape(arr.shape)
    out = np.moveaxis(out, range(len(axes)), axes)
    return StateVector(state.dims, state.labels, out.reshape(-1), state.normalized)


@dataclass(frozen=True, eq=False)
class MeasurementBranch:
    """One outcome of a projective measurement; zero branches keep post=None."""

    index: int
    probability: float
    post: StateVector | None
    zero: bool


def measure_projective(
    state: StateVector,
    targets: Sequence[str],
    basis: Sequence[StateVector],
    *,
    atol: float = DEFAULT_ATOL,
) -> list[MeasurementBranch]:
    """Measure the named subsystems in the given orthonormal basis.

    Every outcome is returned; branches with probability below 1e-14 are
    flagged as zero rather than dropped. Post-states keep the full register,
    with the measured subsystems collapsed onto the outcome basis state.
    """
    axes = _target_axes(state, targets)
    target_dims = tuple(state.dims[ax] for ax in axes)
    head = math.prod(target_dims)
    if len(basis) != head:
        raise ValueError(f"basis of {len(basis)} states cannot span dimension {head}")
    rows = []
    for b in basis:
        if isinstance(b, StateVector):
            if b.dims != target_dims:
                raise ValueError(f"basis state dims {b.dims} do not match targets {target_dims}")
            rows.append(b.amps)
        else:
            vec = np.asarray(b, dtype=np.complex128).reshape(-1)
            if vec.size != head:
                raise ValueError(f"basis vector of length {vec.size} cannot span dimension {head}")
            rows.append(vec)
    bmat = np.stack(rows)
    gram = bmat.conj() @ bmat.T
    if not np.allclose(gram, np.eye(head), atol=atol):
        raise ValueError("measurement basis is not orthonormal within tolerance")

    arr = np.moveaxis(state.tensor_view(), axes, range(len(axes)))
    flat = arr.reshape(head, -1)
    coeffs = bmat.conj() @ flat
    probs = np.einsum("ij,ij->i", coeffs, coeffs.conj()).real
    if abs(probs.sum() - 1.0) > atol:
        raise ValueError(f"measurement probabilities sum to {probs.sum()!r}")

    branches: list[MeasurementBranch] = []
    for i in range(head):
        p = float(probs[i])
        if p < PROB_FLOOR:
            branches.append(MeasurementBranch(i, p, None, True))
            continue
        rest = coeffs[i] / math.sqrt(p)
        post = np.outer(bmat[i], rest).reshape(arr.shape)
        post = np.moveaxis(post, range(len(axes)), axes)
        branches.append(
            MeasurementBranch(
                i, p, StateVector(state.dims, state.labels, post.reshape(-1)), False
            )
        )
    return branches


def _pure_reduced(state: StateVector, keep_axes: Sequence[int]) -> np.ndarray:
    rest = [ax for ax in range(len(state.dims)) if ax not in keep_axes]
    arr = np.transpose(state.tensor_view(), list(keep_axes) + rest)
    m = arr.reshape(math.prod([state.dims[a] for a in keep_axes]), -1)
    return m @ m.conj().T


def partial_trace(state, keep: Sequence[str]) -> DensityMatrix:
    """Reduced density matrix on the named subsystems, in the order given."""
    keep = list(keep)
    if isinstance(state, StateVector):
        axes = _target_axes(state, keep)
        rho = _pure_reduced(state, axes)
        dims = tuple(state.dims[a] for a in axes)
        return DensityMatrix(dims, tuple(keep), rho)
    if isinstance(state, DensityMatrix):
        n = len(state.dims)
        axes = [state.labels.index(k) for k in keep]
        arr = state.matrix.reshape(state.dims + state.dims)
        # contract every traced subsystem's ket axis with its bra axis
        traced = arr
        removed = 0
        for ax in range(n):
            if ax in axes:
                continue
            a = ax - removed
            traced = np.trace(traced, axis1=a, axis2=a + n - removed)
            removed += 1
        k = len(axes)
        kept_sorted = [ax for ax in range(n) if ax in axes]
        perm = [kept_sorted.index(a) for a in axes]
        traced = np.transpose(traced, perm + [p + k for p in perm])
        dims = tuple(state.dims[a] for a in axes)
        m = math.prod(dims)
        return DensityMatrix(dims, tuple(keep), traced.reshape(m, m))
    raise TypeError(f"cannot trace object of type {type(state).__name__}")


def fidelity(psi: StateVector, rho: DensityMatrix | StateVector) -> float:
    """Pure-state fidelity <psi|rho|psi>, clamped into [0, 1]."""
    if isinstance(rho, StateVector):
        if psi.dims != rho.dims:
            raise ValueError(f"dimension mismatch: {psi.dims} vs {rho.dims}")
        return float(min(1.0, abs(np.vdot(psi.amps, rho.amps)) ** 2))
    if psi.dims != rho.dims:
        raise ValueError(f"dimension mismatch: {psi.dims} vs {rho.dims}")
    val = np.vdot(psi.amps, rho.matrix @ psi.amps).real
    if val < -DEFAULT_ATOL or val > 1.0 + DEFAULT_ATOL:
        raise ValueError(f"fidelity {val!r} outside [0, 1]")
    return float(min(1.0, max(0.0, val)))


def _mgs_insert(q_list: list[np.ndarray], vec: np.ndarray, companions=None):
    """Modified Gram-Schmidt step with one re-orthogonalization pass.

    Returns the residual (not normalized) after projecting out q_list; the
    same coefficients are subtracted from the companion vector when given.
    """
    u = vec.astype(np.complex128).copy()
    v = None if companions is None else companions[0].copy()
    for _ in range(2):
        for idx, q in enumerate(q_list):
            c = np.vdot(q, u)
            u -= c * q
            if v is not None:
                v -= c * companions[1][idx]
    return u, v


def complete_unitary(
    prescribed: Sequence[tuple[StateVector, StateVector]],
    *,
    atol: float = DEFAULT_ATOL,
) -> Operator:
    """Unitary agreeing with the prescribed input -> output pairs.

    Inputs are orthonormalized by modified Gram-Schmidt with
    re-orthogonalization; the identical combinations are applied to the
    outputs, and both frames are completed on the orthogonal complement.
    Requires the prescribed inputs to be linearly independent and the two
    Gram matrices to agree (otherwise no unitary exists).
    """
    if not prescribed:
        raise ValueError("at least one prescribed pair is required")

    def unpack(vec):
        if isinstance(vec, StateVector):
            return vec.dims, vec.amps
        arr = np.asarray(vec, dtype=np.complex128).reshape(-1)
        return (arr.size,), arr

    dims = unpack(prescribed[0][0])[0]
    ins = []
    outs = []
    for src, dst in prescribed:
        sdims, samps = unpack(src)
        ddims, damps = unpack(dst)
        if math.prod(sdims) != math.prod(dims) or math.prod(ddims) != math.prod(dims):
            raise ValueError("all prescribed states must share the same dimension")
        ins.append(samps)
        outs.append(damps)
    gram_in = np.array([[np.vdot(a, b) for b in ins] for a in ins])
    gram_out = np.array([[np.vdot(a, b) for b in outs] for a in outs])
    if not np.allclose(gram_in, gram_out, atol=atol):
        raise ValueError(
            "prescribed pairs do not preserve inner products; no unitary exists"
        )

    dim = math.prod(dims)
    q_in: list[np.ndarray] = []
    q_out: list[np.ndarray] = []
    for x, y in zip(ins, outs):
        u, v = _mgs_insert(q_in, x, (y, q_out))
        nu = np.linalg.norm(u)
        if nu < 1e-8:
            raise ValueError("prescribed inputs are linearly dependent (rank deficiency)")
        q_in.append(u / nu)
        q_out.append(v / nu)

    for frame in (q_in, q_out):
        for k in range(dim):
            if len(frame) == dim:
                break
            e = np.zeros(dim, dtype=np.complex128)
            e[k] = 1.0
            u, _ = _mgs_insert(frame, e)
            nu = np.linalg.norm(u)
            if nu > 1e-6:
                frame.append(u / nu)
        if len(frame) != dim:
            raise ValueError("failed to complete an orthonormal frame")

    mat = np.stack(q_out, axis=1) @ np.stack(q_in, axis=1).conj().T
    return Operator(dims, dims, mat)


def haar_random_state(d: int, seed=None, label: str = "X") -> StateVector:
    """Haar-random pure qudit state: normalized complex Gaussian amplitudes."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector((d,), (label,), z / np.linalg.norm(z))
