"""Symmetric-subspace bases, clone bases, and entanglement channels.

The 1 -> M cloning structure is built from the bosonic (permutation
symmetric) subspace of M qudits:

    |xi_k> : equal-amplitude superposition of all distinct arrangements of
             the k-th size-M multiset over {0..d-1}, multisets ordered
             lexicographically.

    |phi_j> = sqrt(d / D) * sum_k (<j|_P |xi_k>_PA) (x) |xi_k>_C,
              D = binom(d+M-1, M),

an orthonormal family on the (M-1) ancilla qudits A and M clone qudits C.
The channel state for coefficients c_j (real, non-negative, sum c_j^2 = 1) is

    |chan> = sum_j c_j |j>_P (x) |phi_j>_AC .
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .registers import StateVector, check_memory

__all__ = [
    "Channel",
    "SymBasis",
    "CloneBasis",
    "ancilla_labels",
    "clone_basis",
    "clone_labels",
    "channel_state",
    "symmetric_basis",
    "symmetric_dimension",
]

MAX_INDEX = 2**63 - 1
RENORM_WARN = 1e-6


def symmetric_dimension(d: int, copies: int) -> int:
    """Dimension binom(d+M-1, M) of the symmetric subspace of M qudits."""
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    if copies < 1:
        raise ValueError(f"copy count must be >= 1, got {copies}")
    size = math.comb(d + copies - 1, copies)
    if size > MAX_INDEX or d**copies > MAX_INDEX:
        raise ValueError(f"d={d}, M={copies} exceeds 64-bit indexing")
    return size


def ancilla_labels(copies: int) -> tuple[str, ...]:
    return tuple(f"A{i}" for i in range(1, copies))


def clone_labels(copies: int) -> tuple[str, ...]:
    return tuple(f"C{i}" for i in range(1, copies + 1))


@dataclass(frozen=True, eq=False)
class SymBasis:
    """Orthonormal symmetric basis of M qudits, one state per multiset."""

    d: int
    copies: int
    multisets: tuple[tuple[int, ...], ...]
    states: tuple[StateVector, ...]

    @property
    def size(self) -> int:
        return len(self.states)


def symmetric_basis(d: int, copies: int) -> SymBasis:
    size = symmetric_dimension(d, copies)
    check_memory(size * d**copies)
    labels = tuple(f"S{i}" for i in range(1, copies + 1))
    dims = (d,) * copies
    radix = [d**k for k in range(copies - 1, -1, -1)]
    multisets = []
    states = []
    for ms in itertools.combinations_with_replacement(range(d), copies):
        arrangements = set(itertools.permutations(ms))
        amp = 1.0 / math.sqrt(len(arrangements))
        vec = np.zeros(d**copies, dtype=np.complex128)
        for arr in arrangements:
            vec[sum(a * r for a, r in zip(arr, radix))] = amp
        multisets.append(ms)
        states.append(StateVector(dims, labels, vec))
    assert len(states) == size
    return SymBasis(d, copies, tuple(multisets), tuple(states))


@dataclass(frozen=True, eq=False)
class CloneBasis:
    """The d orthonormal states |phi_j> on ancillas A1..A(M-1), clones C1..CM."""

    d: int
    copies: int
    states: tuple[StateVector, ...]


def clone_basis(d: int, copies: int) -> CloneBasis:
    sym = symmetric_basis(d, copies)
    n_anc = copies - 1
    check_memory(d ** (n_anc + copies))
    scale = math.sqrt(d / sym.size)
    labels = ancilla_labels(copies) + clone_labels(copies)
    dims = (d,) * (n_anc + copies)
    states = []
    for j in range(d):
        acc = np.zeros(d ** (n_anc + copies), dtype=np.complex128)
        for xi in sym.states:
            # <j|_P xi lives on the ancillas: the P slot is the first of M
            anc_part = xi.amps.reshape(d, d**n_anc)[j]
            acc += np.kron(anc_part, xi.amps)
        states.append(StateVector(dims, labels, scale * acc))
    return CloneBasis(d, copies, tuple(states))


@dataclass(frozen=True, eq=False)
class Channel:
    """Schmidt profile of the pure entanglement channel: real c_j >= 0, sum c_j^2 = 1."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size < 2:
            raise ValueError("channel needs at least two coefficients")
        if np.any(coeffs < 0):
            raise ValueError("channel coefficients must be non-negative")
        nrm = np.linalg.norm(coeffs)
        if nrm == 0:
            raise ValueError("channel coefficients are all zero")
        if abs(nrm - 1.0) > RENORM_WARN:
            warnings.warn(
                f"channel coefficients renormalized (norm deviation {abs(nrm - 1.0):.3e})",
                stacklevel=2,
            )
        if abs(nrm - 1.0) > 1e-15:
            coeffs = coeffs / nrm
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def d(self) -> int:
        return self.coeffs.size

    @property
    def c_min(self) -> float:
        """Smallest coefficient (zero if the channel is rank deficient)."""
        return float(self.coeffs.min())

    @property
    def nonzero_support(self) -> tuple[int, ...]:
        return tuple(int(k) for k in np.flatnonzero(self.coeffs > 1e-14))

    @property
    def rank(self) -> int:
        return len(self.nonzero_support)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.d

    @property
    def is_maximal(self) -> bool:
        return bool(np.allclose(self.coeffs, 1.0 / math.sqrt(self.d), atol=1e-12))

    def min_nonzero(self) -> float:
        return float(min(self.coeffs[k] for k in self.nonzero_support))

    @classmethod
    def maximal(cls, d: int) -> "Channel":
        return cls(np.full(d, 1.0 / math.sqrt(d)))

    @classmethod
    def rank1(cls, d: int) -> "Channel":
        c = np.zeros(d)
        c[0] = 1.0
        return cls(c)

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "Channel":
        """Parse a channel preset: 'maximal', 'rank1', or 'c=[0.894,0.447]'."""
        token = text.strip()
        if token == "maximal":
            if d is None:
                raise ValueError("preset 'maximal' needs the qudit dimension")
            return cls.maximal(d)
        if token == "rank1":
            if d is None:
                raise ValueError("preset 'rank1' needs the qudit dimension")
            return cls.rank1(d)
        if token.startswith("c="):
            body = token[2:].strip()
            if body.startswith("[") and body.endswith("]"):
                body = body[1:-1]
            try:
                values = [float(v) for v in body.split(",") if v.strip()]
            except ValueError:
                raise ValueError(f"cannot parse channel coefficients from {text!r}") from None
            chan = cls(np.array(values))
            if d is not None and chan.d != d:
                raise ValueError(f"channel lists {chan.d} coefficients but d={d}")
            return chan
        raise ValueError(f"unknown channel spec {text!r}")

    def describe(self) -> str:
        if self.is_maximal:
            return "maximal"
        return "c=[" + ",".join(f"{c:.12g}" for c in self.coeffs) + "]"


def channel_state(channel: Channel, copies: int) -> StateVector:
    """Pure channel sum_j c_j |j>_P |phi_j> on registers P, A1.., C1..CM."""
    d = channel.d
    basis = clone_basis(d, copies)
    block = basis.states[0].amps.size
    check_memory(d * block)
    amps = np.zeros(d * block, dtype=np.complex128)
    for j in range(d):
        amps[j * block : (j + 1) * block] = channel.coeffs[j] * basis.states[j].amps
    dims = (d,) * (1 + (copies - 1) + copies)
    labels = ("P",) + ancilla_labels(copies) + clone_labels(copies)
    return StateVector(dims, labels, amps)
