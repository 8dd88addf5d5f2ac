"""Dense complex Hermitian linear algebra on multipartite spaces.

Operators carry their local-dimension signature, constructors symmetrize
and record the Hermiticity deviation, and eigendecompositions use a fixed
ordering and phase convention so that downstream reports are reproducible.
All values are immutable; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

#: constructors reject matrices whose Hermiticity deviation exceeds this
HERMITICITY_LIMIT = 1e-8
#: default eigenvalue threshold for positive-semidefiniteness tests
PSD_TOL = 1e-9
#: default eigenvalue threshold separating support from kernel
RANK_TOL = 1e-9

_ORTHONORMAL_TOL = 1e-10
_PHASE_TOL = 1e-12


@dataclass(frozen=True)
class DimVector:
    """Ordered local dimensions (d_1, ..., d_m); site 1 is the slowest index."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1:
            raise ValueError("at least one site is required")
        if any(d < 1 for d in dims):
            raise ValueError(f"local dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        """Total dimension of the composite space."""
        return math.prod(self.dims)

    @property
    def sites(self) -> int:
        return len(self.dims)

    def drop(self, sites: Iterable[int]) -> "DimVector":
        """Dimension vector after removing the given sites (trivial site if all gone)."""
        dropped = set(sites)
        kept = tuple(d for k, d in enumerate(self.dims) if k not in dropped)
        return DimVector(kept if kept else (1,))

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


def _as_dims(dims: Union[DimVector, Sequence[int]]) -> DimVector:
    return dims if isinstance(dims, DimVector) else DimVector(tuple(dims))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix on a multipartite space.

    The stored matrix is the symmetrized input (A + A^dag)/2; the max-entry
    deviation |A - A^dag| of the raw input is recorded and inputs beyond
    ``herm_tol`` are rejected.
    """

    matrix: np.ndarray
    dims: DimVector
    herm_tol: float = HERMITICITY_LIMIT
    deviation: float = 0.0

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {mat.shape}")
        dims = _as_dims(self.dims)
        if mat.shape[0] != dims.total:
            raise ValueError(
                f"matrix side {mat.shape[0]} does not match total dimension {dims.total}"
            )
        deviation = float(np.abs(mat - mat.conj().T).max()) if mat.size else 0.0
        if deviation > self.herm_tol:
            raise ValueError(
                f"hermiticity deviation {deviation:.3e} exceeds tolerance {self.herm_tol:.1e}"
            )
        mat = (mat + mat.conj().T) / 2
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "deviation", deviation)

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(self.matrix.trace().real)

    def _require_same_dims(self, other: "HermitianOperator") -> None:
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims.dims} vs {other.dims.dims}")

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._require_same_dims(other)
        return HermitianOperator(self.matrix + other.matrix, self.dims)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._require_same_dims(other)
        return HermitianOperator(self.matrix - other.matrix, self.dims)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(self.matrix * float(scalar), self.dims)

    __rmul__ = __mul__

    def __neg__(self) -> "HermitianOperator":
        return HermitianOperator(-self.matrix, self.dims)


@dataclass(frozen=True, eq=False)
class StateVector:
    """A unit vector on a multipartite space (norm checked at construction)."""

    amplitudes: np.ndarray
    dims: DimVector
    norm_tol: float = 1e-10

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        dims = _as_dims(self.dims)
        if amp.size != dims.total:
            raise ValueError(f"vector length {amp.size} does not match total dimension {dims.total}")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > self.norm_tol:
            raise ValueError(f"vector norm {norm!r} is not 1 within {self.norm_tol:.1e}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex], dims: Union[DimVector, Sequence[int]]) -> "StateVector":
        amp = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(amp))
        if norm < 1e-14:
            raise ValueError("cannot normalize a (near-)zero vector")
        return cls(amp / norm, _as_dims(dims))

    def projector(self) -> HermitianOperator:
        return HermitianOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def outer(self, other: "StateVector") -> np.ndarray:
        """Rank-one cross term |self><other| (generally non-Hermitian)."""
        return np.outer(self.amplitudes, other.amplitudes.conj())

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def basis_state(dims: Union[DimVector, Sequence[int]], indices: Sequence[int]) -> StateVector:
    """Computational basis state |indices[0], indices[1], ...>."""
    dims = _as_dims(dims)
    if len(indices) != dims.sites:
        raise ValueError("one basis index per site is required")
    amp = np.ones(1, dtype=np.complex128)
    for d, k in zip(dims, indices):
        if not 0 <= k < d:
            raise ValueError(f"basis index {k} out of range for local dimension {d}")
        e = np.zeros(d, dtype=np.complex128)
        e[k] = 1.0
        amp = np.kron(amp, e)
    return StateVector(amp, dims)


def product_state(factors: Sequence[StateVector]) -> StateVector:
    """Tensor product of local state vectors, first factor slowest."""
    if not factors:
        raise ValueError("no factors")
    amp = np.ones(1, dtype=np.complex128)
    dims: list[int] = []
    for f in factors:
        amp = np.kron(amp, f.amplitudes)
        dims.extend(f.dims.dims)
    return StateVector(amp, DimVector(tuple(dims)))


def identity(dims: Union[DimVector, Sequence[int]]) -> HermitianOperator:
    dims = _as_dims(dims)
    return HermitianOperator(np.eye(dims.total, dtype=np.complex128), dims)


def tensor(ops: Sequence[HermitianOperator]) -> HermitianOperator:
    """Kronecker product of operators; the first factor varies slowest."""
    if not ops:
        raise ValueError("no factors")
    mat = np.ones((1, 1), dtype=np.complex128)
    dims: list[int] = []
    for op in ops:
        mat = np.kron(mat, op.matrix)
        dims.extend(op.dims.dims)
    return HermitianOperator(mat, DimVector(tuple(dims)))


def _matrix_and_dims(
    op: Union[HermitianOperator, np.ndarray], dims: Union[DimVector, Sequence[int], None]
) -> tuple[np.ndarray, DimVector]:
    if isinstance(op, HermitianOperator):
        return op.matrix, op.dims
    if dims is None:
        raise ValueError("dims are required when passing a bare matrix")
    mat = np.asarray(op, dtype=np.complex128)
    d = _as_dims(dims)
    if mat.shape != (d.total, d.total):
        raise ValueError(f"matrix shape {mat.shape} does not match dims {d.dims}")
    return mat, d


def _normalize_sites(sites: Union[int, Iterable[int]], n_sites: int) -> tuple[int, ...]:
    idx = (sites,) if isinstance(sites, (int, np.integer)) else tuple(sites)
    out = sorted(set(int(k) for k in idx))
    for k in out:
        if not 0 <= k < n_sites:
            raise ValueError(f"site index {k} out of range for {n_sites} sites")
    return tuple(out)


def partial_trace(
    op: Union[HermitianOperator, np.ndarray],
    sites: Union[int, Iterable[int]],
    dims: Union[DimVector, Sequence[int], None] = None,
):
    """Trace out the given sites (0-based).

    Accepts a HermitianOperator (returns one on the remaining sites) or a
    bare square matrix plus ``dims`` (returns a bare matrix; the input need
    not be Hermitian).  Tracing every site yields a 1x1 operator.
    """
    mat, dv = _matrix_and_dims(op, dims)
    traced = _normalize_sites(sites, dv.sites)
    if not traced:
        return op
    d = dv.dims
    t = mat.reshape(*d, *d)
    remaining = len(d)
    for site in sorted(traced, reverse=True):
        t = np.trace(t, axis1=site, axis2=site + remaining)
        remaining -= 1
    out_dims = dv.drop(traced)
    out = np.asarray(t).reshape(out_dims.total, out_dims.total)
    if isinstance(op, HermitianOperator):
        return HermitianOperator(out, out_dims)
    return out


def partial_transpose(
    op: Union[HermitianOperator, np.ndarray],
    sites: Union[int, Iterable[int]],
    dims: Union[DimVector, Sequence[int], None] = None,
):
    """Transpose the given sites (0-based), leaving the rest untouched."""
    mat, dv = _matrix_and_dims(op, dims)
    swapped = _normalize_sites(sites, dv.sites)
    m = dv.sites
    t = mat.reshape(*dv.dims, *dv.dims)
    axes = list(range(2 * m))
    for site in swapped:
        axes[site], axes[site + m] = axes[site + m], axes[site]
    out = t.transpose(axes).reshape(dv.total, dv.total)
    if isinstance(op, HermitianOperator):
        return HermitianOperator(out, dv)
    return out


def eig_hermitian(op: HermitianOperator) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with descending eigenvalues and phase-fixed vectors.

    Each eigenvector is rotated so its first component above the phase
    threshold is real and positive, which makes repeated runs bit-identical.
    """
    w, v = np.linalg.eigh(op.matrix)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    for col in range(v.shape[1]):
        vec = v[:, col]
        mags = np.abs(vec)
        lead = np.argmax(mags > max(_PHASE_TOL, 1e-8 * mags.max()))
        pivot = vec[lead]
        if abs(pivot) > 0:
            vec *= pivot.conjugate() / abs(pivot)
    return w, v


def min_eigenvalue(op: Union[HermitianOperator, np.ndarray]) -> float:
    mat = op.matrix if isinstance(op, HermitianOperator) else np.asarray(op)
    mat = (mat + mat.conj().T) / 2
    return float(np.linalg.eigvalsh(mat)[0])


def is_psd(op: Union[HermitianOperator, np.ndarray], tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue is >= -tol."""
    return min_eigenvalue(op) >= -tol


def support_projector(op: HermitianOperator, rank_tol: float = RANK_TOL) -> HermitianOperator:
    """Orthogonal projector onto the span of eigenvectors above ``rank_tol``."""
    w, v = eig_hermitian(op)
    if w[-1] < -rank_tol:
        raise ValueError("support undefined for indefinite operator")
    cols = v[:, w > rank_tol]
    return HermitianOperator(cols @ cols.conj().T, op.dims)


def compress(op: HermitianOperator, basis: np.ndarray) -> HermitianOperator:
    """Compression B^dag A B onto an orthonormal column set B."""
    basis = np.asarray(basis, dtype=np.complex128)
    if basis.ndim != 2 or basis.shape[0] != op.side or basis.shape[1] < 1:
        raise ValueError(f"basis shape {basis.shape} incompatible with operator side {op.side}")
    gram = basis.conj().T @ basis
    if np.abs(gram - np.eye(basis.shape[1])).max() > _ORTHONORMAL_TOL:
        raise ValueError("basis columns are not orthonormal")
    small = basis.conj().T @ op.matrix @ basis
    return HermitianOperator(small, DimVector((basis.shape[1],)))


def hs_inner(a: HermitianOperator, b: HermitianOperator) -> float:
    """Hilbert-Schmidt pairing Tr(AB); real for Hermitian inputs."""
    if a.side != b.side:
        raise ValueError(f"dimension mismatch: {a.side} vs {b.side}")
    return float(np.tensordot(a.matrix, b.matrix.T, axes=2).real)
