"""Small conic optimizer over products of Hermitian PSD blocks.

Problems are linear objectives over a tuple of PSD variable blocks (a
side-1 block is a nonnegative scalar) subject to scalar affine constraints
whose coefficients are Hermitian operators per block.  The solver is an
over-relaxed ADMM splitting: the iterate alternates an exact projection
onto the affine constraints (one Cholesky factorization of A A^T, reused
for every iteration) with eigenvalue-clipping projections onto the cone,
plus a scaled dual update.  Everything is deterministic given the inputs;
the seed is carried through to the report for provenance only.

Hermitian blocks are handled in an isometric real parameterization
("svec"): diagonal entries first, then sqrt(2) times the real and
imaginary parts of the upper triangle, so that Tr(AB) becomes the
Euclidean dot product and the PSD cone stays self-dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .operators import HermitianOperator

_SQRT2 = math.sqrt(2.0)


def svec(mat: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix; an isometry for Tr(AB)."""
    side = mat.shape[0]
    iu = np.triu_indices(side, 1)
    off = mat[iu]
    return np.concatenate([mat.diagonal().real, _SQRT2 * off.real, _SQRT2 * off.imag])


def smat(vec: np.ndarray, side: int) -> np.ndarray:
    """Inverse of :func:`svec`."""
    out = np.zeros((side, side), dtype=np.complex128)
    k = side * (side - 1) // 2
    out[np.diag_indices(side)] = vec[:side]
    if k:
        iu = np.triu_indices(side, 1)
        off = (vec[side : side + k] + 1j * vec[side + k :]) / _SQRT2
        out[iu] = off
        out[iu[1], iu[0]] = off.conj()
    return out


def hermitian_basis(side: int):
    """Hermitian matrices whose svec images are the standard basis, in order."""
    for a in range(side):
        f = np.zeros((side, side), dtype=np.complex128)
        f[a, a] = 1.0
        yield f
    rows, cols = np.triu_indices(side, 1)
    for a, b in zip(rows, cols):
        f = np.zeros((side, side), dtype=np.complex128)
        f[a, b] = 1.0 / _SQRT2
        f[b, a] = 1.0 / _SQRT2
        yield f
    for a, b in zip(rows, cols):
        f = np.zeros((side, side), dtype=np.complex128)
        f[a, b] = 1.0j / _SQRT2
        f[b, a] = -1.0j / _SQRT2
        yield f


@dataclass(frozen=True)
class Block:
    """One PSD variable block; side 1 means a nonnegative scalar."""

    name: str
    side: int

    def __post_init__(self) -> None:
        if self.side < 1:
            raise ValueError(f"block {self.name!r} must have positive side")


@dataclass(frozen=True, eq=False)
class Constraint:
    """Scalar affine constraint sum_b <coeffs[b], X_b> (=, >=) rhs."""

    coeffs: dict[str, np.ndarray]
    rhs: float
    sense: str = "eq"

    def __post_init__(self) -> None:
        if self.sense not in ("eq", "ge"):
            raise ValueError(f"constraint sense must be 'eq' or 'ge', got {self.sense!r}")


@dataclass(frozen=True, eq=False)
class ConicProgram:
    blocks: tuple[Block, ...]
    objective: dict[str, np.ndarray]
    constraints: tuple[Constraint, ...]
    sense: str = "min"

    def __post_init__(self) -> None:
        if self.sense not in ("min", "max"):
            raise ValueError(f"program sense must be 'min' or 'max', got {self.sense!r}")
        names = [b.name for b in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError("block names must be unique")
        sides = {b.name: b.side for b in self.blocks}
        for where, coeffs in [("objective", self.objective)] + [
            (f"constraint {k}", c.coeffs) for k, c in enumerate(self.constraints)
        ]:
            for name, mat in coeffs.items():
                if name not in sides:
                    raise ValueError(f"{where} references unknown block {name!r}")
                mat = np.asarray(mat)
                if mat.shape != (sides[name], sides[name]):
                    raise ValueError(f"{where} coefficient for {name!r} has shape {mat.shape}")
                scale = max(1.0, float(np.abs(mat).max()))
                if float(np.abs(mat - mat.conj().T).max()) > 1e-9 * scale:
                    raise ValueError(f"{where} coefficient for {name!r} is not Hermitian")


@dataclass
class SolveReport:
    """Solver outcome: value, primal blocks, certificates, residuals.

    ``multipliers`` are the affine-constraint duals in the minimization
    convention (objective negated internally for a max program); the
    ``residuals`` entries are absolute: affine feasibility of the conic
    iterate, stationarity of the dual pair, and the primal-dual gap (which
    doubles as the complementary-slackness defect, the cone pairing of the
    returned iterate being exactly zero by construction).
    """

    status: str
    value: float
    blocks: dict[str, np.ndarray]
    residuals: dict[str, float]
    iterations: int
    seed: int
    tolerance: float
    multipliers: Optional[np.ndarray] = None
    dual_certificate: Optional[HermitianOperator] = None
    measurement: Optional[object] = None
    never_conclusive: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        from .ensembles import measurement_to_dict
        from .jsonio import matrix_to_json, operator_to_dict

        payload: dict = {
            "status": self.status,
            "value": self.value,
            "residuals": dict(self.residuals),
            "iterations": self.iterations,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "blocks": {k: matrix_to_json(v) for k, v in self.blocks.items()},
        }
        if self.never_conclusive:
            payload["never_conclusive"] = list(self.never_conclusive)
        if self.dual_certificate is not None:
            payload["dual_certificate"] = operator_to_dict(self.dual_certificate)
        if self.measurement is not None:
            payload["measurement"] = measurement_to_dict(self.measurement)
        return payload


@dataclass
class _Assembled:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    layout: list[tuple[str, int, slice]]
    flip: bool


def _assemble(program: ConicProgram) -> _Assembled:
    blocks = list(program.blocks)
    slack = 0
    for k, con in enumerate(program.constraints):
        if con.sense == "ge":
            blocks.append(Block(f"__slack{k}", 1))
            slack += 1

    layout: list[tuple[str, int, slice]] = []
    offset = 0
    for blk in blocks:
        size = blk.side * blk.side
        layout.append((blk.name, blk.side, slice(offset, offset + size)))
        offset += size
    total = offset

    index = {name: (side, sl) for name, side, sl in layout}
    flip = program.sense == "max"
    c = np.zeros(total)
    for name, mat in program.objective.items():
        side, sl = index[name]
        c[sl] = svec(np.asarray(mat, dtype=np.complex128))
    if flip:
        c = -c

    m = len(program.constraints)
    A = np.zeros((m, total))
    b = np.zeros(m)
    for k, con in enumerate(program.constraints):
        for name, mat in con.coeffs.items():
            side, sl = index[name]
            A[k, sl] = svec(np.asarray(mat, dtype=np.complex128))
        if con.sense == "ge":
            _, sl = index[f"__slack{k}"]
            A[k, sl] = -1.0
        b[k] = con.rhs
    return _Assembled(c, A, b, layout, flip)


def _project_cone(vec: np.ndarray, layout) -> np.ndarray:
    out = np.empty_like(vec)
    for _, side, sl in layout:
        if side == 1:
            out[sl] = max(0.0, vec[sl][0])
            continue
        mat = smat(vec[sl], side)
        w, v = np.linalg.eigh(mat)
        w = np.maximum(w, 0.0)
        out[sl] = svec((v * w) @ v.conj().T)
    return out


def solve(
    program: ConicProgram,
    tol: float = 1e-7,
    max_iter: int = 200_000,
    seed: int = 0,
    sigma: float = 1.0,
    over_relax: float = 1.6,
    check_every: int = 25,
) -> SolveReport:
    """Run the splitting iteration until all three residuals fall below tol.

    Terminates with status ``optimal`` (affine, stationarity, and gap
    residuals all within tol relative to the data scale), ``max_iterations``
    with the best iterate, or ``infeasible`` when the multipliers diverge
    while the affine residual stalls.
    """
    data = _assemble(program)
    c, A, b, layout = data.c, data.A, data.b, data.layout
    m, total = A.shape

    def finish(status, z, nu, res, iters):
        blocks = {}
        for name, side, sl in layout:
            if name.startswith("__slack"):
                continue
            blocks[name] = smat(z[sl], side)
        value = float(c @ z)
        if data.flip:
            value = -value
        return SolveReport(
            status=status,
            value=value,
            blocks=blocks,
            residuals=res,
            iterations=iters,
            seed=seed,
            tolerance=tol,
            multipliers=None if nu is None else nu.copy(),
        )

    if m == 0:
        z = _project_cone(-c, layout)  # any cone point works; 0 is optimal iff c in dual
        if float(c @ z) < -tol:
            return finish("infeasible", np.zeros(total), None, {"primal": 0.0, "dual": 0.0, "gap": 0.0}, 0)
        return finish("optimal", np.zeros(total), np.zeros(0), {"primal": 0.0, "dual": 0.0, "gap": 0.0}, 0)

    gram = A @ A.T
    factor = None
    for ridge in (0.0, 1e-12, 1e-9, 1e-6):
        try:
            factor = cho_factor(gram + ridge * np.eye(m), lower=True)
            break
        except np.linalg.LinAlgError:
            continue
    if factor is None:
        raise np.linalg.LinAlgError("affine constraint Gram matrix is numerically singular")

    b_scale = max(1.0, float(np.abs(b).max()))
    c_scale = max(1.0, float(np.abs(c).max()))
    Ac = A @ c

    z = np.zeros(total)
    u = np.zeros(total)
    nu = np.zeros(m)
    res = {"primal": np.inf, "dual": np.inf, "gap": np.inf}
    status = "max_iterations"
    iters = max_iter
    stall_mark = None
    stall_pres = np.inf

    for it in range(1, max_iter + 1):
        w = z - u
        nu = cho_solve(factor, sigma * (A @ w - b) - Ac)
        x = w - (c + A.T @ nu) / sigma
        xh = over_relax * x + (1.0 - over_relax) * z
        v = xh + u
        z = _project_cone(v, layout)
        u = v - z

        if it % check_every == 0 or it == max_iter:
            pres = float(np.abs(A @ z - b).max()) if m else 0.0
            dres = float(np.abs(c + A.T @ nu + sigma * u).max())
            pobj = float(c @ z)
            dobj = -float(b @ nu)
            gap = abs(pobj - dobj)
            res = {"primal": pres, "dual": dres, "gap": gap}
            scale_gap = max(1.0, abs(pobj), abs(dobj))
            if pres <= tol * b_scale and dres <= tol * c_scale and gap <= tol * scale_gap:
                status = "optimal"
                iters = it
                break

            # multiplier blowup with a stalled affine residual signals infeasibility
            if it % 5000 == 0:
                y_norm = sigma * float(np.abs(u).max())
                if (
                    stall_mark is not None
                    and pres > 1e-4 * b_scale
                    and pres > 0.999 * stall_pres
                    and y_norm > 1e3
                ):
                    status = "infeasible"
                    iters = it
                    break
                stall_mark = it
                stall_pres = pres

            # residual balancing keeps the two residuals comparable
            if it % 100 == 0 and max(pres / b_scale, dres / c_scale) > 50 * tol:
                if pres / b_scale > 10 * dres / c_scale:
                    sigma *= 2.0
                    u /= 2.0
                elif dres / c_scale > 10 * pres / b_scale:
                    sigma /= 2.0
                    u *= 2.0

    return finish(status, z, nu, res, iters)
