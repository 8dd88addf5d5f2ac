"""Discrimination programs: global optimum, its certificate, separable bound.

The global program maximizes the success probability over unambiguous
measurements; conclusive elements are parameterized directly on their
no-error subspaces so the zero-probability constraints hold by
construction, and the completeness constraint is imposed on the joint
span of those subspaces (value- and certificate-preserving, and much
smaller than the ambient space).  The certificate program minimizes the
trace of an operator that is PSD and dominates each weighted state on its
no-error subspace; the separable-bound program minimizes the trace of a
PSD operator whose pairing with every supplied cone generator dominates
the corresponding weighted state pairing.
"""

from __future__ import annotations

import numpy as np

from .cones import ConeGenerators, conclusive_subspace
from .ensembles import Ensemble, Measurement
from .operators import RANK_TOL, HermitianOperator, identity
from .solver import Block, ConicProgram, Constraint, SolveReport, hermitian_basis, smat, solve


def _joint_basis(bases: list[np.ndarray], total_dim: int) -> np.ndarray:
    if not bases:
        return np.zeros((total_dim, 0), dtype=np.complex128)
    stacked = np.hstack(bases)
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    return np.ascontiguousarray(u[:, s > 1e-9])


def _conclusive_data(ensemble: Ensemble, rank_tol: float):
    bases = [conclusive_subspace(ensemble, i, rank_tol) for i in range(ensemble.n)]
    active = [i for i, basis in enumerate(bases) if basis.shape[1] > 0]
    joint = _joint_basis([bases[i] for i in active], ensemble.dims.total)
    reduced = {i: joint.conj().T @ bases[i] for i in active}
    return bases, active, joint, reduced


def _trivial_report(ensemble: Ensemble, tol: float, seed: int) -> SolveReport:
    dims = ensemble.dims
    zero = HermitianOperator(np.zeros((dims.total,) * 2), dims)
    elements = (identity(dims),) + (zero,) * ensemble.n
    return SolveReport(
        status="optimal",
        value=0.0,
        blocks={},
        residuals={"primal": 0.0, "dual": 0.0, "gap": 0.0},
        iterations=0,
        seed=seed,
        tolerance=tol,
        dual_certificate=zero,
        measurement=Measurement(dims, elements, label="global-optimal"),
        never_conclusive=list(range(ensemble.n)),
    )


def solve_global(
    ensemble: Ensemble,
    tol: float = 1e-7,
    max_iter: int = 200_000,
    seed: int = 0,
    rank_tol: float = RANK_TOL,
) -> SolveReport:
    """Optimal unambiguous success probability with measurement and certificate.

    The report carries the recovered measurement (conclusive elements
    eigenvalue-clipped to PSD, the inconclusive element rebuilt so the
    family sums to the identity exactly), the trace-minimal dual
    certificate reconstructed from the completeness multipliers, and the
    indices of states that can never be identified conclusively.
    """
    bases, active, joint, reduced = _conclusive_data(ensemble, rank_tol)
    if not active:
        return _trivial_report(ensemble, tol, seed)

    w = joint.shape[1]
    blocks = [Block(f"x{i}", bases[i].shape[1]) for i in active] + [Block("slack", w)]
    objective = {}
    for i in active:
        basis = bases[i]
        objective[f"x{i}"] = ensemble.priors[i] * (basis.conj().T @ ensemble.states[i].matrix @ basis)

    constraints = []
    for f in hermitian_basis(w):
        coeffs = {f"x{i}": reduced[i].conj().T @ f @ reduced[i] for i in active}
        coeffs["slack"] = f
        constraints.append(Constraint(coeffs, float(np.trace(f).real), "eq"))

    program = ConicProgram(tuple(blocks), objective, tuple(constraints), sense="max")
    report = solve(program, tol=tol, max_iter=max_iter, seed=seed)

    dims = ensemble.dims
    elements = [None] * (ensemble.n + 1)
    running = np.zeros((dims.total,) * 2, dtype=np.complex128)
    for i in range(ensemble.n):
        if i in active:
            block = report.blocks[f"x{i}"]
            vals, vecs = np.linalg.eigh((block + block.conj().T) / 2)
            vals = np.maximum(vals, 0.0)
            clipped = (vecs * vals) @ vecs.conj().T
            mat = bases[i] @ clipped @ bases[i].conj().T
        else:
            mat = np.zeros((dims.total,) * 2, dtype=np.complex128)
        running += mat
        elements[i + 1] = HermitianOperator(mat, dims)
    elements[0] = HermitianOperator(np.eye(dims.total) - running, dims)
    measurement = Measurement(dims, tuple(elements), label="global-optimal")

    cert_small = smat(report.multipliers, w)
    certificate = HermitianOperator(joint @ cert_small @ joint.conj().T, dims)

    value = 0.0
    for i in range(ensemble.n):
        value += ensemble.priors[i] * float(
            np.tensordot(ensemble.states[i].matrix, elements[i + 1].matrix.T, axes=2).real
        )

    report.value = value
    report.measurement = measurement
    report.dual_certificate = certificate
    report.never_conclusive = [i for i in range(ensemble.n) if i not in active]
    return report


def solve_global_certificate(
    ensemble: Ensemble,
    tol: float = 1e-7,
    max_iter: int = 200_000,
    seed: int = 0,
    rank_tol: float = RANK_TOL,
) -> tuple[HermitianOperator, float]:
    """Trace-minimal certificate solved on its own, without the measurement.

    Minimizes the trace of a PSD operator whose compression onto each
    no-error subspace dominates the weighted state there; by strong duality
    its trace equals the optimal success probability.
    """
    dims = ensemble.dims
    bases, active, joint, reduced = _conclusive_data(ensemble, rank_tol)
    if not active:
        return HermitianOperator(np.zeros((dims.total,) * 2), dims), 0.0

    w = joint.shape[1]
    blocks = [Block("k", w)] + [Block(f"y{i}", bases[i].shape[1]) for i in active]
    objective = {"k": np.eye(w, dtype=np.complex128)}
    constraints = []
    for i in active:
        basis = bases[i]
        target = ensemble.priors[i] * (basis.conj().T @ ensemble.states[i].matrix @ basis)
        ci = reduced[i]
        for f in hermitian_basis(basis.shape[1]):
            coeffs = {"k": ci @ f @ ci.conj().T, f"y{i}": -f}
            rhs = float(np.tensordot(f, target.T, axes=2).real)
            constraints.append(Constraint(coeffs, rhs, "eq"))

    program = ConicProgram(tuple(blocks), objective, tuple(constraints), sense="min")
    report = solve(program, tol=tol, max_iter=max_iter, seed=seed)
    small = report.blocks["k"]
    certificate = HermitianOperator(joint @ small @ joint.conj().T, dims)
    return certificate, report.value


def solve_separable_bound(
    ensemble: Ensemble,
    cones: list[ConeGenerators],
    tol: float = 1e-7,
    max_iter: int = 200_000,
    seed: int = 0,
    rank_tol: float = RANK_TOL,
) -> SolveReport:
    """Upper bound on the locally attainable success probability.

    Minimizes the trace of a PSD operator H with Tr[(H - eta_i rho_i) g]
    nonnegative for every generator g of cone i.  The value upper-bounds
    the success probability of any unambiguous measurement whose conclusive
    elements lie in the generated cones; when the generators span the full
    separable no-error cones the value is the separable optimum, which a
    complementary-slackness certificate can confirm afterwards.  A state
    with an empty generator list falls back to the conservative full
    no-error dual constraint (compression PSD on its no-error subspace),
    which keeps the bound valid.
    """
    if len(cones) != ensemble.n:
        raise ValueError(f"expected {ensemble.n} generator cones, got {len(cones)}")
    dims = ensemble.dims
    for k, cone in enumerate(cones):
        if cone.dims != dims:
            raise ValueError(f"cone {k} dims {cone.dims.dims} do not match ensemble {dims.dims}")

    blocks = [Block("h", dims.total)]
    objective = {"h": np.eye(dims.total, dtype=np.complex128)}
    constraints = []
    for i, cone in enumerate(cones):
        rho = ensemble.states[i].matrix
        prior = ensemble.priors[i]
        if len(cone):
            for gen in cone.generators:
                g = gen.matrix / np.linalg.norm(gen.matrix)
                rhs = prior * float(np.tensordot(rho, g.T, axes=2).real)
                constraints.append(Constraint({"h": g}, rhs, "ge"))
        else:
            basis = conclusive_subspace(ensemble, i, rank_tol)
            k = basis.shape[1]
            if k == 0:
                continue
            blocks.append(Block(f"pos{i}", k))
            target = prior * (basis.conj().T @ rho @ basis)
            for f in hermitian_basis(k):
                coeffs = {"h": basis @ f @ basis.conj().T, f"pos{i}": -f}
                rhs = float(np.tensordot(f, target.T, axes=2).real)
                constraints.append(Constraint(coeffs, rhs, "eq"))

    program = ConicProgram(tuple(blocks), objective, tuple(constraints), sense="min")
    report = solve(program, tol=tol, max_iter=max_iter, seed=seed)
    bound = HermitianOperator(report.blocks["h"], dims)
    report.dual_certificate = bound
    report.value = bound.trace
    return report
