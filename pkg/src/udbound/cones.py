"""No-error cone machinery.

For state i of an ensemble, the conclusive cone is the set of PSD operators
that give zero probability on every other state; it equals the PSD cone
over the joint kernel of the other states.  The separable part of that cone
is handled through explicit finite generator lists, with dual-side tests,
a partial-transpose necessary check for separability, and a randomized
certification that a given product ray is the only one in a two-dimensional
subspace.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .ensembles import Ensemble
from .jsonio import (
    SchemaError,
    dims_from_json,
    matrix_from_json,
    matrix_to_json,
    read_json,
    write_json,
)
from .operators import (
    PSD_TOL,
    RANK_TOL,
    DimVector,
    HermitianOperator,
    StateVector,
    compress,
    hs_inner,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    tensor,
)

_SQ3 = math.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class ConeGenerators:
    """Finite list of PSD product operators generating a cone.

    ``product_form``, when given for a generator, lists its local PSD
    factors; the tensor product must reproduce the generator.
    """

    dims: DimVector
    generators: tuple[HermitianOperator, ...]
    product_form: tuple[Optional[tuple[np.ndarray, ...]], ...] = ()

    def __post_init__(self) -> None:
        forms = self.product_form or (None,) * len(self.generators)
        if len(forms) != len(self.generators):
            raise ValueError("one product form slot per generator is required")
        frozen_forms = []
        for k, (gen, form) in enumerate(zip(self.generators, forms)):
            if gen.dims != self.dims:
                raise ValueError(f"generator {k} has dims {gen.dims.dims}, expected {self.dims.dims}")
            scale = max(1.0, float(np.abs(gen.matrix).max()))
            lo = min_eigenvalue(gen)
            if lo < -PSD_TOL * scale:
                raise ValueError(f"generator {k} not PSD (min eigenvalue {lo:.3e})")
            if form is None:
                frozen_forms.append(None)
                continue
            factors = tuple(np.array(f, dtype=np.complex128) for f in form)
            if len(factors) != self.dims.sites:
                raise ValueError(f"generator {k} product form has {len(factors)} factors")
            prod = np.ones((1, 1), dtype=np.complex128)
            for f in factors:
                f.setflags(write=False)
                if min_eigenvalue(f) < -PSD_TOL * max(1.0, float(np.abs(f).max())):
                    raise ValueError(f"generator {k} has a non-PSD local factor")
                prod = np.kron(prod, f)
            if np.abs(prod - gen.matrix).max() > 1e-10 * scale:
                raise ValueError(f"generator {k} product form does not reconstruct it")
            frozen_forms.append(factors)
        object.__setattr__(self, "product_form", tuple(frozen_forms))

    def __len__(self) -> int:
        return len(self.generators)


def conclusive_subspace(ensemble: Ensemble, i: int, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the joint kernel of the other states.

    PSD operators supported here are exactly those with zero probability on
    every state except state ``i``; an empty basis means only the zero
    operator qualifies.  Computed from one eigendecomposition of the sum of
    the other states, whose kernel is the intersection of their kernels.
    """
    if not 0 <= i < ensemble.n:
        raise ValueError(f"state index {i} out of range")
    total = np.zeros((ensemble.dims.total,) * 2, dtype=np.complex128)
    for j, rho in enumerate(ensemble.states):
        if j != i:
            total += rho.matrix
    total = (total + total.conj().T) / 2
    w, v = np.linalg.eigh(total)
    return np.ascontiguousarray(v[:, w <= rank_tol])


def in_conclusive_dual(
    op: HermitianOperator,
    ensemble: Ensemble,
    i: int,
    tol: float = PSD_TOL,
    rank_tol: float = RANK_TOL,
) -> tuple[bool, float]:
    """Dual-cone test against the conclusive cone of state ``i``.

    Returns (member, residual) where residual is the smallest eigenvalue of
    the compression onto the conclusive subspace; membership only requires
    that compression to be PSD, which is exact because the cone is the full
    PSD cone over that subspace.
    """
    basis = conclusive_subspace(ensemble, i, rank_tol)
    if basis.shape[1] == 0:
        return True, 0.0
    lo = min_eigenvalue(compress(op, basis))
    return lo >= -tol, lo


def in_generated_dual(
    op: HermitianOperator, cone: ConeGenerators, tol: float = PSD_TOL
) -> tuple[bool, float]:
    """Dual test against a finitely generated cone.

    Returns (member, worst) with worst the minimum of Tr(op g)/||g|| over
    the generators; an empty generator list dualizes to everything.
    """
    if op.dims != cone.dims:
        raise ValueError("operator and cone dims differ")
    worst = 0.0
    first = True
    for gen in cone.generators:
        scale = float(np.linalg.norm(gen.matrix))
        if scale == 0.0:
            continue
        val = hs_inner(op, gen) / scale
        worst = val if first else min(worst, val)
        first = False
    if first:
        return True, 0.0
    return worst >= -tol, worst


def _example1_local_vectors() -> dict[str, np.ndarray]:
    return {
        "one": np.array([0.0, 1.0]),
        "mu_p": np.array([_SQ3 / 2, 0.5]),
        "mu_m": np.array([_SQ3 / 2, -0.5]),
    }


def example_cone_generators(ensemble: Ensemble, which: str, i: int) -> ConeGenerators:
    """Exact separable no-error cone generators for the builder families.

    For the two-qubit triple these are the two product rays orthogonal to
    the other two states; for the qudit family the single aligned product
    ray.  Each generator is checked to be a product operator with zero
    probability on every other state; a tampered or mismatched ensemble is
    rejected.
    """
    if which not in ("example1", "example2"):
        raise ValueError(f"unknown example selector {which!r}")
    label = ensemble.label or ""
    if which == "example1" and label != "example1":
        raise ValueError(f"ensemble label {label!r} does not match example1")
    if which == "example2" and not label.startswith("example2"):
        raise ValueError(f"ensemble label {label!r} does not match example2")
    if not 0 <= i < ensemble.n:
        raise ValueError(f"state index {i} out of range")

    dims = ensemble.dims
    if which == "example1":
        loc = _example1_local_vectors()
        p = {k: np.outer(v, v) for k, v in loc.items()}
        pairs = {
            0: (("mu_p", "mu_m"), ("mu_m", "mu_p")),
            1: (("mu_p", "one"), ("one", "mu_p")),
            2: (("mu_m", "one"), ("one", "mu_m")),
        }[i]
        forms = tuple(tuple(p[name] for name in pair) for pair in pairs)
    else:
        d = dims.dims[0]
        e = np.zeros(d)
        e[i] = 1.0
        forms = ((np.outer(e, e),) * dims.sites,)

    generators = tuple(
        tensor([HermitianOperator(f, DimVector((f.shape[0],))) for f in form]) for form in forms
    )
    for g in generators:
        for j, rho in enumerate(ensemble.states):
            if j == i:
                continue
            if abs(hs_inner(g, rho)) > 1e-10:
                raise ValueError(
                    f"generator not orthogonal to state {j}; ensemble does not match {which}"
                )
    return ConeGenerators(dims, generators, forms)


def _canonical_cuts(sites: int) -> list[tuple[int, ...]]:
    """Bipartitions up to complement (the transposed side is equivalent)."""
    cuts = set()
    for r in range(1, sites):
        for combo in itertools.combinations(range(sites), r):
            comp = tuple(k for k in range(sites) if k not in combo)
            cuts.add(min(combo, comp))
    return sorted(cuts)


def ppt_check(
    op: HermitianOperator, cut: Union[int, Iterable[int]], tol: float = PSD_TOL
) -> bool:
    """Positivity of the partial transpose across the cut.

    A False answer certifies that the operator is not separable; True is
    only a necessary condition (the input is assumed PSD).
    """
    sites = (cut,) if isinstance(cut, (int, np.integer)) else tuple(cut)
    chosen = sorted(set(int(k) for k in sites))
    m = op.dims.sites
    if not chosen or len(chosen) >= m or any(not 0 <= k < m for k in chosen):
        raise ValueError(f"invalid cut {chosen} for {m} sites")
    return min_eigenvalue(partial_transpose(op, chosen)) >= -tol


def _site_marginal(state: StateVector, site: int) -> np.ndarray:
    dims = state.dims.dims
    psi = state.amplitudes.reshape(dims)
    psi = np.moveaxis(psi, site, 0).reshape(dims[site], -1)
    return psi @ psi.conj().T


def is_product_state(state: StateVector, tol: float = 1e-9) -> bool:
    """True iff every single-site marginal is rank one within ``tol``."""
    for site, d in enumerate(state.dims.dims):
        if d == 1:
            continue
        spectrum = np.linalg.eigvalsh(_site_marginal(state, site))
        if spectrum[-2] > tol:
            return False
    return True


@dataclass(frozen=True)
class ProductRayCertificate:
    """Outcome of the unique-product-ray certification.

    ``verdict`` is "unique", "not unique", or "inconclusive";
    ``cross_trace_residual`` is the largest entry of any single-site
    marginal of the cross term |v1><v2|, and ``counterexample`` holds the
    superposition coefficients of a product state found in the span.
    """

    verdict: str
    cross_trace_residual: float
    samples_checked: int
    counterexample: Optional[tuple[complex, complex]]
    seed: int


def certify_unique_product_ray(
    v1: StateVector,
    v2: StateVector,
    tol: float = 1e-9,
    samples: int = 10_000,
    seed: int = 0,
) -> ProductRayCertificate:
    """Certify that v1 spans the only product ray in span{v1, v2}.

    Requires v1 to be a product state orthogonal to v2.  If every
    single-site marginal of |v1><v2| vanishes, the marginals of any
    superposition are convex mixtures of the endpoints' marginals, so a
    non-product v2 forces every superposition with a nonzero v2 component
    off the product manifold; the randomized sweep then hunts for a
    counterexample among uniformly drawn superpositions.
    """
    if v1.dims != v2.dims:
        raise ValueError("state dimensions differ")
    if not is_product_state(v1, tol):
        raise ValueError("first vector is not a product state")
    if abs(v1.overlap(v2)) > 1e-10:
        raise ValueError("vectors must be orthogonal")

    cross = np.outer(v1.amplitudes, v2.amplitudes.conj())
    m = v1.dims.sites
    residual = 0.0
    for site in range(m):
        others = [k for k in range(m) if k != site]
        if others:
            marg = partial_trace(cross, others, v1.dims)
        else:
            marg = cross
        residual = max(residual, float(np.abs(marg).max()))

    if is_product_state(v2, tol):
        return ProductRayCertificate("not unique", residual, 0, (0.0 + 0.0j, 1.0 + 0.0j), seed)
    if residual > tol:
        return ProductRayCertificate("inconclusive", residual, 0, None, seed)

    rng = np.random.default_rng(seed)
    floor = max(tol, 1e-3)
    checked = 0
    for _ in range(samples):
        while True:
            g = rng.standard_normal(4)
            c = np.array([g[0] + 1j * g[1], g[2] + 1j * g[3]])
            c /= np.linalg.norm(c)
            if abs(c[1]) > floor:
                break
        candidate = StateVector(c[0] * v1.amplitudes + c[1] * v2.amplitudes, v1.dims)
        checked += 1
        if is_product_state(candidate, tol):
            return ProductRayCertificate(
                "not unique", residual, checked, (complex(c[0]), complex(c[1])), seed
            )
    return ProductRayCertificate("unique", residual, checked, None, seed)


# ---------------------------------------------------------------------------
# JSON persistence for generator lists


def cones_to_dict(cones: Sequence[ConeGenerators]) -> dict:
    if not cones:
        raise ValueError("no cones to serialize")
    payload = {"dims": list(cones[0].dims.dims), "cones": []}
    for cone in cones:
        entries = []
        for gen, form in zip(cone.generators, cone.product_form):
            entry = {"matrix": matrix_to_json(gen.matrix)}
            if form is not None:
                entry["factors"] = [matrix_to_json(f) for f in form]
            entries.append(entry)
        payload["cones"].append(entries)
    return payload


def cones_from_dict(data, source: str = "cones") -> list[ConeGenerators]:
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: expected an object")
    dims = dims_from_json(data.get("dims"), f"{source}.dims")
    raw = data.get("cones")
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{source}.cones: expected a non-empty list")
    out = []
    for i, entries in enumerate(raw):
        if not isinstance(entries, list):
            raise SchemaError(f"{source}.cones[{i}]: expected a list of generators")
        gens = []
        forms = []
        for k, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise SchemaError(f"{source}.cones[{i}][{k}]: expected an object")
            mat = matrix_from_json(entry.get("matrix"), f"{source}.cones[{i}][{k}].matrix")
            try:
                gens.append(HermitianOperator(mat, dims))
            except ValueError as exc:
                raise SchemaError(f"{source}.cones[{i}][{k}].matrix: {exc}") from exc
            factors = entry.get("factors")
            if factors is None:
                forms.append(None)
            else:
                if not isinstance(factors, list):
                    raise SchemaError(f"{source}.cones[{i}][{k}].factors: expected a list")
                forms.append(
                    tuple(
                        matrix_from_json(f, f"{source}.cones[{i}][{k}].factors[{j}]")
                        for j, f in enumerate(factors)
                    )
                )
        try:
            out.append(ConeGenerators(dims, tuple(gens), tuple(forms)))
        except ValueError as exc:
            raise SchemaError(f"{source}.cones[{i}]: {exc}") from exc
    return out


def save_cones(cones: Sequence[ConeGenerators], path) -> None:
    write_json(path, cones_to_dict(cones))


def load_cones(path) -> list[ConeGenerators]:
    return cones_from_dict(read_json(path), source=str(path))
