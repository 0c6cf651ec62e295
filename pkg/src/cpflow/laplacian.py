"""Curvature, edge/vertex coefficients and the curvature Jacobian.

The Jacobian L = dK/du is assembled per edge: B_e sums the two adjacent
faces' cross derivatives, A_i = sum of B_e (cosh l_e - 1) over the edge
ends at i. A loop edge (both ends at the same vertex) contributes to A_i
twice and to nothing else: its difference term in the operator vanishes
identically, which is the only extension consistent with dK/du on
non-simplicial meshes.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import hypgeom
from .errors import (
    DegenerateFaceError,
    NumericalConsistencyError,
    RadiusOverflowError,
)
from .hypgeom import RADIUS_CAP, TrianglePacking
from .mesh import WeightedTriangulation

AB_CONSISTENCY_RTOL = 1e-9


def validate_radii(mesh: WeightedTriangulation, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (mesh.vertex_count,):
        raise ValueError(
            f"radii shape {r.shape} != ({mesh.vertex_count},)"
        )
    if not np.all(np.isfinite(r)) or np.any(r <= 0.0) or np.any(r > RADIUS_CAP):
        bad = int(np.argmin(np.where(np.isfinite(r) & (r > 0) & (r <= RADIUS_CAP), 1, 0)))
        raise RadiusOverflowError(
            f"radius at vertex {bad} = {r[bad]!r} outside (0, {RADIUS_CAP}]"
        )
    return r


def u_of_r(r) -> np.ndarray:
    """u = ln tanh(r/2), computed as log1p(-2/(e^r + 1)) so values stay
    accurate out to the 700 radius cap."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0) or np.any(r > RADIUS_CAP) or not np.all(np.isfinite(r)):
        raise RadiusOverflowError("radii must lie in (0, 700]")
    return np.log1p(-2.0 / (np.exp(r) + 1.0))


def r_of_u(u) -> np.ndarray:
    """Inverse of u_of_r; requires every entry < 0."""
    u = np.asarray(u, dtype=float)
    if np.any(u >= 0.0) or not np.all(np.isfinite(u)):
        raise ValueError("u entries must be finite and negative")
    return np.log1p(np.exp(u)) - np.log(-np.expm1(u))


def _face_packing(mesh, r, fid):
    f = mesh.faces[fid]
    radii = tuple(float(r[v]) for v in f.corners)
    return TrianglePacking(radii, mesh.face_weights(fid))


def curvature(mesh: WeightedTriangulation, r) -> np.ndarray:
    """K_i = 2 pi minus the cone angle at vertex i."""
    r = validate_radii(mesh, r)
    cone = np.zeros(mesh.vertex_count)
    for fid in range(mesh.face_count):
        try:
            geom = hypgeom.triangle_geometry(_face_packing(mesh, r, fid))
        except DegenerateFaceError as exc:
            raise DegenerateFaceError(f"face {fid}: {exc}") from exc
        for t, v in enumerate(mesh.faces[fid].corners):
            cone[v] += geom.angles[t]
    return 2.0 * math.pi - cone


@dataclass
class LaplacianAssembly:
    mesh: WeightedTriangulation
    K: np.ndarray              # curvature per vertex
    B: np.ndarray              # per-edge coefficient
    A: np.ndarray              # per-vertex coefficient
    L: np.ndarray              # dense symmetric dK/du
    cosh_l: np.ndarray         # per-edge cosh of the edge length
    cosh_l_minus_1: np.ndarray
    ab_residual: float = 0.0   # max relative gap between the two A routes
    zero_b_edges: list = field(default_factory=list)
    loop_edges: tuple = ()


def assemble(mesh: WeightedTriangulation, r) -> LaplacianAssembly:
    """Build K, B, A and L at the given metric.

    Accumulation runs in ascending edge id then face id so repeated runs
    are bitwise identical. A is stored from the edge-sum route and checked
    against the direct per-corner area-derivative route to 1e-9 relative.
    """
    r = validate_radii(mesh, r)
    n, ne = mesh.vertex_count, mesh.edge_count
    wm1 = np.zeros(ne)
    for eid, e in enumerate(mesh.edges):
        wm1[eid] = hypgeom.cosh_length_minus_one(r[e.a], r[e.b], e.phi)
    cone = np.zeros(n)
    B = np.zeros(ne)
    a_direct = np.zeros(n)
    for fid in range(mesh.face_count):
        f = mesh.faces[fid]
        tp = _face_packing(mesh, r, fid)
        try:
            geom = hypgeom.triangle_geometry(tp)
            J = hypgeom.angle_jacobian(tp, geom)
        except DegenerateFaceError as exc:
            raise DegenerateFaceError(f"face {fid}: {exc}") from exc
        for t in range(3):
            cone[f.corners[t]] += geom.angles[t]
            t1, t2 = (t + 1) % 3, (t + 2) % 3
            B[f.edges[t]] += J[t1, t2]
            # direct route for A: area derivative at this corner
            for s in (t1, t2):
                a_direct[f.corners[t]] += J[s, t] * wm1[f.edges[3 - t - s]]
    K = 2.0 * math.pi - cone

    A = np.zeros(n)
    for eid, e in enumerate(mesh.edges):
        contrib = B[eid] * wm1[eid]
        A[e.a] += contrib
        A[e.b] += contrib           # loop edge: both ends at one vertex
    ab_residual = 0.0
    for i in range(n):
        rel = abs(a_direct[i] - A[i]) / (1.0 + abs(A[i]))
        ab_residual = max(ab_residual, rel)
        if rel > AB_CONSISTENCY_RTOL:
            raise NumericalConsistencyError(
                f"vertex {i}: area-derivative route {a_direct[i]!r} vs "
                f"edge-sum route {A[i]!r} disagree beyond 1e-9 relative"
            )

    L = np.zeros((n, n))
    loops = []
    for eid, e in enumerate(mesh.edges):
        if e.a == e.b:
            loops.append(eid)
            continue            # difference term vanishes; only A sees loops
        L[e.a, e.a] += B[eid]
        L[e.b, e.b] += B[eid]
        L[e.a, e.b] -= B[eid]
        L[e.b, e.a] -= B[eid]
    L[np.diag_indices(n)] += A
    zero_b = [eid for eid in range(ne) if B[eid] == 0.0]
    return LaplacianAssembly(
        mesh=mesh, K=K, B=B, A=A, L=L,
        cosh_l=1.0 + wm1, cosh_l_minus_1=wm1,
        ab_residual=ab_residual,
        zero_b_edges=zero_b, loop_edges=tuple(loops),
    )


def apply_delta(asm: LaplacianAssembly, f) -> np.ndarray:
    """Discrete Laplacian: (delta f)_i = sum_e B_e (f_j - f_i) - A_i f_i.

    Edge-sum form; equals -L f to rounding.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (asm.mesh.vertex_count,):
        raise ValueError(f"vector shape {f.shape} != ({asm.mesh.vertex_count},)")
    out = -asm.A * f
    for eid, e in enumerate(asm.mesh.edges):
        if e.a == e.b:
            continue
        d = asm.B[eid] * (f[e.b] - f[e.a])
        out[e.a] += d
        out[e.b] -= d
    return out


def apply_p_delta(asm: LaplacianAssembly, f, p: float) -> np.ndarray:
    """p-th discrete Laplacian; |0|^(p-2) * 0 is taken as 0 for every p > 1."""
    if not (p > 1.0):
        raise ValueError(f"p must exceed 1, got {p!r}")
    f = np.asarray(f, dtype=float)
    if f.shape != (asm.mesh.vertex_count,):
        raise ValueError(f"vector shape {f.shape} != ({asm.mesh.vertex_count},)")
    out = -asm.A * f
    for eid, e in enumerate(asm.mesh.edges):
        if e.a == e.b:
            continue
        d = f[e.b] - f[e.a]
        if d != 0.0:
            w = asm.B[eid] * abs(d) ** (p - 2.0) * d
            out[e.a] += w
            out[e.b] -= w
    return out


def calabi_energy(K) -> float:
    K = np.asarray(K, dtype=float)
    return float(np.dot(K, K))


def spd_check(asm: LaplacianAssembly):
    """(smallest eigenvalue of L, max |L - L^T| entry)."""
    sym_residual = float(np.max(np.abs(asm.L - asm.L.T)))
    eigvals = np.linalg.eigvalsh(asm.L)
    return float(eigvals[0]), sym_residual
