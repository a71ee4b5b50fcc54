"""Reduced-form solvers for the operator equations AX=B, AXB=C, AXA*=C,
XHX=K, and the Riccati equation XA^{-1}X=B at matrix scale.

Unsolvable instances are not errors: every solver still returns its
least-squares candidate together with the condition reports that failed,
so callers can inspect how the instance misses solvability. Errors are
reserved for malformed operands (shape mismatches, non-Hermitian or
non-PSD input where the equation requires it).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .conditions import ConditionReport, TOL_RANGE, pt_conditions, range_inclusion
from .linalg import (
    TOL_NONSINGULAR,
    TOL_PSD,
    InputError,
    as_matrix,
    frob,
    herm_eig,
    pinv,
    psd_sqrt,
)

TOL_SOLVE = 1e-8
TOL_REDUCED = 1e-8


@dataclass
class ReducedSolution:
    """A reduced (minimal-norm flavored) solution candidate plus diagnostics.

    ``left_null_projector`` and ``right_null_projector`` span the freedom
    of the general solution: every solution of the underlying equation is
    solution + N_left @ V1 + V2 @ N_right for arbitrary V1, V2.
    """

    solution: np.ndarray
    residual: float
    left_null_projector: np.ndarray
    right_null_projector: np.ndarray
    conditions_met: list[ConditionReport] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return all(c.holds for c in self.conditions_met)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def douglas_reduced_solve(a, b, tol: float = TOL_RANGE) -> ReducedSolution:
    """Solve AX = B through the pseudoinverse: X = A^+ B.

    Solvable exactly when range(B) lies inside range(A); the returned
    candidate is the least-squares minimizer either way. The right null
    projector is zero because the right factor of this equation is the
    identity.
    """
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape[0] != bm.shape[0]:
        raise InputError(f"row mismatch: A is {am.shape}, B is {bm.shape}")
    ap = pinv(am)
    d = ap @ bm
    residual = frob(am @ d - bm) / (1.0 + frob(bm))
    cond = dataclasses.replace(range_inclusion(bm, am, tol), name="range(B) in range(A)")
    n_left = _hermitize(np.eye(am.shape[1], dtype=np.complex128) - ap @ am)
    n_right = np.zeros((bm.shape[1], bm.shape[1]), dtype=np.complex128)
    return ReducedSolution(d, residual, n_left, n_right, [cond])


def axb_reduced_solve(a, b, c, tol: float = TOL_RANGE) -> ReducedSolution:
    """Solve AXB = C through the reduced candidate X = A^+ C B^+.

    Solvable exactly when range(C) lies in range(A) and range((A^+ C)*)
    lies in range(B*). The candidate is annihilated by both returned null
    projectors, which is what makes it the reduced solution.
    """
    am = as_matrix(a)
    bm = as_matrix(b)
    cm = as_matrix(c)
    if am.shape[0] != cm.shape[0] or bm.shape[1] != cm.shape[1]:
        raise InputError(
            f"shape mismatch: A {am.shape}, B {bm.shape}, C {cm.shape} "
            "need A.rows == C.rows and B.cols == C.cols"
        )
    ap = pinv(am)
    bp = pinv(bm)
    d = ap @ cm @ bp
    residual = frob(am @ d @ bm - cm) / (1.0 + frob(cm))
    cond1 = dataclasses.replace(range_inclusion(cm, am, tol), name="range(C) in range(A)")
    cond2 = dataclasses.replace(
        range_inclusion((ap @ cm).conj().T, bm.conj().T, tol),
        name="range((A+C)*) in range(B*)",
    )
    n_left = _hermitize(np.eye(am.shape[1], dtype=np.complex128) - ap @ am)
    n_right = _hermitize(np.eye(bm.shape[0], dtype=np.complex128) - bm @ bp)
    return ReducedSolution(d, residual, n_left, n_right, [cond1, cond2])


def general_solution(reduced: ReducedSolution, v1, v2) -> np.ndarray:
    """Expand a reduced solution by its null-space freedom.

    Returns solution + N_left @ v1 + v2 @ N_right; both parameter blocks
    must match the solution's shape.
    """
    v1m = as_matrix(v1)
    v2m = as_matrix(v2)
    shape = reduced.solution.shape
    if v1m.shape != shape or v2m.shape != shape:
        raise InputError(
            f"parameter blocks must match solution shape {shape}, "
            f"got {v1m.shape} and {v2m.shape}"
        )
    return (
        reduced.solution
        + reduced.left_null_projector @ v1m
        + v2m @ reduced.right_null_projector
    )


def congruence_solve(a, c, tol: float = TOL_RANGE) -> ReducedSolution:
    """Positive solution of AXA* = C, when one exists.

    The candidate X = A^+ C (A^+)* is Hermitian PSD whenever the instance
    is solvable, which requires C Hermitian PSD together with range(C) in
    range(A) and range((A^+ C)*) in range(A). Indefinite C is reported as
    an unsolvable instance, not an input error; non-Hermitian C is
    rejected outright.
    """
    am = as_matrix(a)
    cm = as_matrix(c)
    if cm.shape[0] != cm.shape[1]:
        raise InputError(f"C must be square, got {cm.shape}")
    if am.shape[0] != cm.shape[0]:
        raise InputError(f"row mismatch: A is {am.shape}, C is {cm.shape}")
    if frob(cm - cm.conj().T) > TOL_PSD * max(frob(cm), 1e-300):
        raise InputError("C is not Hermitian within tolerance")
    cm = _hermitize(cm)

    vals = herm_eig(cm).values
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    psd_cond = ConditionReport(
        name="C is PSD",
        holds=float(vals[0]) >= -TOL_PSD * scale,
        witness=float(vals[0]),
        detail=f"min eigenvalue at scale {scale:.3e}",
    )

    ap = pinv(am)
    x = _hermitize(ap @ cm @ ap.conj().T)
    residual = frob(am @ x @ am.conj().T - cm) / (1.0 + frob(cm))
    cond1 = dataclasses.replace(range_inclusion(cm, am, tol), name="range(C) in range(A)")
    cond2 = dataclasses.replace(
        range_inclusion((ap @ cm).conj().T, am, tol),
        name="range((A+C)*) in range(A)",
    )
    n_a = _hermitize(np.eye(am.shape[1], dtype=np.complex128) - ap @ am)
    return ReducedSolution(x, residual, n_a, n_a.copy(), [psd_cond, cond1, cond2])


@dataclass
class PtReport:
    """Outcome of solving XHX = K for positive X.

    For nonsingular H the positive solution is unique and ``a_min`` is its
    spectral norm, which coincides with the least constant a for which
    (H^{1/2} K H^{1/2})^{1/2} <= a H. For singular H the solver declines:
    ``solution``, ``a_min`` and ``residual`` stay None and only the
    condition battery (which includes the necessary pair ii-a / ii-b) is
    populated.
    """

    solution: np.ndarray | None
    a_min: float | None
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    residual: float | None
    h_nonsingular: bool
    conditions: list[ConditionReport] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.h_nonsingular and self.cond_ii and self.cond_iii and self.cond_iv


def pt_solve(h, k, tol: float = TOL_RANGE) -> PtReport:
    """Solve XHX = K for the positive X, H and K Hermitian PSD.

    With H nonsingular the unique positive solution is
    X = (H^{1/2})^+ (H^{1/2} K H^{1/2})^{1/2} (H^{1/2})^+, computed here
    from a single eigendecomposition of H. H is declared nonsingular when
    its least eigenvalue exceeds 1e-8 times its largest.
    """
    reports = pt_conditions(h, k, tol)
    cond_ii = reports[0].holds and reports[1].holds
    cond_iii = reports[2].holds
    cond_iv = reports[3].holds

    hm = _hermitize(as_matrix(h))
    km = _hermitize(as_matrix(k))
    eig = herm_eig(hm)
    top = float(eig.values[-1])
    nonsingular = top > 0.0 and float(eig.values[0]) > TOL_NONSINGULAR * top
    if not nonsingular:
        return PtReport(
            solution=None,
            a_min=None,
            cond_ii=cond_ii,
            cond_iii=cond_iii,
            cond_iv=cond_iv,
            residual=None,
            h_nonsingular=False,
            conditions=reports,
        )
    roots = np.sqrt(eig.values)
    hs = _hermitize((eig.vectors * roots) @ eig.vectors.conj().T)
    hsp = _hermitize((eig.vectors * (1.0 / roots)) @ eig.vectors.conj().T)
    mid = psd_sqrt(_hermitize(hs @ km @ hs))
    x = _hermitize(hsp @ mid @ hsp)
    residual = frob(x @ hm @ x - km) / (1.0 + frob(km))
    a_min = max(float(herm_eig(x).values[-1]), 0.0)
    return PtReport(
        solution=x,
        a_min=a_min,
        cond_ii=cond_ii,
        cond_iii=cond_iii,
        cond_iv=cond_iv,
        residual=residual,
        h_nonsingular=True,
        conditions=reports,
    )


def riccati_geomean(a, b) -> np.ndarray:
    """Geometric mean A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.

    This is the unique PSD solution of the Riccati equation
    X A^{-1} X = B. Requires a positive definite, b Hermitian PSD.
    """
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape[0] != am.shape[1] or am.shape != bm.shape:
        raise InputError(f"need square matrices of equal shape, got {am.shape} and {bm.shape}")
    if frob(am - am.conj().T) > TOL_PSD * max(frob(am), 1e-300):
        raise InputError("a is not Hermitian within tolerance")
    if frob(bm - bm.conj().T) > TOL_PSD * max(frob(bm), 1e-300):
        raise InputError("b is not Hermitian within tolerance")
    am = _hermitize(am)
    bm = _hermitize(bm)
    eig = herm_eig(am)
    top = float(eig.values[-1])
    if top <= 0.0 or float(eig.values[0]) <= TOL_NONSINGULAR * top:
        raise InputError("a must be positive definite")
    bvals = herm_eig(bm).values
    bscale = float(np.max(np.abs(bvals))) if bvals.size else 0.0
    if float(bvals[0]) < -TOL_PSD * bscale:
        raise InputError("b must be PSD")
    roots = np.sqrt(eig.values)
    asq = _hermitize((eig.vectors * roots) @ eig.vectors.conj().T)
    ainvs = _hermitize((eig.vectors * (1.0 / roots)) @ eig.vectors.conj().T)
    inner = _hermitize(ainvs @ bm @ ainvs)
    return _hermitize(asq @ psd_sqrt(inner) @ asq)
