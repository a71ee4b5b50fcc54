"""Solvability diagnostics: range inclusions, majorization constants, and
the condition battery for the quadratic equation XHX = K.

Checks never raise on a negative outcome. Each returns a ConditionReport
whose ``witness`` is the signed margin that decided it, so callers can see
how close a verdict was.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .linalg import (
    TOL_NONSINGULAR,
    TOL_PSD,
    InputError,
    adjoint,
    as_matrix,
    frob,
    herm_eig,
    pinv,
    psd_gap,
    psd_power,
    psd_sqrt,
    range_projector,
    spectral_norm,
)

# Default decision tolerance for range tests; CLI --tol and OPEQ_TOL land here.
TOL_RANGE = 1e-8

# Slack factor applied when re-verifying a computed majorization constant.
LAMBDA_SLACK = 1e-6


@dataclass
class ConditionReport:
    """Outcome of one solvability condition.

    ``witness`` is a signed margin: residual-type conditions hold when it
    is at most the stated bound, gap-type conditions hold when it is at
    least minus the PSD tolerance.
    """

    name: str
    holds: bool
    witness: float
    detail: str = ""


def range_inclusion(b, a, tol: float = TOL_RANGE) -> ConditionReport:
    """Does the column space of b lie inside the column space of a?

    Decided through the range projector of a: holds iff
    ||(I - A A^+) B||_F <= tol * (1 + ||B||_F).
    """
    bm = as_matrix(b)
    am = as_matrix(a)
    if bm.shape[0] != am.shape[0]:
        raise InputError(
            f"range_inclusion needs equal row counts, got {bm.shape} vs {am.shape}"
        )
    proj = range_projector(am)
    witness = frob(bm - proj @ bm)
    bound = tol * (1.0 + frob(bm))
    return ConditionReport(
        name="range_inclusion",
        holds=witness <= bound,
        witness=witness,
        detail=f"projector residual {witness:.3e}, bound {bound:.3e}",
    )


def majorization_lambda(b, a, tol: float = TOL_RANGE) -> float | None:
    """Smallest lambda >= 0 with B B* <= lambda A A*, or None if none exists.

    In finite dimensions such a lambda exists exactly when range(B) is
    contained in range(A), and then equals the squared spectral norm of
    A^+ B. The value is re-verified as an operator inequality (with a
    small multiplicative slack) before being returned.
    """
    bm = as_matrix(b)
    am = as_matrix(a)
    if not range_inclusion(bm, am, tol).holds:
        return None
    lam = spectral_norm(pinv(am) @ bm) ** 2
    bb = bm @ bm.conj().T
    aa = am @ am.conj().T
    y = lam * (1.0 + LAMBDA_SLACK) * aa
    gap = psd_gap(bb, y)
    if gap < -TOL_PSD * (frob(bb) + frob(y)):
        return None
    return lam


def _require_psd(m, label: str) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InputError(f"{label} must be square, got {a.shape}")
    if frob(a - a.conj().T) > TOL_PSD * max(frob(a), 1e-300):
        raise InputError(f"{label} is not Hermitian within tolerance")
    vals = herm_eig(0.5 * (a + a.conj().T)).values
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if float(vals[0]) < -TOL_PSD * scale:
        raise InputError(
            f"{label} is not PSD: min eigenvalue {vals[0]:.3e} at scale {scale:.3e}"
        )
    return 0.5 * (a + a.conj().T)


def pt_conditions(h, k, tol: float = TOL_RANGE) -> list[ConditionReport]:
    """Condition battery for solvability of XHX = K with X positive.

    Reports, in order:
      ii-a  range((H^{1/2} K H^{1/2})^{1/2})      within range(H^{1/2})
      ii-b  range((H^{1/2+} (...)^{1/2})*)        within range(H^{1/2})
      iii   range((H^{1/2} K H^{1/2})^{1/4})      within range(H^{1/2})
      iv    existence of lambda with (H^{1/2} K H^{1/2})^{1/2} <= lambda H

    The four are equivalent when H is nonsingular; for singular H the
    first two are the necessary pair and the reports may disagree, which
    is why each is evaluated independently.
    """
    hm = _require_psd(h, "H")
    km = _require_psd(k, "K")
    if hm.shape != km.shape:
        raise InputError(f"H and K must have equal shape, got {hm.shape} vs {km.shape}")
    hs = psd_sqrt(hm)
    inner = hs @ km @ hs
    inner = 0.5 * (inner + inner.conj().T)
    sq = psd_sqrt(inner)
    quarter = psd_power(inner, 0.25)
    hsp = pinv(hs)

    ii_a = dataclasses.replace(range_inclusion(sq, hs, tol), name="ii-a")
    ii_b = dataclasses.replace(
        range_inclusion(adjoint(hsp @ sq), hs, tol), name="ii-b"
    )
    iii = dataclasses.replace(range_inclusion(quarter, hs, tol), name="iii")

    # (iv) is the majorization form; quarter @ quarter* reproduces the
    # square root and hs @ hs* reproduces H, so the generic helper applies
    lam = majorization_lambda(quarter, hs, tol)
    if lam is None:
        probe = 1e6
        iv = ConditionReport(
            name="iv",
            holds=False,
            witness=psd_gap(sq, probe * hm),
            detail=f"no finite lambda; gap at lambda={probe:.0e} still negative",
        )
    else:
        y = lam * (1.0 + LAMBDA_SLACK) * hm
        gap = psd_gap(sq, y)
        iv = ConditionReport(
            name="iv",
            holds=gap >= -TOL_PSD * (frob(sq) + frob(y)),
            witness=gap,
            detail=f"lambda={lam:.9e}",
        )
    return [ii_a, ii_b, iii, iv]


VERIFY_KINDS = ("ax_b", "axb_c", "axastar_c", "xhx_k", "riccati")


def verify_solution(kind: str, candidate, a=None, b=None, c=None, h=None, k=None) -> float:
    """Relative residual of a candidate solution for one equation family.

    Kinds: ax_b (needs a, b), axb_c (a, b, c), axastar_c (a, c),
    xhx_k (h, k), riccati (a positive definite, b). The residual is
    ||lhs - rhs||_F / (1 + ||rhs||_F).
    """
    x = as_matrix(candidate)
    kd = kind.lower().replace("-", "_")
    if kd not in VERIFY_KINDS:
        raise InputError(f"unknown equation kind {kind!r}; expected one of {VERIFY_KINDS}")

    def _need(val, names):
        if val is None:
            raise InputError(f"kind {kd!r} needs operand {names}")
        return as_matrix(val)

    if kd == "ax_b":
        am, bm = _need(a, "a"), _need(b, "b")
        return frob(am @ x - bm) / (1.0 + frob(bm))
    if kd == "axb_c":
        am, bm, cm = _need(a, "a"), _need(b, "b"), _need(c, "c")
        return frob(am @ x @ bm - cm) / (1.0 + frob(cm))
    if kd == "axastar_c":
        am, cm = _need(a, "a"), _need(c, "c")
        return frob(am @ x @ am.conj().T - cm) / (1.0 + frob(cm))
    if kd == "xhx_k":
        hm, km = _need(h, "h"), _need(k, "k")
        return frob(x @ hm @ x - km) / (1.0 + frob(km))
    # riccati: residual of X A^{-1} X = B
    am, bm = _need(a, "a"), _need(b, "b")
    eig = herm_eig(am)
    top = float(np.max(np.abs(eig.values)))
    if top == 0.0 or float(eig.values[0]) <= TOL_NONSINGULAR * top:
        raise InputError("riccati verification needs positive definite a")
    ainv = (eig.vectors * (1.0 / eig.values)) @ eig.vectors.conj().T
    return frob(x @ ainv @ x - bm) / (1.0 + frob(bm))
