"""Recurrence classification, absorption deficits and optimal initial states.

Recurrence of a site is divergence of the time integral of its return
probability.  The integral splits over the channel eigenbasis into scalar
pieces with exactly computable Laplace transforms, so classification
needs no numerical time integration.  The optimizer solves the
initial-state problem in closed form for PQ channels and falls back to a
Bloch-ball search otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    EigenChannelBasis,
    PqParts,
    QubitDensity,
    SuperOperator,
    ValidationError,
    detect_pq,
    eigenbasis,
)
from .generators import ABSORBING, Geometry
from .kernels import GoalState, KernelRequest, scalar_kernel, state_probability, window_margin
from .linalg import vec
from .specfun import bessel_laplace
from .spectra import scalar_measure, polynomials

__all__ = [
    "RecurrenceVerdict",
    "OptimalStates",
    "recurrence_classify",
    "absorption_deficit",
    "optimal_initial_state",
    "bloch_ball_samples",
]

RECURRENT = "recurrent"
TRANSIENT = "transient"

_WEIGHT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class RecurrenceVerdict:
    """Outcome of the return-probability integral at one site."""

    site: int
    classification: str
    integral: float  # math.inf flags divergence
    contributing_lambdas: tuple  # (lambda_k, weight_k) with weight above threshold


def _laplace_signed(nu: int, lam: float) -> float:
    """Laplace transform at s=1 of e^{.} -> I_nu(2 lam .), signed lam."""
    val = bessel_laplace(nu, 2.0 * abs(lam), 1.0)
    if lam < 0 and nu % 2 and not math.isinf(val):
        return -val
    return val


def _scalar_return_integral(g: Geometry, lam: float, i: int) -> float:
    """Integral over all time of the scalar return kernel P_ii."""
    critical = abs(lam * lam - 0.25) <= _WEIGHT_THRESHOLD
    if g.kind == "segment":
        m = scalar_measure(g, lam)
        q = polynomials(g, lam, i, m.atoms)
        mass = m.atom_weights * q * q
        if np.any((np.abs(m.atoms) <= _WEIGHT_THRESHOLD) & (mass > _WEIGHT_THRESHOLD)):
            return math.inf
        keep = np.abs(m.atoms) > _WEIGHT_THRESHOLD
        return float(np.sum(mass[keep] / m.atoms[keep]))
    if g.kind == "line":
        return math.inf if critical else _laplace_signed(0, lam)
    if g.left_boundary == ABSORBING:
        if critical:
            # Limit of L(I_0) - L(I_{2i+2}) as the spectral gap closes.
            return float(2 * i + 2)
        return _laplace_signed(0, lam) - _laplace_signed(2 * i + 2, lam)
    if critical:
        return math.inf
    return _laplace_signed(0, lam) + _laplace_signed(2 * i + 1, lam)


def recurrence_classify(
    basis: EigenChannelBasis, g: Geometry, i: int, rho: QubitDensity
) -> RecurrenceVerdict:
    """Classify site i as recurrent or transient for initial density rho.

    The return probability decomposes as sum_k w_k P^{lambda_k}_ii(t)
    with w_k = (vec(I)^T b_k)(b_k^* vec(rho)); the weights sum to 1 and
    the verdict depends only on which eigencomponents carry weight.
    """
    vec_eye = vec(np.eye(2, dtype=complex))
    vec_rho = vec(rho.matrix)
    contributing = []
    total = 0.0
    divergent = False
    for k, lam in enumerate(basis.lambdas):
        b_k = basis.basis[:, k]
        w = complex(vec_eye @ b_k) * complex(b_k.conj() @ vec_rho)
        w = float(w.real)
        if abs(w) <= _WEIGHT_THRESHOLD:
            continue
        contributing.append((float(lam), w))
        piece = _scalar_return_integral(g, float(lam), i)
        if math.isinf(piece):
            divergent = True
        else:
            total += w * piece
    integral = math.inf if divergent else total
    return RecurrenceVerdict(
        site=i,
        classification=RECURRENT if divergent else TRANSIENT,
        integral=integral,
        contributing_lambdas=tuple(contributing),
    )


def absorption_deficit(g: Geometry, lam: float, j: int, t: float) -> float:
    """Probability mass absorbed at the boundary by time t.

    Defined as 1 minus the windowed sum of scalar kernels from site j;
    the window follows the Bessel-tail policy, so truncation error is far
    below the stated 1e-8 comparisons.
    """
    if g.left_boundary != ABSORBING and not (
        g.kind == "segment" and g.right_boundary == ABSORBING
    ):
        raise ValidationError("absorption deficit needs an absorbing boundary")
    if g.kind == "segment":
        hi = g.sites - 1
    else:
        hi = j + window_margin(t)
    total = sum(
        scalar_kernel(KernelRequest(geometry=g, lam=lam, i=i, j=j, t=t))
        for i in range(0, hi + 1)
    )
    return 1.0 - total


@dataclass(frozen=True)
class OptimalStates:
    """KKT-optimal initial densities for a state-target probability."""

    rho_plus: QubitDensity
    rho_minus: QubitDensity
    value_plus: float
    value_minus: float
    coefficients: tuple  # (a, b, c, d)
    degenerate: bool = False
    method: str = "closed_form"


def _pq_lambdas(parts: PqParts):
    """The four eigenvalues in the fixed PQ order (trace, population,
    coherence-sum, coherence-difference)."""
    lam1 = float((parts.p_part[0, 0] + parts.p_part[0, 1]).real)
    lam2 = float((parts.p_part[0, 0] - parts.p_part[0, 1]).real)
    lam3 = float((parts.q_part[0, 0] + parts.q_part[0, 1]).real)
    lam4 = float((parts.q_part[0, 0] - parts.q_part[0, 1]).real)
    return lam1, lam2, lam3, lam4


def bloch_ball_samples(count: int, seed: int = 20260825) -> np.ndarray:
    """Quasi-uniform sample of the closed Bloch ball (count x 3 array)."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(count, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    radii = rng.random(count) ** (1.0 / 3.0)
    return pts * radii[:, None]


def optimal_initial_state(
    s: SuperOperator,
    g: Geometry,
    i: int,
    j: int,
    t: float,
    goal: GoalState,
    samples: int = 2000,
) -> OptimalStates:
    """Initial densities extremizing the goal-state probability at (i, t).

    PQ channels with a real representation admit the closed-form solution
    +-(a, b, c)/sqrt(a^2+b^2+c^2) in Bloch coordinates; other Hermitian
    channels are handled by a Bloch-ball search and labelled "numeric".
    """
    parts = detect_pq(s)
    basis = eigenbasis(s)
    if parts is None or np.abs(np.asarray(s.rep).imag).max() > 1e-12:
        return _optimal_numeric(basis, g, i, j, t, goal, samples)
    lam1, lam2, lam3, lam4 = _pq_lambdas(parts)

    def kernel(lam):
        return scalar_kernel(KernelRequest(geometry=g, lam=lam, i=i, j=j, t=t))

    psi1, psi2 = goal.psi
    a = (abs(psi1) ** 2 - 0.5) * kernel(lam2)
    b = (np.conj(psi1) * psi2).real * kernel(lam3)
    c = (np.conj(psi1) * psi2).imag * kernel(lam4)
    d = 0.5 * kernel(lam1)
    norm = math.sqrt(a * a + b * b + c * c)
    if norm <= 1e-14:
        center = QubitDensity.from_bloch(0.0, 0.0, 0.0)
        return OptimalStates(
            rho_plus=center,
            rho_minus=center,
            value_plus=d,
            value_minus=d,
            coefficients=(a, b, c, d),
            degenerate=True,
        )
    direction = np.array([a, b, c]) / norm
    rho_plus = QubitDensity.from_bloch(*direction)
    rho_minus = QubitDensity.from_bloch(*(-direction))
    return OptimalStates(
        rho_plus=rho_plus,
        rho_minus=rho_minus,
        value_plus=d + norm,
        value_minus=d - norm,
        coefficients=(a, b, c, d),
    )


def _optimal_numeric(basis, g, i, j, t, goal, samples) -> OptimalStates:
    # The objective is affine in the Bloch vector, so the extrema lie on
    # the sphere; project the quasi-uniform ball samples outward.
    pts = bloch_ball_samples(samples)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    best_hi, best_lo = None, None
    val_hi, val_lo = -math.inf, math.inf
    for p in pts:
        rho = QubitDensity.from_bloch(*p)
        v = state_probability(basis, g, rho, j, i, goal, t)
        if v > val_hi:
            val_hi, best_hi = v, rho
        if v < val_lo:
            val_lo, best_lo = v, rho
    return OptimalStates(
        rho_plus=best_hi,
        rho_minus=best_lo,
        value_plus=val_hi,
        value_minus=val_lo,
        coefficients=(math.nan, math.nan, math.nan, math.nan),
        method="numeric",
    )
