"""Transition kernels: closed forms, quadrature oracle, and QMC probabilities.

The scalar kernels are the classical Karlin-McGregor integrals
P_ij(t) = int e^{-xt} Q_i Q_j dpsi, which collapse to modified Bessel
expressions on the infinite geometries and to finite spectral sums on
segments.  Site/state probabilities of the quantum walk combine the four
scalar kernels through the channel eigenbasis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    EigenChannelBasis,
    KrausChannel,
    QubitDensity,
    ValidationError,
)
from .generators import ABSORBING, Geometry, assemble_generator
from .linalg import expm_apply, kron, unvec, vec
from .specfun import bessel_i
from .spectra import polynomials, scalar_measure, spectral_matrix_line

__all__ = [
    "KernelRequest",
    "GoalState",
    "scalar_kernel",
    "km_quadrature_oracle",
    "site_probability",
    "state_probability",
    "evolve_oracle",
    "window_margin",
]


@dataclass(frozen=True)
class KernelRequest:
    """One scalar kernel evaluation: geometry, parameter, sites and time."""

    geometry: Geometry
    lam: float
    i: int
    j: int
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValidationError(f"time must be >= 0, got {self.t}")
        if abs(self.lam) > 0.5 or self.lam == 0.0:
            raise ValidationError(f"lambda must be nonzero with |lambda| <= 1/2")
        g = self.geometry
        for idx in (self.i, self.j):
            if g.kind == "half_line" and idx < 0:
                raise ValidationError(f"site {idx} outside the half-line")
            if g.kind == "segment" and not 0 <= idx < g.sites:
                raise ValidationError(
                    f"site {idx} outside the {g.sites}-site segment"
                )


@dataclass(frozen=True)
class GoalState:
    """Target pure state |psi> with its projector gamma."""

    psi: np.ndarray
    gamma: np.ndarray

    @classmethod
    def from_psi(cls, psi) -> "GoalState":
        psi = np.asarray(psi, dtype=complex).reshape(2)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"goal state norm is {norm:.6f}, not 1")
        return cls(psi=psi, gamma=np.outer(psi, psi.conj()))


def _bessel_i_signed(n: int, arg: float) -> float:
    """I_n extended to negative argument via I_n(-y) = (-1)^n I_n(y)."""
    if arg >= 0:
        return bessel_i(n, arg)
    sign = -1.0 if (abs(int(n)) % 2) else 1.0
    return sign * bessel_i(n, -arg)


def scalar_kernel(req: KernelRequest) -> float:
    """Closed-form transition kernel of one scalar chain."""
    g, lam, i, j, t = req.geometry, req.lam, req.i, req.j, req.t
    if g.kind == "segment":
        m = scalar_measure(g, lam)
        qi = polynomials(g, lam, i, m.atoms)
        qj = polynomials(g, lam, j, m.atoms)
        return float(np.sum(m.atom_weights * np.exp(-m.atoms * t) * qi * qj))
    arg = 2.0 * lam * t
    if g.kind == "line":
        return math.exp(-t) * _bessel_i_signed(i - j, arg)
    if g.left_boundary == ABSORBING:
        return math.exp(-t) * (
            _bessel_i_signed(i - j, arg) - _bessel_i_signed(i + j + 2, arg)
        )
    return math.exp(-t) * (
        _bessel_i_signed(i - j, arg) + _bessel_i_signed(i + j + 1, arg)
    )


def km_quadrature_oracle(req: KernelRequest, points: int = 200) -> float:
    """Kernel via the spectral integral, independent of the Bessel path."""
    g, lam, i, j, t = req.geometry, req.lam, req.i, req.j, req.t
    if g.kind == "segment":
        m = scalar_measure(g, lam)
        qi = polynomials(g, lam, i, m.atoms)
        qj = polynomials(g, lam, j, m.atoms)
        return float(np.sum(m.atom_weights * np.exp(-m.atoms * t) * qi * qj))
    if g.kind == "line":
        sm = spectral_matrix_line(lam)
        xs, mats = sm.quadrature(points)
        total = 0.0
        for x, w in zip(xs, mats):
            f1i, f2i = polynomials(g, lam, i, x)
            f1j, f2j = polynomials(g, lam, j, x)
            qi = np.array([f1i, f2i])
            qj = np.array([f1j, f2j])
            total += math.exp(-x * t) * float(qi @ w @ qj)
        return total
    m = scalar_measure(g, lam)

    def integrand(x):
        return (
            np.exp(-x * t)
            * polynomials(g, lam, i, x)
            * polynomials(g, lam, j, x)
        )

    return m.integrate(integrand, points=points)


def _kernel_diag(basis: EigenChannelBasis, g: Geometry, i: int, j: int, t: float):
    return np.array(
        [
            scalar_kernel(KernelRequest(geometry=g, lam=float(l), i=i, j=j, t=t))
            for l in basis.lambdas
        ]
    )


def site_probability(
    basis: EigenChannelBasis,
    g: Geometry,
    rho: QubitDensity,
    j: int,
    i: int,
    t: float,
) -> float:
    """Probability of finding the walk at site i at time t, started at (j, rho)."""
    b = basis.basis
    diag = _kernel_diag(basis, g, i, j, t)
    v = b @ (diag * (b.conj().T @ vec(rho.matrix)))
    return float(np.trace(unvec(v, 2, 2)).real)


def state_probability(
    basis: EigenChannelBasis,
    g: Geometry,
    rho: QubitDensity,
    j: int,
    i: int,
    goal: GoalState,
    t: float,
) -> float:
    """Probability of the goal-state measurement succeeding at site i, time t."""
    b = basis.basis
    diag = _kernel_diag(basis, g, i, j, t)
    proj = kron(goal.gamma, goal.gamma.conj())
    v = proj @ (b @ (diag * (b.conj().T @ vec(rho.matrix))))
    return float(np.trace(unvec(v, 2, 2)).real)


def window_margin(t: float) -> int:
    """Sites the walk can meaningfully reach beyond its start in time t."""
    return int(math.ceil(2.0 * t + 10.0 * math.sqrt(t) + 20.0))


def evolve_oracle(
    ch: KrausChannel,
    g: Geometry,
    rho: QubitDensity,
    j: int,
    t: float,
    truncation: int = 50,
):
    """Matrix-exponential evolution of the full block generator.

    Returns (sites, blocks): the site indices of the window and the
    evolved 2x2 density blocks.  Raises when the truncation window cannot
    contain the probability flow for horizon t.
    """
    if t < 0:
        raise ValidationError(f"time must be >= 0, got {t}")
    op = assemble_generator(ch, g, truncation=truncation)
    lo, hi = op.window
    if g.kind != "segment":
        margin = window_margin(t)
        if g.kind == "half_line" and j + margin > hi:
            raise ValidationError(
                f"truncation {truncation} too small: site {j} with horizon "
                f"t={t} needs a window through site {j + margin}"
            )
        if g.kind == "line" and (j + margin > hi or j - margin < lo):
            raise ValidationError(
                f"truncation {truncation} too small: site {j} with horizon "
                f"t={t} needs |index| up to {abs(j) + margin}"
            )
    if not lo <= j <= hi:
        raise ValidationError(f"start site {j} outside window [{lo}, {hi}]")
    dense = op.dense()
    state = np.zeros(4 * op.n_sites, dtype=np.result_type(dense.dtype, complex))
    state[4 * (j - lo):4 * (j - lo) + 4] = vec(rho.matrix)
    if np.isrealobj(dense) and np.abs(state.imag).max() == 0.0:
        state = state.real
    evolved = expm_apply(dense, t, state)
    sites = list(range(lo, hi + 1))
    blocks = [
        unvec(evolved[4 * k:4 * k + 4].astype(complex), 2, 2)
        for k in range(op.n_sites)
    ]
    return sites, blocks
