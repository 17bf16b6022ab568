"""Named channels and densities used across the examples and the CLI."""

from __future__ import annotations

import math

import numpy as np

from .channels import KrausChannel, QubitDensity, ValidationError

__all__ = [
    "pq_channel",
    "depolarizing",
    "segment_example",
    "amplitude_damping",
    "identity_channel",
    "density_preset",
]

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def pq_channel(p: float, q: float, r: float) -> KrausChannel:
    """PQ channel with population parameter p and coherence parameters q, r.

    Kraus matrices are Pauli multiples x*I, y*sigma_z, u*sigma_x,
    v*sigma_y with x^2 = (p+q)/4, y^2 = (p-q)/4, u^2 = (1-p+r)/4,
    v^2 = (1-p-r)/4, which reproduces the representation with P block
    [[p, 1-p], [1-p, p]]/2 and Q block [[q, r], [r, q]]/2.
    """
    coeffs = {
        "p + q": (p + q) / 4.0,
        "p - q": (p - q) / 4.0,
        "1 - p + r": (1.0 - p + r) / 4.0,
        "1 - p - r": (1.0 - p - r) / 4.0,
    }
    for name, c in coeffs.items():
        if c < -1e-14:
            raise ValidationError(f"pq_channel needs {name} >= 0")
    x, y, u, v = (math.sqrt(max(c, 0.0)) for c in coeffs.values())
    kraus = [
        x * np.eye(2, dtype=complex),
        y * _SIGMA_Z,
        u * _SIGMA_X,
        v * _SIGMA_Y,
    ]
    return KrausChannel(kraus=tuple(k for k in kraus if np.abs(k).max() > 0))


def depolarizing(s: float) -> KrausChannel:
    """Depolarizing channel of strength s (s = 1/3 gives p=5/6, q=2/3)."""
    if not 0.0 <= s <= 1.0:
        raise ValidationError(f"depolarizing strength must be in [0, 1], got {s}")
    return pq_channel(p=1.0 - s / 2.0, q=1.0 - s, r=0.0)


def segment_example() -> KrausChannel:
    """The non-PQ two-Kraus channel of the five-site segment example."""
    b = np.array([[1.0, 1.0], [1.0, 0.0]], dtype=complex) / math.sqrt(3.0)
    c = np.array([[0.0, -1.0], [-1.0, 1.0]], dtype=complex) / math.sqrt(3.0)
    return KrausChannel(kraus=(b / math.sqrt(2.0), c / math.sqrt(2.0)))


def amplitude_damping(gamma: float) -> KrausChannel:
    """Amplitude damping (non-normal representation) at decay rate gamma."""
    if not 0.0 < gamma < 1.0:
        raise ValidationError(f"damping rate must be in (0, 1), got {gamma}")
    k1 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k2 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel(kraus=(k1 / math.sqrt(2.0), k2 / math.sqrt(2.0)))


def identity_channel() -> KrausChannel:
    return KrausChannel(kraus=(np.eye(2, dtype=complex) / math.sqrt(2.0),))


_DENSITIES = {
    "E11": lambda: QubitDensity.from_bloch(1.0, 0.0, 0.0),
    "E22": lambda: QubitDensity.from_bloch(-1.0, 0.0, 0.0),
    "uniform_plus": lambda: QubitDensity.from_bloch(0.0, 1.0, 0.0),
    "maximally_mixed": lambda: QubitDensity.from_bloch(0.0, 0.0, 0.0),
}


def density_preset(name: str) -> QubitDensity:
    """Named initial densities: E11, E22, uniform_plus, maximally_mixed."""
    try:
        return _DENSITIES[name]()
    except KeyError:
        raise ValidationError(
            f"unknown density preset {name!r}; choices: {sorted(_DENSITIES)}"
        ) from None
