"""Constitutive laws linking enthalpy to temperature in Stefan-type models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KINDS = ("one", "two", "identity")


@dataclass(frozen=True)
class PhaseLaw:
    """Nondecreasing map u = phi(h) from enthalpy h to temperature u.

    kind "one":      phi(h) = max(h - L, 0)               (only water diffuses)
    kind "two":      phi(h) = k1*max(h - L, 0) + k2*min(h, 0)
    kind "identity": phi(h) = h                            (plain heat flow)

    L = latent_heat is the width of the plateau [0, L] on which phi
    vanishes; enthalpies in the plateau are inert ice.  k1 and k2 are the
    water/ice conductivities and only enter the two-phase law.
    """

    kind: str = "one"
    latent_heat: float = 1.0
    k1: float = 1.0
    k2: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown phase law kind {self.kind!r}, expected one of {KINDS}")
        if not np.isfinite(self.latent_heat) or self.latent_heat < 0.0:
            raise ValueError("latent_heat must be finite and >= 0")
        if self.kind == "two" and (self.k1 <= 0.0 or self.k2 <= 0.0):
            raise ValueError("two-phase law requires k1 > 0 and k2 > 0")

    def phi(self, h):
        """Temperature phi(h); accepts scalars or arrays."""
        harr = np.asarray(h, dtype=float)
        if self.kind == "identity":
            u = harr + 0.0
        elif self.kind == "one":
            u = np.maximum(harr - self.latent_heat, 0.0)
        else:
            u = self.k1 * np.maximum(harr - self.latent_heat, 0.0) \
                + self.k2 * np.minimum(harr, 0.0)
        if u.ndim == 0:
            return float(u)
        return u

    def lipschitz(self) -> float:
        """Global Lipschitz constant of phi, used by the CFL rule."""
        if self.kind == "two":
            return max(self.k1, self.k2)
        return 1.0
