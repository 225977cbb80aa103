"""Trilinear two-phase material: constitutive law, energies, and interface analytics.

The stress-strain law has two stable linear branches (phase 1, stiff, for
strains up to ``eps1m``; phase 2, soft, for strains above ``eps2m``) joined
by a declining unstable branch.  Everything downstream -- the regularized
solvers, the phase-field models, the kinetic-relation sweeps -- is validated
against the closed-form results collected here: the chord condition relating
interface speed to the end states, the driving force conjugate to interface
motion, and the Maxwell stress at which that force vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NegativeChordSlope(ValueError):
    """Chord between the two end states has negative slope: no real interface speed."""


class NonPositiveDeltaPsi(ValueError):
    """Energy offset between the phases is not positive; Maxwell stress undefined."""


class NoAdmissibleRoot(ValueError):
    """No far-field strain on the target branch satisfies the chord condition."""


@dataclass(frozen=True)
class MaterialParams:
    """Constants of the trilinear law, in nondimensional units (rho = E2 = 1).

    The default phase limits place the chord-ambiguous stress window at
    [2, 5]: with E1 = 5 and E2 = 1 this forces eps1m = 1 and eps2m = 2.
    """

    E1: float = 5.0
    E2: float = 1.0
    rho: float = 1.0
    eps1m: float = 1.0
    eps2m: float = 2.0

    def __post_init__(self) -> None:
        if not (self.E1 > self.E2 > 0.0):
            raise ValueError(f"need E1 > E2 > 0, got E1={self.E1}, E2={self.E2}")
        if self.rho <= 0.0:
            raise ValueError(f"density must be positive, got {self.rho}")
        if not (0.0 < self.eps1m < self.eps2m):
            raise ValueError(
                f"need 0 < eps1m < eps2m, got eps1m={self.eps1m}, eps2m={self.eps2m}"
            )
        # The unstable-branch constants are built to make sigma_hat continuous;
        # verify to 1e-12 relative in case of pathological inputs.
        s1 = self.E1 * self.eps1m
        s2 = self.E2 * self.eps2m
        for s, eps in ((s1, self.eps1m), (s2, self.eps2m)):
            mid = -self.Eu * eps + self.Cu
            if abs(mid - s) > 1e-12 * max(1.0, abs(s)):
                raise ValueError("unstable branch fails stress continuity")

    @property
    def Cu(self) -> float:
        """Intercept of the unstable branch."""
        return self.eps1m * self.eps2m * (self.E2 - self.E1) / (self.eps1m - self.eps2m)

    @property
    def Eu(self) -> float:
        """Magnitude of the (negative) unstable-branch slope."""
        return -(self.E1 * self.eps1m - self.E2 * self.eps2m) / (self.eps1m - self.eps2m)

    @property
    def delta_psi(self) -> float:
        """Energy-density offset of phase 2 relative to phase 1 at equal sigma*eps term.

        Evaluated as the exact brace expression that makes W continuous at
        eps2m, not a simplified form.
        """
        return (
            0.5 * self.E1 * self.eps1m**2
            - 0.5 * self.E2 * self.eps2m**2
            - 0.5 * self.Eu * (self.eps2m**2 - self.eps1m**2)
            + self.Cu * (self.eps2m - self.eps1m)
        )

    @property
    def c1(self) -> float:
        """Sonic speed of phase 1 (the faster one)."""
        return float(np.sqrt(self.E1 / self.rho))

    @property
    def c2(self) -> float:
        """Sonic speed of phase 2."""
        return float(np.sqrt(self.E2 / self.rho))

    @property
    def eps_mid(self) -> float:
        """Midpoint of the phase limits; strain threshold used by the quadrant logic."""
        return 0.5 * (self.eps1m + self.eps2m)

    @property
    def sigma_maxwell(self) -> float:
        return maxwell_stress(self)


def sigma_hat(mat: MaterialParams, eps):
    """Trilinear stress-strain response.

    Branch boundaries are closed on the outer branches: eps <= eps1m is
    phase 1, eps > eps2m is phase 2.  Accepts scalars or arrays.
    """
    eps = np.asarray(eps, dtype=float)
    out = np.where(
        eps <= mat.eps1m,
        mat.E1 * eps,
        np.where(eps <= mat.eps2m, -mat.Eu * eps + mat.Cu, mat.E2 * eps),
    )
    return out if out.ndim else float(out)


def sigma_hat_slope(mat: MaterialParams, eps):
    """Tangent modulus d(sigma_hat)/d(eps); piecewise constant.

    At the branch corners the outer-branch value is returned, matching the
    closed-branch convention of ``sigma_hat``.
    """
    eps = np.asarray(eps, dtype=float)
    out = np.where(eps <= mat.eps1m, mat.E1, np.where(eps <= mat.eps2m, -mat.Eu, mat.E2))
    return out if out.ndim else float(out)


def energy_W(mat: MaterialParams, eps):
    """Strain energy density, the integral of sigma_hat from 0; C1-continuous."""
    eps = np.asarray(eps, dtype=float)
    w1 = 0.5 * mat.E1 * eps**2
    w_mid = (
        -0.5 * mat.Eu * (eps**2 - mat.eps1m**2)
        + mat.Cu * (eps - mat.eps1m)
        + 0.5 * mat.E1 * mat.eps1m**2
    )
    w2 = 0.5 * mat.E2 * eps**2 + mat.delta_psi
    out = np.where(eps <= mat.eps1m, w1, np.where(eps <= mat.eps2m, w_mid, w2))
    return out if out.ndim else float(out)


def chord_mach(mat: MaterialParams, eps_minus: float, eps_plus: float) -> float:
    """Squared interface Mach number from the chord between two strain states.

    Momentum balance across a moving strain discontinuity gives
    ``s_dot^2 = (1/rho) * [[sigma]] / [[eps]]``; dividing by c2^2 yields
    M2^2 = (sigma(eps+) - sigma(eps-)) / (E2 (eps+ - eps-)).  Symmetric in
    its arguments.  Raises ``NegativeChordSlope`` when the chord declines
    (no real speed); callers take the square root themselves.
    """
    if eps_plus == eps_minus:
        raise ValueError("chord needs two distinct strains")
    m2sq = (sigma_hat(mat, eps_plus) - sigma_hat(mat, eps_minus)) / (
        mat.E2 * (eps_plus - eps_minus)
    )
    if m2sq < 0.0:
        raise NegativeChordSlope(f"chord slope gives M2^2 = {m2sq:.6g} < 0")
    return float(m2sq)


def classify_mach(mat: MaterialParams, m2_squared: float) -> str:
    """'subsonic' for M2^2 <= 1, 'supersonic' below (c1/c2)^2, else 'inadmissible'."""
    if m2_squared < 0.0:
        raise NegativeChordSlope(f"M2^2 = {m2_squared:.6g} < 0")
    if m2_squared <= 1.0:
        return "subsonic"
    if m2_squared < (mat.c1 / mat.c2) ** 2:
        return "supersonic"
    return "inadmissible"


def driving_force(mat: MaterialParams, eps_minus: float, eps_plus: float) -> float:
    """Configurational force on an interface between strain states.

    f = [[W]] - mean(sigma) * [[eps]], with [[g]] = g(+) - g(-); the work
    conjugate of the interface velocity.  Vanishes at the Maxwell state and
    is antisymmetric under swapping the end states.
    """
    jump_w = energy_W(mat, eps_plus) - energy_W(mat, eps_minus)
    sig_avg = 0.5 * (sigma_hat(mat, eps_plus) + sigma_hat(mat, eps_minus))
    return float(jump_w - sig_avg * (eps_plus - eps_minus))


def maxwell_stress(mat: MaterialParams) -> float:
    """Stress at which neither phase is energetically preferred.

    sigma_M = sqrt(2 dPsi / (1/E2 - 1/E1)); the driving force between the
    equal-stress pair (sigma_M/E1, sigma_M/E2) is exactly zero.
    """
    dpsi = mat.delta_psi
    if dpsi <= 0.0:
        raise NonPositiveDeltaPsi(f"delta_psi = {dpsi:.6g} <= 0")
    return float(np.sqrt(2.0 * dpsi / (1.0 / mat.E2 - 1.0 / mat.E1)))


def far_field_pair(mat: MaterialParams, m2: float, eps_known: float, side: str) -> float:
    """Far-field strain on the opposite stable branch for a given Mach number.

    Solves (sigma(eps+) - sigma(eps-)) / (eps+ - eps-) = E2 * M2^2 for the
    unknown end state, with the known state on the stable branch of ``side``
    ('left' = phase 1, 'right' = phase 2).  Used to seed traveling-wave
    profiles and to cross-check converged far fields.
    """
    m2sq = m2 * m2
    if side == "left":
        if eps_known > mat.eps1m:
            raise NoAdmissibleRoot(f"eps_known={eps_known} not on the phase-1 branch")
        denom = mat.E2 - mat.E2 * m2sq
        if abs(denom) < 1e-12 * mat.E2:
            raise NoAdmissibleRoot("chord slope degenerate with the phase-2 modulus")
        other = (sigma_hat(mat, eps_known) - mat.E2 * m2sq * eps_known) / denom
        if other <= mat.eps2m:
            raise NoAdmissibleRoot(
                f"phase-2 root {other:.6g} falls below eps2m={mat.eps2m}"
            )
        return float(other)
    if side == "right":
        if eps_known <= mat.eps2m:
            raise NoAdmissibleRoot(f"eps_known={eps_known} not on the phase-2 branch")
        denom = mat.E1 - mat.E2 * m2sq
        if abs(denom) < 1e-12 * mat.E1:
            raise NoAdmissibleRoot("chord slope degenerate with the phase-1 modulus")
        other = (sigma_hat(mat, eps_known) - mat.E2 * m2sq * eps_known) / denom
        if other > mat.eps1m:
            raise NoAdmissibleRoot(
                f"phase-1 root {other:.6g} exceeds eps1m={mat.eps1m}"
            )
        return float(other)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")
