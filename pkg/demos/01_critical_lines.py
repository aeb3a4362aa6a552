#!/usr/bin/env python3
"""Excitation-energy branches and critical lines.

Walks the coupling axis on resonance (omega = omega0 = 1): the normal-phase
gap closes at lambda_c = 0.5, the super-radiant gap opens beyond it, and the
rotation shifts the critical coupling to sqrt(omega*(omega0+delta_phi))/2.
Writes the same table the `rotdicke spectrum` subcommand emits.
"""

import numpy as np

from rotdicke import (
    critical_coupling,
    critical_velocity,
    dynamical_critical_fit,
    excitation_energy_np,
    excitation_energy_srp,
    rotated_critical_coupling,
)

omega = omega0 = 1.0
lam_c = critical_coupling(omega, omega0)
print(f"equilibrium critical coupling  lambda_c     = {lam_c}")
for dphi in (0.5, 1.0, 3.0):
    print(
        f"rotated critical coupling at delta_phi={dphi}: "
        f"{rotated_critical_coupling(omega, omega0, dphi):.6f}   "
        f"(dynamical fit {dynamical_critical_fit(dphi):.6f})"
    )
print(f"critical driving velocity at lambda=1:        {critical_velocity(omega, omega0, 1.0)}")

print("\nlambda   eps_NP      eps_SRP")
for lam in np.arange(0.0, 1.01, 0.1):
    lam = round(float(lam), 10)
    np_branch = f"{excitation_energy_np(omega, omega0, lam):.6f}" if lam <= lam_c else "   -    "
    srp_branch = f"{excitation_energy_srp(omega, omega0, lam):.6f}" if lam >= lam_c else "   -    "
    print(f"{lam:5.2f}   {np_branch}   {srp_branch}")
