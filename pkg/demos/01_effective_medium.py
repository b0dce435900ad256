# %% [markdown]
# Effective medium of a two-component gas
#
# Each species contributes a polarizability alpha_j = -d_j^2 / (hbar Delta_j).
# Local-field corrections turn the linear sum S = alpha_1 rho_1 + alpha_2 rho_2
# into the Clausius-Mossotti susceptibility and the Maxwell-Garnett index.

# %%
import numpy as np

from bec2 import Mixture, Species
from bec2.medium import local_detuning, polarization_sum, refractive_index, susceptibility

red = Species(mass=1.0, detuning=-1.0, dipole_moment=1.0)   # alpha > 0
blue = Species(mass=1.0, detuning=2.0, dipole_moment=1.0)   # alpha < 0
print("alphas:", Mixture((red, blue), (0.0, 0.0)).alphas)

# %% [markdown]
# Sweep the red-detuned density towards the Lorentz-Lorenz pole at S = 3/(4 pi).
# The blue component pulls S back down, so adding it moves the pole outwards.

# %%
pole = 3 / (4 * np.pi)
rho1 = np.linspace(0.0, 0.95 * pole, 8)
for rho2 in (0.0, 0.1):
    mix = Mixture((red, blue), (rho1[-1], rho2))
    print(f"rho_2 = {rho2}:  S at the last point = {polarization_sum(mix.sample()):.4f} (pole {pole:.4f})")
    for r in rho1:
        s = Mixture((red, blue), (r, rho2)).sample()
        print(f"  rho_1={r:.4f}  chi={susceptibility(s):+.4f}  n={refractive_index(s):.4f}"
              f"  Delta_loc/Delta={local_detuning(s, 1.0):.4f}")

# %% [markdown]
# On the far side of the pole n^2 turns negative: the standing wave is
# evanescent and no diffraction spectrum is defined there.

# %%
s = Mixture((red, blue), (1.5 * pole, 0.0)).sample()
print("past the pole:", refractive_index(s))
