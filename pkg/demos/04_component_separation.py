# %% [markdown]
# When do the two components separate?
#
# Orders of different species overlap only if the momenta m_j v_j match.
# Scanning the velocity of species 2 through the matching point shows the
# angular gap of the first order closing and reopening.

# %%
import numpy as np

from bec2 import FieldConfig, Mixture, Species, assemble_spectrum

s1 = Species(1.0, 50.0, 0.3, 2.0)
field = FieldConfig(1.0, 10.0, (20.0, 25.0))
matched = s1.momentum / 1.7
for v2 in sorted([*np.linspace(0.9, 1.5, 7), matched]):
    s2 = Species(1.7, -80.0, 0.25, float(v2))
    spec = assemble_spectrum(Mixture((s1, s2), (0.2, 0.3)), field, max_order=1)
    gap = spec.angles[0, -1] - spec.angles[1, -1]
    print(f"m2 v2 = {1.7 * v2:.3f}  first-order gap = {gap:+.5f} rad  separated={spec.separated}")
