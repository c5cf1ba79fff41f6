"""Three bosons with a strong finite-range interaction.

On the diagonal stripe of the cubic synthetic lattice the two relative
coordinates (l1, l2) split into regions by how many of the three pair
distances lie within R. At U = 12g the spectrum breaks into four groups,
one per region type: free scattering, a bound pair plus a free boson,
weakly bound and tightly bound triplons.
"""

import numpy as np

from synthlattice import StripeGeometry, build_stripe_bloch, classify_band_by_region, eigensystem
from synthlattice.analysis import spectral_clusters
from synthlattice.model import CouplingPattern, InteractionSpec, LatticeSpec
from synthlattice.spectra import EigenPair, region_weights, triplon_region

R = 6
print("region map for -3R <= l1, l2 <= 3R (S/D/W/T):")
ls = range(-3 * R, 3 * R + 1)
for l1 in ls:
    print("  " + "".join(triplon_region(l1, l2, R).value[0] for l2 in ls))

spec = LatticeSpec(CouplingPattern.uniform(1.0), InteractionSpec(12.0, R))
geom = StripeGeometry(spec, 3, (1, 1, 1), ((-15, 15), (-15, 15)))
w, v = eigensystem(build_stripe_bloch(geom, 0.0))
print(f"\nk_j = 0, {len(w)} states; groups separated by gaps > 2g:")
for lo, hi in spectral_clusters(w, 2.0):
    i = int(np.argmin(np.abs(w - hi)))
    lab = classify_band_by_region(EigenPair(w[i], v[:, i]), geom)
    print(f"  [{lo:7.3f}, {hi:7.3f}]  top state: {lab.category.value} ({lab.localization:.3f})")

top = v[:, -1]
print("\nregion weights of the highest state:",
      {k.value: round(x, 4) for k, x in region_weights(top, geom).items()})
