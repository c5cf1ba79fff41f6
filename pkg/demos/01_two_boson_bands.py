"""Two free bosons on a chain behave like one particle on a square lattice.

We diagonalize the Bloch matrix of the two-dimensional synthetic lattice and
compare it with sums of single-particle energies, first for a uniform chain
and then for an SSH chain with alternating couplings.
"""

import numpy as np

from synthlattice import CouplingPattern, analytic_band_ssh2d, analytic_band_tb, eigensystem, synthetic_bloch_matrix

ks = np.linspace(-np.pi, np.pi, 5)

print("uniform chain, g = 1: one band, 2g(cos k_m + cos k_n)")
for km in ks:
    row = []
    for kn in ks:
        e, _ = eigensystem(synthetic_bloch_matrix(CouplingPattern.uniform(1.0), 2, (km, kn)), vectors=False)
        assert np.isclose(e[0], analytic_band_tb((km, kn)))
        row.append(f"{e[0]:6.2f}")
    print("  " + " ".join(row))

# SSH: four sublattice combinations give four bands, the pairwise sums of +-E(k)
g1, g2 = 3.0, 1.0
print(f"\nSSH chain, g1 = {g1}, g2 = {g2}: four bands at a few momenta")
for km, kn in [(0, 0), (np.pi, np.pi), (0.4, -1.3)]:
    e, _ = eigensystem(synthetic_bloch_matrix(CouplingPattern.alternating(g1, g2), 2, (km, kn)), vectors=False)
    ref = analytic_band_ssh2d(km, kn, g1, g2)
    print(f"  k = ({km:5.2f}, {kn:5.2f})  numeric {np.round(e, 4)}  formula {np.round(ref, 4)}")

# the middle pair is degenerate at k_m = k_n: both bosons in different bands
# with equal energy magnitude
