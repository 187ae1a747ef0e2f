"""
Grain ellipsoids and crystal size distributions
===============================================

Fit minimum-volume enclosing ellipsoids to grain boundaries, derive the
inscribed and mean ellipsoids and build a size distribution for a grown
population.
"""

# %%
import numpy as np

from svdkit.grains import GrowthParams, Kind, Selector, box_surface_points, csd, fit_all, generate_population, geometry

# A 2 x 4 x 6 box.  Its enclosing ellipsoid has radii sqrt(3) times the
# half-dimensions; the inscribed one is three times smaller.
points = box_surface_points([1.0, 2.0, 3.0], 2000)
for kind, e in fit_all(points).items():
    print(f"{kind.value:>9} radii:", np.round(geometry(e).radii, 4))

# %%
# Nucleation grows like exp(alpha t), so young grains outnumber old ones and
# ln(population density) falls off linearly with size.
pop = generate_population(GrowthParams(alpha=0.5, steps=8, points_per_grain=1000))
print("grains:", len(pop))
rep = csd(pop, Selector.SHORT, Kind.INSCRIBED)
print(f"ln n = {rep.intercept:.2f} + ({rep.slope:.3f}) L, R^2 = {rep.r_squared:.3f}")
for lo, hi, c in zip(rep.bin_edges[:-1], rep.bin_edges[1:], rep.counts):
    print(f"  [{lo:6.2f}, {hi:6.2f})  {'#' * int(c)}")
