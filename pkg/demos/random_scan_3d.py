"""
Scanning random lattices for bad decoders
=========================================

Samples random Minkowski-reduced bases whose superbase completion is obtuse,
keeps the ones packing reasonably densely, and records the minimal rounding
error probability over column orderings. Across such scans the worst
observed value stays at the face-centered cubic figure of about 0.1505,
which supports treating that lattice as the worst case among dense packings.
"""

import numpy as np

from latbabai import (
    packing_density,
    pe_3d,
    random_reduced_superbase,
    scan_random,
    summarize_scan,
)

# one sample in isolation: the generator is upper triangular with unit
# leading entry, reduced, and its superbase is obtuse as constructed
V, attempts = random_reduced_superbase(rng_seed=2311)
print("sampled generator (found after", attempts, "draws):")
print(np.round(V, 6))
print("packing density:", round(packing_density(V), 6))
print("error probability:", round(pe_3d(V).pe, 6))

# the density floor matters: most random reduced lattices pack poorly and
# decode almost perfectly, so the interesting region is the dense tail
print("\nscan of 1000 trials at different density floors (seed 5):")
for floor in (0.0, 0.3, 0.4):
    records = scan_random(1000, density_floor=floor, seed=5)
    summary = summarize_scan(records)
    types = ", ".join(f"{k}: {v}" for k, v in sorted(summary["by_type"].items()))
    print(f"  floor {floor:4.2f}: {summary['count']:4d} kept, "
          f"max pe {summary['max_pe']:.6f} ({types})")

# reproducibility: records carry their own seed, so any row regenerates alone
records = scan_random(1000, density_floor=0.4, seed=5)
rec = max(records, key=lambda r: r.pe)
V_again, _ = random_reduced_superbase(rng_seed=rec.seed)
print("\nworst record regenerated from its seed:", rec.seed)
print("  stored pe:", rec.pe, " recomputed pe:", pe_3d(V_again).pe)
print("  cell:", rec.cell_type.value, " density:", round(rec.density, 6))
