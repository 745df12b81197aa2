"""The one-parameter family R(z) = z((conj(zeta) z - 1)/(z - zeta))^n:
where its ramification points sit, and what that says about congruence.

    python3 demos/family_ramification.py
"""
import cmath

from holoiso import (
    branch_data,
    closed_form_ramification,
    family_map,
    incongruence_certificate,
    invariants,
)
from holoiso.family import critical_modulus

n = 2
print(f"critical modulus for n={n}: {critical_modulus(n):.6f}")
for zeta in (0.2, 1 / 3, 0.5):
    prof = closed_form_ramification(zeta, n, cross_check=True)
    bd = branch_data(family_map(zeta, n).R)
    print(f"zeta={zeta:.4f}  {prof.regime:8s}  a+={prof.a_plus:.6f}  a-={prof.a_minus:.6f}")
    print(f"    |a+|={abs(prof.a_plus):.6f}  |a-|={abs(prof.a_minus):.6f}  "
          f"distinct points={bd.distinct_points()}  (inside, on, outside)={bd.location_counts}")

# In the outer regime the critical points a+ and a- lie on the circle and the
# branch values are unimodular; the moduli of zeta and 1/conj(zeta) survive
# any change by disk automorphisms once the origin is pinned.
a, b = invariants(family_map(0.5, 2).R), invariants(family_map(0.6, 2).R)
c = invariants(family_map(0.5 * cmath.exp(1j), 2).R)
print("\n0.5 vs 0.6      :", incongruence_certificate(a, b))
print("0.5 vs 0.5e^{i} :", incongruence_certificate(a, c))
print("0.5 vs 0.2      :", incongruence_certificate(a, invariants(family_map(0.2, 2).R)))
