"""Build a unitary frame, solve for the isometry it defines and check the
identities it satisfies.

    python3 demos/construct_and_verify.py
"""
import numpy as np

from holoiso import (
    build_hessenberg_unitary,
    polar_grid,
    solve_germ,
    to_blaschke,
    verify,
)
from holoiso.unitary import base_frame_matrix

# The canonical 3x3 frame: both diagonal entries of the lower block have
# modulus 1/sqrt(2), so R has degree 3 with a double pole at 1/sqrt(2).
U = base_frame_matrix()
iso = solve_germ(U)
form = to_blaschke(iso.R)
print("base frame")
print("  alpha0 =", np.round(form.alpha0, 12), " u11 =", U[0, 0].real)
print("  poles  =", np.round(form.poles, 10))

w = 0.3 + 0.4j
f = iso(w)
print("  f(0.3+0.4i) =", np.round(f, 10))
lhs = (1 - abs(f[0]) ** 2) * (1 - np.sum(np.abs(f[1:]) ** 2))
print("  (1-|f1|^2)(1-|f2|^2) - (1-|w|^2) =", f"{lhs - (1 - abs(w) ** 2):.1e}")

# Random frames of every size up to 6: residuals stay near rounding level.
print("\nrandom frames, 200 grid points with |w| <= 0.95")
for n in range(2, 7):
    iso = solve_germ(build_hessenberg_unitary(n, seed=2024 + n))
    rep = verify(iso, polar_grid())
    print(f"  n={n}  deg R={iso.R.degree}  functional {rep.max_functional:.1e}  defining {rep.max_defining:.1e}")

# Forcing a unimodular diagonal entry kills the matching component.
frame = build_hessenberg_unitary(4, seed=7, unimodular_slots=(3,))
iso = solve_germ(frame)
print("\nslot 3 forced onto the circle: deg R =", iso.R.degree)
print("  f at 0.5i =", np.round(iso(0.5j), 10))
