"""How far past the unit circle the n = 2 family extends.

For |zeta| < 1/3 both branch values of R stay off the circle, so the
isometry continues holomorphically a little beyond it.  The margin shrinks
to zero as |zeta| approaches 1/3.

    python3 demos/boundary_extension.py
"""
from holoiso import boundary_extension_check

for zeta in (0.1, 0.2, 0.3, 0.32):
    rep = boundary_extension_check(zeta, eps=0.05)
    status = "extends to 1.05" if rep.passed else "does not reach 1.05"
    print(f"zeta={zeta:<5} branch gap {rep.branch_distance:.4f}  max|f1| on circle "
          f"{rep.max_abs_f1_on_circle:.4f}  -> {status}")
    if rep.failure:
        print("    ", rep.failure)

# Near the critical modulus only a thin collar survives.
rep = boundary_extension_check(0.32, eps=0.005, branch_margin=0.005)
print("\nzeta=0.32 with eps=0.005:", "passes" if rep.passed else "fails", rep.checks)
