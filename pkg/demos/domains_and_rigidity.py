"""Push a family isometry into classical domains and audit rational
candidates into products of balls.

    python3 demos/domains_and_rigidity.py
"""
import numpy as np

from holoiso import DomainSpec, composite_residual, family_map, polar_grid
from holoiso.rigidity import candidate_corpus, rationality_intake, rigidity_audit

iso = family_map(0.4 + 0.2j, 2)
grid = polar_grid(10, 10)
for spec in (DomainSpec.I(2, 3), DomainSpec.II(5)):
    print(spec, "residual", f"{composite_residual(spec, iso, grid)['max_residual']:.1e}")
print(DomainSpec.IV(3), "residual", f"{composite_residual(DomainSpec.IV(3), None, grid)['max_residual']:.1e}")
print(DomainSpec.III(4), "block identity", f"{composite_residual(DomainSpec.III(4), None, grid)['max_residual']:.1e}")

corpus = candidate_corpus(8, seed=1)
for c in corpus[:4]:
    rep = rigidity_audit(c)
    print(f"candidate with {c.m} factor(s), weights {np.round(c.weights, 3)}: "
          f"weight sum {rep.weight_sum:.12f}, passed {rep.passed}")

res = rationality_intake(family_map(0.2, 2))
print("family zeta=0.2 intake:", res.verdict, f"(outside fit {res.outside_residual:.2e})")
