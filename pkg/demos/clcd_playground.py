"""Denominator search on hand-picked vectors.

The combinatorial least common denominator scans scalings of the pairwise
difference vector for abnormal closeness to the integer lattice.  Small
values mean arithmetic structure; +inf within the scan bound means none
was found.  Every solver value here is cross-checked against the dense
brute-force oracle.
"""
import numpy as np

from regdigraph.arithmetic import ClcdParams, check_clcd_stability, clcd, oracle_clcd

params = ClcdParams(abs_cap=10.0, rel_coeff=0.1, max_scale=30.0)

cases = {
    "two-point (0.5, -0.5)": np.array([0.5, -0.5]),
    "integers (3, 1, 0, 2)": np.array([3.0, 1.0, 0.0, 2.0]),
    "near-integers": np.array([3.001, 1.0, 0.0, 1.999]),
    "generic unit": np.array([0.11, -0.47, 0.55, -0.19]),
}
for label, v in cases.items():
    solver = clcd(v, params)
    oracle = oracle_clcd(v, params)
    print(f"{label:24} clcd={solver:<12.6g} oracle={oracle:<12.6g}")

print()
print("perturbing a vector moves its denominator in a controlled way:")
v = np.array([0.5, -0.5, 0.3])
w = v + np.array([1e-4, -5e-5, 2e-5])
rep = check_clcd_stability(v, w, params)
print(f"clcd(v)     = {rep.clcd_v:.6g}")
print(f"clcd(w)     = {rep.lhs:.6g}   (halved cutoffs)")
print(f"lower bound = {rep.rhs:.6g}   holds={rep.holds}  applicable={rep.applicable}")
