"""
Spectral audits of a host
=========================

Measure the second eigenvalue of a random regular graph and test the
inequalities that the embedding relies on.
"""

import math

from treeroute.pipeline import generate_random_regular
from treeroute.spectral import (
    check_lower_bound,
    expansion_audit,
    joined_bound,
    lower_bound,
    mixing_audit,
    second_eigenvalue,
)
import numpy as np

g = generate_random_regular(1000, 30, seed=7)
rep = second_eigenvalue(g)
print(f"lambda = {rep.lambda_hat:.3f}, d = {float(rep.d):g}, ratio {rep.lambda_hat / 30:.3f}")
print(f"Ramanujan value 2 sqrt(d-1) = {2 * math.sqrt(29):.3f}")
print(f"lower bound {lower_bound(1000, 30):.3f} holds: {check_lower_bound(rep)}")

# Edge counts between random sets stay within lambda sqrt(|A||B|) of the mean.
audit = mixing_audit(g, rep.lambda_hat, samples=5000, seed=1)
print(f"mixing: {audit.violation_count} violations, max normalised deviation {audit.max_normalized_deviation:.3f}")

# A badly underestimated lambda is caught.
print("with lambda = 0.2:", mixing_audit(g, 0.2, samples=2000, seed=1).violation_count, "violations")

# Any two disjoint sets of size m are joined by an edge.
m = joined_bound(g, rep, samples=2000)
print("joined at m =", m)

# Small sets expand into a random half.
rng = np.random.default_rng(0)
y = set(rng.choice(1000, 500, replace=False).tolist())
x = [v for v in range(1000) if g.degree_into(v, y) >= 12]
print("expansion into Y:", bool(expansion_audit(g, x, y, 12, 10, 500, 5, seed=2)))
