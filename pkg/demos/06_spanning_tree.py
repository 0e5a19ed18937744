"""
Embedding a spanning tree
=========================

Embed spanning trees of several shapes into a random 30-regular host and
check each result independently.
"""

import time

from treeroute.pipeline import (
    PipelineConfig,
    embed_spanning_tree,
    generate_random_regular,
    generate_tree,
    verify_embedding,
)

n = 1200
g = generate_random_regular(n, 30, seed=1)

for kind in ("path", "spider", "caterpillar", "broom", "random_bounded"):
    t = generate_tree(kind, n, 3, seed=1)
    start = time.perf_counter()
    res = embed_spanning_tree(g, t, PipelineConfig(seed=1))
    elapsed = time.perf_counter() - start
    ok, why = verify_embedding(g, t, res.map)
    plan = res.trace.get("plan", {})
    print(f"{kind:15s} route={res.trace['route']:20s} registers={plan.get('registers', '-')!s:3s} "
          f"valid={ok} ({why}) {elapsed:.2f}s")

# The trace keeps what each step did.
t = generate_tree("path", n, 2, seed=1)
res = embed_spanning_tree(g, t, PipelineConfig(seed=1))
print("trace keys:", sorted(res.trace))
print("steps:", sorted(res.trace["steps"]))
