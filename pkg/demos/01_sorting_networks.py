"""
Comparison networks
===================

Build a few comparison networks, run assignments through them and check
which ones sort.
"""

import itertools

from treeroute.sorting_network import (
    apply_network,
    build_brickwall,
    build_odd_even_mergesort,
    figure1_network,
    is_sorting_network,
)

# The four-register network: two rounds find the extremes, the last level
# fixes the middle pair.
net = figure1_network()
print("levels:", [list(level) for level in net.levels])

final, trace = apply_network(net, [3, 4, 1, 2])
print("3,4,1,2 ->", final)
for i, flags in enumerate(trace, 1):
    print(f"  level {i}: swaps {flags}")

# Every one of the 24 inputs comes out sorted ...
print("all 24 sorted:", all(apply_network(net, p)[0] == [1, 2, 3, 4]
                            for p in itertools.permutations([1, 2, 3, 4])))

# ... but not without the final level.
print("without last level:", is_sorting_network(net.without_last_level()))

# The 0/1 check and the brute-force check agree.
for n in (4, 8):
    for name, build in (("odd-even", build_odd_even_mergesort), ("brickwall", build_brickwall)):
        m = build(n)
        print(f"{name:9s} n={n}: depth {m.depth:2d}, size {m.size:2d}, "
              f"sorting {is_sorting_network(m)} / {is_sorting_network(m, 'perms')}")
