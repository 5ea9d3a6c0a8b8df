"""
Why the fragment matters
========================

Outside the restricted fragments the set of reachable consistent sets can
be infinite: every step adds another conjunct to the obligations.  The
reachability search stops at a cap and reports the divergence.
"""

# %%
import time

import numpy as np

from wltl import TROPICAL, CapExceeded, consistent_sets, parse, reach

f = parse("G(G(a & 2))", ["a"], TROPICAL)
caps = np.array([25, 50, 100, 200])
seconds = np.zeros(len(caps))
for i, cap in enumerate(caps):
    start = time.perf_counter()
    try:
        reach(consistent_sets(f), TROPICAL, cap=int(cap), max_height=None)
    except CapExceeded:
        pass
    seconds[i] = time.perf_counter() - start
print(np.column_stack([caps, seconds.round(3)]))

# %%
# The anchors grow one level per step, which makes each step dearer than
# the one before; the growth in the timings is far from linear.
print("time ratios between successive caps:", (seconds[1:] / seconds[:-1]).round(1))

# %%
# A formula in the fragment settles quickly.
g = parse("G((a & 2) | (b & 3))", ["a", "b"], TROPICAL)
print(len(reach(consistent_sets(g), TROPICAL)), "reachable sets")
