"""
A small sweep
=============

Run the whole check for a range of b and look at the per-b statistics.
The command line tool (``simpell sweep``) does the same with checkpoints
and a process pool.
"""

import numpy as np

from simpell.verifier import verify_b

reports = [verify_b(b) for b in range(2, 41)]

statuses = {}
for r in reports:
    statuses[r.status] = statuses.get(r.status, 0) + 1
print("statuses:", statuses)

ms = np.array([r.timings_ms["total"] for r in reports])
print(f"time per b: mean {ms.mean():.1f} ms, max {ms.max():.1f} ms")

nontrivial = [r for r in reports if r.bounds is not None]
c_n1 = np.array([r.bounds.c_n1 for r in nontrivial])
kept = np.array([len(r.kept) for r in nontrivial])
print("c_n1 range:", c_n1.min(), "to", c_n1.max())
print("kept candidates per b: mean", kept.mean().round(1))

worst = max(nontrivial, key=lambda r: max((c.c_n2 or 0) for c in r.kept))
print("largest second-solution range scanned:", worst.b, max(c.c_n2 for c in worst.kept))
