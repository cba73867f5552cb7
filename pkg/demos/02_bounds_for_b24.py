"""
Explicit bounds for b = 24
==========================

For a fixed b the exponent of the smaller solution is bounded in two steps:
a linear-forms bound c_m, then a continued-fraction step that turns c_m into
a small bound c_n1 on n.  All numbers below come from certified interval
arithmetic; upper bounds are read off the top of each enclosure.
"""

from simpell.bounds import compute_bounds, compute_c_m
from simpell.quadfield import fundamental_unit

eps = fundamental_unit(24)
bs = compute_bounds(24, eps)

print("eps            ", eps)
print("log eps        ", bs.log_eps)
print("c_1            ", float(bs.c1))
print("c_Mat          ", f"{float(bs.c_mat.value):.4e}")
print("c_m            ", bs.c_m, f"(~{bs.c_m:.3e})")
print("closed form    ", compute_c_m(24, bs.log_eps, method="fallback"))

# mu = log(sqrt 24)/log(eps) is expanded until the denominator passes c_m
cf = bs.cf_mu
print("mu terms       ", cf.terms[:12], "...")
print("witness        ", f"q_{bs.witness_index} = {bs.witness_q}, A = {bs.witness_A}")
print("c_n1           ", bs.c_n1)
