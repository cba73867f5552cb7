"""
Shrinking a huge bound with a reduction step
============================================

For the candidate x = 10 (b = 24) a second solution x_n' would satisfy
|n' mu + tau - k| < c exp(-d n') with n' below roughly 4.4e14.  A single
convergent of mu brings that bound down to a handful.
"""

from simpell.bounds import ReductionInstance, compute_c1, reduce_adaptive
from simpell.quadfield import fundamental_unit
from simpell.realcf import CertifiedReal, log_gamma, log_quad, log_sqrt

b, x = 24, 10
eps = fundamental_unit(b)
c1 = compute_c1(b, eps)
initial = 436754697205651


def instance(prec):
    lg, le = log_gamma(x, prec), log_quad(eps, prec)
    c = CertifiedReal.exact(c1, prec)
    return ReductionInstance(mu=le / lg, tau=-log_sqrt(b, prec) / lg,
                             prefactor=(c * c * b + c) / lg, decay=le * 2, N=initial + 1)


red, reason = reduce_adaptive(instance, initial_bound=initial + 1)
print("initial bound  ", initial)
print("convergent     ", f"k = {red.index}, q = {red.q}")
print("kappa          ", float(red.kappa))
print("reduced bound  ", red.bound, f"({reason})")
