"""
Fundamental units and candidate solutions
=========================================

Every positive solution of z^2 - b x^2 = 1 comes from a power of the
fundamental unit eps of Z[sqrt(b)] (or Z[(1+sqrt(b))/2] when b = 1 mod 4).
The x-coordinate of eps^n is the candidate x_n.
"""

from simpell.quadfield import CandidateCursor, fundamental_unit, pell_fundamental_solution

for b in (2, 5, 13, 24, 46, 61):
    eps = fundamental_unit(b)
    print(f"b = {b:3d}   eps = {eps}   norm {eps.norm():+d}")

# b = 2: the unit 1+sqrt(2) has norm -1, so only even powers give Pell solutions
cursor = CandidateCursor(fundamental_unit(2))
for _ in range(8):
    n, power, x = next(cursor)
    print(f"n = {n}  eps^n = {power}  x_n = {x}")

# the minimal Pell solution is the first power that is integral with norm +1
fund = pell_fundamental_solution(61)
print("smallest solution of z^2 - 61 x^2 = 1:", fund.z1, fund.x1)
