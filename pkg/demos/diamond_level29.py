"""
A diamond operator on X1(29)
============================

Compute the divisor of x on X1(29), move it with the diamond operator <12>,
and recover the image of x as a product of the units f_k.
"""

from x1gon import modeq
from x1gon.cusps import diamond_permute, divisor_table, express_in_lattice

# the divisor table: one row per unit f_2 .. f_15, one column per cusp orbit
T = divisor_table(29)
print("orbit degrees:", T.degrees())

# x = f_7 / f_8, so its divisor is a difference of two rows
div_x = T.row(7) - T.row(8)
print("div(x)      =", list(div_x))

# <12> sends the orbit C_i to C_{+-12 i mod 29}
div_xt = diamond_permute(29, 12, div_x)
print("div(<12> x) =", list(div_xt))

# solve for the exponents n_k with div(<12> x) = sum n_k div(f_k)
n = dict(zip(T.units, express_in_lattice(T, div_xt)))
print("exponents:", {k: e for k, e in n.items() if e})

# the product of f_k^{n_k} equals <12> x up to a constant; like x it has
# degree 11, and x * g is invariant under <12>
g = 1
for k, e in n.items():
    if e:
        g = modeq.f_xy(k) ** e * g
num, den = g.num, g.den
print("g: numerator degrees", num.degree("x"), num.degree("y"),
      "denominator degrees", den.degree("x"), den.degree("y"))
print("deg g =", div_xt.l1_degree())
