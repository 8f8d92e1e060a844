"""
Modular units of degree 5 to 8
==============================

For each level decide, by complete short-vector enumeration, whether the
unit lattice contains a function of exactly degree d.  Absence comes with
a certificate: the enumeration of every unit up to that degree.
"""

from x1gon.gonality import degree_d_unit_census

degrees = (5, 6, 7, 8)
print("  N  " + "  ".join(f"d={d}" for d in degrees))
for N in range(20, 41):
    row = ["yes" if degree_d_unit_census(N, d).exists else " - " for d in degrees]
    print(f"{N:>3}  " + "  ".join(row))

# X1(25) has a function of degree 5 but none of degree 6 or 7
res = degree_d_unit_census(25, 7)
print("\nX1(25), d=7:", res.exists, res.certificate)
