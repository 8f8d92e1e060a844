"""
Planning a lower bound for X1(37) over F_2
==========================================

Count places of small degree over F_2, then split the claim
gon(X1(37)/F_2) > 17 into Riemann-Roch checks grouped by divisor type.
"""

from x1gon.gonality import count_places_fq, plan_lower_bound

census = count_places_fq(37, 2, 8)
print("places by degree:", dict(census.degree_counts))

plan = plan_lower_bound(37, 2, 17, census=census)
print("pigeonhole bound:", plan.pigeonhole, " thresholds:", plan.thresholds)
for note in plan.notes:
    print("note:", note)

# all poles rational: rows in decreasing type order
print("\ncase 2")
for calc, types in plan.table_rows(2):
    print(f"  {', '.join(t.short() for t in types)} -> {calc}")

# a non-rational pole: one group per calculation
print("\ncase 3")
for g in plan.case(3).groups:
    print(f"  {g.calc:>2}: {', '.join(t.short() for t in g.types)}")

print("\nobligations:", plan.obligations)
