"""Comparing HFK_n with sl_n homology on torus knots.

Closed forms on the sl_n side (Cautis for T(2, 2k+1), the delta-graded
Khovanov polynomial for T(3, 3k+1), a dimension count for larger n) are set
against HFK_n computed from staircase complexes.  A spectral sequence whose
differentials all have degree ``step`` can only exist when the difference of
Poincare polynomials is a nonnegative multiple of 1 + q^step, up to a shift.

    python demos/02_torus_knots_and_spectral_sequences.py
"""
from hfkn.hfk import hfk_n, torus_knot
from hfkn.sscheck import cautis_conjecture, conjecture_report, t3_3k1_khovanov, t3_3k1_hfk2, format_report, ss_step

print("Khovanov to HFK_2 for T(3,4), T(3,7), ...:")
for k in range(1, 5):
    v = ss_step(t3_3k1_khovanov(k), t3_3k1_hfk2(k), 2)
    print(f"  k={k}: {t3_3k1_khovanov(k)}  ->  {t3_3k1_hfk2(k)}   witness {v.witness}")

print("\nThe same closed form against the computed HFK_2:")
for k in (1, 2):
    print(f"  T(3,{3 * k + 1}): {hfk_n(torus_knot(3, 3 * k + 1, 'out_of_odd'), 2).poincare()}")

print("\nReports for the trefoil and T(3,4):")
print(format_report(conjecture_report("T2,3", range(1, 5))))
print()
print(format_report(conjecture_report("T3,4", range(2, 5))))

print("\nFor n >= 3 the Cautis polynomial has more classes than HFK_n; the")
print("surplus pairs off in degree n, as an E1 page over its limit:")
P = cautis_conjecture(1, 3)
H = hfk_n(torus_knot(2, 3), 3).poincare()
v = ss_step(P, H, 3)
print(f"  T(2,3), n=3: Cautis {P}\n               HFK_3  {H}\n               witness {v.witness}, shift {v.shift}")
