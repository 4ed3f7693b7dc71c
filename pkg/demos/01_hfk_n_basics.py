"""HFK_n of the unknot and the trefoil.

A master complex is the knot Floer complex over Q[U, V].  Substituting
V = (U_a^n - U_b^n)/(U_a - U_b) and collapsing to one grading gives CFK_n,
whose homology is a finite-dimensional module over Q[U].

    python demos/01_hfk_n_basics.py
"""
from hfkn.hfk import builtin, cfk_n, e1_page, hfk_n, reduced_hfk_n, staircase

print("The unknot: HFK_n is Q[U]/(U^n), a copy of [n]_q.")
for n in range(1, 5):
    r = hfk_n(builtin("unknot"), n)
    print(f"  n={n}: {str(r.module):<22}  Poincare {r.poincare()}")

print("\nThe punctured unknot complex becomes a single arrow n*U^n:")
print(" ", cfk_n(builtin("unknot-punctured"), 3).differential)

print("\nThe trefoil splits as [n] + [1] + [1].  The staircase with Alexander")
print("exponents 1, 0, -1 is the same complex, built from its Alexander polynomial.")
tref = staircase([1, 0, -1], "out_of_odd")
for n in range(2, 6):
    r = hfk_n(tref, n)
    agree = r.dims.table == hfk_n(tref, n, route="B").dims.table
    print(f"  n={n}: {r.module}   (routes A and B agree: {agree})")

print("\nBlocking the discs through z gives the E1 page of a spectral sequence")
print("that converges to HFK_n; the reduced theory kills U at one basepoint.")
for n in (2, 3):
    e = e1_page(builtin("trefoil"), n)
    print(f"  n={n}: E1 {e.module}   reduced dims {reduced_hfk_n(builtin('trefoil'), n)}")
