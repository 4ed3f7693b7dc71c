"""HOMFLY-PT polynomials from the skein relation.

    a P(D+) - a^-1 P(D-) = (q - q^-1) P(D0),   P(unknot) = (a - a^-1)/(q - q^-1)

    python demos/04_homfly_skein.py
"""
from hfkn.hfk import alexander_from_exponents
from hfkn.poly import BRAIDS, braid_closure, homfly, skein_check, sln_specialize

for name, (strands, word) in BRAIDS.items():
    D = braid_closure(word, strands)
    ok = all(skein_check(D, i) for i in range(len(D.crossings)))
    print(f"{name:14s} {str(homfly(D, reduced=True)):60s} skein ok: {ok}")

T = homfly(braid_closure([1, 1, 1], 2), reduced=True)
print("\nTrefoil at a = 1 (n = 0):", sln_specialize(T, 0, reduced=True))
print("Alexander polynomial from the staircase exponents 1, 0, -1:", alexander_from_exponents([1, 0, -1]))
print("Trefoil at n = 2 (Jones-type):", sln_specialize(T, 2, reduced=True))
