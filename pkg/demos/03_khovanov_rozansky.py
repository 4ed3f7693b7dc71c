"""Khovanov-Rozansky homology of small braid closures.

Each crossing contributes a square of maps over the edge ring; the tensor
product is a curved complex with d = d_+ + d_- + d_v.  Homology is taken in
two steps: first d_+ + d_-, then the map induced by d_v.

    python demos/03_khovanov_rozansky.py
"""
import time

from hfkn.cli import format_degrees
from hfkn.kr import BraidDiagram, conjecture_grading, euler_char, kr_complex, kr_homology, square_is
from hfkn.poly import braid_closure, homfly, sln_specialize

trefoil = BraidDiagram.from_word([1, 1, 1], 2)
print("d^2 = 0 for the trefoil complexes:",
      all(square_is(kr_complex(trefoil, f, n)) for f in ("middle", "reduced", "unreduced") for n in (None, 1, 2, 3)))

print("\nUnreduced sl_n homology, with the Euler characteristic checked against")
print("the skein polynomial specialised at a = q^n:")
for word, strands, name in (([], 1, "unknot"), ([1, 1], 2, "Hopf link"), ([1, 1, 1], 2, "trefoil")):
    D = BraidDiagram.from_word(word, strands)
    P = homfly(braid_closure(word, strands))
    for n in (2, 3):
        t = time.perf_counter()
        H = kr_homology(kr_complex(D, "unreduced", n))
        chi = euler_char(H)
        print(f"  {name:9s} n={n}: dim {H.total():2d}  chi {str(chi):28s} "
              f"matches P_n: {chi == sln_specialize(P, n)}  ({time.perf_counter() - t:.1f}s)")

H = kr_homology(kr_complex(trefoil, "unreduced", 2))
print("\nsl_2 trefoil in the grading gr_n + (n/2) gr_v:", format_degrees(conjecture_grading(H, 2)))
print("Reduced HOMFLY-PT homology of the unknot:", kr_homology(kr_complex(BraidDiagram.from_word([], 1), "reduced", None)))
