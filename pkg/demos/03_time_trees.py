"""Metrical time-tree induction from word durations and from spectra.

Adjacent unit pairs join bottom-up under a rhythmic relation: `iambic` joins
a weak unit to a following strong one, `trochaic` a strong to a following
weak. Polarity declares whether larger values count as strong ("higher") or
as weak ("lower" -- e.g. durations where short = reduced = weak is wrong and
short = prominent head is wanted).

Run from the repository root:  python3 demos/03_time_trees.py
"""

import numpy as np

from prosotime import (
    Spectrum,
    TreeParams,
    aems,
    induce_spectral_hierarchy,
    induce_time_tree,
    synthesize_am,
    to_sexpr,
)

# --- word durations ---------------------------------------------------------
sentence = [("miss", 3.0), ("jones", 2.0), ("came", 3.0), ("home", 1.0)]
compound = [("light", 1.0), ("house", 3.0), ("keep", 2.0), ("er", 3.0)]

iambic = induce_time_tree(sentence, TreeParams(relation="iambic", polarity="lower"))
print("iambic / lower on", [w for w, _ in sentence])
print(" ", to_sexpr(iambic))

trochaic = induce_time_tree(compound, TreeParams(relation="trochaic", polarity="lower"))
print("trochaic / lower on", [w for w, _ in compound])
print(" ", to_sexpr(trochaic))

# --- pathological input: a monotone run -------------------------------------
# Each pass can only join the rightmost eligible pair, so the tree grows one
# level per pass and ends up maximally right-branching.
chain = [(f"i{k}", float(v)) for k, v in enumerate([1, 2, 3, 4, 5, 0])]
print("\nright-branching worst case")
print(" ", to_sexpr(induce_time_tree(chain, TreeParams("iambic", "lower"))))

# n-ary mode joins whole monotone runs in one step instead:
print("n-ary variant")
print(" ", to_sexpr(induce_time_tree(chain, TreeParams("iambic", "lower", arity="nary"))))

# --- spectral hierarchy ------------------------------------------------------
# The same induction applied to envelope-spectrum bins: strongest modulation
# frequencies end up dominating the tree (always polarity "higher").
wave = synthesize_am(200.0, 5.0, 1.0, 2.0, 16000)
spec = aems(wave, cutoff_hz=10.0)
tree = induce_spectral_hierarchy(spec, TreeParams(relation="trochaic"))
print("\nspectral hierarchy of a 5 Hz-modulated signal (10 Hz cutoff)")
print(" ", to_sexpr(tree))

hand = Spectrum(1.0, np.array([1.0, 2.0, 9.0, 4.0, 3.0, 2.5, 3.5, 8.0, 2.2, 1.2]), 9.0, {})
print("\nhand-written two-peak spectrum (peaks at 2 Hz and 7 Hz)")
print(" ", to_sexpr(induce_spectral_hierarchy(hand, TreeParams(relation="trochaic"))))
