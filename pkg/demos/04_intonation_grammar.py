"""The finite-state grammar of well-formed intonation tunes.

A tune is an initial boundary tone, one or more groups of pitch accents each
closed by a phrase accent, and a final boundary tone. The machine recognizes
token sequences and can enumerate every tune up to a length bound.

Run from the repository root:  python3 demos/04_intonation_grammar.py
"""

from prosotime import build_pierrehumbert, enumerate_strings, recognize
from prosotime.fsm import PIERREHUMBERT_ALPHABET

fsm = build_pierrehumbert()
print("alphabet:", " ".join(PIERREHUMBERT_ALPHABET))
print(f"states: {len(fsm.states)}, transitions: {len(fsm.transitions)}\n")

CANDIDATES = [
    "%H H* H- H%",            # minimal declarative-ish tune
    "%L L*+H L- H%",          # rising tail
    "%H H* H* H* H- H%",      # iterated accent
    "%H H* H- L* L- H%",      # two intermediate groups
    "%H H%",                  # no accent group at all
    "H* H- H%",               # missing initial boundary
    "%H H* H- H% H%",         # trailing boundary
]
for s in CANDIDATES:
    verdict = "well-formed" if recognize(fsm, s) else "ill-formed "
    print(f"  {verdict}  {s}")

# Enumerate the shortest tunes: every choice of initial boundary (2), one
# pitch accent (6), phrase accent (2), final boundary (2) -> 48 strings.
tunes = enumerate_strings(fsm, max_len=4)
print(f"\n{len(tunes)} minimal tunes (length 4); first ten:")
for s in tunes[:10]:
    print("  ", s)

by_len = {}
for s in enumerate_strings(fsm, max_len=6):
    by_len.setdefault(len(s.split()), 0)
    by_len[len(s.split())] += 1
print("\ntunes by length:", dict(sorted(by_len.items())))
