"""Dispersion metrics and quadrant analysis on contrasting duration patterns.

The five dispersion metrics (variance, PIM, PFD, rPVI, nPVI) quantify how
unevenly interval durations spread, but they cannot tell a strict long-short
alternation from an acceleration: nPVI famously assigns all three patterns
below the same value. The quadrant analysis of successive z-scored pairs is
what separates them.

Run from the repository root:  python3 demos/02_rhythm_metrics.py
"""

from prosotime import metrics_report, npvi, quadrant_analysis

PATTERNS = {
    "alternating  (2,4,2,4,2,4)": [2, 4, 2, 4, 2, 4],
    "accelerating (2,4,8,16,32,64)": [2, 4, 8, 16, 32, 64],
    "valley       (4,2,1,2,4,8)": [4, 2, 1, 2, 4, 8],
}

print(f"{'pattern':38s} {'variance':>10s} {'pim':>8s} {'pfd':>8s} {'rpvi':>8s} {'npvi':>8s}")
for name, xs in PATTERNS.items():
    rep = metrics_report(xs)
    print(f"{name:38s} {rep['variance']:10.3f} {rep['pim']:8.3f} "
          f"{rep['pfd']:8.3f} {rep['rpvi']:8.3f} {rep['npvi']:8.3f}")

print("\nAll three nPVI values coincide:",
      ", ".join(f"{npvi(xs):.4f}" for xs in PATTERNS.values()))

# The quadrant counts disagree where nPVI cannot:
print(f"\n{'pattern':38s} {'LL':>4s} {'SS':>4s} {'LS':>4s} {'SL':>4s} {'origin':>7s}  index")
for name, xs in PATTERNS.items():
    q = quadrant_analysis(xs)
    idx = f"{q.index:.2f}" if q.index is not None else "--"
    print(f"{name:38s} {q.ll:4d} {q.ss:4d} {q.ls:4d} {q.sl:4d} {q.origin:7d}  {idx}")

print("\nThe alternating pattern lives entirely in the LS/SL quadrants;")
print("the accelerating one never follows a long interval with a short (LS=0).")
