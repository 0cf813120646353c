"""From an interval annotation to metrics, a quadrant plot, and a time tree.

The annotation parser accepts both the verbose and the terse text forms of
interval-tier files as well as a flat CSV. Durations extracted from a tier
(silence labels dropped) feed every duration-based analysis in the package.

Run from the repository root:  python3 demos/07_annotations_to_everything.py
"""

from pathlib import Path

from prosotime import (
    TreeParams,
    durations,
    induce_time_tree,
    metrics_report,
    parse_textgrid,
    quadrant_analysis,
    to_sexpr,
)
from prosotime.svgplot import svg_quadrants, svg_timetree

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

GRID = """File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 2.6
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "syllables"
        xmin = 0
        xmax = 2.6
        intervals: size = 9
        intervals [1]:
            xmin = 0
            xmax = 0.22
            text = "da"
        intervals [2]:
            xmin = 0.22
            xmax = 0.61
            text = "daa"
        intervals [3]:
            xmin = 0.61
            xmax = 0.79
            text = "da"
        intervals [4]:
            xmin = 0.79
            xmax = 1.22
            text = "daa"
        intervals [5]:
            xmin = 1.22
            xmax = 1.41
            text = "sil"
        intervals [6]:
            xmin = 1.41
            xmax = 1.62
            text = "da"
        intervals [7]:
            xmin = 1.62
            xmax = 2.08
            text = "daa"
        intervals [8]:
            xmin = 2.08
            xmax = 2.27
            text = "da"
        intervals [9]:
            xmin = 2.27
            xmax = 2.6
            text = "daa"
"""

doc = parse_textgrid(GRID)
tier = doc.tier("syllables")
seq = durations(tier)  # the "sil" interval is excluded by default
print("labels   :", " ".join(seq.labels))
print("durations:", " ".join(f"{v:.2f}" for v in seq.values))

rep = metrics_report(seq)
print(f"\nnPVI {rep['npvi']:.1f}, rPVI {rep['rpvi']:.3f}, "
      f"PFD {rep['pfd']:.1f}%, PIM {rep['pim']:.2f}")

stats = quadrant_analysis(seq)
print(f"quadrants: LL={stats.ll} SS={stats.ss} LS={stats.ls} SL={stats.sl}")

tree = induce_time_tree(seq, TreeParams(relation="iambic", polarity="higher"))
print("\ntime tree (iambic, longer = stronger):")
print(" ", to_sexpr(tree))

(OUT / "annotation.quadrants.svg").write_text(svg_quadrants(stats))
(OUT / "annotation.timetree.svg").write_text(svg_timetree(tree))
print(f"\nSVGs written to {OUT}/")
