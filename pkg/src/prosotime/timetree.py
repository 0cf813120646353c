"""Metrical time trees: hierarchies of strong/weak relations over durations.

A time tree groups a valued sequence bottom-up: adjacent items are joined
into strong/weak pairs wherever the chosen relation (iambic = weak before
strong, trochaic = strong before weak) holds, the joined node inherits its
strong child's value, and the passes repeat on the shrunken sequence until
nothing more joins.  Every pass that runs performs at least one join, so at
most n - 1 passes occur for n items (a strictly descending chain of
strengths needs exactly that many).

The same machinery applied to z-scored spectrum magnitudes yields a
hierarchical segmentation of a spectrum into dominance regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import math

from .aems import Spectrum, zscore
from .annot import DurationSequence
from .errors import DegenerateInputError, ParameterError

__all__ = [
    "TimeTree",
    "TreeParams",
    "induce_time_tree",
    "induce_spectral_hierarchy",
    "to_sexpr",
    "tree_to_dict",
]

_MARKS = ("r", "s", "w")
_RELATIONS = ("iambic", "trochaic")
_POLARITIES = ("higher", "lower")
_ARITIES = ("binary", "nary")


@dataclass(frozen=True)
class TimeTree:
    """One node of a time tree.

    Leaves carry a label and the item's value; internal nodes carry >= 2
    marked children, exactly one of them strong, and the strong child's
    value as their own.  The root is marked "r", every other node "s" or
    "w".
    """

    mark: str
    value: float
    label: str | None = None
    children: tuple[TimeTree, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "value", float(self.value))
        if self.mark not in _MARKS:
            raise ParameterError(f"mark must be one of {_MARKS}, got {self.mark!r}")
        if not math.isfinite(self.value):
            raise ParameterError(f"node value must be finite, got {self.value!r}")
        if self.children:
            if self.label is not None:
                raise ParameterError("internal nodes carry no label")
            if len(self.children) < 2:
                raise ParameterError("internal nodes need >= 2 children")
            marks = [c.mark for c in self.children]
            if marks.count("s") != 1 or any(m == "r" for m in marks):
                raise ParameterError(
                    f"children must contain exactly one 's' and otherwise 'w', got {marks}"
                )
        elif self.label is None:
            raise ParameterError("leaf nodes need a label")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def s_child(self) -> TimeTree:
        if self.is_leaf:
            raise ParameterError("leaves have no strong child")
        return next(c for c in self.children if c.mark == "s")

    def leaves(self) -> tuple[TimeTree, ...]:
        """The fringe of the tree, left to right."""
        if self.is_leaf:
            return (self,)
        return tuple(leaf for c in self.children for leaf in c.leaves())


@dataclass(frozen=True)
class TreeParams:
    """Induction parameters: relation direction, value polarity and arity."""

    relation: str = "iambic"
    polarity: str = "higher"
    arity: str = "binary"

    def __post_init__(self) -> None:
        if self.relation not in _RELATIONS:
            raise ParameterError(f"relation must be one of {_RELATIONS}, got {self.relation!r}")
        if self.polarity not in _POLARITIES:
            raise ParameterError(f"polarity must be one of {_POLARITIES}, got {self.polarity!r}")
        if self.arity not in _ARITIES:
            raise ParameterError(f"arity must be one of {_ARITIES}, got {self.arity!r}")


def _strength(node: TimeTree, polarity: str) -> float:
    """Comparable strength of a work item under the polarity convention."""
    return node.value if polarity == "higher" else -node.value


def _join(group: Sequence[TimeTree], relation: str) -> TimeTree:
    """Join a group of adjacent items into one marked node.

    Iambic puts the strong child last, trochaic first; the node inherits the
    strong child's value.  Marks on the incoming items are overwritten (they
    were provisional).
    """
    s_index = len(group) - 1 if relation == "iambic" else 0
    children = tuple(
        replace(node, mark="s" if k == s_index else "w") for k, node in enumerate(group)
    )
    return TimeTree(mark="w", value=group[s_index].value, children=children)


def _pass_binary(items: list[TimeTree], relation: str, polarity: str) -> tuple[list[TimeTree], bool]:
    """One greedy left-to-right pass of pairwise joins; items join at most once."""
    out: list[TimeTree] = []
    joined = False
    i = 0
    while i < len(items):
        if i + 1 < len(items):
            a, b = _strength(items[i], polarity), _strength(items[i + 1], polarity)
            hold = a < b if relation == "iambic" else a > b
            if hold:
                out.append(_join(items[i : i + 2], relation))
                joined = True
                i += 2
                continue
        out.append(items[i])
        i += 1
    return out, joined


def _pass_nary(items: list[TimeTree], relation: str, polarity: str) -> tuple[list[TimeTree], bool]:
    """One pass joining maximal strictly monotone runs (length >= 2) as one node."""
    out: list[TimeTree] = []
    joined = False
    i = 0
    n = len(items)
    while i < n:
        j = i
        while j + 1 < n:
            a, b = _strength(items[j], polarity), _strength(items[j + 1], polarity)
            hold = a < b if relation == "iambic" else a > b
            if not hold:
                break
            j += 1
        if j > i:
            out.append(_join(items[i : j + 1], relation))
            joined = True
            i = j + 1
        else:
            out.append(items[i])
            i += 1
    return out, joined


def induce_time_tree(
    seq: DurationSequence | Iterable[tuple[str, float]],
    params: TreeParams = TreeParams(),
) -> TimeTree:
    """Induce a time tree over a labeled value sequence.

    Bottom-up greedy passes join adjacent items wherever the relation holds
    under the polarity-derived strength; ties never join.  Roots left over
    when no more joins are possible are adjoined under a single "r" node
    with the strongest of them strong.
    """
    pairs = list(seq.items if isinstance(seq, DurationSequence) else seq)
    if not pairs:
        raise DegenerateInputError("cannot induce a tree over an empty sequence")

    items = [TimeTree(mark="w", value=value, label=str(label)) for label, value in pairs]
    do_pass = _pass_binary if params.arity == "binary" else _pass_nary

    while len(items) > 1:
        items, joined = do_pass(items, params.relation, params.polarity)
        if not joined:
            break

    if len(items) == 1:
        return replace(items[0], mark="r")

    # several unjoinable roots: adjoin them, strongest (leftmost on ties) strong
    strengths = [_strength(node, params.polarity) for node in items]
    s_index = strengths.index(max(strengths))
    children = tuple(
        replace(node, mark="s" if k == s_index else "w") for k, node in enumerate(items)
    )
    return TimeTree(mark="r", value=items[s_index].value, children=children)


def induce_spectral_hierarchy(spec: Spectrum, params: TreeParams = TreeParams()) -> TimeTree:
    """Hierarchically segment a spectrum by inducing a tree over z-scored bins.

    Bins become leaves labeled with their center frequency; magnitudes are
    z-scored first, and the polarity is forced to higher-is-stronger (a
    larger magnitude dominates).  Raises on constant spectra (zero
    variance).
    """
    if len(spec) == 0:
        raise DegenerateInputError("empty spectrum")
    z = zscore(spec.magnitudes)
    labeled = [(f"{f:g}Hz", float(v)) for f, v in zip(spec.freqs, z)]
    return induce_time_tree(labeled, replace(params, polarity="higher"))


def to_sexpr(tree: TimeTree) -> str:
    """Parenthesized rendering with r/s/w marks and leaf labels, no values.

    A bare root leaf prints as its label alone.
    """
    if tree.is_leaf:
        return tree.label if tree.mark == "r" else f"({tree.mark} {tree.label})"
    inner = " ".join(to_sexpr(c) for c in tree.children)
    return f"({tree.mark} {inner})"


def tree_to_dict(tree: TimeTree) -> dict:
    """JSON-ready dict form: {mark, value, label?} for leaves, {mark, value, children} inside."""
    node: dict = {"mark": tree.mark, "value": tree.value}
    if tree.is_leaf:
        node["label"] = tree.label
    else:
        node["children"] = [tree_to_dict(c) for c in tree.children]
    return node
