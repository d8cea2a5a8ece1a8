"""Backtracking search for colorings with no monochromatic family.

One engine serves both the combinatorial-line searches and the subspace
arrow checks: given `item_count` items and a list of families (each a
set of item indices), find a coloring of the items in `num_colors`
colors under which no family is monochromatic, or prove none exists.

The search assigns colors to items 0, 1, 2, ... in order and tries
colors in increasing order, so the first witness found is the
lexicographically least proper coloring.  A family is checked as soon
as its highest item is colored, which prunes dead branches early.
"""

from __future__ import annotations

from .budget import Budget, ensure_budget


def find_proper_coloring(item_count: int,
                         num_colors: int,
                         families,
                         budget: Budget | None = None,
                         symmetry: bool = True) -> list[int] | None:
    """Lexicographically least coloring avoiding monochromatic families.

    Returns a list of colors (ints in range(num_colors)) indexed by item,
    or None when every coloring makes some family monochromatic.  With
    `symmetry` on, candidate colors at each item are capped at one more
    than the largest color used so far; the lex-least proper coloring
    always has that first-use form, so the answer is unchanged and the
    flag only trades search order for pruning.
    """
    if num_colors < 1:
        raise ValueError("need at least one color")
    bud = ensure_budget(budget)
    fams: list[tuple[int, ...]] = []
    for fam in families:
        members = tuple(sorted(set(fam)))
        if not members:
            return None  # an empty family is monochromatic under any coloring
        if members[-1] >= item_count or members[0] < 0:
            raise ValueError("family member out of range")
        fams.append(members)
    if item_count == 0:
        return []
    # families indexed by the item whose coloring completes them
    finish_at: list[list[tuple[int, ...]]] = [[] for _ in range(item_count)]
    for members in fams:
        finish_at[members[-1]].append(members)
    colors = [-1] * item_count
    idx = 0
    max_used = -1
    max_stack = [0] * (item_count + 1)  # max_used before each depth
    while idx >= 0:
        if idx == item_count:
            return colors[:]
        start = colors[idx] + 1
        if colors[idx] == -1:
            max_stack[idx] = max_used
        else:
            max_used = max_stack[idx]
        limit = num_colors
        if symmetry:
            limit = min(num_colors, max_stack[idx] + 2)
        placed = False
        for c in range(start, limit):
            bud.spend()
            colors[idx] = c
            ok = True
            for members in finish_at[idx]:
                first = colors[members[0]]
                if first == c and all(colors[i] == first for i in members[1:-1]):
                    ok = False
                    break
            if ok:
                max_used = max(max_stack[idx], c)
                idx += 1
                placed = True
                break
        if not placed:
            colors[idx] = -1
            max_used = max_stack[idx]
            idx -= 1
    return None
