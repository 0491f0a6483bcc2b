"""Analysis variants of a pattern.

Static super-linear detectors assume full-match semantics and struggle with
large counted repetitions. Two rewrites make patterns analyzable:

* anchor_variant: prefix an unanchored pattern with a lazy universal prefix
  (``^[\\s\\S]*?``) so a full-match analysis models partial-match search.
* unbounded_variant: replace bounded quantifiers with unbounded ones, which
  keeps the language a superset while collapsing the automaton size.
"""

from __future__ import annotations

from dataclasses import replace

from .emitter import emit
from .syntax import (
    Alternation,
    Anchor,
    Ast,
    CharClass,
    Concat,
    FULL_RANGE,
    Group,
    InlineFlags,
    LAZY,
    Lookaround,
    Node,
    Quantifier,
)
from .parser import concat_of


def is_start_anchored(node: Node) -> bool:
    """Whether every match of the pattern must begin at input start."""
    if isinstance(node, Anchor):
        return node.kind in ("^", "A")
    if isinstance(node, Concat):
        return bool(node.parts) and is_start_anchored(node.parts[0])
    if isinstance(node, Alternation):
        return all(is_start_anchored(o) for o in node.options)
    if isinstance(node, Group):
        return is_start_anchored(node.child)
    if isinstance(node, InlineFlags):
        return node.child is not None and is_start_anchored(node.child)
    if isinstance(node, Quantifier):
        return node.min >= 1 and is_start_anchored(node.child)
    return False


def anchor_variant(ast: Ast) -> Ast:
    """Full-match model of partial-match search; anchored input is unchanged."""
    if is_start_anchored(ast.root):
        return ast
    root = concat_of([
        Anchor("^"),
        Quantifier(CharClass(FULL_RANGE), 0, None, LAZY),
        ast.root,
    ])
    return Ast(root=root, dialect=ast.dialect, source=emit(root),
               group_count=ast.group_count)


def map_nodes(node: Node, fn) -> Node:
    """Rebuild bottom-up, applying fn to every node."""
    if isinstance(node, Concat):
        node = replace(node, parts=tuple(map_nodes(p, fn) for p in node.parts))
    elif isinstance(node, Alternation):
        node = replace(node, options=tuple(map_nodes(o, fn) for o in node.options))
    elif isinstance(node, (Quantifier, Group, Lookaround)):
        node = replace(node, child=map_nodes(node.child, fn))
    elif isinstance(node, InlineFlags) and node.child is not None:
        node = replace(node, child=map_nodes(node.child, fn))
    return fn(node)


def unbounded_variant(ast: Ast) -> Ast:
    """Bounded quantifiers become unbounded; the language only grows."""

    def widen(node: Node) -> Node:
        if isinstance(node, Quantifier) and node.max is not None:
            return replace(node, min=1 if node.min > 0 else 0, max=None)
        return node

    root = map_nodes(ast.root, widen)
    if root == ast.root:
        return ast
    return Ast(root=root, dialect=ast.dialect, source=emit(root),
               group_count=ast.group_count)
