"""Rooted trees with labeled leaves and labeled internal vertices.

A vertex is a :class:`Node` ``(label, degree, children)``; a child is either
another Node or a leaf atom (an int).  Trees are immutable and hashable.

Signs follow one rule: a tree whose vertex labels have degrees stands for the
tensor product of its labels taken in preorder, so any operation that changes
the preorder picks up the Koszul sign of the corresponding permutation.
"""
from __future__ import annotations

import json
from itertools import product
from typing import NamedTuple

from .symseq import FiniteSet, invert_perm, koszul_sign


class Node(NamedTuple):
    label: object
    degree: int
    children: tuple


def is_node(x):
    return isinstance(x, Node)


def leaves(x):
    if not is_node(x):
        return (x,)
    out = []
    for c in x.children:
        out.extend(leaves(c))
    return tuple(sorted(out))


def min_leaf(x):
    if not is_node(x):
        return x
    return min(min_leaf(c) for c in x.children)


def total_degree(x):
    if not is_node(x):
        return 0
    return x.degree + sum(total_degree(c) for c in x.children)


def preorder(x):
    """Internal vertices in preorder."""
    if not is_node(x):
        return []
    out = [x]
    for c in x.children:
        out.extend(preorder(c))
    return out


def preorder_paths(x, path=()):
    """``(path, node)`` pairs in preorder; a path lists child positions."""
    if not is_node(x):
        return []
    out = [(path, x)]
    for i, c in enumerate(x.children):
        out.extend(preorder_paths(c, path + (i,)))
    return out


def node_at(x, path):
    for i in path:
        x = x.children[i]
    return x


def replace_at(x, path, new):
    if not path:
        return new
    i = path[0]
    kids = list(x.children)
    kids[i] = replace_at(kids[i], path[1:], new)
    return x._replace(children=tuple(kids))


class OpTree(NamedTuple):
    """A tree with a root vertex; ``module_root`` marks a module-labeled root."""

    root: Node
    module_root: bool = False

    @property
    def leaves(self):
        return FiniteSet(leaves(self.root))

    @property
    def degree(self):
        return total_degree(self.root)

    def vertices(self):
        return preorder(self.root)

    def internal_edges(self):
        """Edges as preorder indices of their lower vertex (1, 2, ...)."""
        return list(range(1, len(preorder(self.root))))

    def check(self):
        """Validate the shape invariants; raises ValueError."""
        seen = []
        for path, v in preorder_paths(self.root):
            is_root = not path
            need = 1 if (is_root and self.module_root) else 2
            if len(v.children) < need:
                raise ValueError(f"vertex {v.label!r} has {len(v.children)} children")
            seen.extend(c for c in v.children if not is_node(c))
        if len(seen) != len(set(seen)):
            raise ValueError("leaf label used twice")
        return self

    def to_json(self):
        return json.dumps(tree_to_data(self.root), sort_keys=True)

    def to_dot(self):
        return tree_to_dot(self)


def corolla(label, leaves_, degree=0, module_root=False):
    return OpTree(Node(label, degree, tuple(sorted(leaves_))), module_root)


# --- canonical forms ---------------------------------------------------------

def _keyed_preorder(x, key=None):
    if not is_node(x):
        return []
    out = [(key if key is not None else frozenset(leaves(x)), x.degree)]
    for c in x.children:
        out.extend(_keyed_preorder(c))
    return out


def preorder_sign(old_root, new_root, degree_of=None):
    """Koszul sign relating two preorders of the same vertex multiset.

    Vertices are matched by their leaf sets (unique for reduced trees).
    """
    old = _keyed_preorder(old_root, "ROOT")
    new = _keyed_preorder(new_root, "ROOT")
    pos = {k: i for i, (k, _) in enumerate(old)}
    degs = [d if degree_of is None else degree_of(d) for _, d in old]
    return koszul_sign(degs, [pos[k] for k, _ in new])


def canonical_form(t, label_action=None):
    """Sort children by minimal leaf; return ``(tree, sign)``.

    ``label_action(label, degree, perm)`` re-expresses a vertex label after its
    children are reordered (new child ``i`` was old child ``perm[i]``) and
    returns ``(label, sign)``; by default labels are left unchanged.  The
    returned sign also contains the Koszul sign of reordering vertex labels.
    """
    root = t.root if isinstance(t, OpTree) else t
    sign = 1

    def canon(x):
        nonlocal sign
        if not is_node(x):
            return x
        kids = [canon(c) for c in x.children]
        perm = sorted(range(len(kids)), key=lambda i: min_leaf(kids[i]))
        label = x.label
        if perm != list(range(len(kids))):
            degs = [total_degree(k) for k in kids]
            sign *= koszul_sign(degs, perm)
            if label_action is not None:
                label, s = label_action(label, x.degree, tuple(perm))
                sign *= s
            kids = [kids[i] for i in perm]
        return Node(label, x.degree, tuple(kids))

    new = canon(root)
    if isinstance(t, OpTree):
        return OpTree(new, t.module_root), sign
    return new, sign


# --- grafting ----------------------------------------------------------------

def graft(t, a, s):
    """Replace leaf ``a`` of ``t`` by the tree ``s``; returns ``(tree, sign)``.

    The sign is the Koszul sign of moving the labels of ``s`` from after all
    labels of ``t`` to the position of ``a`` in preorder.  Leaves of ``s``
    colliding with ``leaves(t) - {a}`` raise ValueError.
    """
    troot = t.root if isinstance(t, OpTree) else t
    sroot = s.root if isinstance(s, OpTree) else s
    tl = leaves(troot)
    if a not in tl:
        raise ValueError(f"{a!r} is not a leaf of the tree")
    if set(leaves(sroot)) & (set(tl) - {a}):
        raise ValueError("grafted tree shares leaves with the target")
    after = 0
    found = False

    def walk(x):
        nonlocal after, found
        if not is_node(x):
            if x == a:
                found = True
                return sroot
            return x
        if found:
            after += x.degree
        kids = tuple(walk(c) for c in x.children)
        return x._replace(children=kids)

    new = walk(troot)
    sign = -1 if (after * total_degree(sroot)) % 2 else 1
    if isinstance(t, OpTree):
        return OpTree(new, t.module_root), sign
    return new, sign


def relabel_leaves(x, mapping):
    if not is_node(x):
        return mapping.get(x, x)
    return x._replace(children=tuple(relabel_leaves(c, mapping) for c in x.children))


# --- enumeration -------------------------------------------------------------

def set_partitions(items):
    """Set partitions of a tuple; blocks ordered by their first element."""
    items = tuple(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    n = len(rest)
    # choose the companions of ``first``
    for mask in range(1 << n):
        block = (first,) + tuple(rest[i] for i in range(n) if mask >> i & 1)
        remaining = tuple(rest[i] for i in range(n) if not mask >> i & 1)
        for p in set_partitions(remaining):
            yield [block] + p


def enumerate_trees(vertex_labels, I, module_root=None):
    """All canonical trees on leaf set ``I``.

    ``vertex_labels`` maps arity (>= 2) to a list of ``(label, degree)``; an
    arity absent from the map is not allowed.  ``module_root`` (optional) maps
    arity (>= 1) to the labels allowed at a module root.
    """
    I = tuple(sorted(I.labels if isinstance(I, FiniteSet) else I))
    if not I:
        raise ValueError("leaf set must be nonempty")
    memo = {}

    def trees(block):
        if block in memo:
            return memo[block]
        out = []
        for part in set_partitions(block):
            if len(part) < 2:
                continue
            labs = vertex_labels.get(len(part))
            if not labs:
                continue
            options = [(b[0],) if len(b) == 1 else trees(b) for b in part]
            for kids in product(*options):
                for lab, deg in labs:
                    out.append(Node(lab, deg, kids))
        memo[block] = out
        return out

    if module_root is None:
        if len(I) == 1:
            return []
        return [OpTree(r) for r in trees(I)]
    out = []
    for part in set_partitions(I):
        labs = module_root.get(len(part))
        if not labs:
            continue
        options = [(b[0],) if len(b) == 1 else trees(b) for b in part]
        for kids in product(*options):
            for lab, deg in labs:
                out.append(OpTree(Node(lab, deg, kids), True))
    return out


def count_trees(arities, k):
    """Number of reduced trees on ``k`` labeled leaves with vertex arities in
    ``arities``, by the recursion over the block containing leaf 1."""
    from math import comb

    # f[n]: trees (or bare leaf when n == 1) on n labeled leaves
    # g[n][j]: ordered-by-min forests of j such items covering n leaves
    f = {1: 1}
    g = {0: {0: 1}}
    for n in range(1, k + 1):
        g[n] = {}
        for j in range(1, n + 1):
            total = 0
            for s in range(1, n - j + 2):
                if s not in f:
                    continue
                total += comb(n - 1, s - 1) * f[s] * g[n - s].get(j - 1, 0)
            if total:
                g[n][j] = total
        if n >= 2:
            f[n] = sum(c for j, c in g[n].items() if j in arities)
            if f[n]:
                g[n][1] = f[n]  # a forest of one tree
    return f[k]


# --- edge contraction --------------------------------------------------------

def contract_edge(t, edge, compose):
    """One term of the bar differential: contract the edge above the vertex
    with preorder index ``edge``.

    ``compose(parent_label, position, child_label, perm)`` must return
    ``{(label, degree): coefficient}`` for the partial composite at the
    1-based ``position`` followed by relabeling inputs by ``perm`` (composite
    input ``i`` goes to sorted slot ``perm[i]``).  Vertices are suspended by one
    degree each, except a module root.  Returns a list of ``(OpTree, coeff)``.
    """
    paths = preorder_paths(t.root)
    if not 1 <= edge < len(paths):
        raise ValueError(f"tree has no internal edge {edge}")
    vpath, v = paths[edge]
    upath = vpath[:-1]
    u = node_at(t.root, upath)
    i = next(n for n, (p, _) in enumerate(paths) if p == upath)
    susp = [0 if (t.module_root and not p) else 1 for p, _ in paths]
    e = [node.degree + s for (_, node), s in zip(paths, susp)]
    s1 = sum(e[i + 1:edge]) * e[edge]
    s2 = sum(e[: i + 1])
    pos = vpath[-1]
    composite = list(u.children[:pos]) + list(v.children) + list(u.children[pos + 1:])
    order = sorted(range(len(composite)), key=lambda n: min_leaf(composite[n]))
    perm = invert_perm(order)
    kids = tuple(composite[n] for n in order)
    e_w = e[i] + e[edge] - 1

    keyed_old = []
    for n, (p, node) in enumerate(paths):
        if n == edge:
            continue
        key = "ROOT" if not p else frozenset(leaves(node))
        keyed_old.append((key, e_w if n == i else e[n]))
    out = []
    for (lab, deg), c in compose(u.label, pos + 1, v.label, perm).items():
        if not c:
            continue
        w = Node(lab, deg, kids)
        root = replace_at(t.root, upath, w)
        new_keys = [k for k, _ in _keyed_preorder(root, "ROOT")]
        idx = {k: n for n, (k, _) in enumerate(keyed_old)}
        s3 = koszul_sign([d for _, d in keyed_old], [idx[k] for k in new_keys])
        sign = -1 if (s1 + s2) % 2 else 1
        out.append((OpTree(root, t.module_root), sign * s3 * c))
    return out


# --- serialization -----------------------------------------------------------

def tree_to_data(x):
    if not is_node(x):
        return x
    return {"label": str(x.label), "degree": x.degree, "children": [tree_to_data(c) for c in x.children]}


def tree_to_dot(t):
    lines = ["digraph tree {"]
    counter = [0]

    def walk(x):
        name = f"n{counter[0]}"
        counter[0] += 1
        if is_node(x):
            lines.append(f'  {name} [label="{x.label}"];')
            for c in x.children:
                lines.append(f"  {name} -> {walk(c)};")
        else:
            lines.append(f'  {name} [label="{x}", shape=plaintext];')
        return name

    walk(t.root if isinstance(t, OpTree) else t)
    lines.append("}")
    return "\n".join(lines)
