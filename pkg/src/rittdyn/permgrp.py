"""Permutation machinery: products, orbits, deterministic Schreier-Sims,
and imprimitivity (block) systems.

Permutations are tuples over {0..n-1}.  Products compose left to right:
mult(p, q) applies p first, matching how loop permutations compose.
"""

from __future__ import annotations


def identity(n):
    return tuple(range(n))


def is_identity(p):
    return all(i == j for i, j in enumerate(p))


def mult(p, q):
    """Apply p first, then q."""
    return tuple(q[i] for i in p)


def mult_all(perms, n):
    out = identity(n)
    for p in perms:
        out = mult(out, p)
    return out


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_type(p):
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


def cycles(p):
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_count(p):
    return len(cycles(p))


def format_cycles(p):
    parts = [c for c in cycles(p) if len(c) > 1]
    if not parts:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in parts)


def orbit(gens, start):
    seen = {start}
    queue = [start]
    while queue:
        p = queue.pop()
        for g in gens:
            q = g[p]
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def orbits(gens, n):
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        orb = sorted(orbit(gens, i))
        for x in orb:
            seen[x] = True
        out.append(tuple(orb))
    return out


def is_transitive(gens, n):
    return len(orbit(gens, 0)) == n if n else True


# -- group order (deterministic Schreier-Sims) ---------------------------------


def group_order(gens, n):
    """Exact order of the group generated by gens, via a stabilizer chain."""
    gens = [tuple(g) for g in gens if not is_identity(g)]
    if not gens:
        return 1

    base = []
    strong = []  # strong[k]: generators fixing base[:k]
    trans = []  # trans[k]: transversal dict point -> perm mapping base[k] to point

    def first_moved(p):
        return min(i for i in range(n) if p[i] != i)

    def new_level(h):
        base.append(first_moved(h))
        strong.append([])
        trans.append({})

    def rebuild(k):
        b = base[k]
        t = {b: identity(n)}
        stack = [b]
        while stack:
            p = stack.pop()
            for g in strong[k]:
                q = g[p]
                if q not in t:
                    t[q] = mult(t[p], g)
                    stack.append(q)
        trans[k] = t

    def strip(g, start):
        for i in range(start, len(base)):
            p = g[base[i]]
            if p not in trans[i]:
                return g, i
            g = mult(g, inverse(trans[i][p]))
        return g, len(base)

    # distribute the input generators over the levels they stabilize
    for g in gens:
        level = 0
        while True:
            if level == len(base):
                new_level(g)
            if g[base[level]] != base[level]:
                for i in range(level + 1):
                    if g not in strong[i]:
                        strong[i].append(g)
                break
            level += 1
    for k in range(len(base)):
        rebuild(k)

    k = len(base) - 1
    while k >= 0:
        rebuild(k)
        closed = True
        b = base[k]
        points = sorted(trans[k])
        for p in points:
            for g in strong[k]:
                u = trans[k][p]
                q = g[p]
                if q not in trans[k]:
                    rebuild(k)
                sg = mult(mult(u, g), inverse(trans[k][q]))
                h, j = strip(sg, k + 1)
                if is_identity(h):
                    continue
                closed = False
                if j == len(base):
                    new_level(h)
                for i in range(k + 1, j + 1):
                    strong[i].append(h)
                for i in range(k + 1, j + 1):
                    rebuild(i)
                k = j
                break
            if not closed:
                break
        if closed:
            k -= 1

    order = 1
    for k in range(len(base)):
        rebuild(k)
        order *= len(trans[k])
    return order


# -- block systems ---------------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        """Merge classes; returns (kept_root, absorbed_root) or None."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return None
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return rx, ry


def minimal_block_labels(gens, n, a, b):
    """Atkinson's algorithm: the finest block system merging points a and b.

    Returns the partition as a label vector (label[i] = min element of the
    block containing i).
    """
    uf = _UnionFind(n)
    uf.union(a, b)
    queue = [b]
    while queue:
        gamma = queue.pop()
        delta = uf.find(gamma)
        for g in gens:
            r = uf.union(g[gamma], g[delta])
            if r is not None:
                queue.append(r[1])
    labels = [uf.find(i) for i in range(n)]
    canon = {}
    for i, l in enumerate(labels):
        canon.setdefault(l, i)
    return tuple(canon[l] for l in labels)


def join_labels(l1, l2):
    """Finest common coarsening of two partitions given as label vectors."""
    n = len(l1)
    uf = _UnionFind(n)
    for i in range(n):
        uf.union(i, l1[i])
        uf.union(i, l2[i])
    labels = [uf.find(i) for i in range(n)]
    canon = {}
    for i, l in enumerate(labels):
        canon.setdefault(l, i)
    return tuple(canon[l] for l in labels)


def labels_to_blocks(labels):
    blocks = {}
    for i, l in enumerate(labels):
        blocks.setdefault(l, []).append(i)
    return tuple(tuple(b) for b in sorted(blocks.values()))


def is_trivial_system(labels):
    blocks = labels_to_blocks(labels)
    return len(blocks) == 1 or all(len(b) == 1 for b in blocks)


def all_block_systems(gens, n):
    """All nontrivial block systems of a transitive group.

    Minimal systems for every seed pair (0, b), closed under joins.
    """
    if n <= 1:
        return []
    found = set()
    for b in range(1, n):
        labels = minimal_block_labels(gens, n, 0, b)
        if not is_trivial_system(labels):
            found.add(labels)
    # close under joins
    frontier = list(found)
    while frontier:
        nxt = []
        for l1 in list(found):
            for l2 in frontier:
                j = join_labels(l1, l2)
                if not is_trivial_system(j) and j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(found, key=lambda l: (len(labels_to_blocks(l)[0]), l))
