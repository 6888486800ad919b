"""Independent reference values for the C++ tests.

Everything here is recomputed from the definitions with Python fractions and
sympy, without reading the C++ sources. Run:

    python3 tests/oracle/oracles.py > tests/oracle/oracle_values.json

The numbers are then frozen into the doctest suites.
"""

import itertools
import json
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_laws(size, supports, n):
    """Laws on range(size) with a common denominator d <= n, support inside some allowed set."""
    found = set()
    for face in supports:
        for d in range(1, n + 1):
            for c in compositions(d, len(face)):
                w = [Fraction(0)] * size
                for v, k in zip(face, c):
                    w[v] = Fraction(k, d)
                found.add(tuple(w))
    return sorted(found)


class Structure:
    """Objects are named; each has a value list and maps to coarser objects."""

    def __init__(self):
        self.values = {}
        self.maps = {}  # (fine, coarse) -> dict value -> value
        self.terminal = "1"
        self.values["1"] = ["*"]

    def coarser(self, x):
        return [y for (a, y) in self.maps if a == x]

    def meet(self, y, z):
        common = [w for w in self.values if self.refines(w, y) and self.refines(w, z)]
        top = [w for w in common if all(self.refines(v, w) for v in common)]
        return top[0] if top else None

    def refines(self, a, b):
        return a == b or (a, b) in self.maps


def product_structure(names, sizes, faces):
    """Simplicial structure: one object per face, values are tuples."""
    s = Structure()
    for f in faces:
        key = "".join(f)
        s.values[key] = list(itertools.product(*[range(sizes[v]) for v in f]))
    for f in faces:
        for g in faces + [()]:
            if g != f and set(g) <= set(f):
                gk = "".join(g) if g else "1"
                idx = [f.index(v) for v in g]
                s.maps[("".join(f), gk)] = {val: (tuple(val[i] for i in idx) if g else "*") for val in s.values["".join(f)]}
    return s


def marginal(s, law, x, y):
    m = s.maps[(x, y)]
    out = [Fraction(0)] * len(s.values[y])
    for i, v in enumerate(s.values[x]):
        out[s.values[y].index(m[v])] += law[i]
    return tuple(out)


def z1_system(s, q, n, alpha):
    objs = [x for x in s.values if x != s.terminal]
    laws = {x: grid_laws(len(s.values[x]), q[x], n) for x in objs}
    col = {}
    for x in objs:
        for p in laws[x]:
            col[(x, p)] = len(col)
    rows = []
    for y in objs:
        for z in objs:
            w = s.meet(y, z)
            if w is None:
                continue
            for p in laws[w]:
                row = {}

                def add(obj, law, c):
                    if obj == s.terminal:
                        return
                    k = col[(obj, law)]
                    row[k] = row.get(k, 0) + c

                add(w, p, Fraction(1))
                pz = marginal(s, p, w, z) if w != z else p
                add(z, pz, Fraction(-1))
                for zi, zv in enumerate(s.values[z]):
                    mass = pz[zi]
                    if mass == 0:
                        continue
                    cond = [Fraction(0)] * len(p)
                    for i, v in enumerate(s.values[w]):
                        image = v if w == z else s.maps[(w, z)][v]
                        if image == zv:
                            cond[i] = p[i] / mass
                    cond = tuple(cond)
                    py = marginal(s, cond, w, y) if w != y else cond
                    add(y, py, -(mass ** alpha))
                rows.append(row)
    return len(col), rows


def exact_rank(cols, rows):
    dense = [[QQ(0)] * cols for _ in rows]
    for r, row in enumerate(rows):
        for c, v in row.items():
            dense[r][c] = QQ(v.numerator, v.denominator)
    if not dense:
        return 0
    return DomainMatrix(dense, (len(dense), cols), QQ).rank()


def primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, p))]


def xy_structure(q_xy):
    s = Structure()
    xs = ["x1", "x2", "x3", "x4"]
    ys = ["y1", "y2", "y3", "y4"]
    s.values["X"] = xs
    s.values["Y"] = ys
    s.values["XY"] = [(a, b) for a in xs for b in ys]
    s.maps[("X", "1")] = {v: "*" for v in xs}
    s.maps[("Y", "1")] = {v: "*" for v in ys}
    s.maps[("XY", "1")] = {v: "*" for v in s.values["XY"]}
    s.maps[("XY", "X")] = {v: v[0] for v in s.values["XY"]}
    s.maps[("XY", "Y")] = {v: v[1] for v in s.values["XY"]}
    cells = s.values["XY"]
    q = {
        "X": [[0, 1], [2, 3]],
        "Y": [[0, 1], [2, 3]],
        "XY": [[cells.index(c) for c in block] for block in q_xy],
    }
    return s, q


def block(xi, yi):
    return [("x%d" % i, "y%d" % j) for i in xi for j in yi]


def propagate(m):
    """Zero set of h in Q/Z, denominators <= m, under x -> -x and x -> 1/(x + k)."""
    seen = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for x in frontier:
            cands = [(-x) % 1]
            a, b = x.numerator, x.denominator
            for k in range(-(m // b) - 2, m // b + 3):
                v = a + k * b
                if v != 0 and abs(v) <= m:
                    cands.append(Fraction(b, v) % 1)
            for c in cands:
                if c.denominator <= m and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def farey(n):
    return sorted({Fraction(a, b) for b in range(1, n + 1) for a in range(0, b + 1)})


def propagation(n, max_factor=64):
    pts = farey(n)
    f = 1
    while f <= max_factor:
        zero = propagate(n * f)
        forced = [p for p in pts if (p % 1) in zero or p == 1 and Fraction(0) in zero]
        if len(forced) == len(pts):
            return {"grid_points": len(pts), "ambient": n * f}
        f *= 2
    return {"grid_points": len(pts), "ambient": 0}


def minimal_ambient(n):
    pts = farey(n)
    m = n
    while True:
        zero = propagate(m)
        if all((p % 1) in zero for p in pts):
            return m
        m += 1


def main():
    out = {}
    two = product_structure(["X", "Y"], {"X": 2, "Y": 2}, [("X",), ("Y",), ("X", "Y")])
    qfull = {x: [list(range(len(two.values[x])))] for x in two.values}
    tb = {}
    for n in (3, 4, 5):
        cols, rows = z1_system(two, qfull, n, 1)
        rank = exact_rank(cols, rows)
        tb[str(n)] = {"unknowns": cols, "rows": len(rows), "rank": rank, "z1": cols - rank,
                      "primes": len(primes_upto(n))}
    cols, rows = z1_system(two, qfull, 4, 2)
    tb["4_alpha2"] = {"unknowns": cols, "rows": len(rows), "rank": exact_rank(cols, rows)}
    out["two_binary_full"] = tb

    for name, q_xy in (("two_block_4x4", [block([1, 2], [1, 2]), block([3, 4], [3, 4])]),
                       ("diagonal_degenerate", [block([1, 2], [1, 2]), [("x3", "y3"), ("x4", "y4")]])):
        s, q = xy_structure(q_xy)
        vals = {}
        for n in (3, 5):
            cols, rows = z1_system(s, q, n, 1)
            rank = exact_rank(cols, rows)
            vals[str(n)] = {"unknowns": cols, "rows": len(rows), "rank": rank, "z1": cols - rank}
        out[name] = vals

    out["grid_law_counts"] = {
        "binary_N2": len(grid_laws(2, [[0, 1]], 2)),
        "binary_N3": len(grid_laws(2, [[0, 1]], 3)),
        "ternary_N4": len(grid_laws(3, [[0, 1, 2]], 4)),
        "quaternary_N3": len(grid_laws(4, [[0, 1, 2, 3]], 3)),
    }
    out["propagation"] = {"5": propagation(5), "20": propagation(20),
                          "minimal_5": minimal_ambient(5), "minimal_20": minimal_ambient(20)}
    out["farey"] = {"5": len(farey(5)), "12": len(farey(12)), "20": len(farey(20))}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
