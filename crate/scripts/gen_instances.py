#!/usr/bin/env python3
"""Regenerate the DIMACS clique instances under instances/.

The files describe the clique-oriented graphs of the DIMACS challenge
families that can be rebuilt from their published definitions (c-fat,
johnson, hamming, MANN_a9). Edge counts are checked by the test suite.
"""
import itertools
import math
import os
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "instances")


def write(name, n, edges, comment):
    edges = sorted((min(a, b), max(a, b)) for a, b in edges)
    path = os.path.join(OUT, name + ".clq")
    with open(path, "w") as f:
        f.write(f"c {name}\n")
        for line in comment:
            f.write(f"c {line}\n")
        f.write(f"p edge {n} {len(edges)}\n")
        for a, b in edges:
            f.write(f"e {a + 1} {b + 1}\n")
    print(f"{name}: n={n} m={len(edges)}", file=sys.stderr)


def cfat(n, c):
    k = int(n / (c * math.log(n)))
    part = [i % k for i in range(n)]
    edges = []
    for i, j in itertools.combinations(range(n), 2):
        d = abs(part[i] - part[j])
        if d <= 1 or d == k - 1:
            edges.append((i, j))
    write(f"c-fat{n}-{c}", n, edges,
          [f"{k} ring-arranged parts; edges inside a part and between neighbouring parts"])


def johnson(w_len, w, d):
    labels = list(itertools.combinations(range(w_len), w))
    edges = [(a, b) for a, b in itertools.combinations(range(len(labels)), 2)
             if 2 * (w - len(set(labels[a]) & set(labels[b]))) >= d]
    write(f"johnson{w_len}-{w}-{d}", len(labels), edges,
          [f"{w}-subsets of a {w_len}-set; edge iff Hamming distance >= {d}"])


def hamming(w_len, d):
    n = 1 << w_len
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2)
             if bin(a ^ b).count("1") >= d]
    write(f"hamming{w_len}-{d}", n, edges,
          [f"{w_len}-bit words; edge iff Hamming distance >= {d}"])


def mann_a9():
    # Steiner triple system on 9 points: the lines of the affine plane over Z3.
    points = [(x, y) for x in range(3) for y in range(3)]
    lines = set()
    for p, q in itertools.combinations(points, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        lines.add(tuple(sorted((points.index(p), points.index(q), points.index(r)))))
    lines = sorted(lines)
    assert len(lines) == 12
    # complement graph: one node per (triple, point) incidence forming a
    # triangle per triple, each joined to a node for its point.
    inc = [(t, v) for t, line in enumerate(lines) for v in line]
    n = len(inc) + 9
    point_node = {v: len(inc) + v for v in range(9)}
    non_edges = set()
    for a, b in itertools.combinations(range(len(inc)), 2):
        if inc[a][0] == inc[b][0]:
            non_edges.add((a, b))
    for a, (t, v) in enumerate(inc):
        non_edges.add((a, point_node[v]))
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if (a, b) not in non_edges]
    write("MANN_a9", n, edges, ["clique formulation of the Steiner triple covering instance A9"])


def main():
    os.makedirs(OUT, exist_ok=True)
    for n, c in [(200, 1), (200, 2), (200, 5), (500, 1), (500, 2), (500, 5), (500, 10)]:
        cfat(n, c)
    for args in [(8, 2, 4), (8, 4, 4), (16, 2, 4), (32, 2, 4)]:
        johnson(*args)
    for args in [(6, 2), (6, 4), (8, 2), (8, 4)]:
        hamming(*args)
    mann_a9()


if __name__ == "__main__":
    main()
