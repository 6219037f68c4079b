"""Independent brute-force reference values for the exact-module unit tests.

Everything here is computed by direct summation over configurations (and
scipy's LP solver for transport); the printed numbers are frozen into
tests/unit/test_exact.cpp and tests/unit/test_transport.cpp.
"""
import itertools
import math

import numpy as np
from scipy.optimize import linprog


def configs(n):
    # bit i set <=> spin i is -1, matching the C++ indexing
    for bits in range(2 ** n):
        yield bits, np.array([-1 if (bits >> i) & 1 else 1 for i in range(n)])


def energy(x, s):
    return float(s @ x @ s)


def table(x, beta, variant):
    n = x.shape[0]
    rows = []
    for bits, s in configs(n):
        if variant == "bisection" and abs(s.sum()) > 1:
            continue
        rows.append((bits, s, energy(x, s)))
    logw = np.array([-beta * e for _, _, e in rows])
    mx = logw.max()
    w = np.exp(logw - mx)
    logz = mx + math.log(w.sum())
    p = w / w.sum()
    return rows, p, logz


def observables(x, beta, variant):
    n = x.shape[0]
    rows, p, logz = table(x, beta, variant)
    h = sum(pi * e for pi, (_, _, e) in zip(p, rows))
    m2 = sum(pi * (s.sum() / n) ** 2 for pi, (_, s, _) in zip(p, rows))
    mabs = sum(pi * abs(s.sum() / n) for pi, (_, s, _) in zip(p, rows))
    r2 = 0.0
    rabs = 0.0
    for pa, (_, sa, _) in zip(p, rows):
        for pb, (_, sb, _) in zip(p, rows):
            r = float(sa @ sb) / n
            r2 += pa * pb * r * r
            rabs += pa * pb * abs(r)
    return dict(logz=logz, H=h, m2=m2, mabs=mabs, R2=r2, Rabs=rabs)


def coupled(x1, x2, beta, variant, intervals):
    n = x1.shape[0]
    r1, p1, lz1 = table(x1, beta, variant)
    r2, p2, lz2 = table(x2, beta, variant)
    mass = 0.0
    for pa, (_, sa, _) in zip(p1, r1):
        for pb, (_, sb, _) in zip(p2, r2):
            k = int(sa @ sb)
            if any(a * n <= k <= b * n for a, b in intervals):
                mass += pa * pb
    return lz1 + lz2 + math.log(mass), mass


def sparse_matrix(n, edges):
    a = np.zeros((n, n))
    for i, j, m in edges:
        a[i, j] += m
    return a


def dense_instance(n):
    return np.array([[0.4 * math.sin(1.3 * i + 0.7 * j + 0.1) for j in range(n)] for i in range(n)])


def w2(p, q, n):
    m = 2 ** n
    cost = np.array([[4.0 * bin(a ^ b).count("1") / n for b in range(m)] for a in range(m)])
    a_eq = []
    b_eq = []
    for a in range(m):
        row = np.zeros((m, m)); row[a, :] = 1; a_eq.append(row.ravel()); b_eq.append(p[a])
    for b in range(m):
        row = np.zeros((m, m)); row[:, b] = 1; a_eq.append(row.ravel()); b_eq.append(q[b])
    res = linprog(cost.ravel(), A_eq=np.array(a_eq), b_eq=np.array(b_eq), bounds=(0, None),
                  method="highs")
    return math.sqrt(max(res.fun, 0.0))


def product(plus):
    n = len(plus)
    out = []
    for bits in range(2 ** n):
        v = 1.0
        for i in range(n):
            v *= (1 - plus[i]) if (bits >> i) & 1 else plus[i]
        out.append(v)
    return np.array(out)


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    xd = dense_instance(5)
    for variant in ("free", "bisection"):
        print("dense5", variant, {k: repr(v) for k, v in observables(xd, 0.8, variant).items()})
    sp_edges = [(0, 1, 1), (1, 2, 2), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 3), (0, 0, 1),
                (2, 5, 1), (1, 4, 1)]
    xs = sparse_matrix(6, sp_edges)
    for variant in ("free", "bisection"):
        print("sparse6", variant, {k: repr(v) for k, v in observables(xs, 0.9, variant).items()})
    sp2 = [(0, 1, 1), (1, 2, 1), (3, 4, 2), (5, 3, 1), (2, 3, 1), (0, 5, 1)]
    xs2 = sparse_matrix(6, sp2)
    for variant in ("free", "bisection"):
        lz, mass = coupled(xs, xs2, 1.1, variant, [(-1.0, -0.5), (0.5, 1.0)])
        print("coupled6", variant, repr(lz), repr(mass))
    print("w2 uniform->(+,+)", repr(w2(product([0.5, 0.5]), product([1.0, 1.0]), 2)))
    print("w2 prod3", repr(w2(product([0.2, 0.7, 0.9]), product([0.6, 0.1, 0.5]), 3)))
    p = np.array([0.1, 0.2, 0.3, 0.05, 0.05, 0.1, 0.15, 0.05])
    q = np.array([0.3, 0.0, 0.1, 0.2, 0.1, 0.1, 0.0, 0.2])
    print("w2 explicit3", repr(w2(p, q, 3)))
