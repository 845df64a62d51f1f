"""Independent oracles, computed from the raw data files only.

Nothing here imports the numerical engine: the pentagon is re-verified in
exact arithmetic (sympy), and the expected tube dimensions / center counts
are derived by direct counting over the fusion tables and group tables.
The frozen numbers asserted here are the same ones the library tests and
the acceptance suite check against.
"""

import json

import pytest
import sympy as sp

from gct import bundled_path


def _raw(name):
    with open(bundled_path(name)) as fh:
        return json.load(fh)


# exact values the bundled unitary F data is allowed to contain
_SQRT2 = sp.sqrt(2)
_PHI = (1 + sp.sqrt(5)) / 2
_EXACT_CANDIDATES = (
    sp.Integer(0), sp.Integer(1), sp.Integer(-1),
    1 / _SQRT2, -1 / _SQRT2,
    1 / _PHI, -1 / _PHI,
    1 / sp.sqrt(_PHI), -1 / sp.sqrt(_PHI),
)


def exactify(re, im):
    assert im == 0.0, "bundled F data is expected to be real"
    for cand in _EXACT_CANDIDATES:
        if abs(re - float(cand)) < 5e-13:
            return cand
    raise AssertionError(f"F entry {re} is not one of the known exact values")


def _exact_category(name):
    d = _raw(name)
    rank = d["rank"]
    N = {}
    for a, b, c, n in d["N"]:
        N[(a, b, c)] = n
    getn = lambda a, b, c: N.get((a, b, c), 0)
    F = {}
    for entry in d["F"]:
        mat = sp.Matrix([[exactify(*cell) for cell in row]
                         for row in entry["matrix"]])
        F[tuple(entry["abcd"])] = mat
    return rank, getn, F


def _left_channels(rank, getn, a, b, c, d):
    return [(e, 0, 0) for e in range(rank) if getn(a, b, e) and getn(e, c, d)]


def _right_channels(rank, getn, a, b, c, d):
    return [(f, 0, 0) for f in range(rank) if getn(b, c, f) and getn(a, f, d)]


def _fblock(rank, getn, F, a, b, c, d):
    lch = _left_channels(rank, getn, a, b, c, d)
    if (a, b, c, d) in F:
        return F[(a, b, c, d)], lch, _right_channels(rank, getn, a, b, c, d)
    return sp.eye(len(lch)), lch, _right_channels(rank, getn, a, b, c, d)


def _exact_pentagon_residual(rank, getn, F, a, b, c, d, t):
    """Port of the two recoupling routes, in exact scalars (multiplicity-free)."""
    B1 = [(x, y) for x in range(rank) if getn(a, b, x)
          for y in range(rank) if getn(x, c, y) and getn(y, d, t)]
    if not B1:
        return []
    B2 = [(v, s) for v in range(rank) if getn(b, c, v)
          for s in range(rank) if getn(a, v, s) and getn(s, d, t)]
    B3 = [(v, z) for v in range(rank) if getn(b, c, v)
          for z in range(rank) if getn(v, d, z) and getn(a, z, t)]
    B4 = [(w, z) for w in range(rank) if getn(c, d, w)
          for z in range(rank) if getn(b, w, z) and getn(a, z, t)]
    B5 = [(x, w) for x in range(rank) if getn(a, b, x)
          for w in range(rank) if getn(c, d, w) and getn(x, w, t)]
    i1 = {p: i for i, p in enumerate(B1)}
    i2 = {p: i for i, p in enumerate(B2)}
    i3 = {p: i for i, p in enumerate(B3)}
    i4 = {p: i for i, p in enumerate(B4)}
    i5 = {p: i for i, p in enumerate(B5)}

    m45 = sp.zeros(len(B5), len(B4))
    for w in range(rank):
        if not getn(c, d, w):
            continue
        fb, lch, rch = _fblock(rank, getn, F, a, b, w, t)
        for (x, _, _), row in zip(lch, range(len(lch))):
            for (z, _, _), col in zip(rch, range(len(rch))):
                m45[i5[(x, w)], i4[(w, z)]] += fb[row, col]
    m51 = sp.zeros(len(B1), len(B5))
    for x in range(rank):
        if not getn(a, b, x):
            continue
        fb, lch, rch = _fblock(rank, getn, F, x, c, d, t)
        for (y, _, _), row in zip(lch, range(len(lch))):
            for (w, _, _), col in zip(rch, range(len(rch))):
                m51[i1[(x, y)], i5[(x, w)]] += fb[row, col]
    m43 = sp.zeros(len(B3), len(B4))
    for z in range(rank):
        if not getn(a, z, t):
            continue
        fb, lch, rch = _fblock(rank, getn, F, b, c, d, z)
        for (v, _, _), row in zip(lch, range(len(lch))):
            for (w, _, _), col in zip(rch, range(len(rch))):
                m43[i3[(v, z)], i4[(w, z)]] += fb[row, col]
    m32 = sp.zeros(len(B2), len(B3))
    for v in range(rank):
        if not getn(b, c, v):
            continue
        fb, lch, rch = _fblock(rank, getn, F, a, v, d, t)
        for (s, _, _), row in zip(lch, range(len(lch))):
            for (z, _, _), col in zip(rch, range(len(rch))):
                m32[i2[(v, s)], i3[(v, z)]] += fb[row, col]
    m21 = sp.zeros(len(B1), len(B2))
    for s in range(rank):
        if not getn(s, d, t):
            continue
        fb, lch, rch = _fblock(rank, getn, F, a, b, c, s)
        for (x, _, _), row in zip(lch, range(len(lch))):
            for (v, _, _), col in zip(rch, range(len(rch))):
                m21[i1[(x, s)], i2[(v, s)]] += fb[row, col]

    diff = m51 * m45 - m21 * m32 * m43
    return [sp.simplify(v) for v in diff]


@pytest.mark.parametrize("name", ["ising", "fib"])
def test_pentagon_exact(name):
    rank, getn, F = _exact_category(name)
    # the exact route comparison only covers multiplicity-free data
    d = _raw(name)
    assert all(n == 1 for *_, n in d["N"])
    for a in range(rank):
        for b in range(rank):
            for c in range(rank):
                for dd in range(rank):
                    for t in range(rank):
                        diff = _exact_pentagon_residual(rank, getn, F,
                                                        a, b, c, dd, t)
                        assert all(v == 0 for v in diff), (a, b, c, dd, t)


@pytest.mark.parametrize("name", ["ising", "fib"])
def test_f_blocks_exactly_unitary(name):
    rank, getn, F = _exact_category(name)
    for key, mat in F.items():
        prod = sp.simplify(mat.H * mat)
        assert prod == sp.eye(mat.shape[1])


def test_ising_psi_sigma_psi_f_symbol_is_minus_one():
    """The one scalar that forces E(psi) = +-i on the odd-sector simples."""
    d = _raw("ising")
    labels = d["labels"]
    psi, sigma = labels.index("psi"), labels.index("sigma")
    entries = {tuple(e["abcd"]): e["matrix"] for e in d["F"]}
    mat = entries[(psi, sigma, psi, sigma)]
    assert mat == [[[-1.0, 0.0]]]
    # the loop-exchange constraint reads e^2 = f for this scalar, so the
    # admissible values of E(psi) are exactly the square roots of -1
    import numpy as np
    roots = np.roots([1, 0, -mat[0][0][0]])
    assert sorted(np.round(roots, 12).tolist(), key=lambda z: z.imag) == [-1j, 1j]


# ---------------------------------------------------------------------------
# counting oracles (raw tables only)


def tube_dim_oracle(raw, loops, outer, perm=None):
    """dim of one graded tube component by direct hom counting.

    Sums dim Hom(a x, x' b) = sum_c N[a,x,c] N[x',b,c] over outer labels
    a, b and loop labels x, with x' = perm[x] for a twisted component.
    """
    rank = raw["rank"]
    N = {}
    for a, b, c, n in raw["N"]:
        N[(a, b, c)] = n
    getn = lambda a, b, c: N.get((a, b, c), 0)
    total = 0
    for a in outer:
        for b in outer:
            for x in loops:
                xp = perm[x] if perm is not None else x
                total += sum(getn(a, x, c) * getn(xp, b, c)
                             for c in range(rank))
    return total


def test_tube_dims_by_counting():
    z2 = _raw("vec_z2")
    assert tube_dim_oracle(z2, [0, 1], [0, 1]) == 4

    fib = _raw("fib")
    assert tube_dim_oracle(fib, [0, 1], [0, 1]) == 7

    ising = _raw("ising")
    deg0 = [i for i, g in enumerate(ising["grading"]) if g == 0]
    deg1 = [i for i, g in enumerate(ising["grading"]) if g == 1]
    assert deg0 == [0, 1] and deg1 == [2]
    assert tube_dim_oracle(ising, deg0, deg0) == 4
    assert tube_dim_oracle(ising, deg0, deg1) == 2

    s3 = _raw("vec_s3")
    allsix = list(range(6))
    assert tube_dim_oracle(s3, allsix, allsix) == 36

    z3 = _raw("vec_z3")
    inv = z3["action"]["perm"]["i"]
    assert tube_dim_oracle(z3, [0, 1, 2], [0, 1, 2]) == 9
    assert tube_dim_oracle(z3, [0, 1, 2], [0, 1, 2], perm=inv) == 9


def _group_table_from_pointed(raw):
    """The fusion table of a pointed category, read as a group law."""
    rank = raw["rank"]
    table = [[None] * rank for _ in range(rank)]
    for a, b, c, n in raw["N"]:
        assert n == 1
        table[a][b] = c
    assert all(all(v is not None for v in row) for row in table)
    return table


def _classes(table):
    n = len(table)
    e = next(i for i in range(n) if all(table[i][j] == j for j in range(n)))
    inv = [next(j for j in range(n) if table[i][j] == e) for i in range(n)]
    seen, classes = set(), []
    for g in range(n):
        if g in seen:
            continue
        orbit = {table[h][table[g][inv[h]]] for h in range(n)}
        seen |= orbit
        classes.append(sorted(orbit))
    return classes


def _centralizer(table, g):
    n = len(table)
    return [h for h in range(n) if table[g][h] == table[h][g]]


def _subtable(table, subset):
    pos = {g: i for i, g in enumerate(subset)}
    return [[pos[table[a][b]] for b in subset] for a in subset]


def double_simple_count_oracle(table):
    """|Irr(Z(Vec_G))| = sum over conjugacy classes of #Irr(centralizer).

    #Irr of a finite group equals its number of conjugacy classes, which
    needs nothing but the multiplication table.
    """
    total = 0
    for cls in _classes(table):
        cent = _centralizer(table, cls[0])
        total += len(_classes(_subtable(table, cent)))
    return total


def test_center_counts_by_group_theory():
    assert double_simple_count_oracle(_group_table_from_pointed(_raw("vec_z2"))) == 4
    assert double_simple_count_oracle(_group_table_from_pointed(_raw("vec_z3"))) == 9
    assert double_simple_count_oracle(_group_table_from_pointed(_raw("vec_s3"))) == 8


def test_s3_count_splits_as_3_2_3():
    table = _group_table_from_pointed(_raw("vec_s3"))
    per_class = []
    for cls in _classes(table):
        cent = _centralizer(table, cls[0])
        per_class.append(len(_classes(_subtable(table, cent))))
    assert sorted(per_class) == [2, 3, 3]
    assert sum(per_class) == 8
