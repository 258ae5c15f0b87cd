"""Generate the bundled E6 and E8 double-system data files.

The even parts of E6 and E8 are the fusion rings read off the principal
graphs.  Their doubles are built as local modules of a Z/2 boson in a
product of two known modular categories:

* E6: SU(2)_10 x SO(5)_1 (reversed), boson (10, 2); SO(5)_1 has the fusion
  rules of SU(2)_2, labels 0, 1, 2 = vacuum, spinor, vector.
* E8: SU(2)_28 x (G2)_1 (reversed), boson (28, 0); (G2)_1 has Fibonacci
  fusion rules, labels 0, 1 = vacuum, tau.

Split structure constants come from the associativity completion.  The
restriction edges are the integer matrices E that make restriction a ring
homomorphism preserving dimensions and duals, satisfy the adjunction
identity sum_b E[b, l] E[b, m] = sum_n N(n l n*, m), and put the unit only
under bosons.  Every surviving candidate is written; the first is used.

Run from the repository root:  python3 tools/gen_e_doubles.py
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from lcnindex.algnum import AlgReal
from lcnindex.double import DoubleSystem
from lcnindex.fusion import (
    FusionRing,
    TensorProduct,
    complete_by_associativity,
    extension_skeletons,
    fibonacci,
    find_isomorphism,
    su2_ring,
    verify_axioms,
)
from lcnindex.graph import biadjacency, dynkin

DATA = Path(__file__).resolve().parents[1] / "src" / "lcnindex" / "data"


def graph_even_ring(family: str, n: int) -> FusionRing:
    """Fusion ring on the even vertices of a Dynkin diagram.

    The generator x (vertex v2) multiplies by K^T K - 1, K the odd-even
    incidence matrix; every other even vertex appears as a new summand of
    some product with x, which fixes its multiplication matrix.
    """
    G = dynkin(family, n)
    _, even, K = biadjacency(G)
    r = len(even)
    Lx = K.T @ K - np.eye(r, dtype=np.int64)
    unit = even.index(G.root)
    gen = even.index("v2")
    mats: dict[int, np.ndarray] = {unit: np.eye(r, dtype=np.int64), gen: Lx}
    frontier = [gen]
    while frontier:
        nxt = []
        for v in frontier:
            prod = Lx @ mats[v]  # matrix of x * v
            col = prod[:, unit]  # x * v expressed on the basis
            new = [w for w in range(r) if col[w] and w not in mats]
            if len(new) > 1:
                raise RuntimeError("more than one new vertex at a step")
            if new:
                w = new[0]
                rest = prod - sum(int(col[u]) * mats[u] for u in mats)
                if np.any(rest % col[w]):
                    raise RuntimeError("non-integral matrix")
                mats[w] = rest // col[w]
                nxt.append(w)
        frontier = nxt
    if len(mats) != r:
        raise RuntimeError("x does not generate the even part")
    N = {}
    for i in range(r):
        for j in range(r):
            for k in range(r):
                v = int((mats[i] @ mats[j])[k, unit])
                if v < 0:
                    raise RuntimeError("negative structure constant")
                if v:
                    N[(i, j, k)] = v
    names = []
    for v in even:
        idx = int(v[1:])
        names.append("0" if v == G.root else "2" if v == "v2" else f"e{idx}")
    ring = FusionRing.build(f"{family}{n}_even", names, N, unit=unit, max_conductor=60)
    rep = verify_axioms(ring)
    if not rep.ok:
        raise RuntimeError(rep.failures())
    return ring


def conformal_weight(j: int, k: int) -> Fraction:
    return Fraction(j * (j + 2), 4 * (k + 2))


def double_rings(parent: TensorProduct, J: int, local, name, rep_name, split_names, prefer):
    rings = []
    for P in extension_skeletons(
        parent, J, local, name=name, rep_name=rep_name, split_names=split_names, prefer=prefer
    ):
        rings.extend(complete_by_associativity(P))
    unique = []
    for R in rings:
        if not any(find_isomorphism(R, S) is not None for S in unique):
            unique.append(R)
    return unique


def row_candidates(base: FusionRing, target: AlgReal) -> list[tuple[int, ...]]:
    dims = [float(d) for d in base.dims]
    t = float(target)
    out = []

    def rec(l, acc, rem):
        if l == base.rank:
            if abs(rem) < 1e-9:
                vec = tuple(acc)
                exact = sum((base.dims[i] * c for i, c in enumerate(vec)), AlgReal.rational(0))
                if exact == target:
                    out.append(vec)
            return
        c = 0
        while c * dims[l] <= rem + 1e-9:
            rec(l + 1, acc + [c], rem - c * dims[l])
            c += 1

    rec(0, [], t)
    return out


def adjunction_target(base: FusionRing) -> np.ndarray:
    """A[l, m] = multiplicity of m in sum_n n l n*."""
    b = base.rank
    A = np.zeros((b, b), dtype=np.int64)
    T = base.tensor
    for l in range(b):
        for nu in range(b):
            left = T[nu, l]  # nu * l as a vector
            vec = left @ T[:, base.dual[nu], :]
            A[l] += vec
    return A


def edge_solutions(ring: FusionRing, base: FusionRing, boson: list[bool]) -> list[np.ndarray]:
    r, b = ring.rank, base.rank
    A = adjunction_target(base)
    cands = []
    for beta in range(r):
        rows = row_candidates(base, ring.dims[beta])
        if beta == ring.unit:
            rows = [v for v in rows if v == tuple(int(l == base.unit) for l in range(b))]
        if not boson[beta]:
            rows = [v for v in rows if v[base.unit] == 0]
        cands.append(rows)
    order = sorted(range(r), key=lambda x: (len(cands[x]), x))
    E = np.zeros((r, b), dtype=np.int64)
    gram = np.zeros((b, b), dtype=np.int64)
    sols = []
    Tb = base.tensor
    Tr = ring.tensor

    def rec(t):
        if t == r:
            if not np.array_equal(gram, A):
                return
            lhs = np.einsum("bgd,dl->bgl", Tr, E)
            rhs = np.einsum("bp,gq,pql->bgl", E, E, Tb)
            if np.array_equal(lhs, rhs):
                dual_ok = all(
                    E[ring.dual[x], base.dual[l]] == E[x, l] for x in range(r) for l in range(b)
                )
                if dual_ok:
                    sols.append(E.copy())
            return
        beta = order[t]
        for row in cands[beta]:
            v = np.array(row, dtype=np.int64)
            g2 = gram + np.outer(v, v)
            if np.any(g2 > A):
                continue
            E[beta] = v
            gram[:] = g2
            rec(t + 1)
            gram[:] = g2 - np.outer(v, v)
            E[beta] = 0

    rec(0)
    return sols


def build(case: str) -> tuple[DoubleSystem, int]:
    if case == "E6":
        base = graph_even_ring("E", 6)
        k, other = 10, su2_ring(2)
        m = other.rank
        parent = TensorProduct(su2_ring(k), other, name="SU(2)_10 x SO(5)_1")
        J = k * m + 2

        def local_ok(j, x):
            return (j % 2 == 0 and x in (0, 2)) or (j % 2 == 1 and x == 1)

        other_h = [Fraction(0), Fraction(5, 16), Fraction(1, 2)]
    else:
        base = graph_even_ring("E", 8)
        k, other = 28, fibonacci()
        m = other.rank
        parent = TensorProduct(su2_ring(k), other, name="SU(2)_28 x (G2)_1")
        J = k * m + 0

        def local_ok(j, x):
            return j % 2 == 0

        other_h = [Fraction(0), Fraction(2, 5)]
    local = [j * m + x for j in range(k + 1) for x in range(m) if local_ok(j, x)]

    def label(a):
        return f"({a // m},{a % m})"

    rings = double_rings(
        parent,
        J,
        local,
        name=f"double({case})",
        rep_name=label,
        split_names=lambda a: (label(a) + "_1", label(a) + "_2"),
        prefer=lambda a: (a % m, a // m),
    )
    if not rings:
        raise RuntimeError("no completion of the double ring")
    found = []
    for ring in rings:
        boson = []
        for name in ring.objects:
            j, x = map(int, name.split(")")[0].strip("(").split(","))
            h = conformal_weight(j, k) - other_h[x]
            boson.append(h.denominator == 1)
        for E in edge_solutions(ring, base, boson):
            found.append((ring, E))
    if not found:
        raise RuntimeError("no restriction edges")
    ring, E = found[0]
    split = {}
    for i, name in enumerate(ring.objects):
        if name.endswith("_1"):
            j = ring.index(name[:-2] + "_2")
            split[(i, j)] = {int(l): int(E[i, l] + E[j, l]) for l in range(base.rank) if E[i, l] + E[j, l]}
    edges = {(b, l): int(E[b, l]) for b in range(ring.rank) for l in range(base.rank) if E[b, l]}
    source = (
        f"generated by tools/gen_e_doubles.py: local modules of the boson {label(J)} in {parent.name} "
        f"(second factor reversed); split constants by associativity completion "
        f"({len(rings)} ring(s) up to isomorphism); restriction edges from the ring-homomorphism, "
        f"dimension, duality, adjunction and boson constraints ({len(found)} solution(s), first kept)"
    )
    D = DoubleSystem(f"double({case})", base, ring, edges, split, source)
    bad = {key: v for key, v in D.check().items() if v}
    if bad:
        raise RuntimeError(bad)
    return D, len(found)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DATA)
    ap.add_argument("cases", nargs="*", default=["E6", "E8"])
    args = ap.parse_args(argv)
    for case in args.cases:
        D, count = build(case)
        path = args.out / f"{case.lower()}_double.json"
        path.write_text(json.dumps(D.to_json(), indent=1) + "\n", encoding="utf-8")
        print(f"{case}: {D.ring.rank} objects, {count} edge solution(s) -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
