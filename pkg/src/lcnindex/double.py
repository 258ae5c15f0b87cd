"""Quantum-double systems: the double's fusion ring over labels (j, k), plus
the induction-restriction edges to the base system.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable
from pathlib import Path

import numpy as np

from .algnum import AlgReal
from .fusion import (
    CompletionError,
    FusionError,
    FusionRing,
    TensorProduct,
    complete_variants,
    extension_skeletons,
    su2_even,
    su2_ring,
    tensor_ring,
    verify_axioms,
)


class DoubleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DoubleSystem:
    name: str
    base: FusionRing
    ring: FusionRing
    edges: dict[tuple[int, int], int]
    # split pair (plus, minus) -> unsplit edge counts {l: count}
    split: dict[tuple[int, int], dict[int, int]] = field(default_factory=dict)
    source: str = ""

    @property
    def labels(self) -> tuple[str, ...]:
        return self.ring.objects

    def edge(self, beta: int, l: int) -> int:
        return self.edges.get((beta, l), 0)

    def restriction(self, beta: int) -> dict[int, int]:
        return {l: c for (b, l), c in self.edges.items() if b == beta and c}

    def check(self) -> dict[str, list]:
        """Exact check of the three double-system identities."""
        zero = AlgReal.rational(0)
        out: dict[str, list] = {"restriction-dimension": [], "split recovery": [], "global dimension": []}
        for beta in range(self.ring.rank):
            tot = sum((self.base.dims[l] * c for l, c in self.restriction(beta).items()), zero)
            if tot != self.ring.dims[beta]:
                out["restriction-dimension"].append(self.ring.objects[beta])
        for (p, m), unsplit in self.split.items():
            for l in range(self.base.rank):
                if self.edge(p, l) + self.edge(m, l) != unsplit.get(l, 0):
                    out["split recovery"].append((self.ring.objects[p], self.base.objects[l]))
        if self.ring.global_dim != self.base.global_dim * self.base.global_dim:
            out["global dimension"].append("sum d_beta^2 != (sum d_lambda^2)^2")
        return out

    def ok(self) -> bool:
        return not any(self.check().values())

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": self.source,
            "base": self.base.to_json(),
            "ring": self.ring.to_json(),
            "labels": list(self.labels),
            "edges": [[b, l, c] for (b, l), c in sorted(self.edges.items()) if c],
            "split": [[p, m, [[l, c] for l, c in sorted(u.items())]] for (p, m), u in sorted(self.split.items())],
        }

    @classmethod
    def from_json(cls, obj) -> "DoubleSystem":
        base = FusionRing.from_json(obj["base"], validate=False)
        ring = FusionRing.from_json(obj["ring"], validate=False)
        if list(obj.get("labels", ring.objects)) != list(ring.objects):
            raise DoubleError("labels block disagrees with ring objects")
        edges = {(int(b), int(l)): int(c) for b, l, c in obj["edges"]}
        split = {(int(p), int(m)): {int(l): int(c) for l, c in u} for p, m, u in obj.get("split", [])}
        D = cls(obj["name"], base, ring, edges, split, obj.get("source", ""))
        for label, r in (("base", base), ("ring", ring)):
            rep = verify_axioms(r)
            if not rep.ok:
                raise DoubleError(f"{D.name}: {label} ring invalid: {rep.failures()}")
        bad = {k: v for k, v in D.check().items() if v}
        if bad:
            raise DoubleError(f"{D.name}: double-system identities fail: {bad}")
        return D


def product_double(delta: FusionRing) -> DoubleSystem:
    """Doubling Delta x Delta with edges((j, k), l) = N_{jk}^l.

    Only meaningful for systems with a nondegenerate braiding (the A_2n and
    D_2n even parts); the construction itself accepts any ring.
    """
    ring = tensor_ring(delta, delta, name=f"{delta.name}^2")
    r = delta.rank
    edges = {}
    for j in range(r):
        for k in range(r):
            for l, c in delta.product(j, k):
                edges[(j * r + k, l)] = c
    return DoubleSystem(f"double({delta.name})", delta, ring, edges, source="product doubling")


def _label(j: int, k: int) -> str:
    return f"({j},{k})"


def _rep_key(n2: int):
    def key(jk):
        j, k = jk
        return (0 if 0 in (j, k) else 1, j + k, j, k)

    return key


def _split_partitions(base: FusionRing, unsplit: dict[int, int], target: AlgReal) -> list[dict[int, int]]:
    """Sub-multisets of the unsplit restriction with dimension ``target``."""
    items = sorted(unsplit.items())
    ranges = [range(c + 1) for _, c in items]
    fd = [float(base.dims[l]) for l, _ in items]
    ft = float(target)
    out = []
    for choice in itertools.product(*ranges):
        approx = sum(f * x for f, x in zip(fd, choice))
        if abs(approx - ft) > 1e-9:
            continue
        exact = sum((base.dims[l] * x for (l, _), x in zip(items, choice)), AlgReal.rational(0))
        if exact == target:
            out.append({l: x for (l, _), x in zip(items, choice) if x})
    return out


def restriction_failures(ring: FusionRing, base: FusionRing, E: np.ndarray) -> list[tuple[int, int]]:
    """Pairs (beta, gamma) where restriction fails to be multiplicative.

    ``E[beta, l]`` is the edge count; restriction is a ring homomorphism
    when sum_delta N_{beta gamma}^delta E[delta] equals E[beta] E[gamma]
    computed with the base fusion rules.
    """
    lhs = np.einsum("bgd,dl->bgl", ring.tensor, E)
    rhs = np.einsum("bp,gq,pql->bgl", E, E, base.tensor)
    return [tuple(map(int, x)) for x in np.argwhere((lhs != rhs).any(axis=2))]


def restriction_constraints(base: FusionRing, E: np.ndarray, rows: Iterable[int]):
    """Linear equations on structure constants saying that restriction is
    multiplicative on products beta x gamma, beta in ``rows``:
    sum_delta N_{beta gamma}^delta E[delta, l] = (E[beta] E[gamma])_l.

    Generated lazily so that an inconsistent system is abandoned early.
    """
    r = E.shape[0]
    rows = list(rows)
    rhs = np.einsum("bp,gq,pql->bgl", E[rows], E, base.tensor)
    cols = [[(int(d), int(E[d, l])) for d in np.flatnonzero(E[:, l])] for l in range(base.rank)]
    for t, b in enumerate(rows):
        for g in range(r):
            for l in range(base.rank):
                yield {(b, g, d): c for d, c in cols[l]}, int(rhs[t, g, l])


def a_odd_double_solutions(n: int) -> list[DoubleSystem]:
    """Quantum double of the even part of SU(2)_{2n} (the A_{2n+1} case).

    Objects are orbits (j, k) ~ (2n-j, 2n-k), j + k even, with the fixed
    point (n, n) split into (n,n)+ and (n,n)-; (n,n)+ is the half whose
    restriction contains the unit.  The fixed-point edges are split into
    two halves of equal dimension in every possible way; each split adds
    the equations making restriction a ring homomorphism, and the ring
    completion runs once over all of these alternatives.
    """
    if n < 1:
        raise DoubleError("n must be >= 1")
    k2 = 2 * n
    su = su2_ring(k2)
    base = su2_even(k2)
    bpos = {int(name): i for i, name in enumerate(base.objects)}
    parent = TensorProduct(su, su, name=f"SU(2)_{k2}^2")
    m = k2 + 1
    local = [j * m + k for j in range(m) for k in range(m) if (j + k) % 2 == 0]
    J = k2 * m + k2

    def unsplit_restriction(j, k):
        return {bpos[l]: c for l, c in su.product(j, k)}

    fixed_unsplit = unsplit_restriction(n, n)
    half = su.dims[n] * su.dims[n] * Fraction(1, 2)
    partitions = [p for p in _split_partitions(base, fixed_unsplit, half) if p.get(bpos[0], 0)]
    plus_name, minus_name = f"({n},{n})+", f"({n},{n})-"
    key = _rep_key(k2)
    skeletons = extension_skeletons(
        parent,
        J,
        local,
        name=f"double(A{2 * n + 1})",
        rep_name=lambda a: _label(a // m, a % m),
        split_names=lambda a: (plus_name, minus_name),
        prefer=lambda a: key((a // m, a % m)),
    )
    results: list[DoubleSystem] = []
    for P in skeletons:
        p, q = P.objects.index(plus_name), P.objects.index(minus_name)
        E0 = np.zeros((len(P.objects), base.rank), dtype=np.int64)
        for b, name in enumerate(P.objects):
            if b not in (p, q):
                j, k = map(int, name.strip("()").split(","))
                for l, c in unsplit_restriction(j, k).items():
                    E0[b, l] = c
        tables = []
        for plus in partitions:
            for hp, hm in ((p, q), (q, p)):
                E = E0.copy()
                for l, c in fixed_unsplit.items():
                    E[hp, l] = plus.get(l, 0)
                    E[hm, l] = c - plus.get(l, 0)
                tables.append((hp, E))
        variants = [restriction_constraints(base, E, (p, q)) for _, E in tables]
        for idx, ring in complete_variants(P, variants):
            hp, E = tables[idx]
            if restriction_failures(ring, base, E):
                continue
            R = ring if hp == p else _swap_objects(ring, p, q)
            if hp != p:
                E = E.copy()
                E[[p, q]] = E[[q, p]]
            edges = {(b, l): int(E[b, l]) for b in range(R.rank) for l in range(base.rank) if E[b, l]}
            D = DoubleSystem(
                f"double(A{2 * n + 1})",
                base,
                R,
                edges,
                {(p, q): dict(fixed_unsplit)},
                source="Z/2 orbit construction on SU(2)_2n x SU(2)_2n",
            )
            if not any(_same_double(D, other) for other in results):
                results.append(D)
    return results


def _swap_objects(ring: FusionRing, p: int, q: int) -> FusionRing:
    """Same ring with the labels of objects p and q exchanged."""
    perm = list(range(ring.rank))
    perm[p], perm[q] = q, p
    N = {(perm[i], perm[j], perm[k]): v for (i, j, k), v in ring.N.items()}
    dual = [0] * ring.rank
    for i in range(ring.rank):
        dual[perm[i]] = perm[ring.dual[i]]
    dims = list(ring.dims)
    dims[p], dims[q] = dims[q], dims[p]
    return FusionRing(ring.name, ring.objects, perm[ring.unit], tuple(dual), N, tuple(dims))


def _same_double(a: DoubleSystem, b: DoubleSystem) -> bool:
    return dict(a.ring.N) == dict(b.ring.N) and a.edges == b.edges


@lru_cache(maxsize=None)
def a_odd_double(n: int) -> DoubleSystem:
    sols = a_odd_double_solutions(n)
    if len(sols) != 1:
        raise CompletionError(f"double of A{2 * n + 1}: {len(sols)} completions", sols)
    return sols[0]


# ---------------------------------------------------------------------------
# bundled data


DATA_ENV = "LCNINDEX_DATA"


def data_dir(override: str | Path | None = None) -> Path:
    import os

    if override:
        return Path(override)
    if os.environ.get(DATA_ENV):
        return Path(os.environ[DATA_ENV])
    return Path(str(resources.files("lcnindex").joinpath("data")))


def load_double(path: str | Path) -> DoubleSystem:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    with path.open(encoding="utf-8") as fh:
        return DoubleSystem.from_json(json.load(fh))


@lru_cache(maxsize=None)
def _load_cached(path: str) -> DoubleSystem:
    return load_double(path)


def bundled_double(name: str, data: str | Path | None = None) -> DoubleSystem:
    """``E6`` or ``E8`` double system from the data directory."""
    fname = {"E6": "e6_double.json", "E8": "e8_double.json"}.get(name.upper())
    if fname is None:
        raise DoubleError(f"no bundled double for {name!r}")
    D = _load_cached(str(data_dir(data) / fname))
    if name.upper() == "E8":
        forced = dimension_matches(D, "2")
        if forced != ["(2,0)"]:
            raise DoubleError(f"E8 data: objects of the dimension of 2 are {forced}, expected only (2,0)")
    return D


def dimension_matches(D: DoubleSystem, obj: str) -> list[str]:
    """Double objects whose dimension equals that of the base object."""
    d = D.base.dims[D.base.index(obj)]
    return [D.ring.objects[b] for b in range(D.ring.rank) if D.ring.dims[b] == d]


__all__ = [
    "DoubleSystem",
    "DoubleError",
    "product_double",
    "a_odd_double",
    "a_odd_double_solutions",
    "load_double",
    "bundled_double",
    "dimension_matches",
    "FusionError",
]
