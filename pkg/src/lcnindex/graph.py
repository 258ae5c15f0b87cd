"""Rooted bipartite graphs: Dynkin diagrams, the pendant criterion for dual
principal graphs of local extensions, the triple-point distance filter, and
graph norms.
"""

from __future__ import annotations

import os
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .algnum import AlgReal, four_cos_sq

EVEN, ODD = "even", "odd"

COXETER = {"E6": 12, "E7": 18, "E8": 30}


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    parity: str

    @property
    def name(self) -> str:
        return self.id


@dataclass(frozen=True)
class BipartiteGraph:
    name: str
    vertices: tuple[Vertex, ...]
    root: str
    edges: tuple[tuple[str, str], ...]
    truncation: int | None = None

    def __post_init__(self):
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise GraphError(f"{self.name}: duplicate vertex ids")
        par = self.parity
        if self.root not in par:
            raise GraphError(f"{self.name}: root {self.root!r} is not a vertex")
        if par[self.root] != EVEN:
            raise GraphError(f"{self.name}: root must be even")
        for a, b in self.edges:
            if a not in par or b not in par:
                raise GraphError(f"{self.name}: edge ({a}, {b}) has unknown endpoint")
            if par[a] == par[b]:
                raise GraphError(f"{self.name}: edge ({a}, {b}) joins equal parities")
        dist = self.distances()
        if len(dist) != len(ids):
            raise GraphError(f"{self.name}: graph is not connected")
        for v, d in dist.items():
            if (d % 2 == 0) != (par[v] == EVEN):
                raise GraphError(f"{self.name}: parity of {v} disagrees with its distance")
            if self.truncation is not None and d > self.truncation:
                raise GraphError(f"{self.name}: vertex {v} lies beyond the truncation depth")

    @property
    def parity(self) -> dict[str, str]:
        return {v.id: v.parity for v in self.vertices}

    def adjacency(self) -> dict[str, Counter]:
        adj: dict[str, Counter] = {v.id: Counter() for v in self.vertices}
        for a, b in self.edges:
            adj[a][b] += 1
            adj[b][a] += 1
        return adj

    def degree(self, v: str) -> int:
        return sum(self.adjacency()[v].values())

    def distances(self) -> dict[str, int]:
        adj = self.adjacency()
        dist = {self.root: 0}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def is_complete_at(self, v: str, dist: dict[str, int] | None = None) -> bool:
        """True when every neighbor of ``v`` is known to be present."""
        if self.truncation is None:
            return True
        dist = dist if dist is not None else self.distances()
        return dist[v] < self.truncation

    # -- text format -------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"graph {self.name}"]
        for v in self.vertices:
            lines.append(f"vertex {v.id} {v.parity}" + (" root" if v.id == self.root else ""))
        for a, b in self.edges:
            lines.append(f"edge {a} {b}")
        if self.truncation is not None:
            lines.append(f"truncated {self.truncation}")
        return "\n".join(lines) + "\n"


def parse_graphs(text: str) -> list[BipartiteGraph]:
    """Parse one or more graphs in the line format; ``#`` starts a comment."""
    graphs = []
    cur = None

    def flush():
        if cur is not None:
            if cur["root"] is None:
                raise GraphError(f"{cur['name']}: no root vertex")
            graphs.append(
                BipartiteGraph(cur["name"], tuple(cur["vertices"]), cur["root"], tuple(cur["edges"]), cur["trunc"])
            )

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "graph" and len(parts) == 2:
            flush()
            cur = {"name": parts[1], "vertices": [], "root": None, "edges": [], "trunc": None}
        elif cur is None:
            raise GraphError(f"line {lineno}: expected 'graph <name>'")
        elif kw == "vertex" and len(parts) in (3, 4) and parts[2] in (EVEN, ODD):
            cur["vertices"].append(Vertex(parts[1], parts[2]))
            if len(parts) == 4:
                if parts[3] != "root" or cur["root"] is not None:
                    raise GraphError(f"line {lineno}: bad root marker")
                cur["root"] = parts[1]
        elif kw == "edge" and len(parts) == 3:
            cur["edges"].append((parts[1], parts[2]))
        elif kw == "truncated" and len(parts) == 2:
            cur["trunc"] = int(parts[1])
        else:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
    flush()
    return graphs


def parse_graph(text: str) -> BipartiteGraph:
    graphs = parse_graphs(text)
    if len(graphs) != 1:
        raise GraphError(f"expected one graph, found {len(graphs)}")
    return graphs[0]


def _from_edges(name: str, n: int, edges: Iterable[tuple[int, int]], truncation=None) -> BipartiteGraph:
    edges = [(f"v{a}", f"v{b}") for a, b in edges]
    # parity from BFS distance
    adj: dict[str, list[str]] = {f"v{i}": [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    dist = {"v0": 0}
    queue = deque(["v0"])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    verts = tuple(Vertex(f"v{i}", EVEN if dist[f"v{i}"] % 2 == 0 else ODD) for i in range(n))
    return BipartiteGraph(name, verts, "v0", tuple(edges), truncation)


def dynkin(family: str, n: int) -> BipartiteGraph:
    """Dynkin diagram rooted at an end vertex (end of the long arm for D, E)."""
    family = family.upper()
    if family == "A" and n >= 2:
        return _from_edges(f"A{n}", n, [(i, i + 1) for i in range(n - 1)])
    if family == "D" and n >= 4:
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return _from_edges(f"D{n}", n, edges)
    if family == "E" and n in (6, 7, 8):
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 4, n - 1)]
        return _from_edges(f"E{n}", n, edges)
    raise GraphError(f"no Dynkin diagram {family}{n}")


def a_infinity(depth: int = 9) -> BipartiteGraph:
    """Window of the half-infinite path: vertices at distance 0..depth."""
    if depth < 5:
        raise GraphError("A_infinity window needs depth >= 5")
    return _from_edges(f"Ainf{depth}", depth + 1, [(i, i + 1) for i in range(depth)], truncation=depth)


def parse_diagram_name(name: str) -> tuple[str, int]:
    s = name.strip().upper().replace("_", "")
    if len(s) < 2 or s[0] not in "ADE" or not s[1:].isdigit():
        raise GraphError(f"bad diagram name {name!r}")
    return s[0], int(s[1:])


# ---------------------------------------------------------------------------
# criteria


@dataclass(frozen=True)
class PendantResult:
    ok: bool
    witness: dict[str, str] | None
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class DistanceResult:
    triple_point_distance: int | None
    excluded: bool


@dataclass(frozen=True)
class GraphVerdict:
    pendant_ok: bool
    pendant_witness: dict[str, str] | None
    triple_point_distance: int | None
    corollary_excluded: bool

    @property
    def excluded(self) -> bool:
        return self.corollary_excluded or not self.pendant_ok

    def to_json(self) -> dict:
        return {
            "pendant_ok": self.pendant_ok,
            "pendant_witness": self.pendant_witness,
            "triple_point_distance": self.triple_point_distance,
            "corollary_excluded": self.corollary_excluded,
        }


def pendant_criterion(G: BipartiteGraph) -> PendantResult:
    """Every odd vertex needs an even neighbor whose only edge goes to it.

    On a truncated window only interior evidence counts: an odd vertex is
    reported as a violation only if it and all of its even neighbors have
    their full neighborhoods inside the window.
    """
    adj = G.adjacency()
    dist = G.distances()
    par = G.parity
    witness: dict[str, str] = {}
    violations = []
    for v in G.vertices:
        if v.parity != ODD:
            continue
        pend = sorted(w for w, mult in adj[v.id].items() if mult == 1 and sum(adj[w].values()) == 1)
        pend = [w for w in pend if G.is_complete_at(w, dist)]
        if pend:
            witness[v.id] = pend[0]
            continue
        decidable = G.is_complete_at(v.id, dist) and all(G.is_complete_at(w, dist) for w in adj[v.id])
        if decidable:
            violations.append(v.id)
    assert all(par[w] == EVEN for w in witness.values())
    if violations:
        return PendantResult(False, None, tuple(violations))
    return PendantResult(True, witness)


def corollary_filter(G: BipartiteGraph) -> DistanceResult:
    """Distance from the root to the nearest vertex of valency > 2; excluded when > 3."""
    dist = G.distances()
    adj = G.adjacency()
    cands = [dist[v] for v in dist if G.is_complete_at(v, dist) and sum(adj[v].values()) > 2]
    d = min(cands) if cands else None
    return DistanceResult(d, d is not None and d > 3)


def graph_verdict(G: BipartiteGraph) -> GraphVerdict:
    p = pendant_criterion(G)
    c = corollary_filter(G)
    return GraphVerdict(p.ok, p.witness, c.triple_point_distance, c.excluded)


def alpha_inequality_holds(k: Sequence[Sequence[int]], m: Sequence[int]) -> tuple[bool, int, dict[int, bool]]:
    """Check sum_tau (sum_b k[b][tau]^2) m_tau^2 <= sum_tau m_tau^2.

    Returns (holds, slack, forced) where ``forced[tau]`` says whether the
    unique-``b``-with-``k = 1`` conclusion holds for each tau with m_tau > 0.
    """
    K = np.asarray(k, dtype=object)
    if K.ndim != 2 or K.shape[1] != len(m):
        raise ValueError("k must be a (b, tau) matrix matching m")
    col = [sum(int(K[b, t]) ** 2 for b in range(K.shape[0])) for t in range(K.shape[1])]
    lhs = sum(c * mt * mt for c, mt in zip(col, m))
    rhs = sum(mt * mt for mt in m)
    forced = {}
    for t, mt in enumerate(m):
        if mt > 0:
            nz = [int(K[b, t]) for b in range(K.shape[0]) if K[b, t]]
            forced[t] = nz == [1]
    return lhs <= rhs, rhs - lhs, forced


def biadjacency(G: BipartiteGraph) -> tuple[list[str], list[str], np.ndarray]:
    """(odd ids, even ids, matrix k[b, tau] = number of edges b--tau)."""
    odd = [v.id for v in G.vertices if v.parity == ODD]
    even = [v.id for v in G.vertices if v.parity == EVEN]
    K = np.zeros((len(odd), len(even)), dtype=np.int64)
    oi = {v: i for i, v in enumerate(odd)}
    ei = {v: i for i, v in enumerate(even)}
    for a, b in G.edges:
        if a in oi:
            K[oi[a], ei[b]] += 1
        else:
            K[oi[b], ei[a]] += 1
    return odd, even, K


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class CertifiedInterval:
    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def identify_ade(G: BipartiteGraph) -> tuple[str, int] | None:
    """Return (family, rank) if G is a simply-laced A/D/E Dynkin diagram."""
    n = len(G.vertices)
    if len(G.edges) != n - 1 or len(set(map(frozenset, G.edges))) != len(G.edges):
        return None
    adj = G.adjacency()
    deg = {v: sum(c.values()) for v, c in adj.items()}
    if max(deg.values(), default=0) <= 2:
        return ("A", n)
    branch = [v for v, d in deg.items() if d >= 3]
    if len(branch) != 1 or deg[branch[0]] != 3:
        return None
    c = branch[0]
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while deg[cur] == 2:
            nxt = next(w for w in adj[cur] if w != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", n)
    return None


def coxeter_number(family: str, n: int) -> int:
    if family == "A":
        return n + 1
    if family == "D":
        return 2 * n - 2
    return COXETER[f"E{n}"]


def _collatz_wielandt(M: np.ndarray, x: np.ndarray) -> CertifiedInterval | None:
    xs = [Fraction(float(v)) for v in x]
    if any(v <= 0 for v in xs):
        return None
    ratios = []
    for i in range(M.shape[0]):
        s = sum(int(M[i, j]) * xs[j] for j in range(M.shape[1]) if M[i, j])
        ratios.append(s / xs[i])
    return CertifiedInterval(min(ratios), max(ratios))


def graph_norm_sq(G: BipartiteGraph, width=Fraction(1, 10**9)) -> AlgReal | CertifiedInterval:
    """Squared norm of the graph (the index for a principal graph).

    Exact for A-D-E diagrams via the Coxeter number; otherwise a certified
    Collatz-Wielandt interval for the Perron-Frobenius eigenvalue of the
    even-even block of the squared adjacency matrix.
    """
    if G.truncation is not None:
        raise GraphError("graph_norm_sq needs a finite, untruncated graph")
    ade = identify_ade(G)
    if ade is not None:
        h = coxeter_number(*ade)
        return AlgReal.rational(0) if h == 2 else four_cos_sq(h)
    _, _, K = biadjacency(G)
    M = K.T @ K
    vals, vecs = np.linalg.eigh(M.astype(float))
    x = np.abs(vecs[:, int(np.argmax(vals))])
    for _ in range(50):
        ci = _collatz_wielandt(M, x)
        if ci is not None and ci.width <= width:
            return ci
        # refine in extended precision
        with mpmath.workdps(40):
            y = [mpmath.mpf(float(v)) for v in x]
            for _ in range(200):
                z = [sum(int(M[i, j]) * y[j] for j in range(M.shape[1])) for i in range(M.shape[0])]
                s = max(z)
                y = [v / s for v in z]
            x = np.array([float(v) for v in y])
    raise GraphError(f"{G.name}: norm did not certify to width {width}")


# ---------------------------------------------------------------------------
# bundled Haagerup-range windows


def _data_text(name: str, data=None) -> str:
    if data is None and os.environ.get("LCNINDEX_DATA"):
        data = os.environ["LCNINDEX_DATA"]
    if data is not None:
        path = Path(data) / name
        if not path.exists():
            raise FileNotFoundError(str(path))
        return path.read_text(encoding="utf-8")
    return resources.files("lcnindex").joinpath("data", name).read_text(encoding="utf-8")


def haagerup_corpus(data=None) -> dict[str, BipartiteGraph]:
    return {g.name: g for g in parse_graphs(_data_text("haagerup.graphs", data))}


def haagerup_candidate(name: str, depth: int = 9, data=None) -> BipartiteGraph:
    if name in ("A-infinity", "Ainf"):
        return a_infinity(depth)
    corpus = haagerup_corpus(data)
    if name not in corpus:
        raise KeyError(f"unknown Haagerup-range candidate {name!r}")
    return corpus[name]
