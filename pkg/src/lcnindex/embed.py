"""Counting braidings as embeddings of a fusion system into its double.

An embedding of the base system into a double system sends each base
object lambda to a double object phi(lambda) with the same dimension whose
restriction contains lambda, is injective, fixes the unit, and preserves
every structure constant among the images.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .double import DoubleSystem, a_odd_double, bundled_double, data_dir, product_double
from .fusion import FusionRing, d2n_even_ring, su2_even
from .graph import parse_diagram_name


class EmbeddingError(ValueError):
    pass


DEFAULT_LIMIT = 25


@dataclass
class EmbeddingReport:
    diagram: str
    embeddings: list[dict[str, str]]
    pruning_log: list[dict] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.embeddings)

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram,
            "count": self.count,
            "embeddings": self.embeddings,
            "pruning_log": self.pruning_log,
        }

    @classmethod
    def from_json(cls, obj) -> "EmbeddingReport":
        rep = cls(obj["diagram"], [dict(e) for e in obj["embeddings"]], list(obj.get("pruning_log", [])))
        if rep.count != obj["count"]:
            raise EmbeddingError("count disagrees with the embedding list")
        return rep

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def _base_index(delta: FusionRing, obj) -> int:
    if isinstance(obj, str):
        return delta.index(obj)
    if not 0 <= int(obj) < delta.rank:
        raise EmbeddingError(f"{obj!r} is not an object of {delta.name}")
    return int(obj)


def _same_ring(a: FusionRing, b: FusionRing) -> bool:
    return a.objects == b.objects and a.unit == b.unit and dict(a.N) == dict(b.N)


def _dimension_matches(delta: FusionRing, D: DoubleSystem, lam: int) -> list[int]:
    d = delta.dims[lam]
    near = np.flatnonzero(np.abs(D.ring.float_dims - delta.float_dims[lam]) < 1e-9)
    return [int(b) for b in near if D.ring.dims[b] == d]


def candidate_images(delta: FusionRing, D: DoubleSystem, generator) -> list[str]:
    """Double objects with the generator's dimension whose restriction
    contains the generator, in the double's object order."""
    lam = _base_index(delta, generator)
    return [D.ring.objects[b] for b in _dimension_matches(delta, D, lam) if D.edge(b, lam) >= 1]


def verify_embedding(delta: FusionRing, D: DoubleSystem, phi: dict[int, int]) -> list[str]:
    """Independent check of every embedding condition; returns failures."""
    out = []
    R = D.ring
    if sorted(phi) != list(range(delta.rank)):
        out.append("map is not defined on every base object")
        return out
    if phi[delta.unit] != R.unit:
        out.append("unit not sent to unit")
    if len(set(phi.values())) != len(phi):
        out.append("map is not injective")
    for lam, beta in phi.items():
        if R.dims[beta] != delta.dims[lam]:
            out.append(f"dimension of {R.objects[beta]} differs from {delta.objects[lam]}")
        if D.edge(beta, lam) < 1:
            out.append(f"{R.objects[beta]} does not restrict to {delta.objects[lam]}")
    for i in range(delta.rank):
        for j in range(delta.rank):
            for k in range(delta.rank):
                if R.nij(phi[i], phi[j], phi[k]) != delta.nij(i, j, k):
                    out.append(f"N_{{{delta.objects[i]},{delta.objects[j]}}}^{delta.objects[k]} not preserved")
    return out


def generator_of(delta: FusionRing) -> int | None:
    """Object "2" when present, else the first non-unit object."""
    if "2" in delta.objects:
        return delta.index("2")
    return next((i for i in range(delta.rank) if i != delta.unit), None)


def _product_text(R: FusionRing, a: int, b: int) -> str:
    return "+".join(R.objects[c] if v == 1 else f"{v}{R.objects[c]}" for c, v in R.product(a, b)) or "0"


def count_embeddings(delta: FusionRing, D: DoubleSystem, *, diagram: str | None = None) -> EmbeddingReport:
    """All embeddings of ``delta`` into ``D``, found by exhaustive backtracking."""
    if not _same_ring(delta, D.base):
        raise EmbeddingError(f"{D.name} is not a double of {delta.name}")
    R = D.ring
    r = delta.rank
    log: list[dict] = []
    cands: dict[int, list[int]] = {}
    for lam in range(r):
        dim_ok = _dimension_matches(delta, D, lam)
        keep = [b for b in dim_ok if D.edge(b, lam) >= 1]
        if lam == delta.unit:
            keep = [b for b in keep if b == R.unit]
        cands[lam] = keep
        log.append(
            {
                "object": delta.objects[lam],
                "dimension_matches": [R.objects[b] for b in dim_ok],
                "no_edge": [R.objects[b] for b in dim_ok if D.edge(b, lam) < 1],
                "candidates": [R.objects[b] for b in keep],
            }
        )
    order = sorted(range(r), key=lambda lam: (len(cands[lam]), -float(delta.dims[lam]), lam))
    phi: dict[int, int] = {}
    found: list[dict[int, int]] = []

    def clash(lam: int) -> str | None:
        # compare every constant whose three labels are mapped and involve lam
        for a in phi:
            for b in phi:
                for x, y, z in ((lam, a, b), (a, lam, b), (a, b, lam)):
                    if R.nij(phi[x], phi[y], phi[z]) != delta.nij(x, y, z):
                        return (
                            f"N_{{{delta.objects[x]},{delta.objects[y]}}}^{delta.objects[z]} = "
                            f"{delta.nij(x, y, z)} but {R.objects[phi[x]]} x {R.objects[phi[y]]} = "
                            f"{_product_text(R, phi[x], phi[y])}"
                        )
        return None

    def rec(t: int):
        if t == r:
            found.append(dict(phi))
            return
        lam = order[t]
        used = set(phi.values())
        for beta in cands[lam]:
            if beta in used:
                continue
            phi[lam] = beta
            if clash(lam) is None:
                rec(t + 1)
            del phi[lam]

    def dead_end(lead: int) -> str:
        # first object left without a consistent image once lead is fixed
        rest = [lam for lam in order if lam not in phi]
        reasons: list[str] = []

        def walk(t: int) -> bool:
            if t == len(rest):
                return True
            lam = rest[t]
            used = set(phi.values())
            texts = []
            for beta in cands[lam]:
                if beta in used:
                    texts.append(f"{R.objects[beta]} already used")
                    continue
                phi[lam] = beta
                why = clash(lam)
                if why is None and walk(t + 1):
                    del phi[lam]
                    return True
                if why is not None:
                    texts.append(why)
                del phi[lam]
            if not reasons:
                reasons.append(
                    f"no image for {delta.objects[lam]}: " + ("; ".join(texts) if texts else "no candidates")
                )
            return False

        walk(0)
        return reasons[0] if reasons else "no consistent images for the remaining objects"

    rec(0)
    # elimination record for the generator's candidates
    lead = generator_of(delta)
    if lead is not None:
        entry = log[lead]
        entry["search"] = []
        for beta in cands[lead]:
            hits = sum(1 for emb in found if emb[lead] == beta)
            item = {"image": R.objects[beta], "embeddings": hits}
            if not hits:
                phi.clear()
                phi[delta.unit] = R.unit
                phi[lead] = beta
                item["eliminated_by"] = clash(lead) or dead_end(lead)
            entry["search"].append(item)
        phi.clear()
    embeddings = []
    for emb in found:
        bad = verify_embedding(delta, D, emb)
        if bad:
            raise EmbeddingError(f"search produced an invalid embedding: {bad[:3]}")
        embeddings.append({delta.objects[lam]: R.objects[emb[lam]] for lam in range(r)})
    embeddings.sort(key=lambda e: [R.index(e[o]) for o in delta.objects])
    return EmbeddingReport(diagram or delta.name, embeddings, log)


# ---------------------------------------------------------------------------
# the braiding-count table


def _normalize(diagram: str) -> tuple[str, int]:
    family, n = parse_diagram_name(diagram)
    return family, n


def double_for(diagram: str, data: str | None = None, limit: int = DEFAULT_LIMIT) -> DoubleSystem:
    """The double system used to count braidings on the even part of the
    given Dynkin diagram."""
    family, n = _normalize(diagram)
    # only the bundled cases read files; resolve the directory before caching
    where = str(data_dir(data)) if family == "E" else None
    return _double_for(family, n, where, limit)


@lru_cache(maxsize=None)
def _double_for(family: str, n: int, data: str | None, limit: int) -> DoubleSystem:
    if family == "A":
        if n < 2 or n > limit:
            raise EmbeddingError(f"A_{n} outside the supported range 2..{limit}")
        if n % 2 == 0:
            return product_double(su2_even(n - 1))
        return a_odd_double((n - 1) // 2)
    if family == "D":
        if n % 2 or n < 4 or n > limit:
            raise EmbeddingError(f"D_{n}: need an even subscript in 4..{limit}")
        return product_double(d2n_even_ring(n // 2))
    if family == "E" and n in (6, 8):
        return bundled_double(f"E{n}", data)
    raise EmbeddingError(f"no braiding count for {family}{n}")


def braiding_report(diagram: str, data: str | None = None, limit: int = DEFAULT_LIMIT) -> EmbeddingReport:
    family, n = _normalize(diagram)
    D = double_for(f"{family}{n}", None if data is None else str(data), limit)
    return count_embeddings(D.base, D, diagram=f"{family}{n}")


def braiding_count(diagram: str, data: str | None = None, limit: int = DEFAULT_LIMIT) -> int:
    return braiding_report(diagram, data, limit).count


TABLE1_COLUMNS = ("A2", "A5", "otherA", "D4", "D6", "otherD", "E6", "E8")
TABLE1_EXPECTED = {"A2": 1, "A5": 3, "otherA": 2, "D4": 3, "D6": 4, "otherD": 2, "E6": 0, "E8": 0}


def table1_diagrams(limit: int = DEFAULT_LIMIT) -> dict[str, list[str]]:
    """Diagrams grouped by braiding-count table column."""
    return {
        "A2": ["A2"],
        "A5": ["A5"],
        "otherA": [f"A{n}" for n in range(3, limit + 1) if n != 5],
        "D4": ["D4"],
        "D6": ["D6"],
        "otherD": [f"D{2 * n}" for n in range(4, limit // 2 + 1)],
        "E6": ["E6"],
        "E8": ["E8"],
    }


__all__ = [
    "EmbeddingReport",
    "EmbeddingError",
    "candidate_images",
    "count_embeddings",
    "verify_embedding",
    "double_for",
    "braiding_report",
    "braiding_count",
    "table1_diagrams",
    "TABLE1_COLUMNS",
    "TABLE1_EXPECTED",
]
