"""Index-value verdicts for A-D-E principal graphs of local extensions.

A diagram survives only if its even part carries a braiding and, when every
braiding comes from SU(2)_k, the corresponding dual canonical endomorphism
theta is a local extension of SU(2)_k listed in the classification table
shipped under ``data/kl_table.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .algnum import AlgReal, four_cos_sq, parse_value, quantum_integer
from .double import data_dir
from .graph import dynkin, graph_norm_sq, parse_diagram_name

KL_FILE = "kl_table.json"


class ClassifyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# theta and the classification table


def theta_for_graph(diagram: str) -> tuple[int, tuple[int, ...]]:
    family, n = parse_diagram_name(diagram)
    if family == "A":
        if n < 2:
            raise ClassifyError("A_n needs n >= 2")
        return n - 1, (0, 2)
    if family == "D":
        if n % 2 or n < 4:
            raise ClassifyError(f"D_{n}: only even subscripts >= 4 occur")
        m = n // 2
        return 4 * m - 4, tuple(sorted({0, 2, 4 * m - 6, 4 * m - 4}))
    raise ClassifyError(f"no theta is assigned to {family}{n}")


def theta_index(k: int, theta) -> AlgReal:
    """sum_{j in theta} d_j in SU(2)_k (d_0 = 1)."""
    if k < 1:
        raise ClassifyError("level must be >= 1")
    total = AlgReal.rational(0)
    for j in theta:
        if not 0 <= j <= k:
            raise ClassifyError(f"spin label {j} outside 0..{k}")
        total = total + quantum_integer(j + 1, k + 2)
    return total


@dataclass(frozen=True)
class ExtensionRecord:
    k: int
    theta: tuple[int, ...]
    index: AlgReal
    label: str
    source: str = ""

    def check(self) -> list[str]:
        out = []
        if 0 not in self.theta:
            out.append("theta does not contain 0")
        if theta_index(self.k, self.theta) != self.index:
            out.append(f"recorded index {self.index} differs from sum of dimensions over theta")
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "theta": list(self.theta),
            "index": self.index.to_json(),
            "label": self.label,
            "source": self.source,
        }


@dataclass(frozen=True)
class ExtensionTable:
    families: tuple[dict, ...]
    records: tuple[ExtensionRecord, ...]
    description: str = ""

    def at_level(self, k: int) -> list[ExtensionRecord]:
        out = []
        for fam in self.families:
            levels = fam["levels"]
            if levels == "all" or (levels == "0 mod 4" and k % 4 == 0 and k > 0):
                theta = tuple(sorted(k if t == "k" else int(t) for t in fam["theta"]))
                out.append(
                    ExtensionRecord(k, theta, AlgReal.from_json(fam["index"]), fam["label"], fam.get("source", ""))
                )
        out.extend(r for r in self.records if r.k == k)
        return out

    def bad_records(self, levels=range(1, 41)) -> dict[str, list[str]]:
        bad = {}
        for k in levels:
            for rec in self.at_level(k):
                msgs = rec.check()
                if msgs:
                    bad[f"{rec.label}@{k}"] = msgs
        return bad


def load_kl_table(path: str | Path) -> ExtensionTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    obj = json.loads(path.read_text(encoding="utf-8"))
    for fam in obj.get("families", []):
        if fam["levels"] not in ("all", "0 mod 4"):
            raise ClassifyError(f"unknown level rule {fam['levels']!r}")
    records = tuple(
        ExtensionRecord(
            int(r["k"]), tuple(sorted(int(t) for t in r["theta"])), AlgReal.from_json(r["index"]), r["label"], r.get("source", "")
        )
        for r in obj.get("records", [])
    )
    table = ExtensionTable(tuple(obj.get("families", [])), records, obj.get("description", ""))
    for rec in records:
        msgs = rec.check()
        if msgs:
            raise ClassifyError(f"table record {rec.label} at k={rec.k}: {msgs}")
    return table


@lru_cache(maxsize=None)
def _table(path: str) -> ExtensionTable:
    return load_kl_table(path)


def kl_table(data: str | Path | None = None) -> ExtensionTable:
    return _table(str(data_dir(data) / KL_FILE))


def kl_lookup(k: int, theta, data: str | Path | None = None) -> bool:
    """Whether SU(2)_k has a local extension with this theta."""
    want = tuple(sorted(int(t) for t in theta))
    return any(rec.theta == want for rec in kl_table(data).at_level(k))


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    diagram: str
    admissible: bool
    index: AlgReal
    reasons: list[tuple[str, str]] = field(default_factory=list)
    realization: str | None = None

    def __post_init__(self):
        if self.admissible and not self.realization:
            raise ClassifyError("an admissible verdict needs a realization")
        if not self.admissible and not self.reasons:
            raise ClassifyError("an excluded verdict needs a reason")

    def headline(self) -> str:
        if self.admissible:
            return f"ADMISSIBLE: {self.realization}"
        return f"EXCLUDED: {self.reasons[-1][0]}"

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram,
            "admissible": self.admissible,
            "index": self.index.to_json(),
            "index_decimal": self.index.decimal(12),
            "reasons": [{"claim": c, "anchor": a} for c, a in self.reasons],
            "realization": self.realization,
        }

    @classmethod
    def from_json(cls, obj) -> "Verdict":
        return cls(
            obj["diagram"],
            bool(obj["admissible"]),
            AlgReal.from_json(obj["index"]),
            [(r["claim"], r["anchor"]) for r in obj["reasons"]],
            obj.get("realization"),
        )


ORBIFOLD = "inclusion M^G in M^H of fixed-point nets, (G,H) = "
REALIZATIONS = {
    "A2": ORBIFOLD + "({e},{e})",
    "A3": ORBIFOLD + "(S_2,{e})",
    "A5": ORBIFOLD + "(S_3,S_2)",
    "D4": ORBIFOLD + "(Z/3Z,{e})",
    "D6": "coset inclusion SU(2)_3 ⊗ Vir_{7/10} ⊂ SU(2)_2 ⊗ SU(2)_1",
}

ANCHOR_BRAIDINGS = "The numbers of braidings"
ANCHOR_A = "all the braidings arise from SU(2)_{n-1} ... with the dual canonical endomorphism θ=0⊕2"
ANCHOR_D = "a local extension of SU(2)_{4n-4} with the dual canonical endomorphism θ=0⊕2⊕(4n-6)⊕(4n-4)"
ANCHOR_TABLE = "The classification table ... shows that this is impossible"
ANCHOR_REALIZED = "we already know they are indeed realized"


def _theta_text(theta) -> str:
    return "⊕".join(str(t) for t in theta)


def section4_verdict(diagram: str, data: str | Path | None = None) -> Verdict:
    """Admissibility of an A-D-E diagram as the principal graph of a local
    extension with index below 4."""
    family, n = parse_diagram_name(diagram)
    name = f"{family}{n}"
    G = dynkin(family, n)
    index = graph_norm_sq(G)
    if name in REALIZATIONS:
        return Verdict(name, True, index, [("realized", ANCHOR_REALIZED)], REALIZATIONS[name])
    if family == "E" and n in (6, 8):
        from .embed import braiding_count

        count = braiding_count(name, None if data is None else str(data))
        if count == 0:
            return Verdict(name, False, index, [(f"no braiding: {count} embeddings into the double", ANCHOR_BRAIDINGS)])
        raise ClassifyError(f"{name}: expected no braiding, found {count}")
    if family == "E" or (family == "D" and n % 2):
        return Verdict(
            name, False, index, [(f"{name} is not the principal graph of any subfactor", "A-D_{2n}-E_{6,8}")]
        )
    k, theta = theta_for_graph(name)
    anchor = ANCHOR_A if family == "A" else ANCHOR_D
    reasons = [(f"braidings come from SU(2)_{k}; theta = {_theta_text(theta)}", anchor)]
    if kl_lookup(k, theta, data):
        raise ClassifyError(f"{name}: theta {_theta_text(theta)} is a local extension of SU(2)_{k}")
    reasons.append((f"theta {_theta_text(theta)} not a local extension of SU(2)_{k}", ANCHOR_TABLE))
    return Verdict(name, False, index, reasons)


# ---------------------------------------------------------------------------
# index values


@dataclass(frozen=True)
class IndexValue:
    value: AlgReal
    label: str
    realization: str

    def decimal(self) -> str:
        return self.value.decimal(12)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "value": self.value.to_json(),
            "decimal": self.decimal(),
            "realization": self.realization,
        }


def _index_table() -> list[IndexValue]:
    return [
        IndexValue(AlgReal.rational(1), "1", "orbifold by the trivial group"),
        IndexValue(AlgReal.rational(2), "2", "orbifold by a group of order 2"),
        IndexValue(AlgReal.rational(3), "3", "orbifold by a group of order 3"),
        IndexValue(four_cos_sq(10), "(5+sqrt(5))/2", REALIZATIONS["D6"]),
        IndexValue(AlgReal.rational(4), "4", "orbifold by a group of order 4"),
        IndexValue(parse_value("3+sqrt3"), "3+sqrt(3)", "conformal embedding SU(2)_{10} ⊂ SO(5)_1"),
    ]


CEILING = parse_value("3+sqrt3")


def admissible_index_values(ceiling: AlgReal | str | Fraction | int = CEILING) -> list[IndexValue]:
    """Admissible Jones indices of local inclusions up to ``ceiling``."""
    if not isinstance(ceiling, AlgReal):
        ceiling = parse_value(str(ceiling))
    if ceiling > CEILING:
        raise ClassifyError("no claim is made above 3+sqrt(3)")
    return [iv for iv in _index_table() if iv.value <= ceiling]


def lr_partial_index(k: int, subset) -> AlgReal:
    """sum_{j in subset} d_j^2 in SU(2)_k."""
    subset = sorted(set(int(j) for j in subset))
    if 0 not in subset:
        raise ClassifyError("subset must contain 0")
    total = AlgReal.rational(0)
    for j in subset:
        if not 0 <= j <= k:
            raise ClassifyError(f"spin label {j} outside 0..{k}")
        d = quantum_integer(j + 1, k + 2)
        total = total + d * d
    return total


__all__ = [
    "ClassifyError",
    "ExtensionRecord",
    "ExtensionTable",
    "IndexValue",
    "Verdict",
    "admissible_index_values",
    "kl_lookup",
    "kl_table",
    "load_kl_table",
    "lr_partial_index",
    "section4_verdict",
    "theta_for_graph",
    "theta_index",
]
