"""Fusion rings with exact Perron-Frobenius dimensions.

Structure constants are stored sparsely as ``N[(i, j, k)] = N_{ij}^k``.
Rings with split fixed points (simple-current extensions) are built from
orbit sums plus a completion search over the undetermined split constants;
see :func:`complete_by_associativity`.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import mpmath
import numpy as np

from .algnum import AlgReal, minimal_polynomial, quantum_integer


class FusionError(ValueError):
    pass


class CompletionError(FusionError):
    """Completion search found no solution, or more than one."""

    def __init__(self, msg: str, solutions: list | None = None):
        super().__init__(msg)
        self.solutions = solutions or []


@dataclass(frozen=True, eq=False)
class FusionRing:
    name: str
    objects: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    N: Mapping[tuple[int, int, int], int]
    dims: tuple[AlgReal, ...]

    @classmethod
    def build(cls, name, objects, N, *, unit=0, dual=None, dims=None, max_conductor=None) -> "FusionRing":
        objects = tuple(objects)
        r = len(objects)
        N = {key: int(v) for key, v in N.items() if v}
        if dual is None:
            dual = []
            for i in range(r):
                ds = [j for j in range(r) if N.get((i, j, unit), 0)]
                if len(ds) != 1:
                    raise FusionError(f"{name}: object {objects[i]} has no unique dual")
                dual.append(ds[0])
        if dims is None:
            dims = pf_dimensions(r, N, unit=unit, max_conductor=max_conductor)
        return cls(name, objects, unit, tuple(dual), N, tuple(dims))

    # -- access ------------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.objects)

    def index(self, name: str) -> int:
        try:
            return self.objects.index(name)
        except ValueError:
            raise KeyError(f"{self.name}: no object {name!r}") from None

    def nij(self, i: int, j: int, k: int) -> int:
        return self.N.get((i, j, k), 0)

    @cached_property
    def _rows(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        rows: dict[tuple[int, int], list] = defaultdict(list)
        for (i, j, k), v in self.N.items():
            rows[i, j].append((k, v))
        return {key: tuple(sorted(v)) for key, v in rows.items()}

    def product(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        """Decomposition of i x j as ((k, multiplicity), ...)."""
        return self._rows.get((i, j), ())

    def product_names(self, a: str, b: str) -> dict[str, int]:
        return {self.objects[k]: v for k, v in self.product(self.index(a), self.index(b))}

    @cached_property
    def tensor(self) -> np.ndarray:
        T = np.zeros((self.rank,) * 3, dtype=np.int64)
        for (i, j, k), v in self.N.items():
            T[i, j, k] = v
        return T

    def matrix(self, i: int) -> np.ndarray:
        """Left multiplication matrix L_i[k, j] = N_{ij}^k."""
        return self.tensor[i].T.copy()

    @cached_property
    def float_dims(self) -> np.ndarray:
        return np.array([float(d) for d in self.dims])

    @cached_property
    def global_dim(self) -> AlgReal:
        return sum((d * d for d in self.dims), AlgReal.rational(0))

    def is_commutative(self) -> bool:
        T = self.tensor
        return bool(np.array_equal(T, T.transpose(1, 0, 2)))

    def __repr__(self):
        return f"FusionRing({self.name!r}, rank={self.rank})"

    # -- serialization -----------------------------------------------------
    def to_json(self, with_dims: bool = True) -> dict:
        obj = {
            "name": self.name,
            "objects": list(self.objects),
            "unit": self.unit,
            "dual": list(self.dual),
            "constants": [[i, j, k, v] for (i, j, k), v in sorted(self.N.items())],
        }
        if with_dims:
            obj["dims"] = [d.to_json() for d in self.dims]
        return obj

    @classmethod
    def from_json(cls, obj: Mapping, *, validate: bool = True) -> "FusionRing":
        N = {(int(i), int(j), int(k)): int(v) for i, j, k, v in obj["constants"]}
        dims = [AlgReal.from_json(d) for d in obj["dims"]] if obj.get("dims") else None
        ring = cls.build(obj["name"], obj["objects"], N, unit=int(obj["unit"]), dual=obj["dual"], dims=dims)
        if validate:
            report = verify_axioms(ring)
            if not report.ok:
                raise FusionError(f"{ring.name}: invalid fusion ring: {report.failures()}")
        return ring

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# Perron-Frobenius dimensions


def _numeric_pf_body(r: int, N: Mapping, unit: int) -> list:
    M = mpmath.zeros(r, r)
    for (i, j, k), v in N.items():
        M[k, j] += v
    # PF vector of sum_i L_i: power iteration from a float guess
    A = np.zeros((r, r))
    for (i, j, k), v in N.items():
        A[k, j] += v
    w, V = np.linalg.eig(A)
    x = np.abs(np.real(V[:, int(np.argmax(np.real(w)))]))
    x = [mpmath.mpf(float(t)) for t in x]
    for _ in range(400):
        y = M * mpmath.matrix(x)
        s = y[unit]
        x = [y[i] / s for i in range(r)]
    return x


def _exact_candidates(x, conductor: int) -> list[AlgReal] | None:
    b = 2 * mpmath.cos(mpmath.pi / conductor)
    deg = len(minimal_polynomial(conductor)) - 1
    basis = [b**p for p in range(deg)]
    out = []
    for v in x:
        rel = mpmath.pslq([v] + basis, maxcoeff=10**6, maxsteps=10**5)
        if rel is None or rel[0] == 0:
            return None
        out.append(AlgReal(conductor, [Fraction(-c, rel[0]) for c in rel[1:]]))
    return out


def dimension_equation_holds(r: int, N: Mapping, dims: Sequence[AlgReal]) -> bool:
    """Exact check of d_i d_j = sum_k N_ij^k d_k for all i, j."""
    cond = math.lcm(*(d.conductor for d in dims))
    lifted = [d.lift(cond) for d in dims]
    deg = max([len(minimal_polynomial(cond)) - 1, 1])
    den = math.lcm(*(d.den for d in lifted))
    D = [[0] * deg for _ in range(r)]
    for i, d in enumerate(lifted):
        for p, x in enumerate(d.nums):
            D[i][p] = x * (den // d.den)
    nmax = max(N.values(), default=0)
    big = max((abs(x) for row in D for x in row), default=0)
    if big * big * den * max(nmax, 1) * r * deg >= 2**62:
        return _dimension_equation_slow(r, N, dims)
    Di = np.array(D, dtype=np.int64)
    T = np.zeros((r, r, r), dtype=np.int64)
    for (i, j, k), v in N.items():
        T[i, j, k] = v
    lhs = (T.reshape(r * r, r) @ Di).reshape(r, r, deg) * den
    basis = [AlgReal(cond, [0] * p + [1]) for p in range(deg)]
    for i, d in enumerate(lifted):
        # integer matrix of multiplication by den * d_i
        M = np.zeros((deg, deg), dtype=np.int64)
        for p, b in enumerate(basis):
            prod = (d * b).lift(cond)
            for q, x in enumerate(prod.nums):
                M[q, p] = x * (den // prod.den)
        if not np.array_equal(Di @ M.T, lhs[i]):
            return False
    return True


def _dimension_equation_slow(r: int, N: Mapping, dims: Sequence[AlgReal]) -> bool:
    rows: dict[tuple[int, int], AlgReal] = {}
    for (i, j, k), v in N.items():
        rows[(i, j)] = rows.get((i, j), AlgReal.rational(0)) + dims[k] * v
    zero = AlgReal.rational(0)
    return all(rows.get((i, j), zero) == dims[i] * dims[j] for i in range(r) for j in range(r))


def pf_dimensions(r: int, N: Mapping, *, unit: int = 0, max_conductor: int | None = None) -> list[AlgReal]:
    """Exact positive solution of d_i d_j = sum_k N_ij^k d_k with d_unit = 1.

    Candidate values come from integer-relation detection in each field
    Q(2cos(pi/c)), c <= max_conductor; a candidate is accepted only after
    the dimension equations are verified exactly, which pins down the
    unique positive solution.
    """
    with mpmath.workdps(60):
        x = _numeric_pf_body(r, N, unit)
        if all(abs(v - mpmath.nint(v)) < mpmath.mpf(10) ** -40 for v in x):
            dims = [AlgReal.rational(int(mpmath.nint(v))) for v in x]
            if dimension_equation_holds(r, N, dims):
                return dims
        bound = max_conductor or 60
        for c in range(3, bound + 1):
            cand = _exact_candidates(x, c)
            if cand and all(d.sign() > 0 for d in cand) and dimension_equation_holds(r, N, cand):
                return cand
    raise FusionError("no exact dimension representative within the conductor bound")


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    items: dict[str, list] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(not v for v in self.items.values())

    def failures(self) -> dict[str, list]:
        return {k: v[:5] for k, v in self.items.items() if v}

    def lines(self) -> list[str]:
        return [f"{'PASS' if not v else 'FAIL'} {k}" + (f" {v[:3]}" if v else "") for k, v in self.items.items()]


def associativity_failures(T: np.ndarray, rows: Iterable[int] | None = None, limit: int = 20) -> list:
    """Quadruples (i, j, k, l) with (ij)k != i(jk), for i in ``rows``."""
    r = T.shape[0]
    flat_right = T.reshape(r, r * r).astype(float)
    flat_left = T.reshape(r * r, r).astype(float)
    bad = []
    for i in rows if rows is not None else range(r):
        Ti = T[i].astype(float)
        lhs = (Ti @ flat_right).reshape(r, r, r)  # (j, k, l): sum_m N_ij^m N_mk^l
        rhs = (flat_left @ Ti).reshape(r, r, r)  # (j, k, l): sum_m N_jk^m N_im^l
        diff = np.argwhere(lhs != rhs)
        for j, k, l in diff[: max(0, limit - len(bad))]:
            bad.append((i, int(j), int(k), int(l)))
        if len(bad) >= limit:
            break
    return bad


def associative_on_samples(T: np.ndarray, trials: int = 3, seed: int = 0) -> bool:
    """Exact test of (uv)w = u(vw) on a few random integer vectors.

    A failure proves non-associativity; success is only evidence, so this
    serves as a cheap filter ahead of a full check.
    """
    rng = np.random.default_rng(seed)
    r = T.shape[0]
    T = T.astype(object) if int(T.max(initial=0)) ** 2 * r**4 * 100 >= 2**52 else T

    if T.dtype != object:
        # every intermediate is an integer below 2**53, so floats are exact
        T = T.astype(float)

    def mul(a, b):
        if T.dtype == object:
            return np.einsum("i,j,ijk->k", a, b, T)
        return (a @ T.reshape(r, -1)).reshape(r, r).T @ b

    for _ in range(trials):
        u, v, w = (rng.integers(-3, 4, size=r) for _ in range(3))
        if not np.array_equal(mul(mul(u, v), w), mul(u, mul(v, w))):
            return False
    return True


def generating_set(T: np.ndarray, unit: int, order: Sequence[int]) -> list[int]:
    """Greedy set of objects whose products span the ring over Q.

    The span of all words in the chosen objects is grown incrementally with
    an orthonormal basis; a candidate is kept when it enlarges the span.
    """
    r = T.shape[0]
    Tf = T.astype(float)
    basis = np.zeros((r, r))
    basis[0] = np.eye(r)[unit]
    size = 1
    gens: list[int] = []

    def absorb(w) -> bool:
        nonlocal size
        nw = np.linalg.norm(w)
        if nw == 0:
            return False
        w = w / nw
        B = basis[:size]
        res = w - B.T @ (B @ w)
        res = res - B.T @ (B @ res)
        nr = np.linalg.norm(res)
        if nr <= 1e-8:
            return False
        basis[size] = res / nr
        size += 1
        return True

    for g in order:
        if g == unit or size == r:
            continue
        start = size
        # images of the current span under g
        for idx in range(size):
            absorb(basis[idx] @ Tf[g])
        if size == start:
            continue
        gens.append(g)
        # close the span under all chosen generators
        pos = start
        while pos < size and size < r:
            for h in gens:
                absorb(basis[pos] @ Tf[h])
            pos += 1
    return gens if size == r else list(range(r))


def verify_axioms(R: FusionRing, *, full_associativity: bool | None = None) -> AxiomReport:
    r, u, dual, N = R.rank, R.unit, R.dual, R.N
    rep = AxiomReport()
    rep.items["unit"] = [
        (j, k) for j in range(r) for k in range(r) if R.nij(u, j, k) != (j == k) or R.nij(j, u, k) != (j == k)
    ]
    rep.items["dual involution"] = [i for i in range(r) if dual[dual[i]] != i]
    rep.items["duality"] = [(i, j) for i in range(r) for j in range(r) if R.nij(i, j, u) != (j == dual[i])]
    T = R.tensor
    d = np.asarray(dual)
    # N_ij^k = N_{i* k}^j = N_{k j*}^i and N_ij^k = N_{j* i*}^{k*}
    frob = (T != T[d].transpose(0, 2, 1)) | (T != T[:, d, :].transpose(2, 1, 0))
    contra = T != T[np.ix_(d, d, d)].transpose(1, 0, 2)
    rep.items["frobenius reciprocity"] = [tuple(map(int, x)) for x in np.argwhere(frob)]
    rep.items["contragredient symmetry"] = [tuple(map(int, x)) for x in np.argwhere(contra)]
    if full_associativity is None:
        full_associativity = r <= 64
    if full_associativity:
        rep.items["associativity"] = associativity_failures(T)
    else:
        order = sorted(range(r), key=lambda i: (R.dims[i] != R.dims[i], float(R.dims[i]), i))
        gens = generating_set(T, u, order)
        rep.items["associativity"] = associativity_failures(T, gens)
    rep.items["dims >= 1"] = [i for i, d in enumerate(R.dims) if d < 1]
    rep.items["unit dim"] = [] if R.dims[u] == 1 else [u]
    rep.items["dimension equation"] = [] if dimension_equation_holds(r, N, R.dims) else ["violated"]
    return rep


# ---------------------------------------------------------------------------
# constructors


def su2_ring(k: int) -> FusionRing:
    """SU(2) at level k; object j is twice the spin."""
    if k < 1:
        raise FusionError("level must be >= 1")
    N = {}
    for i in range(k + 1):
        for j in range(k + 1):
            for l in range(abs(i - j), min(i + j, 2 * k - i - j) + 1, 2):
                N[(i, j, l)] = 1
    dims = [quantum_integer(j + 1, k + 2) for j in range(k + 1)]
    return FusionRing.build(f"SU(2)_{k}", [str(j) for j in range(k + 1)], N, dual=list(range(k + 1)), dims=dims)


def even_subring(R: FusionRing, evens: Iterable) -> FusionRing:
    idx = sorted(R.index(e) if isinstance(e, str) else int(e) for e in evens)
    pos = {o: n for n, o in enumerate(idx)}
    if R.unit not in pos:
        raise FusionError("subset must contain the unit")
    N = {}
    for a in idx:
        if R.dual[a] not in pos:
            raise FusionError(f"subset not closed under duals at {R.objects[a]}")
        for b in idx:
            for c, v in R.product(a, b):
                if c not in pos:
                    raise FusionError(f"subset not closed: {R.objects[a]} x {R.objects[b]} contains {R.objects[c]}")
                N[(pos[a], pos[b], pos[c])] = v
    return FusionRing.build(
        f"{R.name}_even",
        [R.objects[i] for i in idx],
        N,
        unit=pos[R.unit],
        dual=[pos[R.dual[i]] for i in idx],
        dims=[R.dims[i] for i in idx],
    )


def su2_even(k: int) -> FusionRing:
    R = su2_ring(k)
    return even_subring(R, [j for j in range(k + 1) if j % 2 == 0])


def fibonacci() -> FusionRing:
    return su2_even(3)


def pointed_ring(n: int) -> FusionRing:
    """Group ring of Z/n."""
    if n < 1:
        raise FusionError("n must be >= 1")
    N = {(i, j, (i + j) % n): 1 for i in range(n) for j in range(n)}
    return FusionRing.build(
        f"Z/{n}", [str(i) for i in range(n)], N, dual=[(-i) % n for i in range(n)], dims=[AlgReal.rational(1)] * n
    )


def tensor_ring(R: FusionRing, S: FusionRing, name: str | None = None) -> FusionRing:
    rs = S.rank
    objs = [f"({a},{b})" for a in R.objects for b in S.objects]
    N = {}
    for (i, j, k), v in R.N.items():
        for (p, q, s), w in S.N.items():
            N[(i * rs + p, j * rs + q, k * rs + s)] = v * w
    return FusionRing.build(
        name or f"{R.name}x{S.name}",
        objs,
        N,
        unit=R.unit * rs + S.unit,
        dual=[R.dual[i] * rs + S.dual[p] for i in range(R.rank) for p in range(rs)],
        dims=[a * b for a in R.dims for b in S.dims],
    )


class TensorProduct:
    """Lazy product ring R x S with objects (a,b) indexed a * |S| + b.

    Offers the read-only interface the extension code needs (objects, unit,
    dual, dims, product) without materializing every structure constant.
    """

    def __init__(self, R: FusionRing, S: FusionRing, name: str | None = None):
        self.left, self.right = R, S
        self.name = name or f"{R.name}x{S.name}"
        rs = S.rank
        self.objects = tuple(f"({a},{b})" for a in R.objects for b in S.objects)
        self.unit = R.unit * rs + S.unit
        self.dual = tuple(R.dual[i] * rs + S.dual[p] for i in range(R.rank) for p in range(rs))
        self.dims = tuple(a * b for a in R.dims for b in S.dims)
        self._cache: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}

    @property
    def rank(self) -> int:
        return len(self.objects)

    def index(self, name: str) -> int:
        return self.objects.index(name)

    def product(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        key = (i, j)
        hit = self._cache.get(key)
        if hit is None:
            rs = self.right.rank
            (a, p), (b, q) = divmod(i, rs), divmod(j, rs)
            hit = tuple(
                (k * rs + t, v * w)
                for k, v in self.left.product(a, b)
                for t, w in self.right.product(p, q)
            )
            self._cache[key] = hit
        return hit

    def ring(self) -> FusionRing:
        return tensor_ring(self.left, self.right, self.name)


# ---------------------------------------------------------------------------
# completion search


@dataclass
class PartialFusionData:
    """Ring skeleton with some structure-constant slots unknown.

    ``known`` lists determined slots (absent slots not in ``unknown`` are 0).
    ``sum_constraints`` are (slots, total) pairs and ``linear`` holds extra
    equations ``sum coeff * N[slot] = const``.  ``split`` names the objects
    whose rows carry the unknowns, and ``swap_pairs`` the pairs whose
    exchange is quotiented out when reporting solutions.
    """

    name: str
    objects: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    dims: tuple[AlgReal, ...]
    known: dict[tuple[int, int, int], int]
    unknown: set[tuple[int, int, int]]
    sum_constraints: list[tuple[tuple[tuple[int, int, int], ...], int]] = field(default_factory=list)
    linear: list[tuple[dict[tuple[int, int, int], Fraction], Fraction]] = field(default_factory=list)
    split: tuple[int, ...] = ()
    swap_pairs: tuple[tuple[int, int], ...] = ()
    commutative: bool = True


_PRIME = 2**61 - 1


def _modp(x) -> int:
    if isinstance(x, Fraction):
        return x.numerator % _PRIME * pow(x.denominator, -1, _PRIME) % _PRIME
    return int(x) % _PRIME


class _Linear:
    """Incremental reduced row echelon form modulo a large prime.

    Every integer solution of the rational system also solves the reduced
    one, so an inconsistency here rules out all integer solutions, and a
    value forced here is the only candidate in [0, p).  Pruning is therefore
    sound for bounded nonnegative unknowns; completions are re-verified
    exactly afterwards.
    """

    def __init__(self):
        # pivot -> (coeffs, const) meaning x_p + sum coeffs * x = const
        self.rows: dict[int, tuple[dict[int, int], int]] = {}

    def copy(self) -> "_Linear":
        c = _Linear()
        c.rows = {p: (dict(co), k) for p, (co, k) in self.rows.items()}
        return c

    def reduce(self, coeffs: Mapping, const) -> tuple[dict[int, int], int]:
        P = _PRIME
        coeffs = {v: _modp(c) for v, c in coeffs.items()}
        coeffs = {v: c for v, c in coeffs.items() if c}
        const = _modp(const)
        for v in [v for v in coeffs if v in self.rows]:
            c = coeffs.pop(v, 0)
            if not c:
                continue
            rco, rk = self.rows[v]
            # rows are fully reduced, so substitution never reintroduces pivots
            for w, x in rco.items():
                nv = (coeffs.get(w, 0) - c * x) % P
                if nv:
                    coeffs[w] = nv
                else:
                    coeffs.pop(w, None)
            const = (const - c * rk) % P
        return coeffs, const

    def add(self, coeffs: Mapping, const) -> bool:
        P = _PRIME
        coeffs, const = self.reduce(coeffs, const)
        if not coeffs:
            return const == 0
        p = min(coeffs)
        inv = pow(coeffs.pop(p), -1, P)
        coeffs = {v: c * inv % P for v, c in coeffs.items()}
        const = const * inv % P
        for q, (qco, qk) in self.rows.items():
            c = qco.pop(p, None)
            if c is not None:
                for w, x in coeffs.items():
                    nv = (qco.get(w, 0) - c * x) % P
                    if nv:
                        qco[w] = nv
                    else:
                        qco.pop(w, None)
                self.rows[q] = (qco, (qk - c * const) % P)
        self.rows[p] = (coeffs, const)
        return True

    def value(self, v: int, assign: Mapping[int, int]) -> int | None:
        """Residue of x_v forced by the system and ``assign``, if any."""
        if v in assign:
            return assign[v] % _PRIME
        if v not in self.rows:
            return None
        co, k = self.rows[v]
        tot = k
        for w, c in co.items():
            if w not in assign:
                return None
            tot -= c * assign[w]
        return tot % _PRIME


def _slot_orbit(slot, dual, commutative):
    seen = {slot}
    stack = [slot]
    while stack:
        i, j, k = stack.pop()
        nbrs = [(dual[i], k, j), (k, dual[j], i), (dual[j], dual[i], dual[k])]
        if commutative:
            nbrs.append((j, i, k))
        for s in nbrs:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def _floor_quot(a: AlgReal, b: AlgReal) -> int:
    approx = float(a) / float(b)
    f = math.floor(approx)
    if abs(approx - round(approx)) > 1e-6:
        return max(f, 0)
    # near an integer: decide exactly
    f = round(approx)
    if AlgReal.rational(f) * b > a:
        f -= 1
    return max(f, 0)


def complete_by_associativity(P: PartialFusionData, *, max_solutions: int = 64) -> list[FusionRing]:
    """All completions of ``P`` that are fusion rings with the given dims."""
    return [ring for _, ring in complete_variants(P, [[]], max_solutions=max_solutions)]


def complete_variants(
    P: PartialFusionData, variants: Sequence[list], *, max_solutions: int = 64
) -> list[tuple[int, FusionRing]]:
    """Completions of ``P`` under each alternative set of extra equations.

    Returns ``(variant index, ring)`` pairs.  The shared setup (orbits,
    bounds, sum rules, dimension equations) is done once.

    Unknown slots are grouped into orbits under Frobenius reciprocity,
    contragredience and (optionally) commutativity.  Linear constraints
    (sum rules, exact dimension equations, extra equations) are kept in
    exact echelon form.  Rows of a few propagation objects are branched
    first; associativity with those objects is then linear in the rest.
    Every surviving assignment is re-verified from scratch.
    """
    r = len(P.objects)
    dual = P.dual
    unit = P.unit
    value: dict[tuple[int, int, int], int] = {}
    var_of: dict[tuple[int, int, int], int] = {}
    orbits: list[list[tuple[int, int, int]]] = []

    def known_value(s):
        i, j, k = s
        if i == unit:
            return int(j == k)
        if j == unit:
            return int(i == k)
        if k == unit:
            return int(j == dual[i])
        return P.known.get(s)

    for s in sorted(P.unknown):
        if s in value or s in var_of:
            continue
        orb = _slot_orbit(s, dual, P.commutative)
        fixed = set()
        for t in orb:
            kv = known_value(t)
            if kv is not None:
                fixed.add(kv)
            elif t not in P.unknown:
                fixed.add(0)
        if len(fixed) > 1:
            return []
        if fixed:
            v = fixed.pop()
            for t in orb:
                value[t] = v
        else:
            vid = len(orbits)
            orbits.append(sorted(orb))
            for t in orb:
                var_of[t] = vid

    def slot(s):
        """int or ('v', id)."""
        if s in var_of:
            return var_of[s]
        if s in value:
            return value[s]
        kv = known_value(s)
        return kv if kv is not None else 0

    nvar = len(orbits)
    fdims = [float(d) for d in P.dims]

    def bound(i, j, k):
        # N_ij^k d_k <= d_i d_j
        approx = fdims[i] * fdims[j] / fdims[k]
        if abs(approx - round(approx)) > 1e-6:
            return max(math.floor(approx), 0)
        return _floor_quot(P.dims[i] * P.dims[j], P.dims[k])

    upper = [min(bound(*s) for s in orb[:4]) for orb in orbits]

    base = _Linear()

    def add_expr(terms: dict, const) -> bool:
        # terms: var -> coeff ; equation sum coeff*var = const
        return base.add(terms, const)

    for slots, total in P.sum_constraints:
        terms: dict[int, int] = {}
        const = total
        for s in slots:
            x = slot(s)
            if s in var_of:
                terms[x] = terms.get(x, 0) + 1
            else:
                const -= x
        if terms:
            for v in terms:
                upper[v] = min(upper[v], const // terms[v]) if const >= 0 else -1
        if not add_expr(terms, const):
            return []

    def add_linear(lin: _Linear, equations) -> bool:
        for coeffs, const in equations:
            terms: dict[int, int] = {}
            c0 = const
            for s, c in coeffs.items():
                v = var_of.get(s)
                if v is not None:
                    terms[v] = terms.get(v, 0) + c
                else:
                    x = slot(s)
                    if x:
                        c0 -= c * x
            if not lin.add(terms, c0):
                return False
        return True

    if not add_linear(base, P.linear):
        return []
    if any(u < 0 for u in upper):
        return []

    # exact dimension equations for rows touching unknowns, one equation
    # per coordinate in a common field; dims scaled to integer vectors
    cond = math.lcm(*(d.conductor for d in P.dims))
    deg = len(minimal_polynomial(cond)) - 1
    lifted = [d.lift(cond) for d in P.dims]
    dden = math.lcm(*(d.den for d in lifted))
    dvec = [[0] * deg for _ in range(r)]
    for k, d in enumerate(lifted):
        for p, x in enumerate(d.nums):
            dvec[k][p] = x * (dden // d.den)
    pairs = sorted({(i, j) for (i, j, k) in var_of})
    for i, j in pairs:
        prod = (lifted[i] * lifted[j]).lift(cond)
        rest = [Fraction(x * dden, prod.den) for x in prod.nums] + [Fraction(0)] * (deg - len(prod.nums))
        vterms: dict[int, list[int]] = {}
        for k in range(r):
            s = (i, j, k)
            if s in var_of:
                acc = vterms.setdefault(var_of[s], [0] * deg)
                for p in range(deg):
                    acc[p] += dvec[k][p]
            else:
                x = slot(s)
                if x:
                    for p in range(deg):
                        rest[p] -= x * dvec[k][p]
        for p in range(deg):
            terms = {v: c[p] for v, c in vterms.items() if c[p]}
            if not add_expr(terms, rest[p]):
                return []

    # rows: sparse access (i, j) -> list of (k, int|var)
    rows: dict[tuple[int, int], list] = {}
    for s, v in value.items():
        if v:
            rows.setdefault(s[:2], []).append((s[2], v, False))
    for s, v in P.known.items():
        if v and s not in value and s not in var_of:
            rows.setdefault(s[:2], []).append((s[2], v, False))
    # constants forced by the unit: N_u j^j = N_j u^j = N_j j*^u = 1
    for t in range(r):
        for s in ((unit, t, t), (t, unit, t), (t, dual[t], unit)):
            if s not in value and s not in P.known:
                rows.setdefault(s[:2], []).append((s[2], 1, False))
    for s, v in var_of.items():
        rows.setdefault(s[:2], []).append((s[2], v, True))
    for key in rows:
        rows[key] = sorted(set(rows[key]))

    static_tensor = np.zeros((r, r, r), dtype=np.int64) if r > 40 else None
    var_slots = []
    if r > 40:
        for (i, j), entries in rows.items():
            for k, x, isvar in entries:
                if isvar:
                    var_slots.append((i, j, k, x))
                else:
                    static_tensor[i, j, k] = x
    var_pos = tuple(np.array([t[c] for t in var_slots], dtype=np.intp) for c in range(3))
    var_ids = [t[3] for t in var_slots]

    split = list(P.split) or sorted({i for (i, j, k) in var_of})
    row_vars = {a: sorted({v for (i, j, k), v in var_of.items() if i == a}) for a in range(r)}
    cands = [a for a in range(r) if a != unit]
    cands.sort(key=lambda a: (len(row_vars[a]), float(P.dims[a]), a))
    props = [a for a in cands if a not in split][:3] + [a for a in cands if a in split][:0]
    props = props or cands[:2]

    def assoc_equations(lin: _Linear, assign: dict[int, int], a: int) -> bool:
        def val(entry):
            k, x, isvar = entry
            if not isvar:
                return x
            got = lin.value(x, assign)
            if got is None:
                raise KeyError
            return int(got)

        arow = {}
        for key in [(a, m) for m in range(r)]:
            arow[key[1]] = [(e[0], val(e)) for e in rows.get(key, ())]
        bx = [(b, x) for b in range(r) for x in split] + [(b, x) for b in split for x in range(r) if x not in split]
        collected: set = set()
        for b, x in bx:
            eq: dict[int, dict] = {}
            # (a b) x
            for m, nab in arow[b]:
                if not nab:
                    continue
                for y, xv, isvar in rows.get((m, x), ()):
                    t = eq.setdefault(y, {"c": 0})
                    if isvar:
                        t[xv] = t.get(xv, 0) + nab
                    else:
                        t["c"] += nab * xv
            # a (b x)
            for m, xv, isvar in rows.get((b, x), ()):
                for y, nam in arow[m]:
                    if not nam:
                        continue
                    t = eq.setdefault(y, {"c": 0})
                    if isvar:
                        t[xv] = t.get(xv, 0) - nam
                    else:
                        t["c"] -= nam * xv
            for y, t in eq.items():
                c = t.pop("c")
                terms = tuple(sorted((v, w) for v, w in t.items() if w))
                if terms or c:
                    collected.add((terms, -c))
        # substitute determined variables; only genuinely new equations
        # reach the echelon form
        det: dict[int, int | None] = {}
        for terms, c in collected:
            rest = {}
            for v, w in terms:
                if v not in det:
                    det[v] = lin.value(v, assign)
                x = det[v]
                if x is None:
                    rest[v] = w
                else:
                    c -= w * x
            if not rest:
                if c % _PRIME:
                    return False
                continue
            if not lin.add(rest, c):
                return False
            det = {v: x for v, x in det.items() if x is not None}
        return True

    solutions: list[FusionRing] = []
    canon_seen: set = set()

    def in_range(v, x):
        return 0 <= x <= upper[v]

    def finish(lin: _Linear, assign: dict[int, int]):
        full = dict(assign)
        for v in range(nvar):
            if v not in full:
                x = lin.value(v, full)
                if x is None or not in_range(v, x):
                    return
                full[v] = int(x)
        if r > 40:
            T = static_tensor.copy()
            T[var_pos] = np.array([full[v] for v in var_ids], dtype=np.int64)
            if not associative_on_samples(T):
                return
        N = {}
        for i in range(r):
            for j in range(r):
                for k, x, isvar in rows.get((i, j), ()):
                    val = full[x] if isvar else x
                    if val:
                        N[(i, j, k)] = val
        ring = FusionRing(P.name, tuple(P.objects), unit, tuple(dual), N, tuple(P.dims))
        report = verify_axioms(ring, full_associativity=r <= 40)
        if not report.ok:
            return
        if P.commutative and not ring.is_commutative():
            return
        for coeffs, const in itertools.chain(P.linear, checks[current[0]]):
            if sum(c * ring.nij(*s) for s, c in coeffs.items()) != const:
                return
        key = _canonical_key(ring, P.swap_pairs)
        if key not in canon_seen:
            canon_seen.add(key)
            solutions.append(ring)

    def free_vars(lin: _Linear, assign):
        return [v for v in range(nvar) if v not in assign and lin.value(v, assign) is None and v not in lin.rows]

    def dfs(lin: _Linear, assign: dict[int, int], stage_vars: list[int], depth_props: list[int]):
        if len(solutions) >= max_solutions:
            return
        # first branch the rows of the propagation objects
        pending = [v for v in stage_vars if v not in assign and lin.value(v, assign) is None]
        if pending:
            v = pending[0]
            for x in range(upper[v] + 1):
                nl = lin.copy()
                if not nl.add({v: 1}, x):
                    continue
                na = dict(assign)
                na[v] = x
                if _consistent(nl, na):
                    dfs(nl, na, stage_vars, depth_props)
            return
        if depth_props:
            nl = lin.copy()
            try:
                ok = all(assoc_equations(nl, assign, a) for a in depth_props)
            except KeyError:
                ok = True
            if not ok or not _consistent(nl, assign):
                return
            dfs(nl, assign, [], [])
            return
        fv = free_vars(lin, assign)
        if not fv:
            finish(lin, assign)
            return
        v = fv[0]
        for x in range(upper[v] + 1):
            nl = lin.copy()
            if not nl.add({v: 1}, x):
                continue
            na = dict(assign)
            na[v] = x
            if _consistent(nl, na):
                dfs(nl, na, [], [])

    def _consistent(lin: _Linear, assign) -> bool:
        for v in range(nvar):
            x = lin.value(v, assign)
            if x is not None and not in_range(v, x):
                return False
        return True

    stage = sorted({v for a in props for v in row_vars[a]})
    found: list[tuple[int, FusionRing]] = []
    current = [0]
    # variants may be lazy iterables; keep what was consumed for re-checking
    checks: dict[int, list] = {}
    for idx, equations in enumerate(variants):
        lin = base.copy()
        checks[idx] = []
        if not add_linear(lin, _recording(equations, checks[idx])) or not _consistent(lin, {}):
            continue
        current[0] = idx
        solutions.clear()
        canon_seen.clear()
        dfs(lin, {}, stage, props)
        found.extend((idx, ring) for ring in solutions)
    return found


def _recording(items, sink: list):
    for item in items:
        sink.append(item)
        yield item


def _canonical_key(ring: FusionRing, swap_pairs) -> bytes:
    """Key identifying ``ring`` up to exchanging the objects of each pair."""
    r = ring.rank
    T = ring.tensor
    best = None
    for mask in range(2 ** len(swap_pairs)):
        perm = np.arange(r)
        for bit, (p, q) in enumerate(swap_pairs):
            if mask >> bit & 1:
                perm[p], perm[q] = q, p
        # relabel: new index perm[i] holds old object i
        inv = np.argsort(perm)
        key = T[np.ix_(inv, inv, inv)].tobytes()
        if best is None or key < best:
            best = key
    return best


# ---------------------------------------------------------------------------
# simple-current extensions


def extension_skeletons(
    parent: FusionRing | TensorProduct,
    current: int,
    local: Iterable[int],
    *,
    name: str,
    rep_name: Callable[[int], str] | None = None,
    split_names: Callable[[int], tuple[str, str]] | None = None,
    prefer: Callable[[int], object] | None = None,
) -> list[PartialFusionData]:
    """Partial data for the extension of ``parent`` by an order-2 invertible
    ``current``, one skeleton per duality choice on the split pairs.

    Objects are orbits {a, J a} of the local objects; fixed points split
    into two objects of half dimension.  Constants off the split slots are
    orbit sums; the split slots are left unknown, tied together by the
    orbit-sum rules.
    """
    local = sorted(local)
    J = current
    jmul = {a: parent.product(J, a) for a in local}
    for a in local:
        if len(jmul[a]) != 1 or jmul[a][0][1] != 1:
            raise FusionError(f"{parent.objects[J]} is not invertible")
    act = {a: jmul[a][0][0] for a in local}
    if act[act[local[0]]] != local[0] or any(act[a] not in set(local) for a in local):
        raise FusionError("current must have order 2 and preserve the local objects")
    rep_name = rep_name or (lambda a: parent.objects[a])
    split_names = split_names or (lambda a: (parent.objects[a] + "+", parent.objects[a] + "-"))
    objs: list[str] = []
    rep: list[int] = []
    is_split: list[bool] = []
    alpha: dict[int, list[int]] = {}
    for a in local:
        if a in alpha:
            continue
        if act[a] == a:
            p, m = split_names(a)
            alpha[a] = [len(objs), len(objs) + 1]
            objs += [p, m]
            rep += [a, a]
            is_split += [True, True]
        else:
            alpha[a] = alpha[act[a]] = [len(objs)]
            a_rep = min(a, act[a], key=prefer) if prefer else a
            objs.append(rep_name(a_rep))
            rep.append(a_rep)
            is_split.append(False)
    r = len(objs)
    sib = {x: alpha[rep[x]] for x in range(r)}
    dims = []
    for x in range(r):
        d = parent.dims[rep[x]]
        dims.append(d * Fraction(1, 2) if is_split[x] else d)

    def orbit_product(a: int, b: int) -> dict[int, int]:
        """Coefficients of alpha_a alpha_b on the extension objects."""
        out: dict[int, int] = {}
        for c, v in parent.product(a, b):
            for z in alpha.get(c, ()):
                out[z] = out.get(z, 0) + v
        return out

    def E(a: int, b: int, z: int) -> int:
        return orbit_product(a, b).get(z, 0)

    # only nonzero known constants are stored; absent slots read as zero
    known: dict[tuple[int, int, int], int] = {}
    unknown: set[tuple[int, int, int]] = set()
    sums = []
    for x in range(r):
        for y in range(r):
            if not is_split[x] and not is_split[y]:
                for z, v in orbit_product(rep[x], rep[y]).items():
                    known[(x, y, z)] = v
            else:
                unknown.update((x, y, z) for z in range(r))
    seen_pairs = set()
    for x in range(r):
        for y in range(r):
            if not (is_split[x] or is_split[y]):
                continue
            sx, sy = tuple(sib[x]), tuple(sib[y])
            if (sx, sy) in seen_pairs:
                continue
            seen_pairs.add((sx, sy))
            op = orbit_product(rep[x], rep[y])
            for z in range(r):
                sums.append((tuple((a, b, z) for a in sx for b in sy), op.get(z, 0)))
    unit = next(x for x in range(r) if rep[x] == parent.unit)
    pdual = {}
    for x in range(r):
        d = parent.dual[rep[x]]
        pdual[x] = alpha[d]
    splits = sorted({tuple(alpha[rep[x]]) for x in range(r) if is_split[x]})
    base_dual = [pdual[x][0] if not is_split[x] else None for x in range(r)]
    skeletons = []
    for choice in itertools.product((False, True), repeat=len(splits)):
        dual = list(base_dual)
        for (p, m), swap in zip(splits, choice):
            dp, dm = alpha[parent.dual[rep[p]]]
            dual[p], dual[m] = (dm, dp) if swap else (dp, dm)
        if any(dual[dual[x]] != x for x in range(r)):
            continue
        P = PartialFusionData(
            name,
            tuple(objs),
            unit,
            tuple(dual),
            tuple(dims),
            known,
            set(unknown),
            sums,
            split=tuple(x for x in range(r) if is_split[x]),
            swap_pairs=tuple(splits),
        )
        skeletons.append(P)
    return skeletons


def simple_current_extension(
    parent: FusionRing | TensorProduct,
    current: int,
    local: Iterable[int],
    *,
    name: str,
    rep_name: Callable[[int], str] | None = None,
    split_names: Callable[[int], tuple[str, str]] | None = None,
    prefer: Callable[[int], object] | None = None,
    max_solutions: int = 64,
) -> list[FusionRing]:
    """All extension rings of ``parent`` by ``current``, one per isomorphism
    class up to exchanging split halves."""
    solutions: list[FusionRing] = []
    seen = set()
    for P in extension_skeletons(
        parent, current, local, name=name, rep_name=rep_name, split_names=split_names, prefer=prefer
    ):
        for ring in complete_by_associativity(P, max_solutions=max_solutions):
            key = _canonical_key(ring, P.swap_pairs)
            if key not in seen:
                seen.add(key)
                solutions.append(ring)
    return solutions


def d2n_even_solutions(n: int) -> list[FusionRing]:
    if n < 2:
        raise FusionError("D_2n even part needs n >= 2")
    L = 4 * n - 4
    parent = su2_even(L)
    local = list(range(parent.rank))
    J = parent.index(str(L))
    f = 2 * n - 2
    return simple_current_extension(
        parent,
        J,
        local,
        name=f"D{2 * n}_even",
        split_names=lambda a: (f"{f}+", f"{f}-"),
    )


def d2n_even_ring(n: int) -> FusionRing:
    """Even part of D_{2n}: the index-2 simple current extension of SU(2)_{4n-4}."""
    sols = d2n_even_solutions(n)
    if len(sols) != 1:
        raise CompletionError(f"D{2 * n} even part: {len(sols)} completions", sols)
    return sols[0]


def find_isomorphism(R: FusionRing, S: FusionRing) -> dict[int, int] | None:
    """A based-ring isomorphism R -> S (objects to objects), or None."""
    if R.rank != S.rank:
        return None
    order = sorted(range(R.rank), key=lambda i: (-float(R.dims[i]), i))
    cand = {i: [j for j in range(S.rank) if S.dims[j] == R.dims[i]] for i in range(R.rank)}
    phi: dict[int, int] = {}
    used: set[int] = set()

    def ok(i):
        for a in phi:
            for b in phi:
                for c in phi:
                    if i in (a, b, c) and R.nij(a, b, c) != S.nij(phi[a], phi[b], phi[c]):
                        return False
        return True

    def rec(t):
        if t == len(order):
            return True
        i = order[t]
        for j in cand[i]:
            if j in used:
                continue
            phi[i] = j
            used.add(j)
            if ok(i) and rec(t + 1):
                return True
            del phi[i]
            used.discard(j)
        return False

    if not rec(0):
        return None
    if phi[R.unit] != S.unit:
        return None
    return dict(phi)


def load_ring(path) -> FusionRing:
    with open(path, encoding="utf-8") as fh:
        return FusionRing.from_json(json.load(fh))
