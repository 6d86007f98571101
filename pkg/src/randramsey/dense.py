"""(ρ,d)-dense graphs, canonical sequences and monochromatic clique extraction."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exact import ExactScalar, Number
from .graphs import RED, EdgeColoring, Graph


class DegenerateParametersError(ValueError):
    pass


class NotCanonicalError(ValueError):
    pass


@dataclass(frozen=True)
class DenseParams:
    rho: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        rho, d = Fraction(self.rho), Fraction(self.d)
        if not 0 < d < 1:
            raise ValueError("d must lie in (0,1)")
        if not 0 < rho <= 1:
            raise ValueError("rho must lie in (0,1]")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "d", d)


def check_size(G: Graph, params: DenseParams) -> int:
    m = math.ceil(params.rho * G.n)
    if m < 2:
        raise DegenerateParametersError(f"ceil(rho*n) = {m} < 2")
    return m


def densest_failure(G: Graph, m: int, d: Fraction) -> tuple[int, ...] | None:
    """An m-subset inducing fewer than d*m^2/2 edges, or None."""
    need = d * m * m / 2
    adj = G.adj
    for S in itertools.combinations(range(G.n), m):
        e = 0
        for i, u in enumerate(S):
            for v in S[i + 1:]:
                e += adj[u] >> v & 1
        if e < need:
            return S
    return None


def is_rho_d_dense(G: Graph, params: DenseParams) -> bool:
    """Every induced subgraph on ceil(ρn) vertices has at least d·m²/2 edges.

    Larger subsets then pass by averaging, so one size is enough.
    """
    m = check_size(G, params)
    return densest_failure(G, m, params.d) is None


@dataclass(frozen=True)
class CanonicalSequence:
    vertices: tuple[int, ...]

    def validate(self, chi: EdgeColoring) -> None:
        G = chi.host
        vs = self.vertices
        if len(set(vs)) != len(vs):
            raise NotCanonicalError("repeated vertex")
        for i, u in enumerate(vs[:-1]):
            seen = set()
            for v in vs[i + 1:]:
                if not G.has_edge(u, v):
                    raise NotCanonicalError(f"missing edge {{{u},{v}}}")
                seen.add(chi.color(u, v))
            if len(seen) > 1:
                raise NotCanonicalError(f"forward edges of {u} are not monochromatic")

    def forward_color(self, chi: EdgeColoring, i: int) -> int:
        return chi.color(self.vertices[i], self.vertices[i + 1])


def _color_masks(chi: EdgeColoring) -> tuple[list[int], list[int]]:
    G = chi.host
    red = [0] * G.n
    blue = [0] * G.n
    for (u, v), c in zip(G.edges, chi.colors):
        nb = red if c == RED else blue
        nb[u] |= 1 << v
        nb[v] |= 1 << u
    return red, blue


def count_canonical(G: Graph, chi: EdgeColoring, ell: int) -> int:
    """Number of ordered canonical sequences of length ``ell``.

    The forward color of a vertex is fixed by its successor, so the
    remaining vertices must lie in its neighborhood of that color.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    if chi.host != G:
        raise ValueError("coloring does not belong to this graph")
    if ell > G.n:
        return 0
    red, blue = _color_masks(chi)
    memo: dict[tuple[int, int], int] = {}

    def count(length: int, pool: int) -> int:
        if length == 1:
            return bin(pool).count("1")
        key = (length, pool)
        if key in memo:
            return memo[key]
        total = 0
        rest = pool
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            total += count(length - 1, pool & red[v]) + count(length - 1, pool & blue[v])
        memo[key] = total
        return total

    return count(ell, (1 << G.n) - 1)


def iter_canonical(G: Graph, chi: EdgeColoring, ell: int) -> Iterator[CanonicalSequence]:
    """Canonical sequences of length ``ell``, depth first."""
    if ell > G.n:
        return
    red, blue = _color_masks(chi)
    seq: list[int] = []

    def rec(pool: int) -> Iterator[CanonicalSequence]:
        if len(seq) == ell - 1:
            rest = pool
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                yield CanonicalSequence(tuple(seq) + (v,))
            return
        rest = pool
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            seq.append(v)
            yield from rec(pool & red[v])
            yield from rec(pool & blue[v])
            seq.pop()

    yield from rec((1 << G.n) - 1)


def canonical_lower_bound(n: int, ell: int, d: Number) -> ExactScalar:
    """f_n(ℓ) = (1/4)^{C(ℓ+1,2)} d^{C(ℓ,2)} n^ℓ."""
    d = ExactScalar.of(d)
    if ell < 2:
        raise ValueError("ell must be at least 2")
    if not 0 < d <= 1:
        raise ValueError("d must lie in (0,1]")
    return ExactScalar.pow2(-2 * math.comb(ell + 1, 2)) * d ** math.comb(ell, 2) * ExactScalar.of(n) ** ell


def gamma_bound(k: int, d: Number) -> ExactScalar:
    """γ = d^{2k²} 2^{-5k²}."""
    d = ExactScalar.of(d)
    if k < 2:
        raise ValueError("k must be at least 2")
    if not 0 < d <= 1:
        raise ValueError("d must lie in (0,1]")
    return d ** (2 * k * k) * ExactScalar.pow2(-5 * k * k)


def extract_mono_clique(chi: EdgeColoring, seq: CanonicalSequence | Sequence[int], k: int) -> frozenset[int]:
    """k vertices of a canonical sequence of length 2k-2 spanning a monochromatic K_k.

    Among the first 2k-3 vertices some k-1 share a forward color; those
    (the earliest ones) together with the last vertex form the clique.
    """
    if not isinstance(seq, CanonicalSequence):
        seq = CanonicalSequence(tuple(seq))
    vs = seq.vertices
    if len(vs) != 2 * k - 2:
        raise ValueError(f"sequence length {len(vs)} != 2k-2 = {2 * k - 2}")
    seq.validate(chi)
    fwd = [seq.forward_color(chi, i) for i in range(2 * k - 3)]
    for c in (fwd[0], 1 - fwd[0]):
        picks = [vs[i] for i in range(2 * k - 3) if fwd[i] == c][: k - 1]
        if len(picks) == k - 1:
            clique = picks + [vs[-1]]
            break
    else:  # pragma: no cover - pigeonhole
        raise AssertionError("no color class of size k-1")
    colors = {chi.color(u, v) for u, v in itertools.combinations(clique, 2)}
    if len(colors) != 1:  # pragma: no cover - guaranteed by canonicity
        raise AssertionError("extracted clique is not monochromatic")
    return frozenset(clique)


def canonical_preconditions(n: int, ell: int, params: DenseParams) -> bool:
    """n ≥ 2(4/d)^{ℓ-2} and ρ ≤ (d/4)^{ℓ-2}/2."""
    d = params.d
    return n >= 2 * (4 / d) ** (ell - 2) and params.rho <= (d / 4) ** (ell - 2) / 2


def clique_preconditions(n: int, k: int, params: DenseParams) -> bool:
    """n ≥ (4/d)^{2k} and ρ ≤ (d/4)^{2k}."""
    d = params.d
    return n >= (4 / d) ** (2 * k) and params.rho <= (d / 4) ** (2 * k)
