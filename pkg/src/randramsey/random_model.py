"""Seeded G(n,p) sampling, two-round exposure, double creatures and Monte Carlo.

Randomness: trial ``t`` of master seed ``s`` draws from
``PCG64(SeedSequence(entropy=s, spawn_key=(t, sub)))`` where ``sub`` is 0
for a plain G(n,p) sample and 1, 2 for the two exposure rounds.  Pairs are
visited in lexicographic order and pair ``j`` is kept iff its uniform
``U_j`` in [0, 2^62) is below ``ceil(p * 2^62)``; the inclusion probability
therefore exceeds p by less than 2^-62, and p = 0, 1 are exact.  Since the
same uniforms serve every p, samples are coupled: the graph for a larger p
contains the one for a smaller p.
"""

from __future__ import annotations

import itertools
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .arrowing import DEFAULT_BUDGET, SearchBudgetExceeded, arrows_lambda
from .constants import two_round_split
from .exact import ExactScalar, Number
from .graphs import (
    Edge, Graph, Pattern, PatternError, _norm, canonical_form, complete_graph, count_copies,
    is_isomorphic,
)

UNIFORM_BITS = 62
WILSON_Z = statistics.NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class Seed:
    master: int

    def __post_init__(self) -> None:
        if not 0 <= self.master < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def generator(self, trial: int, sub: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master, spawn_key=(trial, sub))
        return np.random.Generator(np.random.PCG64(ss))


def _seed(seed: Seed | int) -> Seed:
    return seed if isinstance(seed, Seed) else Seed(seed)


def threshold(p: Number | mpmath.mpf) -> int:
    """ceil(p * 2^62) for p in [0, 1]."""
    if isinstance(p, mpmath.mpf):
        with mpmath.workprec(128):
            return int(mpmath.ceil(mpmath.ldexp(p, UNIFORM_BITS)))
    p = ExactScalar.of(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0,1]")
    if p.is_zero():
        return 0
    return math.ceil(p.mantissa * Fraction(2) ** (p.exp2 + UNIFORM_BITS))


def _sample_pairs(n: int, thresh: int, rng: np.random.Generator) -> Graph:
    pairs = n * (n - 1) // 2
    u = rng.integers(0, 1 << UNIFORM_BITS, size=pairs, dtype=np.uint64)
    keep = np.flatnonzero(u < np.uint64(thresh)) if thresh < 1 << UNIFORM_BITS else np.arange(pairs)
    all_pairs = list(itertools.combinations(range(n), 2))
    return Graph(n, tuple(all_pairs[j] for j in keep))


def sample_gnp(n: int, p: Number, seed: Seed | int, trial: int) -> Graph:
    """G(n,p) from the trial's own stream."""
    return _sample_pairs(n, threshold(p), _seed(seed).generator(trial, 0))


def _union(a: Graph, b: Graph) -> Graph:
    return Graph(a.n, tuple(set(a.edges) | set(b.edges)))


def two_round_sample(n: int, p: Number, alpha: Number, seed: Seed | int,
                     trial: int) -> tuple[Graph, Graph, Graph]:
    """(G_I, G_II, G_I ∪ G_II) with G_I ~ G(n,p_I), G_II ~ G(n,p_II) independent."""
    seed = _seed(seed)
    if ExactScalar.of(p).is_zero():
        e = Graph(n)
        return e, e, e
    p_I, p_II = two_round_split(p, alpha)
    G1 = _sample_pairs(n, threshold(p_I), seed.generator(trial, 1))
    G2 = _sample_pairs(n, threshold(p_II), seed.generator(trial, 2))
    return G1, G2, _union(G1, G2)


# double creatures ---------------------------------------------------------------

@dataclass(frozen=True)
class CreatureSet:
    creatures: tuple[Graph, ...]
    include_degenerate: bool

    @property
    def t(self) -> int:
        return len(self.creatures)


def enumerate_double_creatures(F_i: Pattern, F_next: Pattern, f: Edge,
                               include_degenerate: bool = False) -> CreatureSet:
    """Isomorphism classes of unions of two copies of F_i that one pair completes to F_next.

    The completing pair is {0,1}.  The first copy is pinned (a->0, b->1,
    the rest to 2..k-1); the second ranges over both orientations of f and
    all placements of its other vertices among 2..2k-3.  A copy is its
    vertex set together with its edge set, so isolated vertices of F_i
    count toward the union.
    """
    f = _norm(*f)
    if f not in F_next.edges:
        raise PatternError(f"{f} is not an edge of F_next")
    if not is_isomorphic(F_next.minus(f).graph, F_i.graph):
        raise PatternError("F_next - f is not isomorphic to F_i")
    k = F_next.k
    a, b = f
    others = [v for v in range(k) if v not in f]
    rest = [e for e in F_next.edges if e != f]

    def copy_of(phi: dict[int, int]) -> tuple[frozenset, frozenset]:
        return (frozenset(phi.values()),
                frozenset(_norm(phi[s], phi[t]) for s, t in rest))

    first = {a: 0, b: 1}
    first.update({v: 2 + j for j, v in enumerate(others)})
    c1 = copy_of(first)
    forms: dict[tuple, Graph] = {}
    for ends in ((0, 1), (1, 0)):
        for place in itertools.permutations(range(2, 2 * k - 2), k - 2):
            phi = {a: ends[0], b: ends[1]}
            phi.update(dict(zip(others, place)))
            c2 = copy_of(phi)
            if c2 == c1 and not include_degenerate:
                continue
            verts = sorted(c1[0] | c2[0])
            relabel = {v: j for j, v in enumerate(verts)}
            T = Graph(len(verts), tuple(_norm(relabel[u], relabel[v]) for u, v in c1[1] | c2[1]))
            forms.setdefault(canonical_form(T), T)
    reps = tuple(forms[key] for key in sorted(forms))
    return CreatureSet(reps, include_degenerate)


def count_creatures(G: Graph, cs: CreatureSet) -> int:
    return sum(count_copies(G, Pattern(T)) for T in cs.creatures)


def creature_expectation_bound(k: int, m: int, p_I: Number, i: int, t: int) -> ExactScalar:
    """t m^{2k-2} p_I^{2i}."""
    if m < 1:
        raise ValueError("m must be positive")
    return t * ExactScalar.of(m) ** (2 * k - 2) * ExactScalar.of(p_I) ** (2 * i)


def exact_creature_expectation(m: int, p: Number, cs: CreatureSet) -> ExactScalar:
    """E Y in G(m,p): sum over classes of count_copies(K_m, T) p^{e(T)}."""
    Km = complete_graph(m)
    p = ExactScalar.of(p)
    total = ExactScalar.of(0)
    for T in cs.creatures:
        total = total + count_copies(Km, Pattern(T)) * p**T.m
    return total


# Monte Carlo -----------------------------------------------------------------

def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    ph = successes / trials
    denom = 1 + z * z / trials
    center = (ph + z * z / (2 * trials)) / denom
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class McEstimate:
    """Arrowing frequency over the decided trials.

    Trials whose search ran out of budget are counted in ``indeterminate``
    and left out of the estimate and its interval.
    """

    trials: int
    successes: int
    indeterminate: int = 0

    @property
    def decided(self) -> int:
        return self.trials - self.indeterminate

    @property
    def estimate(self) -> Fraction | None:
        return Fraction(self.successes, self.decided) if self.decided else None

    @property
    def wilson_ci(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.decided)


def _trial_verdict(args) -> int | None:
    n, thresh, F, lam, master, trial, budget = args
    G = _sample_pairs(n, thresh, Seed(master).generator(trial, 0))
    try:
        return int(arrows_lambda(G, F, lam, budget=budget))
    except SearchBudgetExceeded:
        return None


def _run_trials(n: int, thresh: int, F: Pattern, lam: int, trials: int, seed: Seed,
                budget: int, jobs: int) -> McEstimate:
    tasks = [(n, thresh, F, lam, seed.master, t, budget) for t in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(_trial_verdict, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        verdicts = [_trial_verdict(t) for t in tasks]
    return McEstimate(trials, sum(1 for v in verdicts if v == 1),
                      sum(1 for v in verdicts if v is None))


def mc_arrow_probability(n: int, p: Number, F: Pattern, lam: int, trials: int,
                         seed: Seed | int, *, budget: int = DEFAULT_BUDGET,
                         jobs: int = 1) -> McEstimate:
    """Fraction of sampled G(n,p) with every 2-coloring carrying >= lam mono copies of F."""
    if trials < 1:
        raise ValueError("trials must be positive")
    return _run_trials(n, threshold(p), F, lam, trials, _seed(seed), budget, jobs)


CRIT = "crit"


@dataclass(frozen=True)
class SweepRow:
    C: Fraction | str
    C_value: float
    p: float
    valid: bool
    result: McEstimate | None

    def csv_fields(self) -> list[str]:
        head = [f"{self.C_value:.6f}", f"{self.p:.6f}"]
        if not self.valid:
            return head + ["invalid", "", "", "0"]
        est = self.result.estimate
        lo, hi = self.result.wilson_ci
        return head + ["" if est is None else f"{float(est):.6f}", f"{lo:.6f}", f"{hi:.6f}",
                       str(self.result.indeterminate)]


CSV_HEADER = "C,p,estimate,ci_lo,ci_hi,indeterminate"


def _grid_point(n: int, m_F: Fraction, C: Fraction | str) -> tuple[float, mpmath.mpf, bool]:
    """(C as float, p, p <= 1) for p = C n^{-1/m_F}, with 'crit' meaning p = 1."""
    a, b = m_F.numerator, m_F.denominator
    with mpmath.workprec(128):
        root = mpmath.power(n, mpmath.mpf(b) / a)
        if C == CRIT:
            return float(root), mpmath.mpf(1), True
        C = Fraction(C)
        if C < 0:
            raise ValueError("C must be nonnegative")
        # p <= 1  <=>  C^a <= n^b, decided exactly
        ok = C**a <= Fraction(n) ** b
        p = mpmath.mpf(C.numerator) / C.denominator / root
        return float(C), p, ok


def parse_c_grid(text: str) -> list[Fraction | str]:
    """Comma-separated rationals or decimals; ``crit`` stands for p = 1."""
    out: list[Fraction | str] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        out.append(CRIT if tok.lower() == CRIT else Fraction(tok))
    if not out:
        raise ValueError("empty C grid")
    return out


def mc_threshold_sweep(n: int, F: Pattern, C_grid: Iterable[Fraction | str], trials: int,
                       seed: Seed | int, *, lam: int = 1, budget: int = DEFAULT_BUDGET,
                       jobs: int = 1) -> list[SweepRow]:
    """Arrowing estimates at p = C n^{-1/m_F} along the grid, in grid order."""
    if trials < 1:
        raise ValueError("trials must be positive")
    seed = _seed(seed)
    m_F = F.m_F
    rows = []
    for C in C_grid:
        c_val, p, ok = _grid_point(n, m_F, C)
        if not ok:
            rows.append(SweepRow(C, c_val, float(p), False, None))
            continue
        est = _run_trials(n, threshold(p), F, lam, trials, seed, budget, jobs)
        rows.append(SweepRow(C, c_val, float(p), True, est))
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return "\n".join([CSV_HEADER] + [",".join(r.csv_fields()) for r in rows]) + "\n"


# deletion oracle ---------------------------------------------------------------

def deletion_oracle(G: Graph, F: Pattern, h: int, *,
                    budget: int = DEFAULT_BUDGET) -> tuple[tuple[Edge, ...], int]:
    """The h-edge deletion leaving fewest copies of F (first in lexicographic order)."""
    if not 0 <= h <= G.m:
        raise ValueError(f"h must lie in 0..{G.m}")
    if math.comb(G.m, h) > budget:
        raise SearchBudgetExceeded(f"{math.comb(G.m, h)} deletion sets exceed budget")
    best: tuple[tuple[Edge, ...], int] | None = None
    for removed in itertools.combinations(G.edges, h):
        c = count_copies(G.without_edges(removed), F)
        if best is None or c < best[1]:
            best = (removed, c)
            if c == 0:
                break
    return best
