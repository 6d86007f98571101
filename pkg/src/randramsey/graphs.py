"""Graphs, patterns, colorings, copy counting and the density parameters."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .exact import ExactScalar, Number

Edge = tuple[int, int]

RED, BLUE = 0, 1
PINK, AZURE = 0, 1


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UndefinedDensityError(ValueError):
    pass


class PatternError(ValueError):
    pass


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Labeled simple graph on vertices ``0..n-1``; edges sorted lexicographically."""

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative vertex count")
        canon = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            canon.append(_norm(u, v))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        return cls(n, tuple((int(u), int(v)) for u, v in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adj(self) -> tuple[int, ...]:
        """Neighborhoods as bitmasks."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def max_degree(self) -> int:
        return max((a.bit_count() for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def without_edges(self, removed: Iterable[Edge]) -> Graph:
        drop = {_norm(*e) for e in removed}
        return Graph(self.n, tuple(e for e in self.edges if e not in drop))

    def with_edge(self, u: int, v: int) -> Graph:
        return Graph(self.n, self.edges + (_norm(u, v),))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph relabeled in the order of ``vertices``."""
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph(len(vertices), tuple(
            (pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos
        ))

    def edges_within(self, mask: int) -> int:
        return sum(1 for u, v in self.edges if mask >> u & 1 and mask >> v & 1)

    def non_isolated(self) -> list[int]:
        return [v for v in range(self.n) if self.adj[v]]

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m`` then ``m`` lines ``u v``.

    Lines whose first non-blank character is ``#`` are comments.
    """
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        rows.append((lineno, s.split()))
    if not rows:
        raise GraphParseError("empty document", 1)
    lineno, head = rows[0]
    if len(head) != 2:
        raise GraphParseError("header must be 'n m'", lineno)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphParseError("header must hold two integers", lineno) from None
    if n < 0 or m < 0:
        raise GraphParseError("negative count in header", lineno)
    body = rows[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else lineno)
        raise GraphParseError(f"expected {m} edge lines, found {len(body)}", where)
    seen: set[Edge] = set()
    edges = []
    for lineno, parts in body:
        if len(parts) != 2:
            raise GraphParseError("edge line must be 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("edge endpoints must be integers", lineno) from None
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"vertex out of range 0..{n - 1}", lineno)
        e = _norm(u, v)
        if e in seen:
            raise GraphParseError(f"duplicate edge {e}", lineno)
        seen.add(e)
        edges.append(e)
    return Graph(n, tuple(edges))


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# named graphs -------------------------------------------------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def path_graph(n: int, total: int | None = None) -> Graph:
    """Path through ``0..n-1``, padded with isolated vertices up to ``total``."""
    return Graph(total or n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple(_norm(i, (i + 1) % n) for i in range(n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def single_edge(k: int) -> Graph:
    """One edge plus ``k-2`` isolated vertices."""
    return Graph(k, ((0, 1),))


def named_graph(name: str) -> Graph:
    """``K5``, ``P3`` (path on 3 vertices), ``C4``, ``E3`` (edge + isolated), ``N4`` (edgeless)."""
    if len(name) < 2 or not name[1:].isdigit():
        raise KeyError(name)
    kind, n = name[0].upper(), int(name[1:])
    builders = {"K": complete_graph, "P": path_graph, "C": cycle_graph,
                "E": single_edge, "N": empty_graph}
    if kind not in builders:
        raise KeyError(name)
    return builders[kind](n)


# embeddings ---------------------------------------------------------------

def _search_order(F: Graph) -> list[int]:
    """Vertices of F with each connected piece in BFS order, isolated last."""
    order: list[int] = []
    placed = 0
    for start in sorted(range(F.n), key=lambda v: -bin(F.adj[v]).count("1")):
        if placed >> start & 1 or not F.adj[start]:
            continue
        queue = [start]
        placed |= 1 << start
        while queue:
            v = queue.pop(0)
            order.append(v)
            nb = F.adj[v] & ~placed
            while nb:
                w = (nb & -nb).bit_length() - 1
                nb &= nb - 1
                placed |= 1 << w
                queue.append(w)
    order += [v for v in range(F.n) if not F.adj[v]]
    return order


def iter_embeddings(F: Graph, G: Graph, fixed: dict[int, int] | None = None,
                    skip: Edge | None = None) -> Iterator[tuple[int, ...]]:
    """Injective maps of V(F) into V(G) sending edges of F to edges of G.

    ``fixed`` pins some F-vertices to G-vertices.  ``skip`` names one F-edge
    that is exempt from the edge condition.
    """
    fixed = fixed or {}
    skip = _norm(*skip) if skip else None
    order = [v for v in _search_order(F) if v not in fixed]
    order = list(fixed) + order
    phi = [-1] * F.n
    full = (1 << G.n) - 1
    used = 0
    for a, b in fixed.items():
        if used >> b & 1:
            return
        phi[a] = b
        used |= 1 << b
    # fixed vertices must already satisfy edges among themselves
    fixed_list = list(fixed)
    for i, a in enumerate(fixed_list):
        for c in fixed_list[i + 1:]:
            if F.has_edge(a, c) and _norm(a, c) != skip and not G.has_edge(phi[a], phi[c]):
                return
    start = len(fixed)

    # precompute, for each position, the earlier F-neighbors that constrain it
    back: list[list[int]] = []
    seen = set()
    for v in order:
        nbrs = [w for w in seen if F.has_edge(v, w) and _norm(v, w) != skip]
        back.append(nbrs)
        seen.add(v)

    def rec(pos: int, used: int) -> Iterator[tuple[int, ...]]:
        if pos == len(order):
            yield tuple(phi)
            return
        v = order[pos]
        cand = full & ~used
        for w in back[pos]:
            cand &= G.adj[phi[w]]
        while cand:
            x = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            phi[v] = x
            yield from rec(pos + 1, used | 1 << x)
        phi[v] = -1

    yield from rec(start, used)


def count_embeddings(F: Graph, G: Graph) -> int:
    if F.n > G.n:
        return 0
    return sum(1 for _ in iter_embeddings(F, G))


def automorphism_count(F: Graph) -> int:
    return count_embeddings(F, F)


def canonical_form(F: Graph) -> tuple[int, tuple[Edge, ...]]:
    """Isomorphism invariant that is complete: lexicographically least relabeling.

    Brute force over degree-respecting permutations; intended for the small
    graphs this package handles (up to roughly 8 vertices).
    """
    deg = [bin(a).count("1") for a in F.adj]
    classes: dict[int, list[int]] = {}
    for v in range(F.n):
        classes.setdefault(deg[v], []).append(v)
    keys = sorted(classes, reverse=True)
    groups = [classes[d] for d in keys]
    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [v for p in perms for v in p]
        pos = {v: i for i, v in enumerate(order)}
        form = tuple(sorted(_norm(pos[u], pos[v]) for u, v in F.edges))
        if best is None or form < best:
            best = form
    return F.n, best or ()


def is_isomorphic(F: Graph, H: Graph) -> bool:
    if F.n != H.n or F.m != H.m:
        return False
    if sorted(bin(a).count("1") for a in F.adj) != sorted(bin(a).count("1") for a in H.adj):
        return False
    return canonical_form(F) == canonical_form(H)


# patterns -----------------------------------------------------------------

@dataclass(frozen=True)
class Pattern:
    """A small graph F together with its cached statistics."""

    graph: Graph

    @classmethod
    def of(cls, g: Graph | str) -> Pattern:
        return cls(named_graph(g) if isinstance(g, str) else g)

    @property
    def k(self) -> int:
        return self.graph.n

    @property
    def e_F(self) -> int:
        return self.graph.m

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @cached_property
    def max_degree(self) -> int:
        return self.graph.max_degree

    @cached_property
    def aut(self) -> int:
        return automorphism_count(self.graph)

    @cached_property
    def core(self) -> Graph:
        """F with isolated vertices dropped (order preserved)."""
        return self.graph.induced(self.graph.non_isolated())

    @property
    def isolated(self) -> int:
        return self.k - self.core.n

    @cached_property
    def core_aut(self) -> int:
        return automorphism_count(self.core)

    @property
    def d_F(self) -> Fraction:
        return density_dF(self)

    @cached_property
    def _m(self) -> tuple[Fraction, Graph]:
        return max_density_mF(self)

    @property
    def m_F(self) -> Fraction:
        return self._m[0]

    def minus(self, f: Edge) -> Pattern:
        return Pattern(self.graph.without_edges([f]))

    def __str__(self) -> str:
        return f"Pattern(k={self.k}, edges={list(self.edges)})"


def density_dF(F: Pattern | Graph) -> Fraction:
    g = F.graph if isinstance(F, Pattern) else F
    if g.m == 0:
        raise UndefinedDensityError("d_F needs at least one edge")
    if g.m == 1:
        return Fraction(1, 2)
    return Fraction(g.m - 1, g.n - 2)


def max_density_mF(F: Pattern | Graph) -> tuple[Fraction, Graph]:
    """Maximum of d_H over subgraphs H with at least one edge, with a witness.

    For a fixed vertex set the induced subgraph has the most edges, and d_H
    grows with e_H, so scanning vertex subsets suffices.  A single edge
    (d = 1/2) is the fallback witness.
    """
    g = F.graph if isinstance(F, Pattern) else F
    if g.m == 0:
        raise UndefinedDensityError("m_F needs at least one edge")
    best = Fraction(1, 2)
    witness = Graph(2, ((0, 1),))
    for size in range(3, g.n + 1):
        for S in itertools.combinations(range(g.n), size):
            mask = sum(1 << v for v in S)
            e = g.edges_within(mask)
            if e < 2:
                continue
            d = Fraction(e - 1, size - 2)
            if d > best:
                best, witness = d, g.induced(S)
    return best, witness


def is_admissible(F: Pattern | Graph, k: int) -> bool:
    g = F.graph if isinstance(F, Pattern) else F
    return g.n == k and (g.m == 1 or g.max_degree >= 2)


def admissible_edge_order(F: Pattern) -> list[tuple[Pattern, Edge | None]]:
    """Chain F_1 ⊂ ... ⊂ F_e = F of k-admissible patterns.

    Entry ``i`` is ``(F_i, f_i)`` where ``F_{i-1} = F_i - f_i``; the first
    entry carries ``None``.  Built top-down, always removing the
    lexicographically smallest edge that keeps the remainder admissible.
    """
    if F.e_F < 1 or not is_admissible(F, F.k):
        raise PatternError(f"{F} is not {F.k}-admissible")
    chain: list[tuple[Pattern, Edge | None]] = []
    cur = F
    while cur.e_F > 1:
        for f in cur.edges:
            nxt = cur.minus(f)
            if is_admissible(nxt, F.k):
                chain.append((cur, f))
                cur = nxt
                break
        else:  # pragma: no cover - impossible for admissible input
            raise PatternError(f"no admissible edge removal from {cur}")
    chain.append((cur, None))
    chain.reverse()
    return chain


# copies -------------------------------------------------------------------

def core_copies(G: Graph, F: Pattern) -> list[tuple[int, ...]]:
    """Distinct edge images of F's non-isolated part, as sorted edge-index tuples."""
    core = F.core
    if core.n > G.n:
        return []
    idx = G.edge_index
    seen: set[tuple[int, ...]] = set()
    out = []
    for phi in iter_embeddings(core, G):
        img = tuple(sorted(idx[_norm(phi[u], phi[v])] for u, v in core.edges))
        if img not in seen:
            seen.add(img)
            out.append(img)
    out.sort()
    return out


def copy_multiplicity(G: Graph, F: Pattern) -> int:
    """Number of copies of F sharing one edge image (choices for isolated slots)."""
    free = G.n - F.core.n
    return math.comb(free, F.isolated) if free >= 0 else 0


def count_copies(G: Graph, F: Pattern) -> int:
    """Subgraphs of G isomorphic to F, isolated vertices of F occupying slots."""
    if F.k > G.n:
        return 0
    core_count = count_embeddings(F.core, G) // F.core_aut
    return core_count * copy_multiplicity(G, F)


def expected_copies(n: int, p: Number, F: Pattern) -> ExactScalar:
    """μ_F = C(n,k) k!/aut(F) p^{e_F}."""
    p = ExactScalar.of(p)
    if n < F.k:
        return ExactScalar.of(0)
    coeff = math.comb(n, F.k) * math.factorial(F.k) // F.aut
    return ExactScalar.of(coeff) * p**F.e_F


# colorings ----------------------------------------------------------------

@dataclass(frozen=True)
class EdgeColoring:
    """Per-edge labels 0/1 aligned with the host's canonical edge order.

    ``palette`` names the two labels: red/blue for host colorings and
    pink/azure for the auxiliary rich-pair graph.
    """

    host: Graph
    colors: tuple[int, ...]
    palette: tuple[str, str] = field(default=("red", "blue"))

    def __post_init__(self) -> None:
        cols = tuple(int(c) for c in self.colors)
        if len(cols) != self.host.m:
            raise ValueError(f"{len(cols)} colors for {self.host.m} edges")
        if any(c not in (0, 1) for c in cols):
            raise ValueError("colors must be 0 or 1")
        object.__setattr__(self, "colors", cols)

    @classmethod
    def constant(cls, host: Graph, color: int) -> EdgeColoring:
        return cls(host, (color,) * host.m)

    @classmethod
    def from_map(cls, host: Graph, mapping: dict[Edge, int]) -> EdgeColoring:
        return cls(host, tuple(mapping[e] for e in host.edges))

    def color(self, u: int, v: int) -> int:
        return self.colors[self.host.edge_index[_norm(u, v)]]

    def swapped(self) -> EdgeColoring:
        return EdgeColoring(self.host, tuple(1 - c for c in self.colors), self.palette)

    def label(self, i: int) -> str:
        return self.palette[self.colors[i]]

    def to_text(self) -> str:
        return "".join(f"{c}\n" for c in self.colors)


def parse_coloring(text: str, host: Graph) -> EdgeColoring:
    cols = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        if s not in ("0", "1"):
            raise GraphParseError("coloring lines must be 0 or 1", lineno)
        cols.append(int(s))
    if len(cols) != host.m:
        raise GraphParseError(f"expected {host.m} colors, found {len(cols)}")
    return EdgeColoring(host, tuple(cols))
