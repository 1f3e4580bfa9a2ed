"""Uniform-density measurements on sparsified incidence graphs: the dyadic
profile of a vertex subset, the transversal witness sub-hypergraph with exact
edge counts and codegrees, the two inequality families, and the blow-up
transfer check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .construct import SparsifiedIncidence, blow_up, dyadic_profile, evenly_partitioned
from .graphs import Graph, GraphError, enumerate_cliques
from .util import iter_bits


@dataclass(frozen=True)
class DensityProfile:
    a: dict[int, int]                      # clique id -> |X ∩ K_v|, only a_v >= 1
    dyadic_classes: dict[int, tuple[int, ...]]
    ell_dyadic: int | None
    evenly_partitioned: tuple[int, ...]    # I'_ell


@dataclass(frozen=True)
class WitnessSubgraph:
    hyperedges: tuple[tuple[int, ...], ...] | None  # None when above the materialize limit
    e_count: int
    codegrees: dict[int, int]
    params: tuple  # (N, m, alpha, lam)


def density_witness(
    sparsified: SparsifiedIncidence,
    X,
    s: int | None = None,
    materialize_limit: int = 200_000,
) -> tuple[DensityProfile, WitnessSubgraph]:
    """Dyadic profile of X plus the witness sub-hypergraph made of the
    part-transversals of evenly partitioned dominant-class cliques.

    The edge count is the exact product formula; codegrees are exact (for
    i >= 2 a vertex set lies in at most one clique, so the maximum is a
    per-clique product over the untouched parts).
    """
    if s is None:
        s = sparsified.s
    if s != sparsified.s:
        raise GraphError(
            f"requested s={s} does not match the partition's {sparsified.s} parts"
        )
    X = sorted(set(X))
    if not X:
        raise GraphError("X must be non-empty")
    x_mask = 0
    for u in X:
        x_mask |= 1 << u

    cover = sparsified.cover
    partition = sparsified.partition
    a_values = {}
    for v in sorted(cover.cliques):
        a = (x_mask & cover.member_mask(v)).bit_count()
        if a:
            a_values[v] = a
    classes, ell = dyadic_profile(a_values)

    evenly = []
    part_lists: dict[int, list[list[int]]] = {}
    if ell is not None:
        for v in classes[ell]:
            masks = partition.part_masks(v)
            lists = [sorted(iter_bits(pm & x_mask)) for pm in masks]
            a_v = a_values[v]
            if evenly_partitioned(a_v, [len(lst) for lst in lists], s):
                evenly.append(v)
                part_lists[v] = lists

    profile = DensityProfile(
        a=a_values,
        dyadic_classes={i: tuple(vs) for i, vs in classes.items()},
        ell_dyadic=ell,
        evenly_partitioned=tuple(evenly),
    )

    e_count = 0
    for v in evenly:
        prod = 1
        for lst in part_lists[v]:
            prod *= len(lst)
        e_count += prod

    hyperedges = None
    if e_count <= materialize_limit:
        edges = []
        for v in evenly:
            for combo in itertools.product(*part_lists[v]):
                edges.append(tuple(sorted(combo)))
        edges.sort()
        hyperedges = tuple(edges)

    codegrees = _exact_codegrees(evenly, part_lists, X, s, e_count)
    m = len(X)
    alpha_min = Fraction(e_count, m ** s)
    lam_min = _minimal_lambda(codegrees, e_count, m, s)
    witness = WitnessSubgraph(
        hyperedges=hyperedges,
        e_count=e_count,
        codegrees=codegrees,
        params=(sparsified.graph.n, m, alpha_min, lam_min),
    )
    return profile, witness


def _exact_codegrees(evenly, part_lists, X, s, e_count) -> dict[int, int]:
    codegrees = {i: 0 for i in range(1, s + 1)}
    if e_count == 0:
        return codegrees

    # i = 1: a vertex may lie in several cliques; sum its per-clique counts
    per_vertex: dict[int, int] = {}
    for v in evenly:
        lists = part_lists[v]
        sizes = [len(lst) for lst in lists]
        total = 1
        for size in sizes:
            total *= size
        for p, lst in enumerate(lists):
            if sizes[p] == 0:
                continue
            contribution = total // sizes[p]
            for x in lst:
                per_vertex[x] = per_vertex.get(x, 0) + contribution
    codegrees[1] = max(per_vertex.values(), default=0)

    # i >= 2: at most one common clique; hit the i smallest parts
    for v in evenly:
        sizes = sorted(len(lst) for lst in part_lists[v])
        if any(size == 0 for size in sizes):
            continue
        for i in range(2, s + 1):
            remaining = 1
            for size in sizes[i:]:
                remaining *= size
            codegrees[i] = max(codegrees[i], remaining)
    return codegrees


def _minimal_lambda(codegrees, e_count, m, s) -> float:
    if e_count == 0:
        return 0.0
    density = e_count / m
    lam = 0.0
    for i in range(1, s + 1):
        exponent = 1 - (i - 1) / (s - 1) if s > 1 else 1.0
        bound_unit = density ** exponent
        if bound_unit > 0:
            lam = max(lam, codegrees[i] / bound_unit)
    return lam


@dataclass(frozen=True)
class DensityReport:
    edge_margin: float
    codegree_margins: dict[int, float]
    passes: bool
    minimal_alpha: Fraction
    minimal_lambda: float


def check_uniform_density(
    witness: WitnessSubgraph,
    X_size: int,
    alpha=None,
    lam=None,
) -> DensityReport:
    """Evaluate the edge-count and codegree inequality families at the given
    (alpha, lam), defaulting to the witness's stored parameters.  Margins are
    achieved/required ratios: >= 1 passes, 0 means an empty witness."""
    if X_size <= 0:
        raise GraphError("X_size must be positive")
    _, _, alpha_stored, lam_stored = witness.params
    if alpha is None:
        alpha = alpha_stored
    if lam is None:
        lam = lam_stored
    s = max(witness.codegrees) if witness.codegrees else 1

    required_edges = float(alpha) * X_size ** s
    edge_margin = witness.e_count / required_edges if required_edges > 0 else math.inf

    codegree_margins = {}
    density = witness.e_count / X_size
    for i in range(1, s + 1):
        exponent = 1 - (i - 1) / (s - 1) if s > 1 else 1.0
        bound = float(lam) * density ** exponent
        delta = witness.codegrees.get(i, 0)
        codegree_margins[i] = math.inf if delta == 0 else bound / delta

    passes = edge_margin >= 1.0 and all(mg >= 1.0 for mg in codegree_margins.values())
    X = X_size
    minimal_alpha = Fraction(witness.e_count, X ** s)
    minimal_lambda = _minimal_lambda(witness.codegrees, witness.e_count, X, s)
    return DensityReport(edge_margin, codegree_margins, passes, minimal_alpha, minimal_lambda)


# ---------------------------------------------------------------------------
# blow-up transfer


def hypergraph_blow_up(hyperedges, k: int) -> set[tuple[int, ...]]:
    """k-blow-up of an s-uniform edge set under v -> {v*k, .., v*k + k-1}."""
    out = set()
    for edge in hyperedges:
        fibers = [[v * k + j for j in range(k)] for v in edge]
        for combo in itertools.product(*fibers):
            out.add(tuple(sorted(combo)))
    return out


def blow_up_transfer_report(graph: Graph, k: int, s: int) -> dict:
    """Compare the K_s-hypergraph of the k-blow-up with the k-blow-up of the
    K_s-hypergraph, plus the exact vertex/edge count identities."""
    blown = blow_up(graph, k)
    lifted = hypergraph_blow_up(enumerate_cliques(graph, s), k)
    direct = set(enumerate_cliques(blown, s))
    return {
        "equal": lifted == direct,
        "lifted_count": len(lifted),
        "direct_count": len(direct),
        "vertices_ok": blown.n == k * graph.n,
        "edges_ok": blown.m == k * k * graph.m,
    }
