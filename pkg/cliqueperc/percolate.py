"""
Clique-level equivalent graph and heterogeneous bond percolation.

Every clique becomes one super node; type-1 and type-2 edges are carried over
1:1 by mapping their endpoints through clique_of. Percolation keeps a type-1
edge iff its uniform draw u < T_w and a type-2 edge iff u < T_f, then measures
the largest connected component in cliques and in individuals.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .config import DEFAULT_GIANT_THRESHOLD
from .errors import ErrorCode, bad_transmissibility, config_error
from .netgen import GenParams, SocialPhysicalNetwork, generate_network
from .unionfind import UnionFind

logger = logging.getLogger(__name__)

TYPE1 = 1
TYPE2 = 2


@dataclass(frozen=True, eq=False)
class EquivalentGraph:
    """Super-node graph: one node per clique, typed edges between cliques."""

    super_node_count: int
    clique_size: np.ndarray
    edges: np.ndarray  # (E, 2) super-node endpoints
    edge_type: np.ndarray  # (E,) values TYPE1 / TYPE2

    @classmethod
    def from_edges(
        cls,
        clique_size: Sequence[int],
        edges: Sequence[tuple[int, int]],
        edge_type: Sequence[int],
    ) -> EquivalentGraph:
        sizes = np.asarray(clique_size, dtype=np.int64)
        return cls(
            super_node_count=int(sizes.size),
            clique_size=sizes,
            edges=np.asarray(edges, dtype=np.int64).reshape(-1, 2),
            edge_type=np.asarray(edge_type, dtype=np.int8).reshape(-1),
        )

    @property
    def edge_count(self) -> int:
        return int(self.edge_type.size)

    def degrees(self, link_type: int) -> np.ndarray:
        """Number of type-t link ends on each super node (self-loops count twice)."""
        sel = self.edges[self.edge_type == link_type]
        return np.bincount(sel.ravel(), minlength=self.super_node_count)


def build_equivalent(network: SocialPhysicalNetwork) -> EquivalentGraph:
    e1 = network.clique_of[network.type1_edges]
    e2 = network.clique_of[network.type2_edges]
    return EquivalentGraph(
        super_node_count=network.N_c,
        clique_size=network.clique_sizes,
        edges=np.concatenate([e1, e2]).reshape(-1, 2).astype(np.int64),
        edge_type=np.concatenate(
            [np.full(len(e1), TYPE1, dtype=np.int8), np.full(len(e2), TYPE2, dtype=np.int8)]
        ),
    )


def _check_T(*values: float) -> None:
    for v in values:
        if not (0.0 <= v <= 1.0):
            raise bad_transmissibility(v)


def _retained(eq: EquivalentGraph, T_w: float, T_f: float, u: np.ndarray) -> np.ndarray:
    thresholds = np.where(eq.edge_type == TYPE1, T_w, T_f)
    return u < thresholds


def _forest(eq: EquivalentGraph, keep: np.ndarray) -> UnionFind:
    uf = UnionFind(eq.super_node_count, weights=eq.clique_size.tolist())
    uf.union_all(eq.edges[keep].tolist())
    return uf


def component_labels(eq: EquivalentGraph, keep: np.ndarray | None = None) -> np.ndarray:
    """Component label per super node; the label is the smallest member index."""
    keep = np.ones(eq.edge_count, dtype=bool) if keep is None else keep
    roots = np.asarray(_forest(eq, keep).labels(), dtype=np.int64)
    first = np.full(eq.super_node_count, eq.super_node_count, dtype=np.int64)
    np.minimum.at(first, roots, np.arange(eq.super_node_count))
    return first[roots]


def percolate_with_uniforms(
    eq: EquivalentGraph, T_w: float, T_f: float, u: np.ndarray
) -> tuple[int, int]:
    """Largest component (cliques, nodes) keeping edge i iff u[i] < T of its type."""
    _check_T(T_w, T_f)
    if eq.super_node_count == 0:
        return 0, 0
    return _forest(eq, _retained(eq, T_w, T_f, u)).largest()


def percolate_once(
    eq: EquivalentGraph, T_w: float, T_f: float, rng: np.random.Generator
) -> tuple[int, int]:
    u = rng.random(eq.edge_count)
    return percolate_with_uniforms(eq, T_w, T_f, u)


@dataclass(frozen=True)
class ReplicationResult:
    index: int
    giant_cliques: int
    giant_nodes: int
    N_c: int
    N: int
    discarded_type1: int = 0
    discarded_type2: int = 0
    elapsed_s: float = field(default=0.0, compare=False)

    @property
    def S_c(self) -> float:
        return self.giant_cliques / self.N_c if self.N_c else 0.0

    @property
    def S_n(self) -> float:
        return self.giant_nodes / self.N if self.N else 0.0

    @property
    def stubs_discarded(self) -> int:
        return self.discarded_type1 + self.discarded_type2


@dataclass(frozen=True)
class PercolationOutcome:
    """Per-replication largest components plus aggregates, ordered by index."""

    replications: tuple[ReplicationResult, ...]
    giant_threshold_fraction: float = DEFAULT_GIANT_THRESHOLD

    @property
    def replication_count(self) -> int:
        return len(self.replications)

    @property
    def S_c_values(self) -> np.ndarray:
        return np.array([r.S_c for r in self.replications], dtype=float)

    @property
    def S_n_values(self) -> np.ndarray:
        return np.array([r.S_n for r in self.replications], dtype=float)

    @property
    def giant_mask(self) -> np.ndarray:
        """Replications whose largest component exceeds the threshold share of cliques."""
        return np.array(
            [r.giant_cliques > self.giant_threshold_fraction * r.N_c for r in self.replications],
            dtype=bool,
        )

    @property
    def S_c_mean(self) -> float:
        return float(np.mean(self.S_c_values))

    @property
    def S_c_std(self) -> float:
        return float(np.std(self.S_c_values))

    @property
    def S_n_mean(self) -> float:
        return float(np.mean(self.S_n_values))

    @property
    def S_n_std(self) -> float:
        return float(np.std(self.S_n_values))

    @property
    def p_inf(self) -> float:
        return float(np.mean(self.giant_mask))

    @property
    def S_c_giant_mean(self) -> float:
        mask = self.giant_mask
        return float(np.mean(self.S_c_values[mask])) if mask.any() else float("nan")

    @property
    def S_n_giant_mean(self) -> float:
        mask = self.giant_mask
        return float(np.mean(self.S_n_values[mask])) if mask.any() else float("nan")

    @property
    def stubs_discarded(self) -> int:
        return sum(r.stubs_discarded for r in self.replications)


@dataclass(frozen=True)
class _ReplicationTask:
    index: int
    params: GenParams
    T_w: float
    T_f: float
    stream: np.random.SeedSequence
    fixed: EquivalentGraph | None = None
    fixed_discarded: tuple[int, int] = (0, 0)


def _replication_seeds(stream: np.random.SeedSequence) -> tuple[int, np.random.SeedSequence]:
    gen_ss, perc_ss = stream.spawn(2)
    return int(gen_ss.generate_state(1, dtype=np.uint64)[0]), perc_ss


def _run_replication(task: _ReplicationTask) -> ReplicationResult:
    start = time.perf_counter()
    net_seed, perc_ss = _replication_seeds(task.stream)
    if task.fixed is None:
        net = generate_network(replace(task.params, seed=net_seed))
        eq = build_equivalent(net)
        n = net.N
        discarded = (net.type1_stubs.discarded, net.type2_stubs.discarded)
    else:
        eq = task.fixed
        n = int(eq.clique_size.sum())
        discarded = task.fixed_discarded
    cliques, nodes = percolate_once(eq, task.T_w, task.T_f, np.random.default_rng(perc_ss))
    return ReplicationResult(
        index=task.index,
        giant_cliques=int(cliques),
        giant_nodes=int(nodes),
        N_c=eq.super_node_count,
        N=n,
        discarded_type1=discarded[0],
        discarded_type2=discarded[1],
        elapsed_s=time.perf_counter() - start,
    )


def run_ensemble(
    params: GenParams,
    T_w: float,
    T_f: float,
    replications: int,
    giant_threshold_fraction: float = DEFAULT_GIANT_THRESHOLD,
    regenerate_network_each_run: bool = True,
    seed: int = 0,
    *,
    workers: int = 1,
) -> PercolationOutcome:
    """
    Repeat generate-and-percolate over independent streams.

    Replication r uses the r-th child of SeedSequence(seed). With
    regenerate_network_each_run=False a single network is generated from
    params.seed and only the edge retention is redrawn.
    """
    _check_T(T_w, T_f)
    if replications < 1:
        raise config_error(
            ErrorCode.CONFIG_BAD_VALUE,
            f"replications must be >= 1, got {replications}",
            field="replications",
        )

    fixed: EquivalentGraph | None = None
    fixed_discarded = (0, 0)
    if not regenerate_network_each_run:
        net = generate_network(params)
        fixed = build_equivalent(net)
        fixed_discarded = (net.type1_stubs.discarded, net.type2_stubs.discarded)

    streams = np.random.SeedSequence(seed).spawn(replications)
    tasks = [
        _ReplicationTask(i, params, T_w, T_f, s, fixed, fixed_discarded)
        for i, s in enumerate(streams)
    ]

    if workers > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, replications // (4 * workers))
            results = list(pool.map(_run_replication, tasks, chunksize=chunk))
    else:
        results = []
        for t in tasks:
            results.append(_run_replication(t))
            logger.debug("replication_done", extra={"index": t.index})

    results.sort(key=lambda r: r.index)
    return PercolationOutcome(tuple(results), giant_threshold_fraction)
