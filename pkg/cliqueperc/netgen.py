"""
Synthesis of the overlaid social-physical network.

Nodes are partitioned into cliques (complete groups, type-0 links implicit),
each node joins the online layer with probability alpha, and typed edges are
wired by configuration-model stub matching:

- type-1: every node draws k^w stubs; pairs inside one clique are rejected.
- type-2: every online node draws k^f stubs; self-pairs are rejected.

Rejected pairs are re-queued for up to `retry_passes` passes, then discarded.
An odd stub total loses one uniformly chosen stub before matching.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .config import DEFAULT_RETRY_PASSES
from .distributions import AnyDegreeLaw, CliqueSizeLaw
from .errors import CliquePercError, ErrorCode, bad_dump, make_error, no_valid_pairing

logger = logging.getLogger(__name__)

LinkType = Literal["type1", "type2"]

# Share of discarded stubs above which a warning is logged
DISCARD_WARN_FRACTION = 0.01


@dataclass(frozen=True)
class GenParams:
    """Parameters for one network realization."""

    N: int
    clique_law: CliqueSizeLaw
    alpha: float
    type1_law: AnyDegreeLaw
    type2_law: AnyDegreeLaw
    seed: int = 0
    retry_passes: int = DEFAULT_RETRY_PASSES

    def __post_init__(self) -> None:
        if self.N < 1:
            raise CliquePercError(
                make_error(ErrorCode.GEN_BAD_PARAMS, f"N must be >= 1, got {self.N}", N=self.N)
            )
        if not (0.0 <= self.alpha <= 1.0):
            raise CliquePercError(
                make_error(
                    ErrorCode.GEN_BAD_PARAMS, f"alpha must lie in [0, 1], got {self.alpha}"
                )
            )


@dataclass(frozen=True, eq=False)
class StubReport:
    drawn: int = 0
    discarded: int = 0


@dataclass(frozen=True, eq=False)
class SocialPhysicalNetwork:
    """
    Concrete realization of the overlaid network.

    Edge arrays have shape (E, 2) with each row sorted (u <= v). Type-0 links
    are implied by clique membership and never stored; an online user is the
    same node record with online=True.
    """

    clique_of: np.ndarray
    clique_sizes: np.ndarray
    online: np.ndarray
    type1_edges: np.ndarray
    type2_edges: np.ndarray
    type1_stubs: StubReport = field(default_factory=StubReport)
    type2_stubs: StubReport = field(default_factory=StubReport)

    @property
    def N(self) -> int:
        return int(self.clique_of.size)

    @property
    def N_c(self) -> int:
        return int(self.clique_sizes.size)

    def degrees(self, link_type: LinkType) -> np.ndarray:
        edges = self.type1_edges if link_type == "type1" else self.type2_edges
        return np.bincount(edges.ravel(), minlength=self.N)

    def validate(self) -> None:
        """Raise AssertionError if any structural invariant is violated."""
        assert self.clique_of.shape == (self.N,)
        assert self.online.shape == (self.N,)
        assert int(self.clique_sizes.sum()) == self.N
        assert np.all(self.clique_sizes >= 1)
        assert np.array_equal(np.bincount(self.clique_of, minlength=self.N_c), self.clique_sizes)
        for edges in (self.type1_edges, self.type2_edges):
            assert edges.ndim == 2 and edges.shape[1] == 2
            if edges.size:
                assert edges.min() >= 0 and edges.max() < self.N
                assert np.all(edges[:, 0] <= edges[:, 1])
        if self.type1_edges.size:
            c = self.clique_of[self.type1_edges]
            assert np.all(c[:, 0] != c[:, 1]), "intra-clique type-1 edge"
        if self.type2_edges.size:
            assert np.all(self.online[self.type2_edges]), "type-2 edge on offline node"
            assert np.all(self.type2_edges[:, 0] != self.type2_edges[:, 1]), "type-2 self-loop"


def partition_cliques(
    N: int, clique_law: CliqueSizeLaw, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """
    Draw clique sizes sequentially until N nodes are consumed.

    The last clique takes whatever remains, so its size may not follow the law.
    Nodes are labelled contiguously by clique; labels carry no other meaning.
    """
    batch = max(16, int(N / clique_law.mean() * 1.1) + 1)
    drawn: list[np.ndarray] = []
    total = 0
    while total < N:
        sizes = clique_law.sample_many(rng, batch)
        drawn.append(sizes)
        total += int(sizes.sum())
    sizes = np.concatenate(drawn)
    cum = np.cumsum(sizes)
    last = int(np.searchsorted(cum, N, side="left"))
    clique_sizes = sizes[: last + 1].copy()
    clique_sizes[-1] = N - (int(cum[last - 1]) if last > 0 else 0)
    clique_of = np.repeat(np.arange(clique_sizes.size, dtype=np.int64), clique_sizes)
    return clique_of, clique_sizes.astype(np.int64)


def assign_online(clique_of: np.ndarray, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Each node joins the online layer independently with probability alpha."""
    return rng.random(clique_of.size) < alpha


def _match_stubs(
    stubs: np.ndarray,
    group: np.ndarray,
    rng: np.random.Generator,
    *,
    link_type: LinkType,
    retry_passes: int,
) -> tuple[np.ndarray, int]:
    """
    Pair stubs uniformly at random; a pair is valid iff its endpoints lie in
    different groups. Returns (edges, discarded_stub_count).
    """
    drawn = int(stubs.size)
    discarded = 0
    if stubs.size % 2:
        drop = int(rng.integers(stubs.size))
        stubs = np.delete(stubs, drop)
        discarded += 1
    if stubs.size == 0:
        return np.empty((0, 2), dtype=np.int64), discarded

    groups = np.unique(group[stubs])
    if groups.size == 1:
        logger.error(
            "generation_failed", extra={"link_type": link_type, "stubs": int(stubs.size)}
        )
        raise no_valid_pairing(link_type, int(stubs.size), int(groups[0]))

    accepted: list[np.ndarray] = []
    queue = stubs
    for _ in range(retry_passes + 1):
        if queue.size == 0:
            break
        queue = rng.permutation(queue)
        a, b = queue[0::2], queue[1::2]
        ok = group[a] != group[b]
        accepted.append(np.stack([a[ok], b[ok]], axis=1))
        queue = np.concatenate([a[~ok], b[~ok]])
    discarded += int(queue.size)

    edges = np.concatenate(accepted) if accepted else np.empty((0, 2), dtype=np.int64)
    edges = np.sort(edges, axis=1).astype(np.int64)

    if drawn and discarded / drawn > DISCARD_WARN_FRACTION:
        logger.warning(
            "stubs_discarded",
            extra={"link_type": link_type, "discarded": discarded, "drawn": drawn},
        )
    return edges, discarded


def wire_edges(
    clique_of: np.ndarray,
    online: np.ndarray,
    type1_law: AnyDegreeLaw,
    type2_law: AnyDegreeLaw,
    rng: np.random.Generator,
    *,
    retry_passes: int = DEFAULT_RETRY_PASSES,
) -> tuple[np.ndarray, np.ndarray, StubReport, StubReport]:
    """Stub-match type-1 (inter-clique) and type-2 (online-online) edges."""
    n = clique_of.size
    nodes = np.arange(n, dtype=np.int64)

    k1 = type1_law.sample_many(rng, n)
    stubs1 = np.repeat(nodes, k1)
    e1, d1 = _match_stubs(stubs1, clique_of, rng, link_type="type1", retry_passes=retry_passes)

    online_nodes = nodes[online]
    k2 = type2_law.sample_many(rng, online_nodes.size)
    stubs2 = np.repeat(online_nodes, k2)
    e2, d2 = _match_stubs(stubs2, nodes, rng, link_type="type2", retry_passes=retry_passes)

    return (
        e1,
        e2,
        StubReport(drawn=int(stubs1.size), discarded=d1),
        StubReport(drawn=int(stubs2.size), discarded=d2),
    )


def generate_network(params: GenParams, rng: np.random.Generator | None = None) -> SocialPhysicalNetwork:
    """Build one realization; deterministic given params.seed (or the supplied rng)."""
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    clique_of, clique_sizes = partition_cliques(params.N, params.clique_law, rng)
    online = assign_online(clique_of, params.alpha, rng)
    e1, e2, s1, s2 = wire_edges(
        clique_of,
        online,
        params.type1_law,
        params.type2_law,
        rng,
        retry_passes=params.retry_passes,
    )
    return SocialPhysicalNetwork(
        clique_of=clique_of,
        clique_sizes=clique_sizes,
        online=online,
        type1_edges=e1,
        type2_edges=e2,
        type1_stubs=s1,
        type2_stubs=s2,
    )


# -- dump format ----------------------------------------------------------------
#
#   N N_c
#   clique <id> <node ids...>      one line per clique, ids 0..N_c-1
#   online <node ids...>           zero or one line
#   e1 <u> <v>                     one line per type-1 edge
#   e2 <u> <v>                     one line per type-2 edge


def write_network(net: SocialPhysicalNetwork, path: str | Path) -> None:
    order = np.argsort(net.clique_of, kind="stable")
    bounds = np.concatenate(([0], np.cumsum(net.clique_sizes)))
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{net.N} {net.N_c}\n")
        for c in range(net.N_c):
            members = order[bounds[c] : bounds[c + 1]]
            f.write(f"clique {c} " + " ".join(str(int(v)) for v in members) + "\n")
        f.write("online " + " ".join(str(int(v)) for v in np.nonzero(net.online)[0]) + "\n")
        for u, v in net.type1_edges:
            f.write(f"e1 {int(u)} {int(v)}\n")
        for u, v in net.type2_edges:
            f.write(f"e2 {int(u)} {int(v)}\n")


def read_network(path: str | Path) -> SocialPhysicalNetwork:
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise bad_dump("empty network dump", line=1)
    try:
        n, n_c = (int(t) for t in lines[0].split())
    except ValueError:
        raise bad_dump("header must be 'N N_c'", line=1) from None

    clique_of = np.full(n, -1, dtype=np.int64)
    online = np.zeros(n, dtype=bool)
    e1: list[tuple[int, int]] = []
    e2: list[tuple[int, int]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        try:
            tag, values = parts[0], [int(t) for t in parts[1:]]
        except ValueError:
            raise bad_dump(f"non-integer field: {line!r}", line=lineno) from None
        ids = values[1:] if tag == "clique" else values
        if any(not (0 <= v < n) for v in ids):
            raise bad_dump(f"node id out of range: {line!r}", line=lineno)
        if tag == "clique":
            if not values or not (0 <= values[0] < n_c):
                raise bad_dump("clique line needs a valid id", line=lineno)
            clique_of[values[1:]] = values[0]
        elif tag == "online":
            online[values] = True
        elif tag in ("e1", "e2") and len(values) == 2:
            (e1 if tag == "e1" else e2).append((min(values), max(values)))
        else:
            raise bad_dump(f"unrecognized line: {line!r}", line=lineno)

    if np.any(clique_of < 0):
        raise bad_dump("some nodes are not assigned to a clique")
    return SocialPhysicalNetwork(
        clique_of=clique_of,
        clique_sizes=np.bincount(clique_of, minlength=n_c).astype(np.int64),
        online=online,
        type1_edges=np.asarray(e1, dtype=np.int64).reshape(-1, 2),
        type2_edges=np.asarray(e2, dtype=np.int64).reshape(-1, 2),
    )
