"""Journal/factor graphs, betweenness centrality, and Pajek export.

Two-mode graphs link journals to the factors they load positively on; they
feed external layout and animation tools through the Pajek .net/.clu pair.
One-mode journal graphs connect journals whose correlation exceeds a
threshold; betweenness centrality runs on their unweighted skeleton.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .factors import CorrelationMatrix, FactorSolution

__all__ = [
    "TwoModeGraph",
    "JournalGraph",
    "factor_graph",
    "journal_graph",
    "betweenness",
    "export_pajek",
    "pajek_partition",
    "parse_pajek",
    "write_pajek",
]


@dataclass(frozen=True)
class TwoModeGraph:
    """Bipartite journal-factor graph weighted by positive loadings."""

    journal_nodes: tuple[str, ...]
    factor_nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]  # (journal, factor, weight > 0)


@dataclass(frozen=True)
class JournalGraph:
    """Undirected journal graph; edges carry the correlation that admitted them."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]  # u != v, one entry per pair


def factor_graph(sol: FactorSolution, threshold: float = 0.0) -> TwoModeGraph:
    """Edges (journal, factor, loading) for every loading above ``threshold``."""
    factor_nodes = tuple(f"F{j + 1}" for j in range(sol.k))
    edges = []
    for lab, row in zip(sol.labels, sol.loadings):
        for j, w in enumerate(row):
            if w > threshold:
                edges.append((lab, factor_nodes[j], float(w)))
    return TwoModeGraph(tuple(sol.labels), factor_nodes, tuple(edges))


def journal_graph(corr: CorrelationMatrix, threshold: float) -> JournalGraph:
    """Undirected edges between label-ordered pairs with r above ``threshold``."""
    labels = corr.labels
    edges = []
    n = len(labels)
    for i in range(n):
        for j in range(i + 1, n):
            r = float(corr.values[i, j])
            if r > threshold:
                edges.append((labels[i], labels[j], r))
    return JournalGraph(labels, tuple(edges))


def betweenness(g: JournalGraph) -> dict[str, float]:
    """Unnormalized shortest-path betweenness on the unweighted skeleton.

    Brandes accumulation over every source; each unordered pair counts once
    and endpoints are excluded.  Dependencies are carried as exact rationals
    so that equal-weight path splits introduce no float drift; keys come back
    in label order.
    """
    adjacency: dict[str, list[str]] = {v: [] for v in g.nodes}
    for u, v, _ in g.edges:
        adjacency[u].append(v)
        adjacency[v].append(u)

    score: dict[str, Fraction] = {v: Fraction(0) for v in g.nodes}
    for source in g.nodes:
        stack: list[str] = []
        preds: dict[str, list[str]] = {v: [] for v in g.nodes}
        sigma: dict[str, int] = {v: 0 for v in g.nodes}
        dist: dict[str, int] = {v: -1 for v in g.nodes}
        sigma[source] = 1
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta: dict[str, Fraction] = {v: Fraction(0) for v in g.nodes}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += Fraction(sigma[v], sigma[w]) * (1 + delta[w])
            if w != source:
                score[w] += delta[w]
    # every unordered pair was visited from both ends
    return {v: float(score[v] / 2) for v in sorted(g.nodes)}


def _quote(label: str) -> str:
    return '"' + label.replace('"', '""') + '"'


def export_pajek(g: TwoModeGraph | JournalGraph) -> str:
    """Pajek .net text: vertices (journals before factors), then edges."""
    if isinstance(g, TwoModeGraph):
        nodes = list(g.journal_nodes) + list(g.factor_nodes)
    else:
        nodes = list(g.nodes)
    index = {lab: i + 1 for i, lab in enumerate(nodes)}
    lines = [f"*Vertices {len(nodes)}"]
    lines += [f"{index[lab]} {_quote(lab)}" for lab in nodes]
    lines.append("*Edges")
    lines += [f"{index[u]} {index[v]} {w:.6f}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def pajek_partition(g: TwoModeGraph) -> str:
    """Companion .clu text: 1 for journal nodes, 2 for factor nodes."""
    n = len(g.journal_nodes) + len(g.factor_nodes)
    lines = [f"*Vertices {n}"]
    lines += ["1"] * len(g.journal_nodes)
    lines += ["2"] * len(g.factor_nodes)
    return "\n".join(lines) + "\n"


def parse_pajek(net_text: str, clu_text: str | None = None):
    """Parse the grammar :func:`export_pajek` emits.

    Returns ``(labels, edges, partition)`` where edges are
    (label_u, label_v, weight) triples and partition is a list of ints (or
    None when no .clu text is given).
    """
    lines = net_text.split("\n")
    if not lines or not lines[0].startswith("*Vertices "):
        raise ValueError("missing *Vertices header")
    n = int(lines[0].split()[1])
    labels = []
    for line in lines[1:1 + n]:
        vid, rest = line.split(" ", 1)
        if not (rest.startswith('"') and rest.endswith('"')):
            raise ValueError(f"unquoted vertex label: {line!r}")
        labels.append(rest[1:-1].replace('""', '"'))
        if int(vid) != len(labels):
            raise ValueError(f"vertex ids not consecutive at {line!r}")
    if lines[1 + n] != "*Edges":
        raise ValueError("missing *Edges header")
    edges = []
    for line in lines[2 + n:]:
        if not line:
            continue
        u, v, w = line.split()
        edges.append((labels[int(u) - 1], labels[int(v) - 1], float(w)))
    partition = None
    if clu_text is not None:
        clu_lines = [ln for ln in clu_text.split("\n") if ln]
        if not clu_lines or not clu_lines[0].startswith("*Vertices "):
            raise ValueError("missing *Vertices header in partition")
        partition = [int(ln) for ln in clu_lines[1:]]
        if len(partition) != n:
            raise ValueError("partition length does not match vertex count")
    return labels, edges, partition


def write_pajek(g: TwoModeGraph | JournalGraph, prefix: str | Path,
                year: int | None = None) -> list[Path]:
    """Write ``<prefix>_<year>.net`` (and ``.clu`` for two-mode graphs)."""
    stem = f"{prefix}_{year}" if year is not None else str(prefix)
    net_path = Path(f"{stem}.net")
    net_path.parent.mkdir(parents=True, exist_ok=True)
    net_path.write_text(export_pajek(g), encoding="utf-8")
    written = [net_path]
    if isinstance(g, TwoModeGraph):
        clu_path = Path(f"{stem}.clu")
        clu_path.write_text(pajek_partition(g), encoding="utf-8")
        written.append(clu_path)
    return written
