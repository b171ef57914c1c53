"""Report rendering: delimited count tables plus matplotlib figures.

``write_report`` drops four files in the output directory: the S_{n,k}
triangle and S_n totals as tab-separated text, a growth plot of S_n, and a
drawing of the metatile digraph.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .core import DifferenceSet, comb_from_differences
from .digraph import MetatileDigraph, build_digraph, count_via_transfer, label_str
from .oracles import shift_to_subsets


def write_report(diffs: DifferenceSet, n_max: int, out_dir: str) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    comb = comb_from_differences(diffs)
    dg = build_digraph(comb)
    table = shift_to_subsets(count_via_transfer(dg, n_max + diffs.q), diffs.q)

    paths = []
    triangle = out / "s_triangle.tsv"
    with triangle.open("w") as fh:
        fh.write("n\t" + "\t".join(f"k={k}" for k in range(n_max + 1)) + "\n")
        for n in range(n_max + 1):
            row = [str(table.by(n, k)) for k in range(n_max + 1)]
            fh.write(f"{n}\t" + "\t".join(row) + "\n")
    paths.append(triangle)

    totals = out / "s_totals.tsv"
    with totals.open("w") as fh:
        fh.write("n\tS_n\n")
        for n in range(n_max + 1):
            fh.write(f"{n}\t{table.total(n)}\n")
    paths.append(totals)

    paths.append(_growth_figure(diffs, table, out / "growth.png"))
    paths.append(_digraph_figure(diffs, dg, out / "digraph.png"))
    return [str(p) for p in paths]


def _growth_figure(diffs: DifferenceSet, table, path: Path) -> Path:
    ns = list(range(table.n_max + 1))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [table.total(n) for n in ns], "o-", ms=3, label="$S_n$")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("count")
    ax.set_title(f"Subsets of $\\{{1..n\\}}$ avoiding differences {diffs}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _digraph_figure(diffs: DifferenceSet, dg: MetatileDigraph, path: Path) -> Path:
    g = nx.MultiDiGraph()
    for node in dg.nodes:
        g.add_node(label_str(node))
    edge_labels = {}
    for node in dg.nodes:
        for arc in dg.arcs[node]:
            u, v = label_str(node), label_str(arc.dest)
            g.add_edge(u, v)
            key = (u, v)
            edge_labels[key] = (
                edge_labels[key] + ", " + arc.symbol() if key in edge_labels else arc.symbol()
            )
    fig, ax = plt.subplots(figsize=(6, 5))
    pos = nx.shell_layout(g) if g.number_of_nodes() > 2 else nx.circular_layout(g)
    nx.draw_networkx_nodes(g, pos, ax=ax, node_color="#cfe3ff", node_size=900)
    nx.draw_networkx_labels(g, pos, ax=ax, font_size=8)
    nx.draw_networkx_edges(
        g, pos, ax=ax, connectionstyle="arc3,rad=0.12", node_size=900
    )
    nx.draw_networkx_edge_labels(
        g, pos, edge_labels=edge_labels, ax=ax, font_size=7, label_pos=0.4
    )
    ax.set_title(f"Metatile digraph for Q = {diffs}")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
