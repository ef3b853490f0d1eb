import logging

import networkx as nx
from networkx.algorithms.flow import boykov_kolmogorov

from gid_bribery.errors import (
    NoSeparatorExists,
    NotSpannable,
    TerminalUnreachable,
    TooManyTerminals,
)

logger = logging.getLogger(__name__)

STEINER_TERMINAL_CAP = 20


# /////////////////////////////////////////////////////////////////////////////
# Weighted digraph backing the cut, separator, arborescence and Steiner steps
class WeightedDigraph:
    """
    Directed graph with nonnegative integer arc weights and optional vertex
    weights. Vertices are any hashable labels. Adding an arc twice keeps the
    smaller weight.
    """

    def __init__(self, vertices=()):
        self._vertices = {}
        self._arcs = {}
        self.vertex_weights = {}
        for v in vertices:
            self.add_vertex(v)

    def add_vertex(self, v, weight=None):
        self._vertices.setdefault(v, None)
        if weight is not None:
            if weight < 0:
                raise ValueError(f"Vertex weight must be nonnegative, got {weight} for {v!r}")
            self.vertex_weights[v] = int(weight)

    def add_arc(self, u, v, weight):
        if weight < 0:
            raise ValueError(f"Arc weight must be nonnegative, got {weight} for {u!r}->{v!r}")
        self.add_vertex(u)
        self.add_vertex(v)
        key = (u, v)
        if key not in self._arcs or weight < self._arcs[key]:
            self._arcs[key] = int(weight)

    @property
    def vertices(self):
        return list(self._vertices)

    @property
    def arcs(self):
        """Dict mapping (u, v) to its weight."""
        return dict(self._arcs)

    def weight(self, u, v):
        return self._arcs[(u, v)]

    def has_arc(self, u, v):
        return (u, v) in self._arcs

    def to_networkx(self, attr="weight"):
        g = nx.DiGraph()
        g.add_nodes_from(self._vertices)
        for (u, v), w in self._arcs.items():
            g.add_edge(u, v, **{attr: w})
        return g

    def reachable_from(self, root):
        if root not in self._vertices:
            return {root}
        return nx.descendants(self.to_networkx(), root) | {root}


# /////////////////////////////////////////////////////////////////////////////
# Minimum weighted cut via max-flow
def max_flow_min_cut(g, source, sink):
    """
    Maximum flow value and a minimum weighted (source, sink)-cut.

    Parameters:
    g : WeightedDigraph, arc weights are capacities
    source, sink : distinct vertices

    Returns:
    (value, cut) where cut is a set of (u, v) arcs whose removal disconnects
    sink from source and whose weights sum to value

    Dependencies:
    - networkx.minimum_cut with the Boykov-Kolmogorov flow function
    """
    if source == sink:
        raise ValueError("Source and sink must differ")
    nxg = g.to_networkx(attr="capacity")
    nxg.add_nodes_from([source, sink])
    value, (side, _) = nx.minimum_cut(nxg, source, sink, capacity="capacity", flow_func=boykov_kolmogorov)
    cut = {(u, v) for (u, v) in g.arcs if u in side and v not in side}
    logger.debug("min cut %s -> %s: value %d over %d arcs", source, sink, value, len(cut))
    return int(value), cut


# /////////////////////////////////////////////////////////////////////////////
# Minimum weighted vertex separator through vertex splitting
def min_vertex_separator(g, source, sink):
    """
    Minimum weighted set of vertices (excluding source and sink) whose removal
    leaves no source-to-sink path.

    Parameters:
    g : WeightedDigraph with vertex_weights (missing weights count as 0)
    source, sink : distinct vertices

    Returns:
    (weight, vertices)

    Raises:
    NoSeparatorExists if g has an arc source -> sink
    """
    weights = {v: g.vertex_weights.get(v, 0) for v in g.vertices if v not in (source, sink)}
    return separate_vertices(weights, g.arcs, source, sink)


def separate_vertices(weights, arcs, source, sink):
    """
    min_vertex_separator on plain data, building the split network directly.

    Every vertex x in weights becomes x_in -> x_out with capacity w(x); arcs
    get an "infinite" capacity equal to the total vertex weight plus one.

    Parameters:
    weights : dict mapping every vertex other than source and sink to its weight
    arcs : iterable of (u, v) pairs
    source, sink : distinct vertices

    Returns:
    (weight, vertices)

    Dependencies:
    - networkx.minimum_cut with the Boykov-Kolmogorov flow function
    """
    if source == sink:
        raise ValueError("Source and sink must differ")
    infinity = sum(weights.values()) + 1

    def tail(v):
        return v if v in (source, sink) else ("out", v)

    def head(v):
        return v if v in (source, sink) else ("in", v)

    split = nx.DiGraph()
    split.add_nodes_from([source, sink])
    split.add_edges_from((("in", v), ("out", v), {"capacity": w}) for v, w in weights.items())
    for u, v in arcs:
        if u == v or u == sink or v == source:
            continue
        if u == source and v == sink:
            raise NoSeparatorExists(f"Arc {source!r} -> {sink!r} cannot be separated")
        split.add_edge(tail(u), head(v), capacity=infinity)

    value, (side, _) = nx.minimum_cut(split, source, sink, capacity="capacity", flow_func=boykov_kolmogorov)
    separator = {v for v in weights if ("in", v) in side and ("out", v) not in side}
    weight = sum(weights[v] for v in separator)
    if weight != value:
        raise AssertionError(f"separator weight {weight} differs from cut value {value}")
    logger.debug("vertex separator %s -> %s: weight %d over %d vertices", source, sink, weight, len(separator))
    return weight, separator


# /////////////////////////////////////////////////////////////////////////////
# Minimum weighted spanning arborescence (Chu-Liu/Edmonds)
def min_spanning_arborescence(g, root):
    """
    Minimum weight arc set in which every vertex is reachable from root by a
    unique path.

    Parameters:
    g : WeightedDigraph
    root : vertex of g

    Returns:
    (weight, arcs)

    Raises:
    NotSpannable if some vertex is unreachable from root

    Dependencies:
    - networkx.minimum_spanning_arborescence (Edmonds' algorithm)
    """
    vertices = set(g.vertices) | {root}
    reach = g.reachable_from(root)
    missing = vertices - reach
    if missing:
        raise NotSpannable(f"Vertices {sorted(map(str, missing))} are unreachable from {root!r}")
    if len(vertices) == 1:
        return 0, set()

    nxg = g.to_networkx()
    nxg.add_node(root)
    # with no arc entering it, root is the only possible arborescence root
    nxg.remove_edges_from([(u, v) for (u, v) in list(nxg.in_edges(root))])
    nxg.remove_edges_from([(u, u) for u in list(nxg.nodes) if nxg.has_edge(u, u)])
    tree = nx.minimum_spanning_arborescence(nxg, attr="weight", preserve_attrs=True)
    arcs = set(tree.edges())
    weight = sum(g.weight(u, v) for (u, v) in arcs)
    return weight, arcs


# /////////////////////////////////////////////////////////////////////////////
# Directed Steiner tree by dynamic programming over terminal subsets
def directed_steiner_tree(g, root, terminals, max_terminals=STEINER_TERMINAL_CAP):
    """
    Minimum weight arc set containing a root-to-t path for every terminal t.

    Dreyfus-Wagner recursion adapted to digraphs: best[S][v] is the cheapest
    out-tree rooted at v reaching every terminal in S. A tree either follows a
    shortest path from v to some u and splits there, or is a single shortest
    path when |S| = 1.

    Parameters:
    g : WeightedDigraph
    root : vertex
    terminals : iterable of vertices
    max_terminals : int, cap on |terminals|

    Returns:
    (weight, arcs); arcs form an out-tree from root with no dead branches

    Raises:
    TooManyTerminals, TerminalUnreachable

    Dependencies:
    - networkx.all_pairs_dijkstra
    """
    terminals = list(dict.fromkeys(terminals))
    if len(terminals) > max_terminals:
        raise TooManyTerminals(f"{len(terminals)} terminals exceed the cap of {max_terminals}")
    if not terminals:
        return 0, set()

    nxg = g.to_networkx()
    nxg.add_node(root)
    reach = nx.descendants(nxg, root) | {root}
    unreachable = [t for t in terminals if t not in reach]
    if unreachable:
        raise TerminalUnreachable(f"Terminals {unreachable} are unreachable from {root!r}")

    # only vertices reachable from root can lie on a solution
    sub = nxg.subgraph(reach)
    dist, paths = {}, {}
    for v, (d, p) in nx.all_pairs_dijkstra(sub, weight="weight"):
        dist[v], paths[v] = d, p
    nodes = list(reach)
    k = len(terminals)
    full = (1 << k) - 1
    inf = float("inf")

    # best[mask][v] = (cost, how); how = ("path", t) | ("via", u) | ("split", sub)
    best = [None] * (full + 1)
    for i, t in enumerate(terminals):
        best[1 << i] = {v: (dist[v].get(t, inf), ("path", t)) for v in nodes}

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        merged = {}
        for u in nodes:
            cheapest, choice = inf, None
            part = (mask - 1) & mask
            while part:
                other = mask ^ part
                if part < other:
                    c = best[part][u][0] + best[other][u][0]
                    if c < cheapest:
                        cheapest, choice = c, part
                part = (part - 1) & mask
            merged[u] = (cheapest, choice)
        table = {}
        for v in nodes:
            cheapest, how = inf, None
            for u, d in dist[v].items():
                c = d + merged[u][0]
                if c < cheapest:
                    cheapest, how = c, ("via", u, merged[u][1])
            table[v] = (cheapest, how)
        best[mask] = table

    chosen = set()

    def path_arcs(v, u):
        p = paths[v][u]
        return list(zip(p, p[1:]))

    stack = [(full, root)]
    while stack:
        mask, v = stack.pop()
        _, how = best[mask][v]
        if how[0] == "path":
            chosen.update(path_arcs(v, how[1]))
        else:
            _, u, part = how
            chosen.update(path_arcs(v, u))
            stack.append((part, u))
            stack.append((mask ^ part, u))

    arcs = _prune_to_tree(chosen, root, set(terminals))
    weight = sum(g.weight(u, v) for (u, v) in arcs)
    logger.debug("steiner tree from %s over %d terminals: weight %d", root, k, weight)
    return weight, arcs


def _prune_to_tree(arcs, root, terminals):
    """Keep a BFS out-tree of arcs from root, restricted to branches reaching a terminal."""
    out = {}
    for u, v in arcs:
        out.setdefault(u, []).append(v)
    parent = {root: None}
    order = [root]
    for u in order:
        for v in sorted(out.get(u, ()), key=str):
            if v not in parent:
                parent[v] = u
                order.append(v)
    keep = set()
    for t in terminals:
        v = t
        while parent.get(v) is not None and (parent[v], v) not in keep:
            keep.add((parent[v], v))
            v = parent[v]
    return keep
