"""Brute-force reference implementations used only by the tests.

Nothing here shares code with the package: shortest paths are found by
enumerating every simple path, Pearson correlation uses exact summation.
"""

import itertools
import math


def adjacency_sets(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def all_shortest_paths(n, edges):
    """Map (s, t), s < t, to the list of shortest s-t paths (as node tuples)."""
    adj = adjacency_sets(n, edges)
    out = {}
    for s, t in itertools.combinations(range(n), 2):
        others = [x for x in range(n) if x not in (s, t)]
        best = []
        best_len = math.inf
        for k in range(len(others) + 1):
            if k + 1 > best_len:
                break
            for mid in itertools.permutations(others, k):
                path = (s, *mid, t)
                if all(path[i + 1] in adj[path[i]] for i in range(len(path) - 1)):
                    if len(path) - 1 < best_len:
                        best_len = len(path) - 1
                        best = [path]
                    elif len(path) - 1 == best_len:
                        best.append(path)
        out[(s, t)] = best
    return out


def distances(n, edges, paths=None):
    paths = paths or all_shortest_paths(n, edges)
    d = [[0 if i == j else math.inf for j in range(n)] for i in range(n)]
    for (s, t), ps in paths.items():
        if ps:
            d[s][t] = d[t][s] = len(ps[0]) - 1
    return d


def betweenness(n, edges, paths=None):
    paths = paths or all_shortest_paths(n, edges)
    bc = [0.0] * n
    for (s, t), ps in paths.items():
        if not ps:
            continue
        for v in range(n):
            if v in (s, t):
                continue
            bc[v] += sum(1 for p in ps if v in p) / len(ps)
    if n <= 2:
        return [0.0] * n
    norm = (n - 1) * (n - 2) / 2
    return [b / norm for b in bc]


def closeness(n, edges, paths=None):
    d = distances(n, edges, paths)
    out = []
    for u in range(n):
        reach = [d[u][v] for v in range(n) if v != u and d[u][v] < math.inf]
        out.append(len(reach) / sum(reach) if reach else 0.0)
    return out


def harmonic(n, edges, paths=None):
    d = distances(n, edges, paths)
    return [math.fsum(1.0 / d[u][v] for v in range(n) if v != u and d[u][v] < math.inf)
            for u in range(n)]


def local_clustering(n, edges):
    adj = adjacency_sets(n, edges)
    out = []
    for u in range(n):
        nb = sorted(adj[u])
        if len(nb) < 2:
            out.append(0.0)
            continue
        links = sum(1 for a, b in itertools.combinations(nb, 2) if b in adj[a])
        out.append(links / (len(nb) * (len(nb) - 1) / 2))
    return out


def pearson(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def best_two_means(points):
    """Optimal 2-partition of 1-D points by exhaustive search."""
    n = len(points)
    best = None
    for mask in range(1, 2 ** (n - 1)):
        a = [p for i, p in enumerate(points) if mask >> i & 1]
        b = [p for i, p in enumerate(points) if not mask >> i & 1]
        cost = sum((p - sum(a) / len(a)) ** 2 for p in a) + sum((p - sum(b) / len(b)) ** 2 for p in b)
        if best is None or cost < best[0]:
            best = (cost, frozenset(i for i in range(n) if mask >> i & 1))
    return best[1], frozenset(range(n)) - best[1]
