"""Temperley-Lieb algebra and Kauffman-bracket evaluation.

A closed skein diagram is a set of "nodes" (crossings and Jones-Wenzl
boxes) whose ports are connected by a perfect matching of wires.  Each
node carries a list of (planar pairing, coefficient) resolution choices:
a crossing has the two Kauffman smoothings with weights A and 1/A, a box
has its expansion into Temperley-Lieb diagrams.  The bracket is the sum
over all resolution choices of the product of coefficients times the
loop value delta per closed loop.

Crossing ports are listed counterclockwise from the incoming under
strand, matching the planar-code convention of the diagram module; the
over strand occupies ports 1 and 3.  The A-smoothing joins ports (0,1)
and (2,3), the B-smoothing (0,3) and (1,2).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import ResourceLimit, ZeroDimension

_TOL = 1e-9
_PRUNE = 1e-14


# -- Temperley-Lieb elements ----------------------------------------------
# An element of TL_m is a dict {matching: coefficient}; a matching is a
# frozenset of frozensets pairing the legs ('b', 1..m) and ('t', 1..m).

def tl_identity(m):
    return {frozenset(frozenset((("b", i), ("t", i))) for i in range(1, m + 1)): 1}


def tl_generator(i, m):
    """The cup-cap generator e_i in TL_m."""
    pairs = {frozenset((("b", i), ("b", i + 1))), frozenset((("t", i), ("t", i + 1)))}
    for k in range(1, m + 1):
        if k not in (i, i + 1):
            pairs.add(frozenset((("b", k), ("t", k))))
    return {frozenset(pairs): 1}


def _count_loops(arcs):
    """Number of cycles in a multigraph where every vertex has degree 2."""
    incident = {}
    for i, (p, q) in enumerate(arcs):
        incident.setdefault(p, []).append(i)
        incident.setdefault(q, []).append(i)
    used = [False] * len(arcs)
    loops = 0
    for i in range(len(arcs)):
        if used[i]:
            continue
        loops += 1
        used[i] = True
        cur_port, cur_edge = arcs[i][1], i
        while True:
            e1, e2 = incident[cur_port]
            nxt = e2 if e1 == cur_edge else e1
            if used[nxt]:
                break
            used[nxt] = True
            a, b = arcs[nxt]
            cur_port = b if a == cur_port else a
            cur_edge = nxt
    return loops


def tl_mul(x, y, delta):
    """Product x*y in TL_m, with y drawn below x."""
    out = {}
    for mx, cx in x.items():
        for my, cy in y.items():
            arcs = []
            for pair in mx:
                p, q = tuple(pair)
                arcs.append((("T",) + p, ("T",) + q))
            for pair in my:
                p, q = tuple(pair)
                arcs.append((("B",) + p, ("B",) + q))
            legs = {leg for a in arcs for leg in a}
            glue = [
                (leg, ("B", "t", leg[2]))
                for leg in legs
                if leg[0] == "T" and leg[1] == "b"
            ]
            # walk chains between the outer boundary legs
            partner = {}
            for p, q in arcs + glue:
                partner.setdefault(p, []).append(q)
                partner.setdefault(q, []).append(p)
            seen = set()
            matching = set()
            for start in partner:
                if start in seen:
                    continue
                outer = (start[0] == "T" and start[1] == "t") or (
                    start[0] == "B" and start[1] == "b"
                )
                if not outer:
                    continue
                seen.add(start)
                prev, cur = start, partner[start][0]
                while not (
                    (cur[0] == "T" and cur[1] == "t")
                    or (cur[0] == "B" and cur[1] == "b")
                ):
                    seen.add(cur)
                    nxt = next(q for q in partner[cur] if q != prev)
                    prev, cur = cur, nxt
                seen.add(cur)
                matching.add(frozenset(((start[1], start[2]), (cur[1], cur[2]))))
            loops = 0
            for start in partner:
                if start in seen:
                    continue
                loops += 1
                prev, cur = start, partner[start][0]
                seen.add(start)
                while cur != start:
                    seen.add(cur)
                    nxt = next(q for q in partner[cur] if q != prev)
                    prev, cur = cur, nxt
            key = frozenset(matching)
            out[key] = out.get(key, 0) + cx * cy * delta**loops
    return {m: c for m, c in out.items() if abs(c) > _PRUNE}


def chebyshev_delta(k, delta):
    """Closed Jones-Wenzl loop values: D_0 = 1, D_1 = delta, Chebyshev recursion."""
    if k == 0:
        return 1
    a, b = 1, delta
    for _ in range(k - 1):
        a, b = b, delta * b - a
    return b


@lru_cache(maxsize=None)
def jones_wenzl(m, delta):
    """JW_m expanded over Temperley-Lieb matchings, by the Wenzl recursion."""
    if m == 0:
        return {frozenset(): 1}
    f = tl_identity(1)
    for k in range(1, m):
        dk = chebyshev_delta(k, delta)
        if abs(dk) < _TOL:
            raise ZeroDimension(
                "Jones-Wenzl projector of size %d undefined (vanishing loop value)"
                % (k + 1,)
            )
        coeff = chebyshev_delta(k - 1, delta) / dk
        emb = {
            matching | {frozenset((("b", k + 1), ("t", k + 1)))}: c
            for matching, c in f.items()
        }
        fef = tl_mul(emb, tl_mul(tl_generator(k, k + 1), emb, delta), delta)
        f = dict(emb)
        for matching, c in fef.items():
            f[matching] = f.get(matching, 0) - coeff * c
        f = {mm: c for mm, c in f.items() if abs(c) > _PRUNE}
    return f


# -- closed-diagram evaluation ----------------------------------------------

def crossing_node(ports, A):
    """Resolution choices of a crossing given as CCW ports (a, b, c, d)."""
    a, b, c, d = ports
    return (
        tuple(ports),
        (
            (((a, b), (c, d)), A),
            (((a, d), (b, c)), 1 / A),
        ),
    )


def box_node(bottom_ports, top_ports, delta):
    """Resolution choices of a JW box with the given external port names."""
    m = len(bottom_ports)
    name = {("b", i + 1): bottom_ports[i] for i in range(m)}
    name.update({("t", i + 1): top_ports[i] for i in range(m)})
    choices = []
    for matching, c in sorted(
        jones_wenzl(m, delta).items(), key=lambda kv: sorted(map(sorted, kv[0]))
    ):
        pairing = tuple(tuple(name[p] for p in sorted(pair)) for pair in matching)
        choices.append((pairing, c))
    return (tuple(bottom_ports) + tuple(top_ports), tuple(choices))


def _resolve(state, pairing):
    """Apply new arcs to a port->partner dict; returns (new dict, loop count)."""
    s = dict(state)
    loops = 0
    for p, q in pairing:
        x, y = s.pop(p), s.pop(q)
        if x == q:
            loops += 1
            continue
        s.pop(x, None)
        s.pop(y, None)
        s[x] = y
        s[y] = x
    return s, loops


def _order_nodes(nodes, wires):
    """Greedy processing order that keeps the open frontier small."""
    partner = {}
    for p, q in wires:
        partner[p] = q
        partner[q] = p
    owner = {}
    for idx, (ports, _) in enumerate(nodes):
        for p in ports:
            owner[p] = idx
    remaining = set(range(len(nodes)))
    order = []
    frontier = set()
    while remaining:
        if frontier:
            best = max(
                sorted(remaining),
                key=lambda i: (
                    sum(1 for p in nodes[i][0] if p in frontier),
                    -len(nodes[i][0]),
                ),
            )
        else:
            best = min(remaining)
        remaining.remove(best)
        order.append(best)
        for p in nodes[best][0]:
            frontier.discard(p)
            q = partner[p]
            if owner.get(q) in remaining:
                frontier.add(q)
    return order


_MEMO = {}


def clear_memo():
    _MEMO.clear()


def _evaluate_piece(nodes, wires, delta):
    order = _order_nodes(nodes, wires)
    init = {}
    for p, q in wires:
        init[p] = q
        init[q] = p
    states = {tuple(sorted(init.items())): 1 + 0j}
    for idx in order:
        _, choices = nodes[idx]
        new_states = {}
        for key, weight in states.items():
            state = dict(key)
            for pairing, coeff in choices:
                s, loops = _resolve(state, pairing)
                w = weight * coeff * delta**loops
                k = tuple(sorted(s.items()))
                new_states[k] = new_states.get(k, 0) + w
        states = {k: w for k, w in new_states.items() if abs(w) > _PRUNE}
        if not states:
            return 0j
    # every wire in a connected piece touches a node, so nothing is left open
    return complex(sum(states.values()))


def bracket(nodes, wires, delta, free_loops=0, cap=None):
    """Evaluate a closed diagram of resolution nodes and connecting wires.

    Splits the diagram into connected pieces, evaluates each piece with
    a frontier dynamic program that merges identical partial states, and
    memoizes per-piece results.  ``free_loops`` counts crossingless,
    box-free circles.  ``cap`` bounds the number of crossing nodes.
    """
    if cap is not None:
        n_crossings = sum(
            1 for ports, ch in nodes if len(ports) == 4 and len(ch) == 2
        )
        if n_crossings > cap:
            raise ResourceLimit(
                "diagram has %d crossings after cabling, cap is %d"
                % (n_crossings, cap)
            )
    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        parent.setdefault(x, x)
        parent.setdefault(y, y)
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for p, q in wires:
        union(p, q)
    for ports, _ in nodes:
        for p in ports[1:]:
            union(ports[0], p)

    groups = {}
    for i, (ports, _) in enumerate(nodes):
        groups.setdefault(find(ports[0]), []).append(i)
    wire_groups = {}
    for p, q in wires:
        wire_groups.setdefault(find(p), []).append((p, q))

    value = complex(delta) ** free_loops
    for root, idxs in groups.items():
        piece_nodes = [nodes[i] for i in idxs]
        piece_wires = wire_groups.get(root, [])
        key = (
            tuple(sorted((tuple(ports), choices) for ports, choices in piece_nodes)),
            frozenset(frozenset(w) for w in piece_wires),
            complex(delta),
        )
        if key not in _MEMO:
            _MEMO[key] = _evaluate_piece(piece_nodes, piece_wires, delta)
        value *= _MEMO[key]
    return value


def naive_bracket(nodes, wires, delta, free_loops=0):
    """Exhaustive resolution sum; exponential, for oracle testing only."""
    total = 0j
    for combo in itertools.product(*[choices for _, choices in nodes]):
        coeff = 1
        arcs = list(wires)
        for pairing, c in combo:
            coeff *= c
            arcs.extend((p, q) for p, q in pairing)
        total += coeff * complex(delta) ** _count_loops(arcs)
    return total * complex(delta) ** free_loops
