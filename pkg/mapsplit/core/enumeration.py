"""
Exact counting and enumeration of contiguous two-district plans

Vertices are processed in a bandwidth-reducing order. After each step the
search only remembers the processed vertices that still have unprocessed
neighbours (the frontier): their district, which connected piece they
belong to, and whether a district has already been closed off. Partial
assignments sharing that summary have identical futures, so counts are
summed over them instead of being walked one by one.
"""

from collections import defaultdict
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np
from networkx.utils import cuthill_mckee_ordering

from mapsplit.core.errors import SinkError, SizeError
from mapsplit.core.graph import DualGraph
from mapsplit.core.metrics import satisfies
from mapsplit.core.plans import ConstraintSet, Plan, PopulationWindow

# Frontier entries are ``label * 2 + district``; labels are canonical
# (numbered by first appearance). ``done`` has bit d set once district d
# has been closed.
FrontierState = Tuple[Tuple[int, ...], int]
SearchKey = Tuple[FrontierState, int]

BOTH_DONE = 0b11
BRUTE_FORCE_MAX_NODES = 25
INT64_SAFE_NODES = 62

INITIAL: FrontierState = ((), 0)


class _Step(NamedTuple):
    vertex: int
    population: int
    neighbor_slots: Tuple[int, ...]
    keep: Tuple[int, ...]
    drop: Tuple[int, ...]
    forced: Optional[int]


class Completion(NamedTuple):
    """Valid completions from a search key and the district-0 population they can add"""

    ways: int
    min_add0: int
    max_add0: int


class Prefix(NamedTuple):
    """Prefixes reaching a search key and the district-0 population they have placed"""

    ways: int
    min_pop0: int
    max_pop0: int


# ============================================================================
# Vertex order
# ============================================================================


def frontier_widths(g: DualGraph, order: List[int]) -> List[int]:
    """Frontier size after each processing step"""
    position = {v: k for k, v in enumerate(order)}
    last = [max((position[u] for u in g.neighbors[v]), default=position[v]) for v in range(g.n)]
    # a vertex stays on the frontier from its own step until its last neighbour's step
    delta = [0] * (g.n + 1)
    for v in range(g.n):
        if last[v] > position[v]:
            delta[position[v]] += 1
            delta[last[v]] -= 1
    widths, running = [], 0
    for k in range(g.n):
        running += delta[k]
        widths.append(running)
    return widths


def frontier_order(g: DualGraph) -> List[int]:
    """Cuthill-McKee order with the start vertex minimising the widest frontier"""
    best: Optional[Tuple[Tuple[int, int, int], List[int]]] = None
    for start in range(g.n):
        order = list(cuthill_mckee_ordering(g.nx_graph, heuristic=lambda _, s=start: s))
        widths = frontier_widths(g, order)
        score = (max(widths, default=0), sum(widths), start)
        if best is None or score < best[0]:
            best = (score, order)
    assert best is not None
    return best[1]


# ============================================================================
# Frontier machine
# ============================================================================


class FrontierMachine:
    """
    Transition system over frontier states.

    ``advance(k, state, d)`` puts the k-th vertex of ``order`` into district
    ``d``. Unit 0 is always placed in district 0, so each plan is reached
    exactly once in canonical orientation.
    """

    def __init__(self, g: DualGraph, order: Optional[List[int]] = None):
        g.require_connected("enumeration")
        self.g = g
        self.order = list(order) if order is not None else frontier_order(g)
        self.steps = self._build_steps()

    def _build_steps(self) -> List[_Step]:
        g = self.g
        position = {v: k for k, v in enumerate(self.order)}
        last = [max((position[u] for u in g.neighbors[v]), default=-1) for v in range(g.n)]

        steps: List[_Step] = []
        frontier: List[int] = []
        for k, v in enumerate(self.order):
            slots = tuple(i for i, u in enumerate(frontier) if u in g.neighbors[v])
            extended = frontier + [v]
            keep = tuple(i for i, u in enumerate(extended) if last[u] > k)
            drop = tuple(i for i in range(len(extended)) if i not in keep)
            steps.append(
                _Step(
                    vertex=v,
                    population=g.populations[v],
                    neighbor_slots=slots,
                    keep=keep,
                    drop=drop,
                    forced=0 if v == 0 else None,
                )
            )
            frontier = [extended[i] for i in keep]
        return steps

    @property
    def width(self) -> int:
        return max((len(s.keep) for s in self.steps), default=0)

    def advance(
        self, k: int, state: FrontierState, district: int
    ) -> Optional[Tuple[FrontierState, int]]:
        """
        Next state and the number of newly cut edges, or None if the choice
        can no longer lead to a plan.
        """
        step = self.steps[k]
        entries, done = state
        if done >> district & 1:
            return None
        if step.forced is not None and district != step.forced:
            return None

        labels = [e >> 1 for e in entries]
        colors = [e & 1 for e in entries]
        fresh = len(entries)
        merged = set()
        cut = 0
        for slot in step.neighbor_slots:
            if colors[slot] == district:
                merged.add(labels[slot])
            else:
                cut += 1
        if merged:
            labels = [fresh if lab in merged else lab for lab in labels]
        labels.append(fresh)
        colors.append(district)

        kept_labels = {labels[i] for i in step.keep}
        closed = set()
        for i in step.drop:
            lab = labels[i]
            if lab in kept_labels or lab in closed:
                continue
            color = colors[i]
            if done >> color & 1:
                return None
            if any(colors[j] == color for j in step.keep):
                return None
            done |= 1 << color
            closed.add(lab)

        renumber: Dict[int, int] = {}
        out = []
        for i in step.keep:
            lab = renumber.setdefault(labels[i], len(renumber))
            out.append(lab << 1 | colors[i])
        return (tuple(out), done), cut

    @staticmethod
    def accepts(state: FrontierState) -> bool:
        return state[1] == BOTH_DONE

    def successors(
        self, k: int, key: SearchKey, max_er: Optional[int]
    ) -> Iterator[Tuple[int, SearchKey]]:
        """(district, next key) pairs; the cut count is only tracked under an ER bound"""
        state, er = key
        for district in (0, 1):
            moved = self.advance(k, state, district)
            if moved is None:
                continue
            nstate, cut = moved
            if max_er is None:
                yield district, (nstate, 0)
            elif er + cut < max_er:
                yield district, (nstate, er + cut)

    def completion_table(self, max_er: Optional[int] = None) -> List[Dict[SearchKey, Completion]]:
        """
        Per step, every reachable key that still has at least one valid completion.
        """
        n = self.g.n
        layers: List[set] = [{(INITIAL, 0)}]
        for k in range(n):
            nxt = set()
            for key in layers[k]:
                for _, nkey in self.successors(k, key, max_er):
                    nxt.add(nkey)
            layers.append(nxt)

        table: List[Dict[SearchKey, Completion]] = [dict() for _ in range(n + 1)]
        for key in layers[n]:
            if self.accepts(key[0]):
                table[n][key] = Completion(1, 0, 0)
        for k in range(n - 1, -1, -1):
            add = self.steps[k].population
            below = table[k + 1]
            for key in layers[k]:
                ways, lo, hi = 0, None, None
                for district, nkey in self.successors(k, key, max_er):
                    info = below.get(nkey)
                    if info is None:
                        continue
                    extra = add if district == 0 else 0
                    ways += info.ways
                    lo = extra + info.min_add0 if lo is None else min(lo, extra + info.min_add0)
                    hi = extra + info.max_add0 if hi is None else max(hi, extra + info.max_add0)
                if ways:
                    table[k][key] = Completion(ways, lo, hi)
            layers[k + 1] = set()
        return table

    def prefix_table(
        self, table: List[Dict[SearchKey, Completion]], max_er: Optional[int] = None
    ) -> List[Dict[SearchKey, Prefix]]:
        """Per step, the keys of ``table`` with their prefix count and district-0 range"""
        n = self.g.n
        prefix: List[Dict[SearchKey, Prefix]] = [dict() for _ in range(n + 1)]
        if (INITIAL, 0) not in table[0]:
            return prefix
        prefix[0][(INITIAL, 0)] = Prefix(1, 0, 0)
        for k in range(n):
            add = self.steps[k].population
            below = table[k + 1]
            nxt = prefix[k + 1]
            for key, pre in prefix[k].items():
                for district, nkey in self.successors(k, key, max_er):
                    if nkey not in below:
                        continue
                    extra = add if district == 0 else 0
                    lo, hi = pre.min_pop0 + extra, pre.max_pop0 + extra
                    old = nxt.get(nkey)
                    if old is None:
                        nxt[nkey] = Prefix(pre.ways, lo, hi)
                    else:
                        nxt[nkey] = Prefix(
                            old.ways + pre.ways, min(old.min_pop0, lo), max(old.max_pop0, hi)
                        )
        return prefix


# ============================================================================
# Counting
# ============================================================================


def _count_unweighted(machine: FrontierMachine, max_er: Optional[int]) -> int:
    layer: Dict[SearchKey, int] = {(INITIAL, 0): 1}
    for k in range(machine.g.n):
        nxt: Dict[SearchKey, int] = defaultdict(int)
        for key, ways in layer.items():
            for _, nkey in machine.successors(k, key, max_er):
                nxt[nkey] += ways
        layer = nxt
    return sum(ways for (state, _), ways in layer.items() if machine.accepts(state))


def _merge(parts: List[Tuple[np.ndarray, np.ndarray]]) -> Tuple[np.ndarray, np.ndarray]:
    if len(parts) == 1:
        return parts[0]
    values = np.concatenate([p[0] for p in parts])
    counts = np.concatenate([p[1] for p in parts])
    unique, inverse = np.unique(values, return_inverse=True)
    summed = np.zeros(len(unique), dtype=counts.dtype)
    np.add.at(summed, inverse.ravel(), counts)
    return unique, summed


PopulationSums = Tuple[np.ndarray, np.ndarray]


def meeting_layer(
    table: List[Dict[SearchKey, Completion]], prefix: List[Dict[SearchKey, Prefix]]
) -> int:
    """
    Layer where the forward and backward population tables are joined.

    A key's table has at most one entry per reachable population and at most
    one per partial assignment, so the layer minimising the sum of those
    bounds over both directions is chosen.
    """
    best_cost, best_layer = None, 0
    for k, (below, above) in enumerate(zip(table, prefix)):
        cost = 0
        for key, pre in above.items():
            info = below[key]
            cost += min(pre.ways, pre.max_pop0 - pre.min_pop0 + 1)
            cost += min(info.ways, info.max_add0 - info.min_add0 + 1)
        if best_cost is None or cost < best_cost:
            best_cost, best_layer = cost, k
    return best_layer


def _forward_sums(
    machine: FrontierMachine,
    table: List[Dict[SearchKey, Completion]],
    window: PopulationWindow,
    max_er: Optional[int],
    stop: int,
    dtype,
) -> Dict[SearchKey, PopulationSums]:
    """Per key at layer ``stop``: district-0 populations so far -> number of prefixes"""
    layer: Dict[SearchKey, PopulationSums] = {
        (INITIAL, 0): (np.zeros(1, dtype=np.int64), np.ones(1, dtype=dtype))
    }
    for k in range(stop):
        step = machine.steps[k]
        below = table[k + 1]
        pending: Dict[SearchKey, List[PopulationSums]] = defaultdict(list)
        for key, (values, counts) in layer.items():
            for district, nkey in machine.successors(k, key, max_er):
                info = below.get(nkey)
                if info is None:
                    continue
                shifted = values + step.population if district == 0 else values
                # some completion of nkey must land inside the window
                keep = (shifted + info.max_add0 >= window.lo) & (
                    shifted + info.min_add0 <= window.hi
                )
                if keep.any():
                    pending[nkey].append((shifted[keep], counts[keep]))
        layer = {nkey: _merge(parts) for nkey, parts in pending.items()}
    return layer


def _backward_sums(
    machine: FrontierMachine,
    prefix: List[Dict[SearchKey, Prefix]],
    window: PopulationWindow,
    max_er: Optional[int],
    stop: int,
    dtype,
) -> Dict[SearchKey, PopulationSums]:
    """Per key at layer ``stop``: district-0 population still to add -> number of completions"""
    n = machine.g.n
    layer: Dict[SearchKey, PopulationSums] = {
        key: (np.zeros(1, dtype=np.int64), np.ones(1, dtype=dtype)) for key in prefix[n]
    }
    for k in range(n - 1, stop - 1, -1):
        step = machine.steps[k]
        nxt: Dict[SearchKey, PopulationSums] = {}
        for key, pre in prefix[k].items():
            parts: List[PopulationSums] = []
            for district, nkey in machine.successors(k, key, max_er):
                sums = layer.get(nkey)
                if sums is None:
                    continue
                values, counts = sums
                shifted = values + step.population if district == 0 else values
                # some prefix of key must complete inside the window
                keep = (shifted + pre.max_pop0 >= window.lo) & (shifted + pre.min_pop0 <= window.hi)
                if keep.any():
                    parts.append((shifted[keep], counts[keep]))
            if parts:
                nxt[key] = _merge(parts)
        layer = nxt
    return layer


def _join(
    forward: Dict[SearchKey, PopulationSums],
    backward: Dict[SearchKey, PopulationSums],
    window: PopulationWindow,
) -> int:
    total = 0
    for key, (prefix_pop, prefix_ways) in forward.items():
        sums = backward.get(key)
        if sums is None:
            continue
        added, ways = sums
        cumulative = np.concatenate((np.zeros(1, dtype=ways.dtype), np.cumsum(ways)))
        left = np.searchsorted(added, window.lo - prefix_pop, side="left")
        right = np.searchsorted(added, window.hi - prefix_pop, side="right")
        total += int(np.dot(prefix_ways, cumulative[right] - cumulative[left]))
    return total


def count_with_population(
    machine: FrontierMachine,
    window: PopulationWindow,
    max_er: Optional[int] = None,
    meet_at: Optional[int] = None,
) -> int:
    """
    Plans whose district-0 population lies in ``window``.

    Population tables are grown forward from the first vertex and backward
    from the last one, each only as far as the meeting layer, and joined per
    key there. Entries that cannot reach the window given the key's
    reachable range on the other side are dropped as they are built.

    Args:
        meet_at: Layer to join at (0..n); chosen by ``meeting_layer`` when omitted
    """
    n = machine.g.n
    if window.lo > window.hi:
        return 0
    table = machine.completion_table(max_er)
    if (INITIAL, 0) not in table[0]:
        return 0
    prefix = machine.prefix_table(table, max_er)
    stop = meeting_layer(table, prefix) if meet_at is None else meet_at
    if not 0 <= stop <= n:
        raise ValueError(f"meet_at must lie in 0..{n} (got {meet_at})")

    dtype = np.int64 if n <= INT64_SAFE_NODES else object
    forward = _forward_sums(machine, table, window, max_er, stop, dtype)
    backward = _backward_sums(machine, prefix, window, max_er, stop, dtype)
    return _join(forward, backward, window)


def count_plans(g: DualGraph, c: ConstraintSet = ConstraintSet()) -> int:
    """
    Number of contiguous bipartitions of ``g`` satisfying ``c``.

    Raises:
        StructureError: ``g`` is disconnected or has fewer than 2 units
    """
    machine = FrontierMachine(g)
    window = c.window(g.total_population)
    if window is None:
        return _count_unweighted(machine, c.max_er)
    return count_with_population(machine, window, c.max_er)



# ============================================================================
# Enumeration
# ============================================================================


def iter_plans(g: DualGraph, c: ConstraintSet = ConstraintSet()) -> Iterator[Plan]:
    """Yield every plan satisfying ``c`` once, canonical orientation"""
    machine = FrontierMachine(g)
    window = c.window(g.total_population)
    if window is not None and window.lo > window.hi:
        return
    table = machine.completion_table(c.max_er)
    if (INITIAL, 0) not in table[0]:
        return

    n = g.n
    graph_id = g.graph_id
    steps = machine.steps

    def walk(k: int, key: SearchKey, pop0: int, assignment: int) -> Iterator[Plan]:
        if k == n:
            if window is None or window.contains(pop0):
                yield Plan(assignment, n, graph_id)
            return
        step = steps[k]
        below = table[k + 1]
        for district, nkey in machine.successors(k, key, c.max_er):
            info = below.get(nkey)
            if info is None:
                continue
            npop0 = pop0 + step.population if district == 0 else pop0
            if window is not None and (
                npop0 + info.min_add0 > window.hi or npop0 + info.max_add0 < window.lo
            ):
                continue
            yield from walk(k + 1, nkey, npop0, assignment | district << step.vertex)

    yield from walk(0, (INITIAL, 0), 0, 0)


def enumerate_plans(
    g: DualGraph,
    c: ConstraintSet,
    sink: Callable[[Plan], None],
    progress: Optional[Callable[[int], None]] = None,
    progress_every: int = 100_000,
) -> int:
    """
    Stream every plan satisfying ``c`` to ``sink`` (called serially).

    Returns:
        Number of plans emitted

    Raises:
        SinkError: ``sink`` raised; carries the number emitted before it
    """
    emitted = 0
    for plan in iter_plans(g, c):
        try:
            sink(plan)
        except Exception as exc:
            raise SinkError(emitted, exc) from exc
        emitted += 1
        if progress is not None and emitted % progress_every == 0:
            progress(emitted)
    return emitted


def brute_force_plans(g: DualGraph, c: ConstraintSet = ConstraintSet()) -> List[Plan]:
    """
    Reference enumeration over every subset containing unit 0.

    Raises:
        SizeError: More than 25 units
    """
    if g.n > BRUTE_FORCE_MAX_NODES:
        raise SizeError(
            f"brute force is limited to {BRUTE_FORCE_MAX_NODES} units (graph has {g.n})"
        )
    g.require_connected("brute_force_plans")
    plans = []
    full = g.full_mask
    for rest in range(1 << (g.n - 1)):
        mask0 = rest << 1 | 1
        if mask0 == full:
            continue
        if not (g.is_connected_mask(mask0) and g.is_connected_mask(full ^ mask0)):
            continue
        plan = Plan.from_district0(mask0, g.n, g.graph_id)
        if satisfies(g, plan, c):
            plans.append(plan)
    return plans
