"""On-line matching: greedy layered engine, audits, and the game search.

Requests arrive one at a time and each must irrevocably take an unused
right neighbor or be rejected. The layered construction stacks copies of
an off-line-good graph; the greedy engine walks the layers in order and
takes the first unused copy, which keeps the per-layer accounting that
`half_rejection_audit` verifies. `online_strategy_exists` settles, by
exhaustive game-tree search, whether any on-line algorithm at all can
survive every adversary order.
"""

from dataclasses import dataclass, field

from .graph import BipartiteGraph
from .limits import Limits, LimitExceeded, default_limits
from .offline import hall_check


def counterexample_graph() -> BipartiteGraph:
    """Smallest graph where off-line matching up to size 2 works but no
    on-line strategy does: x sees both right vertices, y and z see one each.
    An adversary that starts with x wins whatever the algorithm picks."""
    return BipartiteGraph(2, 2, 2, ((0, 1), (0,), (1,)))


@dataclass(frozen=True)
class LayeredGraph:
    """`copies` stacked replicas of a base graph's right part.

    Right vertex r of copy j becomes index j * base.right_size + r, and each
    left neighbor list is the base list repeated once per layer, layer-major.
    A first-unused greedy scan of that list therefore tries layer 0 fully
    before touching layer 1, and so on.
    """

    base: BipartiteGraph
    copies: int
    graph: BipartiteGraph

    @staticmethod
    def build(base: BipartiteGraph, copies: int) -> "LayeredGraph":
        if copies < 1:
            raise ValueError("need at least one copy")
        width = base.right_size
        rows = tuple(
            tuple(layer * width + r for layer in range(copies) for r in row)
            for row in base.neighbors)
        derived = BipartiteGraph(base.n, width * copies,
                                 base.max_degree * copies, rows)
        return LayeredGraph(base, copies, derived)

    def layer_of(self, right_index: int) -> int:
        if not 0 <= right_index < self.graph.right_size:
            raise IndexError(f"right index {right_index} out of range")
        return right_index // self.base.right_size

    def base_right(self, right_index: int) -> int:
        return right_index % self.base.right_size


def layered(base: BipartiteGraph, k: int,
            limits: Limits | None = None) -> LayeredGraph:
    """(k+1) layers over a base that must pass hall_check(2^k).

    The stacking multiplies right size and left degrees by k+1 and turns
    off-line goodness into an on-line guarantee for up to 2^k requests.
    """
    limits = limits or default_limits()
    mode = "exhaustive" if base.left_size <= limits.hall_left_size else "matching"
    witness = hall_check(base, 2 ** k, mode=mode, limits=limits)
    if witness is not None:
        raise ValueError(
            f"base graph fails hall_check({2 ** k}): witness {witness}")
    return LayeredGraph.build(base, k + 1)


@dataclass
class MatchingSession:
    """Mutable state of one on-line run. Assignments are final: a matched
    pair is never revised, a rejected request is never retried."""

    graph: BipartiteGraph | LayeredGraph
    capacity: int
    matched: dict[int, int] = field(default_factory=dict)
    used: set[int] = field(default_factory=set)
    rejections: list[int] = field(default_factory=list)
    requested: set[int] = field(default_factory=set)
    reached: list[int] = field(init=False)
    forwarded: list[int] = field(init=False)

    def __post_init__(self):
        self.reached = [0] * self.layers
        self.forwarded = [0] * self.layers

    @property
    def layers(self) -> int:
        return self.graph.copies if isinstance(self.graph, LayeredGraph) else 1

    @property
    def flat(self) -> BipartiteGraph:
        return self.graph.graph if isinstance(self.graph, LayeredGraph) else self.graph

    @property
    def served(self) -> int:
        return len(self.matched) + len(self.rejections)

    def layer_of(self, right_index: int) -> int:
        if isinstance(self.graph, LayeredGraph):
            return self.graph.layer_of(right_index)
        return 0

    def request(self, left_index: int) -> int | None:
        """Serve one request: the matched right index, or None if rejected.

        Walks layers 0,1,... and takes the first unused neighbor (stored
        order) of the lowest layer that still has one; a request with no
        unused neighbor in a layer counts as forwarded past it.
        """
        if left_index in self.requested:
            raise ValueError(f"left vertex {left_index} already requested")
        if self.served >= self.capacity:
            raise ValueError(f"capacity {self.capacity} exhausted")
        self.requested.add(left_index)
        row = self.flat.neighbors_of(left_index)
        width = len(row) // self.layers
        for layer in range(self.layers):
            self.reached[layer] += 1
            for r in row[layer * width:(layer + 1) * width]:
                if r not in self.used:
                    self.used.add(r)
                    self.matched[left_index] = r
                    return r
            self.forwarded[layer] += 1
        self.rejections.append(left_index)
        return None


@dataclass(frozen=True)
class AuditViolation:
    layer: int
    reached: int
    forwarded: int

    def __str__(self) -> str:
        return (f"layer {self.layer}: {self.forwarded} forwarded past it, "
                f"more than half of the {self.reached} that reached it")


def half_rejection_audit(session: MatchingSession) -> AuditViolation | None:
    """Check that no layer forwarded more than half (rounded up) of the
    requests that reached it. On a layered graph whose base is off-line
    good this holds for every request order; a violation localizes a
    broken precondition to its layer."""
    for layer in range(session.layers):
        reached = session.reached[layer]
        forwarded = session.forwarded[layer]
        if forwarded > (reached + 1) // 2:
            return AuditViolation(layer, reached, forwarded)
    return None


@dataclass
class GameResult:
    exists: bool
    strategy: dict | None
    nodes: int


def online_strategy_exists(g: BipartiteGraph, s: int,
                           limits: Limits | None = None) -> GameResult:
    """Exhaustive adversary-vs-algorithm search.

    The adversary presents any unrequested left vertex; the algorithm must
    commit an unused neighbor. `exists` is True iff the algorithm can serve
    every adversary sequence of length <= s; the returned strategy maps each
    adversary move to the first winning reply in stored neighbor order.
    """
    limits = limits or default_limits()
    nleft = g.left_size
    memo: dict[tuple[frozenset, frozenset], bool] = {}
    nodes = 0

    def wins(requested: frozenset, used: frozenset) -> bool:
        nonlocal nodes
        if len(requested) >= s or len(requested) == nleft:
            return True
        key = (requested, used)
        if key in memo:
            return memo[key]
        nodes += 1
        if nodes > limits.game_nodes:
            raise LimitExceeded(f"game tree exceeds {limits.game_nodes} nodes")
        result = True
        for v in range(nleft):
            if v in requested:
                continue
            reply_found = False
            tried: set[int] = set()
            for r in g.neighbors_of(v):
                if r in used or r in tried:
                    continue
                tried.add(r)
                if wins(requested | {v}, used | {r}):
                    reply_found = True
                    break
            if not reply_found:
                result = False
                break
        memo[key] = result
        return result

    def build_tree(requested: frozenset, used: frozenset) -> dict:
        tree = {}
        if len(requested) >= s or len(requested) == nleft:
            return tree
        for v in range(nleft):
            if v in requested:
                continue
            for r in g.neighbors_of(v):
                if r in used:
                    continue
                if wins(requested | {v}, used | {r}):
                    tree[v] = {"pick": r,
                               "next": build_tree(requested | {v}, used | {r})}
                    break
        return tree

    start_requested: frozenset = frozenset()
    start_used: frozenset = frozenset()
    if wins(start_requested, start_used):
        return GameResult(True, build_tree(start_requested, start_used), nodes)
    return GameResult(False, None, nodes)


@dataclass
class SequenceSweep:
    sequences: int
    first_rejection: list[int] | None
    first_audit_violation: tuple[list[int], AuditViolation] | None

    @property
    def ok(self) -> bool:
        return self.first_rejection is None and self.first_audit_violation is None


def exhaustive_online_check(lg: LayeredGraph, capacity: int,
                            limits: Limits | None = None) -> SequenceSweep:
    """Run the greedy engine over every sequence of distinct left vertices
    of length <= capacity, sharing prefixes depth-first with undo.

    Each prefix is itself a complete request stream, so rejection-freedom
    and the half-rejection audit are checked at every node of the tree.
    """
    limits = limits or default_limits()
    flat = lg.graph
    nleft = flat.left_size
    width = lg.base.right_size
    layers = lg.copies
    used = [False] * flat.right_size
    reached = [0] * layers
    forwarded = [0] * layers
    sequence: list[int] = []
    sweep = SequenceSweep(0, None, None)
    nodes = 0

    def serve(v: int) -> tuple[int | None, int]:
        """Greedy request; returns (right or None, layers_entered)."""
        row = flat.neighbors[v]
        deg = len(row) // layers
        for layer in range(layers):
            reached[layer] += 1
            for r in row[layer * deg:(layer + 1) * deg]:
                if not used[r]:
                    used[r] = True
                    return r, layer + 1
            forwarded[layer] += 1
        return None, layers

    def unserve(v: int, r: int | None, entered: int) -> None:
        for layer in range(entered):
            reached[layer] -= 1
        if r is None:
            for layer in range(entered):
                forwarded[layer] -= 1
        else:
            used[r] = False
            for layer in range(entered - 1):
                forwarded[layer] -= 1

    def audit_now() -> AuditViolation | None:
        for layer in range(layers):
            if forwarded[layer] > (reached[layer] + 1) // 2:
                return AuditViolation(layer, reached[layer], forwarded[layer])
        return None

    def dfs() -> bool:
        nonlocal nodes
        if len(sequence) >= capacity:
            return True
        for v in range(nleft):
            if v in sequence:
                continue
            nodes += 1
            if nodes > limits.subset_nodes:
                raise LimitExceeded(
                    f"sequence tree exceeds {limits.subset_nodes} nodes")
            r, entered = serve(v)
            sequence.append(v)
            sweep.sequences += 1
            ok = True
            if r is None and sweep.first_rejection is None:
                sweep.first_rejection = list(sequence)
                ok = False
            violation = audit_now()
            if violation is not None and sweep.first_audit_violation is None:
                sweep.first_audit_violation = (list(sequence), violation)
                ok = False
            if ok:
                ok = dfs()
            sequence.pop()
            unserve(v, r, entered)
            if not ok:
                return False
        return True

    dfs()
    return sweep
