"""Extractor verification, hazard analysis, prefixes, and randomized search.

A view wraps a left-regular bipartite graph as a function from (n-bit
vertex, d-bit edge choice) to an m-bit right vertex. The defining property:
for every left subset S of size at least K and every right subset Y, the
fraction of S's edges landing in Y stays within eps of |Y|/M. Verification
needs only |S| = K exactly (larger sets are averages of size-K ones) and
only one direction of the bound (the other follows on the complement of Y),
which reduces the per-subset work to one total-variation distance computed
in exact rational arithmetic.
"""

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import BipartiteGraph, from_json, to_json
from .limits import Limits, LimitExceeded, default_limits
from .rng import SplitMix64


def _is_pow2(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


def next_pow2(x: int) -> int:
    return 1 if x <= 1 else 1 << (x - 1).bit_length()


@dataclass(frozen=True)
class ExtractorView:
    """Left-regular graph plus the (K, eps) parameters it is checked against.

    Left part has exactly 2^n vertices, right part 2^m, every left degree
    exactly D = 2^d with multi-edges kept (independent draws may coincide,
    in which case the repeated edge still counts twice).
    """

    graph: BipartiteGraph
    K: int
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        g = self.graph
        if not _is_pow2(g.left_size):
            raise ValueError(f"left size {g.left_size} is not a power of 2")
        if not _is_pow2(g.right_size):
            raise ValueError(f"right size {g.right_size} is not a power of 2")
        degrees = {len(row) for row in g.neighbors}
        if len(degrees) != 1:
            raise ValueError(f"left degrees are not all equal: {sorted(degrees)}")
        degree = degrees.pop()
        if not _is_pow2(degree):
            raise ValueError(f"degree {degree} is not a power of 2")
        if not 1 <= self.K <= g.left_size:
            raise ValueError(f"need 1 <= K <= {g.left_size}, got {self.K}")
        if not 0 < self.eps < 1:
            raise ValueError(f"need 0 < eps < 1, got {self.eps}")

    @property
    def N(self) -> int:
        return self.graph.left_size

    @property
    def M(self) -> int:
        return self.graph.right_size

    @property
    def D(self) -> int:
        return len(self.graph.neighbors[0])

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def m(self) -> int:
        return self.M.bit_length() - 1

    @property
    def d(self) -> int:
        return self.D.bit_length() - 1

    def endpoint_counts(self, left_index: int) -> list[int]:
        """How many of this vertex's D edges land on each right vertex."""
        counts = [0] * self.M
        for r in self.graph.neighbors_of(left_index):
            counts[r] += 1
        return counts


def optimal_degree(N: int, K: int, M: int, eps) -> int:
    """Degree at which a random graph is an extractor with positive
    probability: ceil(max((M/K) ln2 / eps^2, (ln(N/K) + 1) / eps^2))."""
    eps = Fraction(eps)
    if not 1 < K <= N:
        raise ValueError(f"need 1 < K <= N, got K={K}, N={N}")
    if M <= 0:
        raise ValueError(f"need M > 0, got {M}")
    if not 0 < eps < 1:
        raise ValueError(f"need 0 < eps < 1, got {eps}")
    e2 = float(eps) ** 2
    first = (M / K) * (math.log(2) / e2)
    second = (math.log(N / K) + 1) / e2
    return math.ceil(max(first, second))


def optimal_degree_pow2(N: int, K: int, M: int, eps) -> int:
    """The raw ceiling rounded up to the next power of two, for callers that
    need the degree to be an edge-index space."""
    return next_pow2(optimal_degree(N, K, M, eps))


def _validate_subset(view: ExtractorView, S) -> tuple[int, ...]:
    S = tuple(S)
    if not S:
        raise ValueError("subset must be nonempty")
    if len(set(S)) != len(S):
        raise ValueError("subset has repeated vertices")
    for v in S:
        if not 0 <= v < view.N:
            raise ValueError(f"left index {v} out of range")
    return S


def deviation(view: ExtractorView, S) -> Fraction:
    """Worst deviation over all right subsets Y, computed directly.

    max_Y |e(S,Y)/(D|S|) - |Y|/M| equals the total-variation distance
    between the edge-endpoint distribution of S and uniform, i.e. the sum
    of the positive parts, because the signed deviations cancel and the
    negative direction is the positive one on the complement of Y.
    """
    S = _validate_subset(view, S)
    M, D, s = view.M, view.D, len(S)
    e = [0] * M
    for v in S:
        for r in view.graph.neighbors[v]:
            e[r] += 1
    positive = sum(c * M - D * s for c in e if c * M > D * s)
    return Fraction(positive, D * s * M)


@dataclass(frozen=True)
class ExtractorCheck:
    mode: str                       # "exhaustive" | "sampled"
    witness: tuple[int, ...] | None
    witness_deviation: Fraction | None
    checked: int

    @property
    def ok(self) -> bool:
        return self.mode == "exhaustive" and self.witness is None

    @property
    def verdict(self) -> str:
        if self.witness is not None:
            return "witness"
        return "ok" if self.mode == "exhaustive" else "no-counterexample-found"


def is_extractor(view: ExtractorView, *, samples: int | None = None,
                 seed: int | None = None,
                 limits: Limits | None = None) -> ExtractorCheck:
    """Check deviation(S) < eps on size-K subsets.

    Exhaustive mode scans every size-K subset in lexicographic order and
    the first failure is the witness; passing it certifies the property for
    all larger subsets too. Sampled mode (samples given, seed required)
    draws random size-K subsets and can only report that no counterexample
    was found.
    """
    limits = limits or default_limits()
    N, K, M, D = view.N, view.K, view.M, view.D
    eps = view.eps
    counts = [tuple(view.endpoint_counts(v)) for v in range(N)]
    threshold_num = eps.numerator * D * K * M    # compare against eps exactly:
    threshold_den = eps.denominator              # positive*den < num*D*K*M

    def fails(combo) -> bool:
        e = [0] * M
        for v in combo:
            cv = counts[v]
            for y in range(M):
                e[y] += cv[y]
        positive = sum(c * M - D * K for c in e if c * M > D * K)
        return positive * threshold_den >= threshold_num

    if samples is None:
        total = math.comb(N, K)
        if total > limits.subset_nodes:
            raise LimitExceeded(
                f"C({N},{K}) = {total} size-K subsets exceed limit "
                f"{limits.subset_nodes}; use sampled mode")
        checked = 0
        for combo in itertools.combinations(range(N), K):
            checked += 1
            if fails(combo):
                return ExtractorCheck("exhaustive", combo,
                                      deviation(view, combo), checked)
        return ExtractorCheck("exhaustive", None, None, checked)

    if seed is None:
        raise ValueError("sampled mode needs a seed")
    rng = SplitMix64(seed)
    for i in range(samples):
        combo = tuple(sorted(rng.sample(N, K)))
        if fails(combo):
            return ExtractorCheck("sampled", combo, deviation(view, combo), i + 1)
    return ExtractorCheck("sampled", None, None, samples)


@dataclass(frozen=True)
class HazardReport:
    """Overloaded right vertices and the left vertices pinned to them.

    A right vertex is bad when it carries more than bad_factor times the
    edges it would get from a size-K set on average; a left vertex of S is
    dangerous when every one of its edges lands on a bad vertex, weakly
    dangerous when at least half do (multiplicity counted throughout).
    Element order follows the enumeration order of S.
    """

    subset: tuple[int, ...]
    bad: tuple[int, ...]
    dangerous: tuple[int, ...]
    weakly_dangerous: tuple[int, ...]
    bad_threshold: Fraction
    bad_factor: int


def hazard_report(view: ExtractorView, S, bad_factor: int = 2) -> HazardReport:
    S = _validate_subset(view, S)
    if len(S) > view.K:
        raise ValueError(f"|S| = {len(S)} exceeds K = {view.K}")
    M, D, K = view.M, view.D, view.K
    e = [0] * M
    for v in S:
        for r in view.graph.neighbors[v]:
            e[r] += 1
    # e[y] > bad_factor * D * K / M, exactly
    bad = frozenset(y for y in range(M) if e[y] * M > bad_factor * D * K)
    dangerous = []
    weakly = []
    for v in S:
        in_bad = sum(1 for r in view.graph.neighbors[v] if r in bad)
        if in_bad == D:
            dangerous.append(v)
        if 2 * in_bad >= D:
            weakly.append(v)
    return HazardReport(S, tuple(sorted(bad)), tuple(dangerous), tuple(weakly),
                        Fraction(bad_factor * D * K, M), bad_factor)


def truncate(view: ExtractorView, i: int) -> ExtractorView:
    """Drop the last i output bits: every edge endpoint is replaced by its
    high (m-i)-bit prefix and K halves per dropped bit (floored at 1)."""
    if not 0 <= i <= view.m:
        raise ValueError(f"need 0 <= i <= m = {view.m}, got {i}")
    if i == 0:
        return view
    g = view.graph
    rows = tuple(tuple(r >> i for r in row) for row in g.neighbors)
    sub = BipartiteGraph(g.n, g.right_size >> i, g.max_degree, rows)
    return ExtractorView(sub, max(1, view.K >> i), view.eps)


@dataclass(frozen=True)
class PrefixCheck:
    levels: tuple[tuple[int, int, ExtractorCheck], ...]  # (i, K_i, check)
    witness_level: int | None

    @property
    def ok(self) -> bool:
        return self.witness_level is None and all(
            c.ok for _, _, c in self.levels)

    @property
    def witness(self) -> tuple[int, tuple[int, ...], Fraction] | None:
        if self.witness_level is None:
            return None
        for i, _, check in self.levels:
            if i == self.witness_level:
                return (i, check.witness, check.witness_deviation)
        return None


def is_prefix_extractor(view: ExtractorView, k: int,
                        limits: Limits | None = None) -> PrefixCheck:
    """Every truncation level i <= k must pass with K = 2^(k-i)."""
    if view.K != 2 ** k:
        raise ValueError(f"view has K = {view.K}, expected 2^{k}")
    if k > view.m:
        raise ValueError(f"k = {k} exceeds output length m = {view.m}")
    levels = []
    for i in range(k + 1):
        sub = truncate(view, i)
        check = is_extractor(sub, limits=limits)
        levels.append((i, sub.K, check))
        if check.witness is not None:
            return PrefixCheck(tuple(levels), i)
    return PrefixCheck(tuple(levels), None)


def prefix_failure_bound(n: int, k: int, m: int, d: int, eps) -> float:
    """Union bound on a random graph failing some truncation level:

        sum_{i=0}^{k} C(N, K/2^i) * 2^(M/2^i) * exp(-2 eps^2 K D / 2^i)

    Binomials are exact; the result is floating point, good to about 1e-12
    relative error, and may overflow to inf for hopeless parameters (callers
    should treat inf as "not < 1").
    """
    eps = Fraction(eps)
    if min(n, m, d) < 0 or k < 0:
        raise ValueError("parameters must be nonnegative")
    if not 0 < eps < 1:
        raise ValueError(f"need 0 < eps < 1, got {eps}")
    N, K, M, D = 2 ** n, 2 ** k, 2 ** m, 2 ** d
    if K > N:
        raise ValueError("need K <= N")
    total = 0.0
    e2 = float(eps) ** 2
    for i in range(k + 1):
        Ki = K >> i
        if Ki < 1:
            raise ValueError(f"K/2^{i} < 1")
        log_term = (math.log(math.comb(N, Ki))
                    + (M / 2 ** i) * math.log(2)
                    - 2.0 * e2 * K * D / 2 ** i)
        try:
            total += math.exp(log_term)
        except OverflowError:
            return math.inf
    return total


def uniform_view(n: int, m: int, repeat: int = 1, K: int = 1,
                 eps=Fraction(1, 2)) -> ExtractorView:
    """Exactly-uniform view: every left vertex hits every right vertex
    `repeat` times (D = repeat * 2^m), so every deviation is zero."""
    if not _is_pow2(repeat):
        raise ValueError("repeat must be a power of 2 to keep D a power of 2")
    M = 2 ** m
    row = tuple(range(M)) * repeat
    rows = tuple(row for _ in range(2 ** n))
    return ExtractorView(BipartiteGraph(n, M, len(row), rows), K, eps)


def view_to_json(view: ExtractorView) -> str:
    doc = json.loads(to_json(view.graph))
    doc["K"] = view.K
    doc["eps"] = str(view.eps)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def view_from_json(text: str) -> ExtractorView:
    doc = json.loads(text)
    K = doc.pop("K")
    eps = Fraction(doc.pop("eps"))
    graph = from_json(json.dumps(doc))
    return ExtractorView(graph, K, eps)


def save_view(view: ExtractorView, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(view_to_json(view))


def load_view(path) -> ExtractorView:
    with open(path, "r", encoding="utf-8") as fh:
        return view_from_json(fh.read())


def random_extractor_search(n: int, k: int, m: int, eps, d: int, seed: int,
                            max_attempts: int = 64, prefix: bool = False,
                            limits: Limits | None = None
                            ) -> tuple[ExtractorView, int]:
    """Draw D = 2^d uniform neighbors per left vertex and keep the first
    graph that verifies exhaustively (all levels, when prefix=True).

    Returns (view, attempts); deterministic in `seed` because every attempt
    continues the same stream.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be at least 1")
    eps = Fraction(eps)
    limits = limits or default_limits()
    N, M, D, K = 2 ** n, 2 ** m, 2 ** d, 2 ** k
    edges = N * D
    if edges > limits.gen_edges:
        raise LimitExceeded(f"{edges} edge draws exceed limit {limits.gen_edges}")
    rng = SplitMix64(seed)
    for attempt in range(1, max_attempts + 1):
        rows = tuple(tuple(rng.below(M) for _ in range(D)) for _ in range(N))
        view = ExtractorView(BipartiteGraph(n, M, D, rows), K, eps)
        if prefix:
            verified = is_prefix_extractor(view, k, limits=limits).ok
        else:
            verified = is_extractor(view, limits=limits).ok
        if verified:
            return view, attempt
    raise RuntimeError(
        f"no verified {'prefix ' if prefix else ''}extractor within "
        f"{max_attempts} attempts")
