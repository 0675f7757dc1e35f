"""Shift-invariant measures, entropies, mutual information and the
finite-scale rate-distortion bounds.

Measures come in two generator families, both invariant under the full
Z^2 shift action: ``bernoulli`` (iid sites) and ``markov-row`` (rows are
independent copies of one stationary 1D Markov chain).  Window marginals
and entropies have exact closed forms for both; the rate-distortion
bounds combine them with a resolution bracket and the binary-entropy
penalty term.  All information quantities are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceGuardError
from .estimates import DimensionEstimate, fit_limit
from .lattice import IntRect, LatticeSet
from .subshift import (Alphabet, Pattern, SftSpec, perron_eigendata,
                       strongly_connected, transfer_graph_1d)

SUM_TOL = 1e-12
STATIONARY_TOL = 1e-10


def entropy_bits(probs: np.ndarray) -> float:
    """-sum p log2 p with the 0 log 0 = 0 convention."""
    p = np.asarray(probs, dtype=float).ravel()
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


@dataclass(frozen=True)
class FiniteDistribution:
    """A probability vector over an ordered outcome list."""

    outcomes: tuple
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.outcomes) != len(self.probs):
            raise ValueError("outcomes and probabilities differ in length")
        p = np.asarray(self.probs, float)
        if (p < -SUM_TOL).any():
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")

    def prob_array(self) -> np.ndarray:
        return np.asarray(self.probs, float)


def shannon_entropy(dist: FiniteDistribution) -> float:
    """Entropy of a finite distribution in bits."""
    return entropy_bits(dist.prob_array())


def binary_entropy(delta: float) -> float:
    """H(delta) in bits; symmetric about 1/2, zero at the endpoints."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"binary_entropy needs delta in [0, 1], got {delta}")
    if delta in (0.0, 1.0):
        return 0.0
    return float(-delta * math.log2(delta) - (1 - delta) * math.log2(1 - delta))


@dataclass(frozen=True)
class JointDistribution:
    """A joint law over pairs, stored as a matrix of cell masses."""

    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        m = self.matrix_array()
        if m.ndim != 2:
            raise ValueError("joint matrix must be 2D")
        if (m < -SUM_TOL).any():
            raise ValueError("negative joint mass")
        if abs(m.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"joint mass is {m.sum()}, not 1")

    @classmethod
    def from_array(cls, arr) -> "JointDistribution":
        a = np.asarray(arr, float)
        return cls(tuple(tuple(row) for row in a))

    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, float)

    def marginal_x(self) -> np.ndarray:
        return self.matrix_array().sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        return self.matrix_array().sum(axis=0)


def mutual_information(joint: JointDistribution) -> float:
    """I(X;Y) = H(X) + H(Y) - H(X,Y), in bits."""
    m = joint.matrix_array()
    return entropy_bits(m.sum(axis=1)) + entropy_bits(m.sum(axis=0)) - entropy_bits(m)


def mutual_information_of(matrix) -> float:
    return mutual_information(JointDistribution.from_array(matrix))


# ---------------------------------------------------------------------------
# measure generators
# ---------------------------------------------------------------------------


def _stationary_of(P: np.ndarray) -> np.ndarray:
    """Stationary row vector of a stochastic matrix, by a direct solve."""
    n = P.shape[0]
    A = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    return pi


@dataclass(frozen=True)
class MeasureSpec:
    """A shift-invariant measure generator on A^(Z^2).

    kind "bernoulli": iid sites with the given symbol weights.
    kind "markov-row": each row an independent stationary Markov chain
    with transition matrix ``transition`` and stationary vector
    ``stationary`` (rows are iid copies).
    """

    kind: str
    alphabet: Alphabet
    weights: tuple[float, ...] | None = None
    transition: tuple[tuple[float, ...], ...] | None = None
    stationary: tuple[float, ...] | None = None

    def __post_init__(self):
        q = len(self.alphabet)
        if self.kind == "bernoulli":
            if self.weights is None or len(self.weights) != q:
                raise ValueError("bernoulli measure needs one weight per symbol")
            w = np.asarray(self.weights, float)
            if (w < -SUM_TOL).any() or abs(w.sum() - 1.0) > SUM_TOL:
                raise ValueError("weights must be nonnegative and sum to 1")
        elif self.kind == "markov-row":
            if self.transition is None:
                raise ValueError("markov-row measure needs a transition matrix")
            P = np.asarray(self.transition, float)
            if P.shape != (q, q):
                raise ValueError(f"transition matrix must be {q}x{q}")
            if (P < -SUM_TOL).any():
                raise ValueError("negative transition probability")
            if np.abs(P.sum(axis=1) - 1.0).max() > SUM_TOL:
                raise ValueError("transition rows must sum to 1")
            if self.stationary is None:
                raise ValueError("markov-row measure needs its stationary vector")
            pi = np.asarray(self.stationary, float)
            if pi.shape != (q,) or (pi < -SUM_TOL).any() or abs(pi.sum() - 1.0) > SUM_TOL:
                raise ValueError("stationary vector must be a distribution")
            if np.abs(pi @ P - pi).max() > STATIONARY_TOL:
                raise ValueError("stationary vector does not satisfy pi P = pi")
        else:
            raise ValueError(f"unknown measure kind {self.kind!r}")

    @classmethod
    def bernoulli(cls, alph: Alphabet, weights: Sequence[float]) -> "MeasureSpec":
        return cls("bernoulli", alph, weights=tuple(float(w) for w in weights))

    @classmethod
    def markov_row(cls, alph: Alphabet, transition, stationary=None) -> "MeasureSpec":
        P = np.asarray(transition, float)
        if stationary is None:
            stationary = _stationary_of(P)
        return cls("markov-row", alph,
                   transition=tuple(tuple(float(x) for x in row) for row in P),
                   stationary=tuple(float(x) for x in np.asarray(stationary, float)))

    def P(self) -> np.ndarray:
        return np.asarray(self.transition, float)

    def pi(self) -> np.ndarray:
        return np.asarray(self.stationary, float)

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, float)


def parry_measure(sft: SftSpec) -> MeasureSpec:
    """Maximal-entropy Markov measure of an irreducible nearest-neighbour
    1D SFT, from the Perron eigendata of its transition graph."""
    if sft.dimension != 1:
        raise ValueError("parry_measure expects a 1D spec")
    nodes, T = transfer_graph_1d(sft)
    if not nodes or len(nodes[0]) != 1:
        raise ValueError("parry_measure needs a nearest-neighbour presentation "
                         "(forbidden words of width at most 2)")
    if not strongly_connected(T):
        raise ValueError("parry_measure needs an irreducible transition graph")
    lam, v, u = perron_eigendata(T)
    q = len(sft.alphabet)
    node_syms = [w[0] for w in nodes]
    P = np.zeros((q, q))
    pi = np.zeros(q)
    for i, si in enumerate(node_syms):
        ii = sft.alphabet.index(si)
        for j, sj in enumerate(node_syms):
            jj = sft.alphabet.index(sj)
            if T[i, j]:
                P[ii, jj] = v[j] / (lam * v[i])
        pi[ii] = u[i] * v[i]
    # Symbols killed by single-cell forbidden words keep zero mass; give
    # their transition rows a point mass so the matrix stays stochastic.
    for i in range(q):
        if P[i].sum() == 0:
            P[i, i] = 1.0
    pi /= pi.sum()
    return MeasureSpec.markov_row(sft.alphabet, P, pi)


# ---------------------------------------------------------------------------
# window marginals and entropies
# ---------------------------------------------------------------------------


def _rows_of(support) -> dict[int, list[int]]:
    """Group the support by row: {n: sorted column positions}."""
    if isinstance(support, IntRect):
        support = LatticeSet.from_rect(support)
    elif not isinstance(support, LatticeSet):
        support = LatticeSet(support)
    rows: dict[int, list[int]] = {}
    for (m, n) in support:
        rows.setdefault(n, []).append(m)
    for xs in rows.values():
        xs.sort()
    return rows


def pattern_log2_prob(measure: MeasureSpec, pattern: Pattern) -> float:
    """log2 of the cylinder mass of a fixed finite pattern (-inf if zero)."""
    rows: dict[int, list[tuple[int, int]]] = {}
    for (m, n), sym in pattern.cells:
        rows.setdefault(n, []).append((m, measure.alphabet.index(sym)))
    total = 0.0
    if measure.kind == "bernoulli":
        w = measure.weight_array()
        for cells in rows.values():
            for _, sidx in cells:
                if w[sidx] <= 0:
                    return float("-inf")
                total += math.log2(w[sidx])
        return total
    P = measure.P()
    pi = measure.pi()
    for cells in rows.values():
        cells.sort()
        (x0, s0) = cells[0]
        if pi[s0] <= 0:
            return float("-inf")
        total += math.log2(pi[s0])
        prev_x, prev_s = x0, s0
        for (x, s) in cells[1:]:
            pg = np.linalg.matrix_power(P, x - prev_x)[prev_s, s]
            if pg <= 0:
                return float("-inf")
            total += math.log2(pg)
            prev_x, prev_s = x, s
    return total


def check_support(measure: MeasureSpec, sft: SftSpec) -> None:
    """Raise ValueError unless the measure gives mass zero to every
    forbidden pattern of the SFT."""
    if measure.alphabet.symbols != sft.alphabet.symbols:
        raise ValueError("measure and SFT use different alphabets")
    for f in sft.forbidden:
        if pattern_log2_prob(measure, f) != float("-inf"):
            raise ValueError(
                "measure puts positive mass on a forbidden pattern; "
                "it is not supported on this subshift")


def window_marginal(measure: MeasureSpec, support, *,
                    max_outcomes: int = 1 << 20) -> FiniteDistribution:
    """Exact marginal law of the pattern seen on a finite support.

    Outcomes are Patterns in canonical enumeration order.  Product law
    for bernoulli; independent stationary chain marginals per row for
    markov-row (gaps bridged by matrix powers).
    """
    rows = _rows_of(support)
    cells = sorted((m, n) for n, xs in rows.items() for m in xs)
    q = len(measure.alphabet)
    n_out = q ** len(cells)
    if n_out > max_outcomes:
        raise ResourceGuardError(
            f"window marginal would have {n_out} outcomes, above the guard "
            f"{max_outcomes}")

    per_row: list[tuple[int, list[int], np.ndarray]] = []
    for n, xs in sorted(rows.items()):
        per_row.append((n, xs, _row_marginal_probs(measure, xs)))

    outcomes = []
    probs = []
    syms = measure.alphabet.symbols
    ncells = len(cells)
    for code in range(n_out):
        digits = []
        c = code
        for _ in range(ncells):
            digits.append(c % q)
            c //= q
        digits.reverse()  # cells in canonical order, most significant first
        assign = dict(zip(cells, digits))
        p = 1.0
        for n, xs, table in per_row:
            idx = 0
            for x in xs:
                idx = idx * q + assign[(x, n)]
            p *= table[idx]
        outcomes.append(Pattern(tuple(((m, n), syms[assign[(m, n)]]) for (m, n) in cells)))
        probs.append(p)
    total = sum(probs)
    if total > 0:
        probs = [p / total for p in probs]
    return FiniteDistribution(tuple(outcomes), tuple(probs))


def _row_marginal_probs(measure: MeasureSpec, xs: list[int]) -> np.ndarray:
    """Joint law of one row's cells at positions xs, flattened in base-q
    (first position most significant)."""
    q = len(measure.alphabet)
    k = len(xs)
    out = np.zeros(q ** k)
    if measure.kind == "bernoulli":
        w = measure.weight_array()
        for code in range(q ** k):
            p = 1.0
            c = code
            for _ in range(k):
                p *= w[c % q]
                c //= q
            out[code] = p
        return out
    P = measure.P()
    pi = measure.pi()
    powers = [np.linalg.matrix_power(P, xs[i + 1] - xs[i]) for i in range(k - 1)]
    for code in range(q ** k):
        digits = []
        c = code
        for _ in range(k):
            digits.append(c % q)
            c //= q
        digits.reverse()
        p = pi[digits[0]]
        for i in range(k - 1):
            p *= powers[i][digits[i], digits[i + 1]]
        out[code] = p
    return out


def window_entropy(measure: MeasureSpec, support) -> float:
    """Exact entropy in bits of the window marginal, via the chain rule.

    bernoulli: |support| * H(weights).  markov-row: per row,
    H(pi) plus one conditional-entropy term per gap between visible cells.
    """
    rows = _rows_of(support)
    ncells = sum(len(xs) for xs in rows.values())
    if measure.kind == "bernoulli":
        return ncells * entropy_bits(measure.weight_array())
    P = measure.P()
    pi = measure.pi()
    total = 0.0
    cond_cache: dict[int, float] = {}

    def cond_entropy(gap: int) -> float:
        if gap not in cond_cache:
            Q = np.linalg.matrix_power(P, gap)
            cond_cache[gap] = float(sum(pi[i] * entropy_bits(Q[i]) for i in range(len(pi))))
        return cond_cache[gap]

    h_pi = entropy_bits(pi)
    for xs in rows.values():
        total += h_pi
        for i in range(len(xs) - 1):
            total += cond_entropy(xs[i + 1] - xs[i])
    return total


def ks_entropy(measure: MeasureSpec) -> float:
    """Entropy per site in bits: H(weights) for bernoulli, the Markov
    entropy rate -sum_i pi_i sum_j P_ij log2 P_ij for markov-row."""
    if measure.kind == "bernoulli":
        return entropy_bits(measure.weight_array())
    P = measure.P()
    pi = measure.pi()
    return float(sum(pi[i] * entropy_bits(P[i]) for i in range(len(pi))))


def max_cylinder_log2_prob(measure: MeasureSpec, support) -> float:
    """log2 of the largest cylinder mass over patterns on ``support``.

    Per-row max-product dynamic programming for markov-row measures;
    |support| * log2(max weight) for bernoulli.
    """
    rows = _rows_of(support)
    ncells = sum(len(xs) for xs in rows.values())
    if ncells == 0:
        return 0.0
    if measure.kind == "bernoulli":
        w = measure.weight_array()
        return ncells * math.log2(w.max())
    P = measure.P()
    pi = measure.pi()
    with np.errstate(divide="ignore"):
        logP = np.log2(P)
        logpi = np.log2(pi)
    best_cache: dict[tuple[int, ...], float] = {}
    total = 0.0
    for xs in sorted(rows.values(), key=tuple):
        gaps = tuple(xs[i + 1] - xs[i] for i in range(len(xs) - 1))
        if gaps not in best_cache:
            vec = logpi.copy()
            for g in gaps:
                step = logP if g == 1 else _log2_matrix_power(P, g)
                vec = np.max(vec[:, None] + step, axis=0)
            best_cache[gaps] = float(vec.max())
        total += best_cache[gaps]
    return total


def _log2_matrix_power(P: np.ndarray, g: int) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log2(np.linalg.matrix_power(P, g))


# ---------------------------------------------------------------------------
# rate-distortion bounds
# ---------------------------------------------------------------------------


def rd_upper_bound(measure: MeasureSpec, alpha: float, M: int, N: int) -> float:
    """Entropy of the window (-M, N+M) x (-M, M) divided by N, in bits per
    iterate.  Upper-bounds the rate-distortion function at every
    distortion level above alpha^-M."""
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if M < 1 or N < 1:
        raise ValueError("M and N must be positive")
    window = IntRect(-M + 1, N + M - 1, -M + 1, M - 1)
    return window_entropy(measure, window) / N


def rd_upper_limit(measure: MeasureSpec, M: int) -> float:
    """Large-N limit of rd_upper_bound: (2M-1) rows times the per-site
    entropy (exact for both measure families)."""
    return (2 * M - 1) * ks_entropy(measure)


def mi_lower_bound_lemma(HX: float, N: int, delta: float, Bsize: int) -> float:
    """Lower bound HX - N H(delta) - delta N log2 |B| on the mutual
    information between two B^N-valued variables whose expected number of
    disagreeing coordinates is below delta*N.  May be negative; callers
    clamp."""
    if not 0 < delta < 0.5:
        raise ValueError("the lemma needs 0 < delta < 1/2")
    if N < 1 or Bsize < 1:
        raise ValueError("N and Bsize must be positive")
    return HX - N * binary_entropy(delta) - delta * N * math.log2(Bsize)


class RdLowerBound(float):
    """rd_lower_bound result: a float (clamped at 0) carrying diagnostics."""

    raw: float
    M: int

    def __new__(cls, value: float, raw: float, M: int):
        obj = super().__new__(cls, value)
        obj.raw = raw
        obj.M = M
        return obj


def rd_lower_bound(measure: MeasureSpec, alpha: float, epsilon: float,
                   delta: float) -> RdLowerBound:
    """Lower bound on the rate-distortion function at distortion epsilon.

    Uses the strip of half-height M from the bracket
    delta*alpha^-(M+1) < epsilon <= delta*alpha^-M:
    (2M+1) * per-site entropy - H(delta) - delta (2M+1) log2 |A|,
    clamped at zero (the raw value stays available as ``.raw``).
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    if not 0 < epsilon:
        raise ValueError("epsilon must be positive")
    if epsilon > delta:
        raise ValueError(
            f"epsilon={epsilon} exceeds delta={delta}: the resolution bracket "
            "has no nonnegative solution")
    M = 0
    while delta * alpha ** (-(M + 1)) >= epsilon:
        M += 1
    q = len(measure.alphabet)
    h = ks_entropy(measure)
    raw = (2 * M + 1) * h - binary_entropy(delta) - delta * (2 * M + 1) * math.log2(q)
    return RdLowerBound(max(raw, 0.0), raw, M)


def _upper_resolution_index(alpha: float, epsilon: float) -> int:
    """Smallest M >= 1 with alpha^-M < epsilon (so reproduction within
    alpha^-M beats the distortion budget epsilon)."""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    M = 1
    while alpha ** (-M) >= epsilon:
        M += 1
    return M


def default_rdim_schedule(alpha: float, k_range: Iterable[int] = range(8, 17),
                          delta: float = 0.01):
    """Distortion schedule eps_k = alpha^-k with a fixed small delta."""
    eps = [alpha ** (-k) for k in k_range]
    return eps, [delta] * len(eps)


def rdim_bounds(measure: MeasureSpec, alpha: float, eps_schedule,
                delta_schedule) -> tuple[DimensionEstimate, DimensionEstimate]:
    """Finite-scale sandwich for the rate-distortion dimension.

    For each scheduled distortion eps the upper sequence is the large-N
    limit of the strip-entropy bound over log2(1/eps) and the lower
    sequence is rd_lower_bound over log2(1/eps).  Both are extrapolated
    linearly in 1/log2(1/eps).  With a fixed delta the lower limit is
    2*(h - delta log2|A|)/log2(alpha), i.e. sits below the upper limit
    2h/log2(alpha) by the documented delta bias.
    """
    eps_schedule = list(eps_schedule)
    delta_schedule = list(delta_schedule)
    if len(eps_schedule) != len(delta_schedule):
        raise ValueError("epsilon and delta schedules differ in length")
    if len(eps_schedule) < 2:
        raise ValueError("need at least two scheduled scales")
    uppers = []
    lowers = []
    xs = []
    sched = []
    for eps, delta in zip(eps_schedule, delta_schedule):
        log_inv = math.log2(1.0 / eps)
        Mu = _upper_resolution_index(alpha, eps)
        up = rd_upper_limit(measure, Mu) / log_inv
        low = rd_lower_bound(measure, alpha, eps, delta) / log_inv
        xs.append(1.0 / log_inv)
        uppers.append(up)
        lowers.append(float(low))
        sched.append((eps, delta, Mu))
    u_inf, uc = fit_limit(xs, uppers)
    l_inf, lc = fit_limit(xs, lowers)
    model = "v = v_inf + c/log2(1/eps)"
    upper = DimensionEstimate(u_inf, "upper-bound", tuple(sched), tuple(uppers),
                              model, (u_inf, uc))
    lower = DimensionEstimate(l_inf, "lower-bound", tuple(sched), tuple(lowers),
                              model, (l_inf, lc))
    return lower, upper
