"""Subshifts of finite type on Z and Z^2 and exact pattern counting.

An SFT is a finite alphabet plus a finite list of forbidden patterns.
The module counts and enumerates locally admissible patterns (patterns
containing no translate of a forbidden pattern inside their support),
computes 1D topological entropy through the transfer-matrix method, and
builds the exactly tractable fixture families used as ground truth:
full shifts, row-lifts of 1D SFTs, and the three-dot parity system.

Counts are arbitrary-precision integers.  Rectangle supports go through
a strip-by-strip transfer DP over column states whenever every relevant
forbidden pattern fits in a two-column window; everything else goes
through backtracking with pruning at the moment a forbidden pattern
completes.  The two paths are tested to agree on overlapping inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import EmptyLanguageError, ResourceGuardError
from .lattice import IntRect, LatticeSet, Point

DEFAULT_MAX_FREE_CELLS = 64
DEFAULT_MAX_STATES = 4096


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite list of distinct symbol tokens."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.symbols) == 0:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        for s in self.symbols:
            if not s or any(ch.isspace() for ch in s):
                raise ValueError(f"bad symbol token {s!r}")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i: int) -> str:
        return self.symbols[i]

    def index(self, sym: str) -> int:
        try:
            return self.symbols.index(sym)
        except ValueError:
            raise ValueError(f"symbol {sym!r} not in alphabet {self.symbols}") from None


def alphabet(*symbols: str) -> Alphabet:
    return Alphabet(tuple(symbols))


@dataclass(frozen=True)
class Pattern:
    """A symbol assignment on a finite support, stored in canonical order."""

    cells: tuple[tuple[Point, str], ...]

    def __post_init__(self):
        pts = [pt for pt, _ in self.cells]
        if len(set(pts)) != len(pts):
            raise ValueError("pattern assigns a cell twice")
        object.__setattr__(self, "cells", tuple(sorted(self.cells)))

    @classmethod
    def from_dict(cls, mapping: Mapping[Point, str]) -> "Pattern":
        return cls(tuple((tuple(pt), sym) for pt, sym in mapping.items()))

    def domain(self) -> LatticeSet:
        return LatticeSet(pt for pt, _ in self.cells)

    def as_dict(self) -> dict[Point, str]:
        return dict(self.cells)

    def __getitem__(self, pt: Point) -> str:
        for p, sym in self.cells:
            if p == tuple(pt):
                return sym
        raise KeyError(pt)

    def __len__(self) -> int:
        return len(self.cells)

    def translate(self, u: Point) -> "Pattern":
        return Pattern(tuple(((m + u[0], n + u[1]), sym) for (m, n), sym in self.cells))

    def restrict(self, omega: LatticeSet) -> "Pattern":
        mine = {pt for pt, _ in self.cells}
        for pt in omega:
            if pt not in mine:
                raise ValueError(f"restriction target contains {pt}, outside the pattern support")
        return Pattern(tuple((pt, sym) for pt, sym in self.cells if pt in omega))

    def anchored(self) -> "Pattern":
        """Translate so the support's minimum column and row are both 0."""
        if not self.cells:
            return self
        m0 = min(pt[0] for pt, _ in self.cells)
        n0 = min(pt[1] for pt, _ in self.cells)
        return self.translate((-m0, -n0))

    @property
    def ncols_extent(self) -> int:
        ms = [pt[0] for pt, _ in self.cells]
        return max(ms) - min(ms) + 1 if ms else 0

    @property
    def nrows_extent(self) -> int:
        ns = [pt[1] for pt, _ in self.cells]
        return max(ns) - min(ns) + 1 if ns else 0


def restrict_pattern(p: Pattern, omega: LatticeSet) -> Pattern:
    """Project a pattern to a subset of its support (identity on the full support)."""
    return p.restrict(omega)


_THREE_DOT_SUPPORT = ((0, 0), (1, 0), (0, 1))


@dataclass(frozen=True)
class SftSpec:
    """A Z or Z^2 subshift of finite type: alphabet plus forbidden patterns.

    ``certified`` marks the shipped fixture families for which locally
    admissible patterns coincide with restrictions of genuine points of
    the subshift ("full", "row-lift", "three-dot"); the structural shape
    of the forbidden set is re-verified at construction.
    """

    dimension: int
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...]
    certified: str | None = None

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        for f in self.forbidden:
            if len(f) == 0:
                raise ValueError("forbidden patterns must have nonempty support")
            for (m, n), sym in f.cells:
                self.alphabet.index(sym)
                if self.dimension == 1 and n != 0:
                    raise ValueError("1D forbidden patterns must live on the horizontal axis")
        # canonical order so equal specs compare equal regardless of input order
        object.__setattr__(self, "forbidden",
                           tuple(sorted(set(self.forbidden), key=lambda p: p.cells)))
        _check_certificate(self)

    @property
    def nsymbols(self) -> int:
        return len(self.alphabet)


def _check_certificate(sft: SftSpec) -> None:
    cert = sft.certified
    if cert is None:
        return
    if cert == "full":
        if sft.forbidden:
            raise ValueError("'full' certificate requires an empty forbidden set")
    elif cert == "row-lift":
        if sft.dimension != 2:
            raise ValueError("'row-lift' certificate requires dimension 2")
        for f in sft.forbidden:
            if f.nrows_extent > 1:
                raise ValueError("'row-lift' certificate requires single-row forbidden patterns")
        if not _one_d_extendable(base_of_row_lift(sft)):
            raise ValueError("'row-lift' certificate requires an extendable 1D base")
    elif cert == "three-dot":
        if sft.dimension != 2 or len(sft.alphabet) != 2:
            raise ValueError("'three-dot' certificate requires a binary 2D spec")
        want = set()
        a, b = sft.alphabet.symbols
        for bits in range(8):
            vals = [(bits >> i) & 1 for i in range(3)]
            if sum(vals) % 2 == 1:
                want.add(tuple(sorted((pt, (a, b)[v]) for pt, v in zip(_THREE_DOT_SUPPORT, vals))))
        have = {tuple(sorted(f.anchored().cells)) for f in sft.forbidden}
        if have != want:
            raise ValueError("'three-dot' certificate does not match the parity family")
    else:
        raise ValueError(f"unknown certificate {cert!r}")


# ---------------------------------------------------------------------------
# fixture families
# ---------------------------------------------------------------------------


def full_shift(symbols: Sequence[str] = ("0", "1"), dimension: int = 2) -> SftSpec:
    """The unconstrained shift on the given symbols."""
    return SftSpec(dimension, Alphabet(tuple(symbols)), (), certified="full")


def golden_mean_1d() -> SftSpec:
    """Binary 1D SFT forbidding adjacent ones."""
    bad = Pattern.from_dict({(0, 0): "1", (1, 0): "1"})
    return SftSpec(1, alphabet("0", "1"), (bad,))


def row_lift(base: SftSpec) -> SftSpec:
    """Lift a 1D SFT to Z^2 with every row independently constrained.

    The count on an N x M rectangle is the base count on length N raised
    to the power M, and the Z^2 entropy equals the base entropy.
    """
    if base.dimension != 1:
        raise ValueError("row_lift expects a 1D base spec")
    cert = "row-lift" if _one_d_extendable(base) else None
    return SftSpec(2, base.alphabet, base.forbidden, certified=cert)


def three_dot() -> SftSpec:
    """Ledrappier-style parity SFT: x(u) + x(u+e1) + x(u+e2) even everywhere."""
    pats = []
    for bits in range(8):
        vals = [(bits >> i) & 1 for i in range(3)]
        if sum(vals) % 2 == 1:
            pats.append(Pattern.from_dict(
                {pt: str(v) for pt, v in zip(_THREE_DOT_SUPPORT, vals)}))
    return SftSpec(2, alphabet("0", "1"), tuple(pats), certified="three-dot")


def base_of_row_lift(sft: SftSpec) -> SftSpec:
    """Extract the 1D base of a spec whose forbidden patterns are single rows."""
    pats = []
    for f in sft.forbidden:
        if f.nrows_extent > 1:
            raise ValueError("forbidden pattern spans several rows; not a row-lift")
        pats.append(f.anchored())
    return SftSpec(1, sft.alphabet, tuple(pats))


def row_interval(length: int, row: int = 0) -> LatticeSet:
    """The horizontal support [0, length) x {row}."""
    return LatticeSet((m, row) for m in range(length))


# ---------------------------------------------------------------------------
# placement tables for backtracking / enumeration
# ---------------------------------------------------------------------------


def _support_points(support) -> LatticeSet:
    if isinstance(support, LatticeSet):
        return support
    if isinstance(support, IntRect):
        return LatticeSet.from_rect(support)
    return LatticeSet(support)


def _placement_groups(sft: SftSpec, points: tuple[Point, ...]):
    """All translated forbidden patterns inside the support, grouped by the
    assignment-order index at which they complete."""
    index = {pt: i for i, pt in enumerate(points)}
    pset = set(points)
    groups: list[set[tuple[tuple[int, int], ...]]] = [set() for _ in points]
    if points:
        ms = [p[0] for p in points]
        ns = [p[1] for p in points]
        box = (min(ms), max(ms), min(ns), max(ns))
    for f in sft.forbidden:
        cells = [((m, n), sft.alphabet.index(sym)) for (m, n), sym in f.cells]
        fm0 = min(m for (m, _), _ in cells)
        fm1 = max(m for (m, _), _ in cells)
        fn0 = min(n for (_, n), _ in cells)
        fn1 = max(n for (_, n), _ in cells)
        if not points:
            continue
        for um in range(box[0] - fm0, box[1] - fm1 + 1):
            for un in range(box[2] - fn0, box[3] - fn1 + 1):
                shifted = []
                inside = True
                for (m, n), sidx in cells:
                    pt = (m + um, n + un)
                    if pt not in pset:
                        inside = False
                        break
                    shifted.append((index[pt], sidx))
                if inside:
                    key = tuple(sorted(shifted))
                    groups[max(i for i, _ in key)].add(key)
    return [sorted(g) for g in groups]


def _placement_csr(groups):
    grp_indptr = np.zeros(len(groups) + 1, np.int64)
    pl_indptr = [0]
    pl_cell: list[int] = []
    pl_sym: list[int] = []
    for i, g in enumerate(groups):
        grp_indptr[i + 1] = grp_indptr[i] + len(g)
        for placement in g:
            for cell, sym in placement:
                pl_cell.append(cell)
                pl_sym.append(sym)
            pl_indptr.append(len(pl_cell))
    return (grp_indptr,
            np.asarray(pl_indptr, np.int64),
            np.asarray(pl_cell, np.int64),
            np.asarray(pl_sym, np.int64))


def _count_branch(args):
    n_cells, q, grp_indptr, pl_indptr, pl_cell, pl_sym, sym = args
    return kernels.backtrack_count(n_cells, q, grp_indptr, pl_indptr, pl_cell,
                                   pl_sym, sym)


def _backtrack_count_support(sft: SftSpec, points: tuple[Point, ...],
                             workers: int | None = None) -> int:
    groups = _placement_groups(sft, points)
    csr = _placement_csr(groups)
    q = sft.nsymbols
    n = len(points)
    workers = kernels.worker_count() if workers is None else workers
    if workers > 1 and q > 1 and n >= 12:
        # Split the search on the first cell's symbol; partial counts merge
        # by addition in symbol order, so the result is worker-independent.
        from concurrent.futures import ProcessPoolExecutor

        jobs = [(n, q, *csr, s) for s in range(q)]
        with ProcessPoolExecutor(max_workers=min(workers, q)) as pool:
            parts = list(pool.map(_count_branch, jobs))
        return sum(parts)
    return kernels.backtrack_count(n, q, *csr, -1)


# ---------------------------------------------------------------------------
# transfer DP over column states, with per-height sweep caching
# ---------------------------------------------------------------------------


class RectCounter:
    """Exact locally-admissible counts on rectangle supports for one SFT.

    Counts depend only on the rectangle's column/row numbers, so sweeps
    over widths are cached per height: asking for (W, H) after (W', H)
    with W' > W is free.  Accumulation is arbitrary-precision integer
    arithmetic; only the 0/1 transition tables are numpy.
    """

    def __init__(self, sft: SftSpec, *, max_states: int = DEFAULT_MAX_STATES,
                 max_free_cells: int = DEFAULT_MAX_FREE_CELLS):
        if sft.dimension != 2:
            raise ValueError("RectCounter works on 2D specs")
        self.sft = sft
        self.max_states = max_states
        self.max_free_cells = max_free_cells
        self._tables: dict[tuple[bool, int], object] = {}
        self._sweeps: dict[tuple[bool, int], dict] = {}
        self._transposed: SftSpec | None = None

    def count(self, ncols: int, nrows: int) -> int:
        out = self.try_count(ncols, nrows)
        if out is None:
            raise ResourceGuardError(
                f"no transfer orientation applies to a {ncols}x{nrows} rectangle "
                f"(state guard {self.max_states}) and {ncols * nrows} cells exceed "
                f"the backtracking guard {self.max_free_cells}")
        return out

    def try_count(self, ncols: int, nrows: int) -> int | None:
        if ncols < 1 or nrows < 1:
            raise ValueError("rectangle must have positive extent")
        fitting = [f for f in self.sft.forbidden
                   if f.ncols_extent <= ncols and f.nrows_extent <= nrows]
        if not fitting:
            return self.sft.nsymbols ** (ncols * nrows)
        if self._dp_ok(False, ncols, nrows):
            return self._sweep_total(False, nrows, ncols)
        if self._dp_ok(True, nrows, ncols):
            return self._sweep_total(True, ncols, nrows)
        if ncols * nrows <= self.max_free_cells:
            rect = IntRect(0, ncols - 1, 0, nrows - 1)
            return _backtrack_count_support(self.sft, LatticeSet.from_rect(rect).points)
        return None

    # -- internals ---------------------------------------------------------

    def _spec(self, transposed: bool) -> SftSpec:
        if not transposed:
            return self.sft
        if self._transposed is None:
            pats = tuple(
                Pattern(tuple(((n, m), sym) for (m, n), sym in f.cells))
                for f in self.sft.forbidden)
            self._transposed = SftSpec(2, self.sft.alphabet, pats)
        return self._transposed

    def _dp_ok(self, transposed: bool, ncols: int, nrows: int) -> bool:
        """Can the (possibly transposed) sweep at height ``nrows`` serve a
        width-``ncols`` count?  Needs every forbidden pattern that could fit
        to span at most two columns."""
        spec = self._spec(transposed)
        if spec.nsymbols ** nrows > self.max_states:
            return False
        for f in spec.forbidden:
            if f.nrows_extent <= nrows and f.ncols_extent > 2 and f.ncols_extent <= ncols:
                return False
        return True

    def _get_tables(self, transposed: bool, height: int):
        key = (transposed, height)
        if key not in self._tables:
            self._tables[key] = _column_tables(self._spec(transposed), height)
        return self._tables[key]

    def _sweep_total(self, transposed: bool, height: int, width: int) -> int:
        key = (transposed, height)
        sweep = self._sweeps.get(key)
        if sweep is None:
            mode, valid_count, direct, complement = self._get_tables(transposed, height)
            sweep = {
                "mode": mode,
                "direct": direct,
                "complement": complement,
                "vec": [1] * valid_count,
                "totals": [0, valid_count],
            }
            self._sweeps[key] = sweep
        totals = sweep["totals"]
        vec = sweep["vec"]
        while len(totals) - 1 < width:
            if not vec:
                totals.append(0)
                continue
            if sweep["mode"] == "direct":
                preds = sweep["direct"]
                new = [0] * len(vec)
                for t, plist in enumerate(preds):
                    acc = 0
                    for s in plist:
                        acc += vec[s]
                    new[t] = acc
            else:
                banned = sweep["complement"]
                tot = sum(vec)
                new = [0] * len(vec)
                for t, blist in enumerate(banned):
                    acc = 0
                    for s in blist:
                        acc += vec[s]
                    new[t] = tot - acc
            vec = new
            sweep["vec"] = vec
            totals.append(sum(vec))
        return totals[width]


def _column_tables(sft: SftSpec, height: int):
    """Valid column states and the allowed-transition lists at one height.

    Returns (mode, n_valid, direct_pred_lists, banned_pred_lists) where the
    unused list is None.  ``direct`` mode stores, for each target column,
    the valid predecessor columns; ``complement`` mode stores the banned
    ones (chosen when transitions are dense, e.g. sparse constraints).
    """
    q = sft.nsymbols
    S = q ** height
    digits = (np.arange(S)[:, None] // (q ** np.arange(height))[None, :]) % q
    digits = digits.astype(np.int16)

    def norm_cells(f):
        anc = f.anchored()
        return [((m, n), sft.alphabet.index(sym)) for (m, n), sym in anc.cells]

    relevant = [f for f in sft.forbidden if f.nrows_extent <= height]
    valid = np.ones(S, bool)
    for f in relevant:
        if f.ncols_extent != 1:
            continue
        cells = norm_cells(f)
        h = f.nrows_extent
        for off in range(height - h + 1):
            hit = np.ones(S, bool)
            for (_, dn), sidx in cells:
                hit &= digits[:, off + dn] == sidx
            valid &= ~hit
    vstates = np.nonzero(valid)[0]
    nV = len(vstates)
    if nV == 0:
        return ("direct", 0, [], None)
    dv = digits[vstates]

    allowed = np.ones((nV, nV), bool)
    for f in relevant:
        if f.ncols_extent != 2:
            continue
        cells = norm_cells(f)
        h = f.nrows_extent
        for off in range(height - h + 1):
            m0 = np.ones(nV, bool)
            m1 = np.ones(nV, bool)
            for (dm, dn), sidx in cells:
                if dm == 0:
                    m0 &= dv[:, off + dn] == sidx
                else:
                    m1 &= dv[:, off + dn] == sidx
            allowed &= ~(m0[:, None] & m1[None, :])

    n_allowed = int(allowed.sum())
    if 2 * n_allowed <= nV * nV:
        direct = [np.nonzero(allowed[:, t])[0].tolist() for t in range(nV)]
        return ("direct", nV, direct, None)
    banned = [np.nonzero(~allowed[:, t])[0].tolist() for t in range(nV)]
    return ("complement", nV, None, banned)


# ---------------------------------------------------------------------------
# public counting / enumeration operations
# ---------------------------------------------------------------------------


def count_locally_admissible(sft: SftSpec, support, *, algorithm: str = "auto",
                             max_free_cells: int = DEFAULT_MAX_FREE_CELLS,
                             max_states: int = DEFAULT_MAX_STATES,
                             workers: int | None = None,
                             counter: RectCounter | None = None) -> int:
    """Number of patterns on ``support`` with no forbidden translate inside it.

    Equals |A|^|support| for the full shift and upper-bounds the number of
    restrictions of genuine subshift points; the two coincide for the
    certified fixture families.  ``algorithm`` forces "dp" (rectangle
    transfer) or "backtracking"; "auto" picks the transfer DP when the
    support is a rectangle the DP applies to.
    """
    pts = _support_points(support)
    if len(pts) == 0:
        return 1
    if sft.dimension == 1:
        for (_, n) in pts:
            if n != 0:
                raise ValueError("1D supports must lie on the horizontal axis")
    if algorithm not in ("auto", "dp", "backtracking"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if not sft.forbidden:
        return sft.nsymbols ** len(pts)

    rect = pts.as_rect()
    if (algorithm == "auto" and sft.dimension == 1 and rect is not None):
        # contiguous 1D interval: the block transfer graph counts in time
        # linear in the length instead of enumerating every word
        try:
            return word_count_1d(sft, rect.ncols)
        except ResourceGuardError:
            pass  # block alphabet too large; fall through to backtracking
    if algorithm in ("auto", "dp") and rect is not None and sft.dimension == 2:
        rc = counter if counter is not None else RectCounter(
            sft, max_states=max_states, max_free_cells=max_free_cells)
        out = rc.try_count(rect.ncols, rect.nrows)
        if out is not None:
            return out
        if algorithm == "dp":
            raise ResourceGuardError(
                f"transfer DP does not apply to this rectangle "
                f"({rect.ncols}x{rect.nrows}, state guard {max_states})")
    elif algorithm == "dp":
        raise ValueError("algorithm='dp' needs a 2D rectangle support")

    if len(pts) > max_free_cells:
        raise ResourceGuardError(
            f"support has {len(pts)} cells, above the backtracking guard "
            f"{max_free_cells}; raise max_free_cells to override")
    return _backtrack_count_support(sft, pts.points, workers)


def enumerate_locally_admissible(sft: SftSpec, support, *,
                                 max_free_cells: int = DEFAULT_MAX_FREE_CELLS
                                 ) -> Iterator[Pattern]:
    """Yield every locally admissible pattern on ``support`` exactly once.

    Cells are assigned in canonical (lexicographic) order and symbols in
    alphabet order, so the stream is deterministic and sorted.
    """
    pts = _support_points(support)
    points = pts.points
    n = len(points)
    if n > max_free_cells:
        raise ResourceGuardError(
            f"support has {n} cells, above the enumeration guard "
            f"{max_free_cells}; raise max_free_cells to override")
    if n == 0:
        yield Pattern(())
        return
    groups = _placement_groups(sft, points)
    syms = sft.alphabet.symbols
    q = len(syms)
    assign = [0] * n

    def ok_at(level: int) -> bool:
        for placement in groups[level]:
            if all(assign[c] == s for c, s in placement):
                return False
        return True

    def rec(level: int):
        for s in range(q):
            assign[level] = s
            if not ok_at(level):
                continue
            if level == n - 1:
                yield Pattern(tuple((points[i], syms[assign[i]]) for i in range(n)))
            else:
                yield from rec(level + 1)

    yield from rec(0)


# ---------------------------------------------------------------------------
# one-dimensional transfer matrices
# ---------------------------------------------------------------------------

_graph_cache: dict[SftSpec, tuple] = {}


def transfer_graph_1d(sft: SftSpec, max_nodes: int = DEFAULT_MAX_STATES):
    """Higher-block presentation of a 1D SFT.

    Recodes forbidden words of width up to k into a nearest-neighbour
    system on (k-1)-blocks.  Returns (nodes, T) with nodes the admissible
    (k-1)-letter words in lexicographic order and T the 0/1 transition
    matrix between overlapping words.
    """
    if sft.dimension != 1:
        raise ValueError("transfer_graph_1d expects a 1D spec")
    if sft in _graph_cache:
        return _graph_cache[sft]
    width = max((f.ncols_extent for f in sft.forbidden), default=1)
    k = max(2, width)
    q = sft.nsymbols
    if q ** (k - 1) > max_nodes:
        raise ResourceGuardError(
            f"1D block recoding needs {q}^{k - 1} nodes, above the guard {max_nodes}")
    nodes = [tuple(p[pt] for pt in sorted(p.as_dict()))
             for p in enumerate_locally_admissible(sft, row_interval(k - 1))]
    pos = {w: i for i, w in enumerate(nodes)}
    T = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
    for w in nodes:
        for sym in sft.alphabet:
            word = w + (sym,)
            if not _word_admissible(sft, word):
                continue
            w2 = word[1:]
            if w2 in pos:
                T[pos[w], pos[w2]] = 1
    _graph_cache[sft] = (nodes, T)
    return nodes, T


def _word_admissible(sft: SftSpec, word: tuple[str, ...]) -> bool:
    n = len(word)
    for f in sft.forbidden:
        cells = [(m, sym) for (m, _), sym in f.anchored().cells]
        w = max(m for m, _ in cells) + 1
        for off in range(n - w + 1):
            if all(word[off + m] == sym for m, sym in cells):
                return False
    return True


def word_count_1d(sft: SftSpec, length: int) -> int:
    """Exact number of locally admissible words of the given length."""
    if sft.dimension != 1:
        raise ValueError("word_count_1d expects a 1D spec")
    if length < 0:
        raise ValueError("length must be nonnegative")
    if length == 0:
        return 1
    if not sft.forbidden:
        return sft.nsymbols ** length
    nodes, T = transfer_graph_1d(sft)
    k1 = len(nodes[0]) if nodes else 1
    if length < k1 or not nodes:
        return count_locally_admissible(sft, row_interval(length),
                                        algorithm="backtracking")
    preds = [np.nonzero(T[:, j])[0].tolist() for j in range(len(nodes))]
    vec = [1] * len(nodes)
    for _ in range(length - k1):
        vec = [sum(vec[i] for i in plist) for plist in preds]
    return sum(vec)


def spectral_radius(T: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(T.astype(float)))))


def transfer_matrix_entropy_1d(sft: SftSpec) -> float:
    """Topological entropy of a 1D SFT in bits per symbol.

    log2 of the spectral radius of the higher-block transition matrix;
    equals the growth rate of the admissible word counts.  Raises
    EmptyLanguageError when no bi-infinite point exists.
    """
    nodes, T = transfer_graph_1d(sft)
    if len(nodes) == 0:
        raise EmptyLanguageError("no admissible blocks: the subshift is empty")
    rho = spectral_radius(T)
    # An integer matrix has spectral radius 0 (nilpotent, finite language)
    # or at least 1 (contains a cycle).
    if rho < 0.5:
        raise EmptyLanguageError("transition graph is acyclic: the subshift is empty")
    return math.log2(rho)


def perron_eigendata(T: np.ndarray, iterations: int = 300):
    """Perron root with right and left positive eigenvectors.

    Shifted power iteration on T + I, which is primitive whenever T is
    irreducible, so periodic transition graphs converge too.
    """
    n = T.shape[0]
    Tf = T.astype(float)
    v = np.full(n, 1.0 / n)
    u = np.full(n, 1.0 / n)
    for _ in range(iterations):
        w = Tf @ v + v
        if w.sum() == 0:
            raise EmptyLanguageError("transition graph has no Perron direction")
        v = w / w.sum()
        z = Tf.T @ u + u
        u = z / z.sum()
    lam = float((Tf @ v).sum() / v.sum())
    return lam, v, u


def strongly_connected(T: np.ndarray) -> bool:
    n = T.shape[0]
    if n == 0:
        return False
    reach = (T > 0) | np.eye(n, dtype=bool)
    for _ in range(n):
        reach = reach | (reach @ reach)
    return bool(reach.all())


# ---------------------------------------------------------------------------
# box-counting entropy estimates for 2D specs
# ---------------------------------------------------------------------------


def box_entropy_estimate(sft: SftSpec, Nmax: int, *,
                         counter: RectCounter | None = None) -> list[tuple[int, float]]:
    """log2(count on the N x N box)/N^2 for N = 1..Nmax.

    The sequence upper-bounds the Z^2 topological entropy; for certified
    fixtures the infimum over N is the entropy itself.
    """
    if sft.dimension != 2:
        raise ValueError("box_entropy_estimate expects a 2D spec")
    if Nmax < 1:
        raise ValueError("Nmax must be positive")
    rc = counter if counter is not None else RectCounter(sft)
    out = []
    for N in range(1, Nmax + 1):
        c = rc.count(N, N)
        out.append((N, math.log2(c) / (N * N)))
    return out


def _one_d_extendable(base: SftSpec) -> bool:
    """True when every locally admissible word of the base extends to a
    bi-infinite point, so that pattern counts are exact for the row-lift.

    Checked structurally: the higher-block graph loses no node when nodes
    without incoming or outgoing edges are trimmed away, and every shorter
    admissible word occurs inside some block.
    """
    try:
        nodes, T = transfer_graph_1d(base)
    except ResourceGuardError:
        return False
    n = len(nodes)
    if n == 0:
        return False
    if (T.sum(axis=0) == 0).any() or (T.sum(axis=1) == 0).any():
        return False
    k1 = len(nodes[0])
    for ell in range(1, k1):
        for p in enumerate_locally_admissible(base, row_interval(ell)):
            word = tuple(p[pt] for pt in sorted(p.as_dict()))
            if not any(w[i:i + ell] == word for w in nodes for i in range(k1 - ell + 1)):
                return False
    return True
