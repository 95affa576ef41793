"""Random families of labeling maps and their collision statistics.

Three families are provided: matrices with i.i.d. uniform entries, sparse
matrices with a fixed number of nonzeros per column, and table-based random
binning.  Each family is summarized by an (alpha, beta) pair: alpha scales
the per-pair collision budget relative to 1/|range|, beta caps the total
mass of exceptional collisions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf import FieldSpec, LinearLabel, all_vectors

# Kinds of label families.
UNIFORM = "uniform-all-linear"
SPARSE = "sparse-linear"
BINNING = "random-binning"
KINDS = (UNIFORM, SPARSE, BINNING)

BINNING_TABLE_BUDGET = 1 << 16
SUPPORT_BUDGET = 1 << 20
ALPHA_GRID = np.round(np.arange(1.0, 4.0 + 1e-9, 0.05), 2)


class SupportBudgetError(RuntimeError):
    """Exact computation would enumerate too large an ensemble support."""


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    rows: int
    cols: int
    field: FieldSpec
    column_degree: int | None = None   # explicit nonzeros per column (sparse only)
    degree_coeff: float = 1.0          # d(n) = ceil(coeff * log2(n+1)) when not explicit

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.rows < 0 or self.cols < 1:
            raise ValueError("rows must be >= 0 and cols >= 1")
        if self.kind == SPARSE:
            d = self.degree()
            if not 1 <= d <= self.rows:
                raise ValueError(f"column degree {d} outside [1, rows={self.rows}]")
        if self.kind == BINNING and self.field.q**self.cols > BINNING_TABLE_BUDGET:
            raise ValueError(
                f"binning table with {self.field.q}^{self.cols} entries exceeds "
                f"the budget of {BINNING_TABLE_BUDGET}")

    def degree(self) -> int:
        if self.kind != SPARSE:
            raise ValueError("column degree only applies to sparse ensembles")
        if self.column_degree is not None:
            return self.column_degree
        return math.ceil(self.degree_coeff * math.log2(self.cols + 1))

    @property
    def im_size(self) -> int:
        return self.field.q ** self.rows


@dataclass(frozen=True)
class BinLabel:
    """Uniformly random function table from GF(q)^n to GF(q)^rows."""

    field: FieldSpec
    cols: int
    table: np.ndarray  # shape (q^cols, rows)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    @property
    def rows(self) -> int:
        return self.table.shape[1]

    @property
    def im_size(self) -> int:
        return self.field.q ** self.rows

    def _encode(self, vecs: np.ndarray) -> np.ndarray:
        q = self.field.q
        idx = np.zeros(vecs.shape[0], dtype=np.int64)
        for j in range(self.cols):
            idx = idx * q + vecs[:, j]
        return idx

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        return self.table[self._encode(u[None, :])[0]]

    def apply_many(self, vecs: np.ndarray) -> np.ndarray:
        return self.table[self._encode(np.asarray(vecs, dtype=np.int64))]


def label_outputs(label, vecs: np.ndarray) -> np.ndarray:
    """Outputs of a label on each row of vecs, for either label kind."""
    if isinstance(label, LinearLabel):
        from .gf import apply_label_many
        return apply_label_many(label, vecs)
    return label.apply_many(vecs)


@dataclass(frozen=True)
class HashParams:
    alpha: float
    beta: float
    provenance: str            # 'exact' | 'estimated'
    half_width: float = 0.0    # 95% normal-approximation CI when estimated

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be nonnegative")
        if self.provenance not in ("exact", "estimated"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


def sample(spec: EnsembleSpec, rng: np.random.Generator):
    """Draw one label from the family."""
    q = spec.field.q
    if spec.kind == UNIFORM:
        return LinearLabel(spec.field, rng.integers(q, size=(spec.rows, spec.cols)))
    if spec.kind == SPARSE:
        d = spec.degree()
        m = np.zeros((spec.rows, spec.cols), dtype=np.int64)
        for j in range(spec.cols):
            pos = rng.choice(spec.rows, size=d, replace=False)
            m[pos, j] = rng.integers(1, q, size=d)
        return LinearLabel(spec.field, m)
    table = rng.integers(q, size=(q**spec.cols, spec.rows))
    return BinLabel(spec.field, spec.cols, table)


# ---------------------------------------------------------------------------
# Exact collision probabilities.
#
# For the linear families P[Au = Au'] depends only on d = u - u'; for the
# sparse family it further depends only on the number of nonzero entries of
# d, because each column's contribution is a uniformly placed, uniformly
# valued sparse vector and scaling by a nonzero constant permutes outcomes.
# ---------------------------------------------------------------------------

def _sparse_column_outcomes(rows: int, degree: int, q: int) -> np.ndarray:
    out = []
    for pos in itertools.combinations(range(rows), degree):
        for vals in itertools.product(range(1, q), repeat=degree):
            v = np.zeros(rows, dtype=np.int64)
            v[list(pos)] = vals
            out.append(v)
    return np.array(out, dtype=np.int64)


def sparse_collision_by_weight(spec: EnsembleSpec, budget: int = 1 << 22) -> list[Fraction]:
    """Exact P[A d = 0] for sparse A, by the nonzero count of d; index = weight."""
    q = spec.field.q
    l, n, d = spec.rows, spec.cols, spec.degree()
    states = q**l
    outcomes = _sparse_column_outcomes(l, d, q)
    n_out = outcomes.shape[0]
    if n_out * states * n > budget:
        raise SupportBudgetError(
            f"sparse convolution cost {n_out}*{states}*{n} exceeds the budget of {budget}")
    digits = all_vectors(q, l)
    # Integer counts over the state group keep the computation exact.
    offsets = []
    for w_vec in outcomes:
        shifted = (digits + w_vec) % q
        idx = np.zeros(states, dtype=np.int64)
        for j in range(l):
            idx = idx * q + shifted[:, j]
        offsets.append(idx)
    counts = np.zeros(states, dtype=object)
    counts[0] = 1
    probs = [Fraction(1)]
    for w in range(1, n + 1):
        new = np.zeros(states, dtype=object)
        for idx in offsets:
            # idx is a permutation of the states (a group shift), so fancy
            # indexing accumulates without dropping duplicates.
            new[idx] += counts
        counts = new
        probs.append(Fraction(int(counts[0]), n_out**w))
    return probs


def _exact_pair_collision(spec: EnsembleSpec, diff_weight: int) -> Fraction:
    q = spec.field.q
    if diff_weight == 0:
        raise ValueError("identical vectors collide trivially; refusing")
    if spec.kind in (UNIFORM, BINNING):
        return Fraction(1, q**spec.rows)
    return sparse_collision_by_weight(spec)[diff_weight]


@dataclass(frozen=True)
class CollisionEstimate:
    value: float
    provenance: str
    half_width: float = 0.0


def collision_prob(spec: EnsembleSpec, u, u2, mode: str = "exact",
                   trials: int = 10000, rng: np.random.Generator | None = None
                   ) -> CollisionEstimate:
    """Probability over the family that u and u' share a label value."""
    q = spec.field.q
    u = np.asarray(u, dtype=np.int64) % q
    u2 = np.asarray(u2, dtype=np.int64) % q
    if u.shape != (spec.cols,) or u2.shape != (spec.cols,):
        raise ValueError("vectors must have length cols")
    diff = (u - u2) % q
    w = int(np.count_nonzero(diff))
    if w == 0:
        raise ValueError("u == u'; collision probability is trivially 1")
    if mode == "exact":
        return CollisionEstimate(float(_exact_pair_collision(spec, w)), "exact")
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("mc mode needs an rng")
    hits = 0
    for _ in range(trials):
        label = sample(spec, rng)
        out = label_outputs(label, np.stack([u, u2]))
        hits += int((out[0] == out[1]).all())
    p = hits / trials
    hw = 1.96 * math.sqrt(max(p * (1 - p), 0.0) / trials)
    return CollisionEstimate(p, "estimated", hw)


def _beta_for_alpha(weight_probs, counts_by_weight, alpha: float, im_size: int) -> Fraction:
    threshold = Fraction(alpha).limit_denominator(10**9) / im_size
    beta = Fraction(0)
    for w, p in enumerate(weight_probs):
        if w == 0:
            continue
        if p > threshold:
            beta += counts_by_weight[w] * p
    return beta


def estimate_hash_params(spec: EnsembleSpec, mode: str = "exact",
                         trials: int = 2000, rng: np.random.Generator | None = None
                         ) -> HashParams:
    """Smallest-footprint (alpha, beta) pair for the family.

    For each alpha on a fixed grid, beta is the total collision mass of the
    differences whose collision probability exceeds alpha/|range|; the pair
    minimizing alpha+beta is reported (ties keep the smaller alpha).
    """
    q = spec.field.q
    n = spec.cols
    counts_by_weight = [math.comb(n, w) * (q - 1) ** w for w in range(n + 1)]
    if mode == "exact":
        if spec.kind in (UNIFORM, BINNING):
            weight_probs = [Fraction(1, spec.im_size)] * (n + 1)
            weight_probs[0] = Fraction(1)
        else:
            if q**n > BINNING_TABLE_BUDGET:
                raise SupportBudgetError(
                    f"exact sweep needs {q}^{n} <= {BINNING_TABLE_BUDGET}")
            weight_probs = sparse_collision_by_weight(spec)
        best = None
        for alpha in ALPHA_GRID:
            beta = _beta_for_alpha(weight_probs, counts_by_weight, float(alpha), spec.im_size)
            score = float(alpha) + float(beta)
            if best is None or score < best[0] - 1e-15:
                best = (score, float(alpha), float(beta))
        return HashParams(best[1], best[2], "exact")
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("mc mode needs an rng")
    # One representative difference per weight: collision probability is a
    # function of the weight alone for every family here.
    reps = np.zeros((n, n), dtype=np.int64)
    for w in range(1, n + 1):
        reps[w - 1, :w] = 1
    zero = np.zeros(n, dtype=np.int64)
    hits = np.zeros(n, dtype=np.int64)
    for _ in range(trials):
        label = sample(spec, rng)
        out = label_outputs(label, np.vstack([reps, zero[None, :]]))
        hits += (out[:-1] == out[-1]).all(axis=1)
    phat = hits / trials
    hw = 1.96 * np.sqrt(np.maximum(phat * (1 - phat), 0.0) / trials)
    best = None
    for alpha in ALPHA_GRID:
        thr = float(alpha) / spec.im_size
        mask = phat > thr
        beta = float(sum(counts_by_weight[w + 1] * phat[w] for w in range(n) if mask[w]))
        bhw = float(sum(counts_by_weight[w + 1] * hw[w] for w in range(n) if mask[w]))
        score = float(alpha) + beta
        if best is None or score < best[0] - 1e-15:
            best = (score, float(alpha), beta, bhw)
    return HashParams(best[1], best[2], "estimated", best[3])


def product_params(p1: HashParams, p2: HashParams) -> HashParams:
    """Parameters of the stacked family (outputs concatenated)."""
    prov = "exact" if p1.provenance == p2.provenance == "exact" else "estimated"
    return HashParams(p1.alpha * p2.alpha, p1.beta + p2.beta, prov,
                      p1.half_width + p2.half_width)


def multi_params(params, indices) -> HashParams:
    """Parameters governing a joint collision event across several senders."""
    indices = list(indices)
    if not indices:
        raise ValueError("empty index set")
    if len(indices) == 1:
        return params[indices[0]]
    alpha = 1.0
    one_plus_beta = 1.0
    prov = "exact"
    hw = 0.0
    for i in indices:
        p = params[i]
        alpha *= p.alpha
        one_plus_beta *= 1.0 + p.beta
        hw += p.half_width
        if p.provenance != "exact":
            prov = "estimated"
    return HashParams(alpha, one_plus_beta - 1.0, prov, hw)


# ---------------------------------------------------------------------------
# Saturation and collision-resistance events: bounds, Monte Carlo rates, and
# exact rates by enumerating the family support.
# ---------------------------------------------------------------------------

def saturation_bound(alpha: float, beta: float, im_size: int, t_size: int) -> float:
    """Bound on P[(A, a): T misses the bin of a] for |T| = t_size."""
    if t_size < 1:
        raise ValueError("T must be nonempty")
    return alpha - 1.0 + im_size * (beta + 1.0) / t_size


def crp_bound(g_size: int, im_size: int, alpha: float, beta: float) -> float:
    """Bound on P[A: some other member of G lands in u's bin]."""
    return g_size * alpha / im_size + beta


def multi_crp_bound(maxima: dict, im_sizes, params) -> float:
    """Joint collision bound across senders.

    maxima maps each nonempty frozenset J of sender indices to the largest
    number of J-completions of any fixed choice of the other coordinates
    (the whole set size when J covers all senders).
    """
    k = len(im_sizes)
    everyone = frozenset(range(k))
    total = multi_params(params, everyone).beta
    for r in range(1, k + 1):
        for J in itertools.combinations(range(k), r):
            J = frozenset(J)
            comp = everyone - J
            alpha_j = multi_params(params, J).alpha
            beta_c = multi_params(params, comp).beta if comp else 0.0
            denom = 1
            for j in J:
                denom *= im_sizes[j]
            total += maxima[J] * alpha_j * (beta_c + 1.0) / denom
    return total


def conditional_maxima(tuples, k: int) -> dict:
    """The per-subset maxima used by multi_crp_bound, from an explicit set."""
    tuples = [tuple(tuple(int(x) for x in part) for part in t) for t in tuples]
    out = {}
    everyone = frozenset(range(k))
    for r in range(1, k + 1):
        for J in itertools.combinations(range(k), r):
            J = frozenset(J)
            if J == everyone:
                out[J] = len(tuples)
                continue
            comp = sorted(everyone - J)
            groups: dict = {}
            for t in tuples:
                key = tuple(t[i] for i in comp)
                groups[key] = groups.get(key, 0) + 1
            out[J] = max(groups.values()) if groups else 0
    return out


def enumerate_support(spec: EnsembleSpec, budget: int = SUPPORT_BUDGET):
    """Yield every label of an enumerable family (all equally likely)."""
    q = spec.field.q
    if spec.kind == UNIFORM:
        cells = spec.rows * spec.cols
        if q**cells > budget:
            raise SupportBudgetError(f"{q}^{cells} matrices exceed the budget of {budget}")
        for digits in itertools.product(range(q), repeat=cells):
            m = np.array(digits, dtype=np.int64).reshape(spec.rows, spec.cols)
            yield LinearLabel(spec.field, m)
        return
    if spec.kind == SPARSE:
        outcomes = _sparse_column_outcomes(spec.rows, spec.degree(), q)
        if len(outcomes) ** spec.cols > budget:
            raise SupportBudgetError(
                f"{len(outcomes)}^{spec.cols} sparse matrices exceed the budget of {budget}")
        for choice in itertools.product(range(len(outcomes)), repeat=spec.cols):
            m = outcomes[list(choice)].T
            yield LinearLabel(spec.field, m)
        return
    n_inputs = q**spec.cols
    n_tables = (q**spec.rows) ** n_inputs
    if n_tables > budget:
        raise SupportBudgetError(f"{n_tables} binning tables exceed the budget of {budget}")
    rows = all_vectors(q, spec.rows)
    for choice in itertools.product(range(len(rows)), repeat=n_inputs):
        yield BinLabel(spec.field, spec.cols, rows[list(choice)])


def support_size(spec: EnsembleSpec) -> int:
    q = spec.field.q
    if spec.kind == UNIFORM:
        return q ** (spec.rows * spec.cols)
    if spec.kind == SPARSE:
        return len(_sparse_column_outcomes(spec.rows, spec.degree(), q)) ** spec.cols
    return (q**spec.rows) ** (q**spec.cols)


def saturation_rate_exact(spec: EnsembleSpec, T, budget: int = SUPPORT_BUDGET) -> float:
    """Exact P over (A, a uniform) that T meets no element of a's bin."""
    T = np.asarray(T, dtype=np.int64)
    if T.shape[0] < 1:
        raise ValueError("T must be nonempty")
    im = spec.im_size
    total = Fraction(0)
    count = 0
    for label in enumerate_support(spec, budget):
        outs = label_outputs(label, T)
        hit = len({tuple(row) for row in outs})
        total += Fraction(im - hit, im)
        count += 1
    return float(total / count)


def saturation_test(spec: EnsembleSpec, T, trials: int,
                    rng: np.random.Generator) -> float:
    """Monte Carlo rate of the empty-bin event over (A, a)."""
    T = np.asarray(T, dtype=np.int64)
    if T.shape[0] < 1:
        raise ValueError("T must be nonempty")
    q = spec.field.q
    misses = 0
    for _ in range(trials):
        label = sample(spec, rng)
        a = rng.integers(q, size=spec.rows)
        outs = label_outputs(label, T)
        misses += int(not (outs == a).all(axis=1).any())
    return misses / trials


def crp_rate_exact(spec: EnsembleSpec, G, u, budget: int = SUPPORT_BUDGET) -> float:
    """Exact P over A that some other member of G shares u's bin."""
    G = np.asarray(G, dtype=np.int64)
    u = np.asarray(u, dtype=np.int64)
    others = G[~(G == u).all(axis=1)]
    if others.shape[0] == 0:
        return 0.0
    hits = 0
    count = 0
    for label in enumerate_support(spec, budget):
        au = label_outputs(label, u[None, :])[0]
        outs = label_outputs(label, others)
        hits += int((outs == au).all(axis=1).any())
        count += 1
    return hits / count


def crp_test(spec: EnsembleSpec, G, u, trials: int, rng: np.random.Generator) -> float:
    G = np.asarray(G, dtype=np.int64)
    u = np.asarray(u, dtype=np.int64)
    others = G[~(G == u).all(axis=1)]
    if others.shape[0] == 0:
        return 0.0
    hits = 0
    for _ in range(trials):
        label = sample(spec, rng)
        au = label_outputs(label, u[None, :])[0]
        outs = label_outputs(label, others)
        hits += int((outs == au).all(axis=1).any())
    return hits / trials


def multi_crp_rate_exact(specs, tuples, u_parts, budget: int = SUPPORT_BUDGET) -> float:
    """Exact joint collision rate over independent per-sender families."""
    k = len(specs)
    u_parts = [np.asarray(p, dtype=np.int64) for p in u_parts]
    others = []
    for t in tuples:
        parts = [np.asarray(p, dtype=np.int64) for p in t]
        if all((a == b).all() for a, b in zip(parts, u_parts)):
            continue
        others.append(parts)
    if not others:
        return 0.0
    supports = [list(enumerate_support(s, budget)) for s in specs]
    count = 1
    for s in supports:
        count *= len(s)
    if count > budget:
        raise SupportBudgetError(f"product support {count} exceeds the budget of {budget}")
    hits = 0
    for combo in itertools.product(*supports):
        targets = [label_outputs(lab, u[None, :])[0] for lab, u in zip(combo, u_parts)]
        found = False
        for parts in others:
            if all((label_outputs(lab, p[None, :])[0] == t).all()
                   for lab, p, t in zip(combo, parts, targets)):
                found = True
                break
        hits += int(found)
    return hits / count


def occupancy_factor(beta_k: float, n: int, k: int, xi: float = 1.0,
                     negligible_tol: float = 1e-12) -> float:
    """Growth factor sizing the audited bin-to-candidate ratio.

    n^(xi/k) while beta_k * n^(xi/k) stays negligible, else beta_k^(-1/(k+1)).
    """
    if beta_k < 0:
        raise ValueError("beta must be nonnegative")
    first = n ** (xi / k)
    if beta_k * first <= negligible_tol:
        return first
    return beta_k ** (-1.0 / (k + 1))


def uniform_syndrome_hit_rate(label, u) -> float:
    """Mean over uniform syndromes a of the indicator that u's label equals a."""
    q = label.field.q
    au = label_outputs(label, np.asarray(u, dtype=np.int64)[None, :])[0]
    syndromes = all_vectors(q, label.rows)
    return float((syndromes == au).all(axis=1).mean())


def ensemble_syndrome_hit_rate(spec: EnsembleSpec, u, budget: int = SUPPORT_BUDGET) -> float:
    """Joint mean over (label, uniform syndrome) of the same indicator."""
    total = Fraction(0)
    count = 0
    for label in enumerate_support(spec, budget):
        total += Fraction(uniform_syndrome_hit_rate(label, u)).limit_denominator(spec.im_size)
        count += 1
    return float(total / count)
