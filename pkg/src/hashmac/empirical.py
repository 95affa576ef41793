"""Empirical distributions of sequences, typicality tests, and type classes."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .prob import CondPmf, Pmf, entropy


@dataclass(frozen=True)
class EmpiricalType:
    """Symbol counts of a length-n sequence over a fixed alphabet."""

    alphabet: tuple
    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.ndim != 1 or c.size != len(self.alphabet):
            raise ValueError("counts must match the alphabet")
        if c.size and c.min() < 0:
            raise ValueError("negative count")
        if int(c.sum()) <= 0:
            raise ValueError("empty sequence")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def freqs(self) -> np.ndarray:
        return self.counts / self.n

    def pmf(self) -> Pmf:
        return Pmf(self.alphabet, self.freqs)


def _index_seq(seq, alphabet: tuple) -> np.ndarray:
    idx = {s: i for i, s in enumerate(alphabet)}
    try:
        return np.array([idx[s] for s in seq], dtype=np.int64)
    except KeyError as e:
        raise ValueError(f"symbol {e.args[0]!r} outside alphabet {alphabet}") from None


def empirical(seq, alphabet) -> EmpiricalType:
    """Symbol frequencies of a nonempty sequence."""
    alphabet = tuple(alphabet)
    ix = _index_seq(seq, alphabet)
    if ix.size == 0:
        raise ValueError("empty sequence")
    return EmpiricalType(alphabet, np.bincount(ix, minlength=len(alphabet)))


def joint_empirical(seqs, alphabets) -> EmpiricalType:
    """Joint frequencies of parallel sequences, over the product alphabet."""
    seqs = tuple(seqs)
    alphabets = tuple(tuple(a) for a in alphabets)
    if len(seqs) != len(alphabets):
        raise ValueError("one alphabet per sequence required")
    lengths = {len(s) for s in seqs}
    if len(lengths) != 1:
        raise ValueError("length mismatch between parallel sequences")
    idxs = [_index_seq(s, a) for s, a in zip(seqs, alphabets)]
    sizes = tuple(len(a) for a in alphabets)
    flat = np.ravel_multi_index(tuple(idxs), sizes)
    counts = np.bincount(flat, minlength=int(np.prod(sizes)))
    product_alphabet = tuple(itertools.product(*alphabets))
    return EmpiricalType(product_alphabet, counts)


def joint_counts(seqs, sizes) -> np.ndarray:
    """Joint counts of parallel index sequences as an array shaped `sizes`."""
    idxs = [np.asarray(s, dtype=np.int64) for s in seqs]
    flat = np.ravel_multi_index(tuple(idxs), tuple(sizes))
    return np.bincount(flat, minlength=int(np.prod(sizes))).reshape(tuple(sizes))


def cond_empirical(u, v, u_alphabet, v_alphabet) -> CondPmf:
    """Empirical conditional of u given v; rows for unseen v are absent."""
    u_alphabet, v_alphabet = tuple(u_alphabet), tuple(v_alphabet)
    ui = _index_seq(u, u_alphabet)
    vi = _index_seq(v, v_alphabet)
    if ui.size != vi.size:
        raise ValueError("length mismatch")
    c = joint_counts((vi, ui), (len(v_alphabet), len(u_alphabet))).astype(float)
    totals = c.sum(axis=1)
    present = totals > 0
    rows = np.zeros_like(c)
    rows[present] = c[present] / totals[present, None]
    return CondPmf(v_alphabet, u_alphabet, rows, present)


def _entropy_counts(counts: np.ndarray) -> float:
    n = counts.sum()
    nz = counts[counts > 0]
    return float(math.log2(n) - (nz * np.log2(nz)).sum() / n)


def _hashable(sym):
    if isinstance(sym, np.ndarray):
        return tuple(sym.tolist())
    if isinstance(sym, list):
        return tuple(sym)
    return sym


def seq_entropy(u, alphabet=None) -> float:
    """Entropy of the empirical distribution of u, in bits."""
    if alphabet is None:
        tally = Counter(_hashable(s) for s in u)
        counts = np.fromiter(tally.values(), dtype=np.int64)
        if counts.size == 0:
            raise ValueError("empty sequence")
    else:
        counts = empirical(u, alphabet).counts
    return _entropy_counts(np.asarray(counts, dtype=np.int64))


def seq_cond_entropy(u, v, u_alphabet=None, v_alphabet=None) -> float:
    """Empirical conditional entropy H(u|v), in bits."""
    u = list(u)
    v = list(v)
    if len(u) != len(v):
        raise ValueError("length mismatch")
    return seq_entropy(list(zip(u, v))) - seq_entropy(v)


def seq_mutual_multi(xs, u) -> float:
    """Empirical multi-information of parallel sequences given u, in bits.

    Sum over j of H(x_j|u) minus H of the whole tuple given u; nonnegative.
    """
    xs = [list(x) for x in xs]
    u = list(u)
    total = sum(seq_cond_entropy(x, u) for x in xs)
    joint = list(zip(*xs))
    return total - seq_cond_entropy(joint, u)


def divergence_to(u, mu: Pmf) -> float:
    """D(nu_u || mu) of a sequence's empirical distribution, in bits."""
    t = empirical(u, mu.alphabet)
    n = t.n
    total = 0.0
    for c, m in zip(t.counts, mu.probs):
        if c == 0:
            continue
        if m == 0:
            return math.inf
        total += (c / n) * math.log2(c / (n * m))
    return total


def cond_divergence_to(u, v, mu_cond: CondPmf) -> float:
    """Conditional divergence of nu_{u|v} from mu, weighted by nu_v, in bits."""
    ui = _index_seq(u, mu_cond.alphabet)
    vi = _index_seq(v, mu_cond.given_alphabet)
    if ui.size != vi.size:
        raise ValueError("length mismatch")
    n = ui.size
    c = joint_counts((vi, ui), (mu_cond.given_size, mu_cond.size))
    c_v = c.sum(axis=1)
    total = 0.0
    for b in range(mu_cond.given_size):
        if c_v[b] == 0:
            continue
        if not mu_cond.present[b]:
            raise ValueError(f"model row absent for seen symbol {mu_cond.given_alphabet[b]!r}")
        for a in range(mu_cond.size):
            cc = c[b, a]
            if cc == 0:
                continue
            m = mu_cond.rows[b, a]
            if m == 0:
                return math.inf
            total += (cc / n) * math.log2(cc / (c_v[b] * m))
    return total


def is_typical(u, mu: Pmf, gamma: float) -> bool:
    """Strict membership in the divergence ball of radius gamma around mu."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return divergence_to(u, mu) < gamma


def is_cond_typical(u, v, mu_cond: CondPmf, gamma: float) -> bool:
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return cond_divergence_to(u, v, mu_cond) < gamma


def enumerate_types(n: int, alphabet, budget: int = 1 << 24) -> list[EmpiricalType]:
    """All length-n types over the alphabet (compositions of n)."""
    alphabet = tuple(alphabet)
    m = len(alphabet)
    if (n + 1) ** m > budget:
        raise ValueError(f"({n}+1)^{m} type candidates exceed the budget of {budget}")
    out = []
    for cuts in itertools.combinations(range(n + m - 1), m - 1):
        counts = np.diff((-1,) + cuts + (n + m - 1,)) - 1
        out.append(EmpiricalType(alphabet, counts))
    return out


def type_class_size(t: EmpiricalType) -> int:
    """Number of sequences sharing the type: the multinomial coefficient."""
    size = math.factorial(t.n)
    for c in t.counts:
        size //= math.factorial(int(c))
    return size
