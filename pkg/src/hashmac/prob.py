"""Probability mass functions over small finite alphabets, in bits."""

from __future__ import annotations

import math

import numpy as np

SUM_TOL = 1e-12


def _log2(x: float) -> float:
    return math.log2(x)


class Pmf:
    """Distribution over an ordered finite alphabet."""

    __slots__ = ("alphabet", "probs", "_index")

    def __init__(self, alphabet, probs):
        self.alphabet = tuple(alphabet)
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size != len(self.alphabet):
            raise ValueError("probs must be a 1-D array matching the alphabet")
        if p.size == 0:
            raise ValueError("empty alphabet")
        if p.min() < 0:
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        p = p.copy()
        p.flags.writeable = False
        self.probs = p
        self._index = {s: i for i, s in enumerate(self.alphabet)}

    @classmethod
    def uniform(cls, alphabet) -> "Pmf":
        alphabet = tuple(alphabet)
        return cls(alphabet, np.full(len(alphabet), 1.0 / len(alphabet)))

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def prob(self, symbol) -> float:
        return float(self.probs[self._index[symbol]])

    def index(self, symbol) -> int:
        return self._index[symbol]

    def __repr__(self):
        return f"Pmf({self.alphabet}, {self.probs.tolist()})"


class CondPmf:
    """One output row per input symbol; rows may be absent.

    An absent row marks a conditioning symbol that never occurs; every
    consumer weights rows by the conditioning distribution, so absent rows
    contribute zero.
    """

    __slots__ = ("given_alphabet", "alphabet", "rows", "present", "_gindex")

    def __init__(self, given_alphabet, alphabet, rows, present=None):
        self.given_alphabet = tuple(given_alphabet)
        self.alphabet = tuple(alphabet)
        r = np.asarray(rows, dtype=float)
        if r.shape != (len(self.given_alphabet), len(self.alphabet)):
            raise ValueError(f"rows shape {r.shape} does not match alphabets")
        if present is None:
            present = np.ones(len(self.given_alphabet), dtype=bool)
        present = np.asarray(present, dtype=bool)
        for i, ok in enumerate(present):
            if not ok:
                continue
            row = r[i]
            if row.min() < 0 or abs(row.sum() - 1.0) > SUM_TOL:
                raise ValueError(f"row {i} is not a distribution")
        r = r.copy()
        r.flags.writeable = False
        present = present.copy()
        present.flags.writeable = False
        self.rows = r
        self.present = present
        self._gindex = {s: i for i, s in enumerate(self.given_alphabet)}

    @property
    def given_size(self) -> int:
        return len(self.given_alphabet)

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def row(self, given) -> Pmf | None:
        i = self._gindex[given]
        if not self.present[i]:
            return None
        return Pmf(self.alphabet, self.rows[i])

    def __repr__(self):
        return f"CondPmf(given={self.given_alphabet}, alphabet={self.alphabet})"


def entropy(p: Pmf | np.ndarray) -> float:
    """Shannon entropy in bits; 0*log(1/0) is 0."""
    probs = p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)
    nz = probs[probs > 0]
    return float(-(nz * np.log2(nz)).sum())


def cond_entropy(cond: CondPmf, base: Pmf) -> float:
    """H(U|V) = sum_v p(v) H(U|V=v), in bits."""
    if cond.given_alphabet != base.alphabet:
        raise ValueError("conditioning alphabet mismatch")
    total = 0.0
    for i, pv in enumerate(base.probs):
        if pv == 0:
            continue
        if not cond.present[i]:
            raise ValueError(f"absent row {cond.given_alphabet[i]} has positive weight")
        total += pv * entropy(cond.rows[i])
    return total


def _marginalize(joint: Pmf, keep: tuple[int, ...]) -> dict:
    out: dict = {}
    for sym, p in zip(joint.alphabet, joint.probs):
        key = tuple(sym[i] for i in keep)
        out[key] = out.get(key, 0.0) + float(p)
    return out


def _entropy_of(dist: dict) -> float:
    return float(-sum(p * _log2(p) for p in dist.values() if p > 0))


def mutual_info(joint: Pmf) -> float:
    """I(U;V) from a joint distribution whose symbols are (u, v) pairs."""
    if any(not isinstance(s, tuple) or len(s) != 2 for s in joint.alphabet):
        raise ValueError("joint alphabet must consist of (u, v) pairs")
    hu = _entropy_of(_marginalize(joint, (0,)))
    hv = _entropy_of(_marginalize(joint, (1,)))
    return hu + hv - entropy(joint)


def cond_mutual_info(joint: Pmf) -> float:
    """I(U;V|W) from a joint distribution over (u, v, w) triples."""
    if any(not isinstance(s, tuple) or len(s) != 3 for s in joint.alphabet):
        raise ValueError("joint alphabet must consist of (u, v, w) triples")
    huw = _entropy_of(_marginalize(joint, (0, 2)))
    hvw = _entropy_of(_marginalize(joint, (1, 2)))
    hw = _entropy_of(_marginalize(joint, (2,)))
    return huw + hvw - entropy(joint) - hw


def divergence(p: Pmf, p2: Pmf) -> float:
    """KL divergence D(p || p2) in bits; +inf when supp(p) is not in supp(p2)."""
    if p.alphabet != p2.alphabet:
        raise ValueError("alphabet mismatch")
    total = 0.0
    for a, b in zip(p.probs, p2.probs):
        if a == 0:
            continue
        if b == 0:
            return math.inf
        total += a * _log2(a / b)
    return total


def cond_divergence(q1: CondPmf, q2: CondPmf, p: Pmf) -> float:
    """D(q1 || q2 | p) = sum_v p(v) D(q1(.|v) || q2(.|v)), in bits."""
    if q1.given_alphabet != q2.given_alphabet or q1.alphabet != q2.alphabet:
        raise ValueError("alphabet mismatch")
    if q1.given_alphabet != p.alphabet:
        raise ValueError("conditioning alphabet mismatch")
    total = 0.0
    for i, pv in enumerate(p.probs):
        if pv == 0:
            continue
        if not (q1.present[i] and q2.present[i]):
            raise ValueError(f"absent row {p.alphabet[i]} has positive weight")
        for a, b in zip(q1.rows[i], q2.rows[i]):
            if a == 0:
                continue
            if b == 0:
                return math.inf
            total += pv * a * _log2(a / b)
    return total
