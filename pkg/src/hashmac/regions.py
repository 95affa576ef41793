"""Joint-law builders and achievable-region membership tests.

Regions are tested pointwise with strict inequalities; boundary points are
outside.  Mutual informations come from exact joint tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import Dmc
from .prob import Pmf, SUM_TOL
from .slack import feasibility_slack

TABLE_CELL_BUDGET = 1 << 16


@dataclass(frozen=True)
class JointLaw:
    """Full joint table with named axes."""

    names: tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != len(self.names):
            raise ValueError("one name per axis required")
        if t.size > TABLE_CELL_BUDGET:
            raise ValueError(f"joint table with {t.size} cells exceeds {TABLE_CELL_BUDGET}")
        if t.min() < 0 or abs(t.sum() - 1.0) > 1e-9:
            raise ValueError("table must be a distribution")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "names", tuple(self.names))

    def axis(self, name: str) -> int:
        return self.names.index(name)

    def size(self, name: str) -> int:
        return self.table.shape[self.axis(name)]

    def marginal(self, names) -> np.ndarray:
        keep = [self.axis(n) for n in names]
        drop = tuple(i for i in range(len(self.names)) if i not in keep)
        t = self.table.sum(axis=drop) if drop else self.table
        return np.moveaxis(t, np.argsort(keep), range(len(keep)))

    def entropy(self, names) -> float:
        t = self.marginal(names).ravel()
        nz = t[t > 0]
        return float(-(nz * np.log2(nz)).sum())


def mutual_information(law: JointLaw, a_names, b_names, c_names=()) -> float:
    """I(A;B|C) in bits, from exact marginals."""
    a, b, c = list(a_names), list(b_names), list(c_names)
    h_ac = law.entropy(a + c)
    h_bc = law.entropy(b + c)
    h_abc = law.entropy(a + b + c)
    h_c = law.entropy(c) if c else 0.0
    return h_ac + h_bc - h_abc - h_c


@dataclass(frozen=True)
class RatePoint:
    rates: tuple[float, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.rates):
            raise ValueError("rates must be nonnegative")
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))


def _as_pmf_array(p, size: int) -> np.ndarray:
    arr = p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"distribution shape {arr.shape} != ({size},)")
    if arr.min() < 0 or abs(arr.sum() - 1.0) > SUM_TOL:
        raise ValueError("not a distribution")
    return arr


def sender_names(k: int) -> list[str]:
    return [f"x{j + 1}" for j in range(k)]


def joint_private(input_dists, dmc: Dmc) -> JointLaw:
    """Independent per-sender inputs through the channel."""
    k = dmc.n_senders
    dists = [_as_pmf_array(p, s) for p, s in zip(input_dists, dmc.input_sizes)]
    if len(dists) != k:
        raise ValueError("one input distribution per sender required")
    t = dmc.table.copy()
    for j, d in enumerate(dists):
        shape = [1] * (k + 1)
        shape[j] = -1
        t = t * d.reshape(shape)
    return JointLaw(tuple(sender_names(k)) + ("y",), t)


def joint_ts(mu_u, input_conds, dmc: Dmc) -> JointLaw:
    """Time-shared inputs: senders independent given the shared u."""
    k = dmc.n_senders
    mu_u = np.asarray(mu_u.probs if isinstance(mu_u, Pmf) else mu_u, dtype=float)
    mu = mu_u.size
    conds = []
    for j, c in enumerate(input_conds):
        c = np.asarray(c, dtype=float)
        if c.shape != (mu, dmc.input_sizes[j]):
            raise ValueError(f"conditional {j} shape {c.shape} != ({mu}, {dmc.input_sizes[j]})")
        conds.append(c)
    if len(conds) != k:
        raise ValueError("one conditional per sender required")
    t = np.zeros((mu,) + tuple(dmc.input_sizes) + (dmc.output_size,))
    for ui in range(mu):
        cell = dmc.table.copy()
        for j, c in enumerate(conds):
            shape = [1] * (k + 1)
            shape[j] = -1
            cell = cell * c[ui].reshape(shape)
        t[ui] = cell * mu_u[ui]
    return JointLaw(("u",) + tuple(sender_names(k)) + ("y",), t)


def joint_sw(mu0, cond1, cond2, dmc: Dmc) -> JointLaw:
    """Cloud-center law: satellites independent given x0, channel sees (x1, x2)."""
    if dmc.n_senders != 2:
        raise ValueError("this construction needs a two-sender channel")
    mu0 = np.asarray(mu0.probs if isinstance(mu0, Pmf) else mu0, dtype=float)
    m0 = mu0.size
    c1 = np.asarray(cond1, dtype=float)
    c2 = np.asarray(cond2, dtype=float)
    if c1.shape != (m0, dmc.input_sizes[0]) or c2.shape != (m0, dmc.input_sizes[1]):
        raise ValueError("conditional shapes do not match the alphabets")
    t = (mu0[:, None, None, None]
         * c1[:, :, None, None]
         * c2[:, None, :, None]
         * dmc.table[None, :, :, :])
    return JointLaw(("x0", "x1", "x2", "y"), t)


def joint_han(msg_dists, msg_sets, symbol_maps, dmc: Dmc) -> JointLaw:
    """Law over per-message auxiliaries and the output, with deterministic inputs."""
    k = dmc.n_senders
    kt = len(msg_dists)
    if len(msg_sets) != k or len(symbol_maps) != k:
        raise ValueError("one message-index set and one symbol map per sender required")
    dists = [np.asarray(p.probs if isinstance(p, Pmf) else p, dtype=float) for p in msg_dists]
    sizes = tuple(d.size for d in dists)
    t = np.zeros(sizes + (dmc.output_size,))
    for combo in itertools.product(*(range(s) for s in sizes)):
        p = 1.0
        for d, c in zip(dists, combo):
            p *= d[c]
        if p == 0:
            continue
        xs = []
        for j in range(k):
            args = tuple(combo[i] for i in msg_sets[j])
            xs.append(int(symbol_maps[j](*args)))
        t[combo] += p * dmc.table[tuple(xs)]
    names = tuple(f"t{i}" for i in range(kt)) + ("y",)
    return JointLaw(names, t)


@dataclass(frozen=True)
class RegionVerdict:
    inside: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.inside


def _subset_verdict(rates, law: JointLaw, names, cond_extra=()) -> RegionVerdict:
    k = len(names)
    if len(rates) != k:
        raise ValueError(f"expected {k} rates")
    if any(r < 0 for r in rates):
        bad = [i for i, r in enumerate(rates) if r < 0]
        return RegionVerdict(False, f"R_{bad[0] + 1} < 0")
    # Largest subsets first, so a sum-rate violation is the reported witness.
    for r in range(k, 0, -1):
        for J in itertools.combinations(range(k), r):
            total = sum(rates[j] for j in J)
            comp = [names[j] for j in range(k) if j not in J]
            bound = mutual_information(law, [names[j] for j in J], ["y"],
                                       list(cond_extra) + comp)
            if not total < bound:
                subset = "{" + ",".join(str(j + 1) for j in J) + "}"
                return RegionVerdict(
                    False, f"J={subset}: sum {total:.6g} >= bound {bound:.6g}")
    return RegionVerdict(True)


def in_region_private(rates, law: JointLaw) -> RegionVerdict:
    names = [n for n in law.names if n.startswith("x")]
    return _subset_verdict(rates, law, names)


def in_region_ts(rates, law: JointLaw) -> RegionVerdict:
    names = [n for n in law.names if n.startswith("x")]
    return _subset_verdict(rates, law, names, cond_extra=("u",))


def in_region_han(rates, law: JointLaw) -> RegionVerdict:
    names = [n for n in law.names if n.startswith("t")]
    return _subset_verdict(rates, law, names)


def _sw_constraints(law: JointLaw):
    mi = lambda a, b, c=(): mutual_information(law, a, b, c)
    base = [
        ("R1 < I(X1;Y|X0,X2)", (0, 1, 0), mi(["x1"], ["y"], ["x0", "x2"])),
        ("R2 < I(X2;Y|X0,X1)", (0, 0, 1), mi(["x2"], ["y"], ["x0", "x1"])),
        ("R1+R2 < I(X1,X2;Y|X0)", (0, 1, 1), mi(["x1", "x2"], ["y"], ["x0"])),
        ("R0+R1+R2 < I(X1,X2;Y)", (1, 1, 1), mi(["x1", "x2"], ["y"])),
    ]
    aux = [
        ("R0 < I(X0;X1,X2,Y)", (1, 0, 0), mi(["x0"], ["x1", "x2", "y"])),
        ("R0+R1 < I(X0,X1;X2,Y)", (1, 1, 0), mi(["x0", "x1"], ["x2", "y"])),
        ("R0+R2 < I(X0,X2;X1,Y)", (1, 0, 1), mi(["x0", "x2"], ["x1", "y"])),
    ]
    return base, aux


def in_region_sw(rates, law: JointLaw, include_aux: bool = False) -> RegionVerdict:
    if len(rates) != 3:
        raise ValueError("expected (R0, R1, R2)")
    if rates[0] < 0:
        return RegionVerdict(False, "R0 < 0")
    if rates[1] < 0 or rates[2] < 0:
        return RegionVerdict(False, "private rates must be nonnegative")
    base, aux = _sw_constraints(law)
    rows = base + (aux if include_aux else [])
    for name, coef, bound in rows:
        total = sum(c * r for c, r in zip(coef, rates))
        if not total < bound:
            return RegionVerdict(False, f"{name}: sum {total:.6g} >= bound {bound:.6g}")
    return RegionVerdict(True)


def _law_kind(law: JointLaw) -> str:
    if "x0" in law.names:
        return "sw"
    if "u" in law.names:
        return "ts"
    return "private"


def eps_feasible(rates, law: JointLaw, eps, n: int) -> bool:
    """Region test with per-sender margins and the block-length-n slack."""
    eps = [float(e) for e in eps]
    if any(e <= 0 for e in eps):
        raise ValueError("margins must be positive")
    kind = _law_kind(law)
    if kind == "sw":
        m_inputs = law.size("x0") * law.size("x1") * law.size("x2")
        slack = feasibility_slack(eps, n, m_inputs, law.size("y"))
        base, aux = _sw_constraints(law)
        for name, coef, bound in base + aux:
            total = sum(c * (r + e) for c, r, e in zip(coef, rates, eps))
            if not total < bound - slack:
                return False
        return rates[0] >= 0 and rates[1] >= 0 and rates[2] >= 0
    names = [nm for nm in law.names if nm.startswith("x")]
    m_inputs = 1
    for nm in names:
        m_inputs *= law.size(nm)
    m_cond = law.size("y") * (law.size("u") if kind == "ts" else 1)
    slack = feasibility_slack(eps, n, m_inputs, m_cond)
    k = len(names)
    if len(rates) != k or len(eps) != k:
        raise ValueError("rates/eps dimension mismatch")
    if any(r < 0 for r in rates):
        return False
    cond_extra = ("u",) if kind == "ts" else ()
    for r in range(1, k + 1):
        for J in itertools.combinations(range(k), r):
            total = sum(rates[j] + eps[j] for j in J)
            comp = [names[j] for j in range(k) if j not in J]
            bound = mutual_information(law, [names[j] for j in J], ["y"],
                                       list(cond_extra) + comp)
            if not total < bound - slack:
                return False
    return True


class RateSplitInfeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class RateSplit:
    """Common/private reallocation moving a target triple into the buildable set.

    The built code's private rates each carry `moved[i]` bits/symbol of the
    target's common message; recombine() recovers the target triple.
    """

    built: tuple[float, float, float]       # triple handed to the construction
    moved: tuple[float, float]              # common-message share on each private code

    def recombine(self) -> tuple[float, float, float]:
        r0, r1, r2 = self.built
        m1, m2 = self.moved
        return (r0 + m1 + m2, r1 - m1, r2 - m2)


GRID_STEP = 2.0**-10  # dyadic, so split bookkeeping is exact in floats


def rate_split(target, law: JointLaw, step: float = GRID_STEP) -> RateSplit:
    """Find a reallocation of the private rates satisfying every constraint.

    Searches moved amounts on a dyadic grid (coarse pass plus a refinement
    around near misses), preferring the smallest total moved mass.
    """
    r0, r1, r2 = (float(t) for t in target)
    if not in_region_sw((r0, r1, r2), law):
        raise RateSplitInfeasible("target triple is outside the base region")
    base, aux = _sw_constraints(law)
    rows = base + aux

    def scan(m1_grid, m2_grid):
        m1g, m2g = np.meshgrid(m1_grid, m2_grid, indexing="ij")
        nr0 = r0 - m1g - m2g
        nr1 = r1 + m1g
        nr2 = r2 + m2g
        ok = nr0 >= 0
        worst = np.where(ok, 0.0, np.inf)
        for _, coef, bound in rows:
            total = coef[0] * nr0 + coef[1] * nr1 + coef[2] * nr2
            ok &= total < bound
            worst = np.maximum(worst, total - bound)
        if not ok.any():
            return None, worst
        # argmin takes the first flat index on ties: smallest total moved
        # mass, then smallest first component (grids are ascending).
        score = np.where(ok, m1g + m2g, np.inf)
        flat = int(np.argmin(score))
        return (float(m1g.ravel()[flat]), float(m2g.ravel()[flat])), worst

    lim1 = max(0.0, min(r0, _sw_constraints(law)[0][0][2] - r1)) + step
    lim2 = max(0.0, min(r0, _sw_constraints(law)[0][1][2] - r2)) + step
    g1 = np.arange(0.0, lim1 + step, step)
    g2 = np.arange(0.0, lim2 + step, step)
    found, worst = scan(g1, g2)
    if found is None:
        # Refine around the least-violating coarse point.
        flat = int(np.argmin(worst))
        c1 = g1[flat // len(g2)]
        c2 = g2[flat % len(g2)]
        fine = step / 64.0
        f1 = np.arange(max(0.0, c1 - step), c1 + step + fine, fine)
        f2 = np.arange(max(0.0, c2 - step), c2 + step + fine, fine)
        found, _ = scan(f1, f2)
    if found is None:
        raise RateSplitInfeasible("no feasible reallocation found")
    m1, m2 = found
    # Exact dyadic arithmetic keeps the inverse map exact in floats.
    built = (float(Fraction(r0) - Fraction(m1) - Fraction(m2)),
             float(Fraction(r1) + Fraction(m1)),
             float(Fraction(r2) + Fraction(m2)))
    return RateSplit(built, (m1, m2))
