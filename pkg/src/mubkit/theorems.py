"""Checkers for the linear-entropy uncertainty and correlation identities.

Three relations are checked on a bipartite state ``rho_AB`` of local
dimension ``d``, with ``S_L(theta|B)`` the conditional linear entropy after
measuring A in basis ``theta``:

* equality over a complete MUB set:
  ``sum_theta S_L(theta|B) = S_L(A|B) + d^3 - d^2``;
* inequality over any ``M`` MUBs:
  ``sum_theta S_L(theta|B) >= (dM - d^2) tr rho_B^2 - d(M-1) tr rho_AB^2 + M(d^2 - d)``;
* conservation over a complete MUB set:
  ``sum_theta I_L(rho_thetaB) = I_L(rho_AB)``.

The von Neumann relation for an unbiased pair is included as a cross-check.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .entropy import (
    block_stats,
    check_eq1_von_neumann,
    cond_linear_entropy_AB,
    cond_linear_entropy_post,
    eq1_sides,
    linear_mutual_information,
    measure_A,
    measurement_blocks,
    post_cond_vn,
    von_neumann_entropy,
)
from .errors import DomainError, MubkitError
from .mub import UNBIASED_TOL, build_full_mub_set, verify_unbiased
from .rng import RandomStream, spawn_seed
from .states import marginals, random_bipartite

CHECKS = ("t1", "t1-ineq", "t2", "eq1")
EQUALITY_CHECKS = ("t1", "t2")
T2_TOL = 1e-10
T1_INEQ_TOL = 1e-10
EQ1_TOL = 1e-8
IDENTITY_TOL = 1e-10
NONNEG_TOL = 1e-10


def t1_tol(d):
    """Default tolerance for the complete-set equality; its terms scale as d^3."""
    return 1e-8 * d**3


def default_tol(check, d):
    return {"t1": t1_tol(d), "t1-ineq": T1_INEQ_TOL, "t2": T2_TOL, "eq1": EQ1_TOL}[check]


@dataclass
class TheoremResult:
    kind: str
    lhs: float
    rhs: float
    residual: float
    passed: bool
    tol: float
    metadata: dict = field(default_factory=dict)

    @classmethod
    def equality(cls, kind, lhs, rhs, tol, **metadata):
        residual = lhs - rhs
        return cls(kind, lhs, rhs, residual, abs(residual) <= tol, tol, metadata)

    @classmethod
    def inequality(cls, kind, lhs, rhs, tol, **metadata):
        slack = lhs - rhs
        return cls(kind, lhs, rhs, slack, slack >= -tol, tol, metadata)

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


def _require_complete(s, ms, what):
    if not ms.complete:
        raise DomainError(f"{what} requires a full set of d+1 MUBs, got {len(ms)} bases")
    if ms.d != s.d:
        raise DomainError(f"MUB dimension {ms.d} does not match state dimension {s.d}")


def ineq_rhs(d, m, purity_b, purity_ab):
    return (d * m - d * d) * purity_b - d * (m - 1) * purity_ab + m * (d * d - d)


def check_t1_equality(s, ms, tol=None, dense=False):
    """Sum of conditional linear entropies over a complete MUB set."""
    _require_complete(s, ms, "the uncertainty equality")
    d = s.d
    rho_b = marginals(s)[1]
    if dense:
        terms = [cond_linear_entropy_post(measure_A(s, b), rho_b) for b in ms]
    else:
        pb = rho_b.purity()
        terms = [d * pb - d * d * block_stats(measurement_blocks(s, b))[0] + d * d - d for b in ms]
    lhs = float(sum(terms))
    rhs = float(cond_linear_entropy_AB(s)) + d**3 - d**2
    tol = t1_tol(d) if tol is None else tol
    return TheoremResult.equality("t1-equality", lhs, rhs, tol, d=d, M=len(ms), labels=ms.labels)


def check_t1_inequality(s, bases, tol=T1_INEQ_TOL):
    """Lower bound on the conditional linear entropy summed over ``M`` MUBs."""
    bases = list(bases)
    d, m = s.d, len(bases)
    if not 2 <= m <= d + 1:
        raise DomainError(f"need 2 <= M <= d+1 = {d + 1} bases, got {m}")
    for b1, b2 in combinations(bases, 2):
        if b1.d != d or b2.d != d:
            raise DomainError(f"basis dimension does not match state dimension {d}")
        dev = verify_unbiased(b1, b2)
        if dev > UNBIASED_TOL:
            raise DomainError(f"bases {b1.label!r} and {b2.label!r} are not unbiased (deviation {dev:.3e})")
    pb = marginals(s)[1].purity()
    lhs = float(sum(d * pb - d * d * block_stats(measurement_blocks(s, b))[0] + d * d - d for b in bases))
    rhs = ineq_rhs(d, m, pb, s.purity())
    return TheoremResult.inequality("t1-inequality", lhs, rhs, tol, d=d, M=m, labels=[b.label for b in bases])


def check_t2_conservation(s, ms, tol=T2_TOL, dense=False):
    """Correlations revealed in a complete MUB set add up to the total correlation."""
    _require_complete(s, ms, "correlation conservation")
    if dense:
        terms = [float(linear_mutual_information(measure_A(s, b))) for b in ms]
    else:
        terms = [block_stats(measurement_blocks(s, b))[1] for b in ms]
    lhs = float(sum(terms))
    rhs = float(linear_mutual_information(s))
    return TheoremResult.equality(
        "t2-conservation", lhs, rhs, tol, d=s.d, M=len(ms), labels=ms.labels, terms=terms
    )


def check_eq1(s, theta, tau, tol=EQ1_TOL):
    """Von Neumann uncertainty relation with quantum memory for one unbiased pair."""
    slack = check_eq1_von_neumann(s, theta, tau)
    lhs, rhs = eq1_sides(s, theta, tau)
    return TheoremResult("eq1", lhs, rhs, slack, slack >= -tol, tol, {"d": s.d, "labels": [theta.label, tau.label]})


# ---------------------------------------------------------------- sweeps


@dataclass
class SweepConfig:
    dims: list
    trials: int = 1000
    ranks: list = field(default_factory=lambda: ["1", "half", "full"])
    seed: int = 0
    checks: list = field(default_factory=lambda: ["t1", "t2"])
    tol: dict = field(default_factory=dict)
    out: str = None
    csv: str = None
    jobs: int = 1

    def __post_init__(self):
        if not self.dims:
            raise DomainError("dims must be non-empty")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad or not self.checks:
            raise DomainError(f"checks must be a non-empty subset of {CHECKS}, got {self.checks}")
        for r in self.ranks:
            if str(r) not in ("half", "full") and not str(r).isdigit():
                raise DomainError(f"rank must be an integer, 'half' or 'full', got {r!r}")


def resolve_rank(token, d):
    side = d * d
    token = str(token)
    if token == "full":
        return side
    if token == "half":
        return math.ceil(side / 2)
    rank = int(token)
    if not 1 <= rank <= side:
        raise DomainError(f"rank {rank} outside [1, {side}] for d={d}")
    return rank


@lru_cache(maxsize=None)
def _mub(d):
    return build_full_mub_set(d)


def evaluate_trial(d, rank, seed, checks):
    """Run ``checks`` on the state drawn from ``seed``; returns a flat record."""
    ms = _mub(d)
    s = random_bipartite(d, rank, RandomStream(seed))
    rho_b = marginals(s)[1]
    pb, pab = rho_b.purity(), s.purity()
    record = {"d": d, "rank": rank, "seed": seed}
    stats = [block_stats(measurement_blocks(s, b)) for b in ms]
    cond = np.array([d * pb - d * d * post + d * d - d for post, _ in stats])
    record["min_cond_linear_entropy"] = float(cond.min())
    if "t1" in checks:
        rhs = d * pb - d * d * pab + d * d - d + d**3 - d**2
        record["t1"] = float(cond.sum()) - rhs
    if "t2" in checks:
        record["t2"] = float(sum(mi for _, mi in stats)) - float(linear_mutual_information(s))
    if "t1-ineq" in checks:
        worst = math.inf
        for m in range(2, d + 2):
            bound = ineq_rhs(d, m, pb, pab)
            # every M-subset of the complete set; the minimum sum picks the tightest
            smallest = float(np.sort(cond)[:m].sum())
            worst = min(worst, smallest - bound)
        record["t1-ineq"] = worst
        full_rhs = ineq_rhs(d, d + 1, pb, pab)
        record["identity_gap"] = abs(full_rhs - (d * pb - d * d * pab + d * d - d + d**3 - d**2))
    if "eq1" in checks:
        s_b = float(von_neumann_entropy(rho_b))
        s_ab = float(von_neumann_entropy(s)) - s_b
        post = [float(post_cond_vn(s, b, rho_b)) for b in ms]
        bound = math.log2(d) + s_ab
        record["eq1"] = min(x + y - bound for x, y in combinations(post, 2))
    return record


def _run_block(args):
    d, rank, base_seed, trial_ids, checks = args
    return [evaluate_trial(d, rank, spawn_seed(base_seed, d, rank, t), checks) | {"trial": t} for t in trial_ids]


def _passes(check, value, tol):
    if check in EQUALITY_CHECKS:
        return abs(value) <= tol
    return value >= -tol


def _aggregate(check, records, tol):
    values = np.array([r[check] for r in records])
    if check in EQUALITY_CHECKS:
        key = np.abs(values)
        worst = int(np.argmax(key))
        summary = {"max_abs_residual": float(key[worst]), "mean_abs_residual": float(key.mean())}
    else:
        worst = int(np.argmin(values))
        summary = {"min_slack": float(values[worst]), "mean_slack": float(values.mean())}
    failures = sum(not _passes(check, v, tol) for v in values)
    if check == "t1-ineq":
        gap = max(r["identity_gap"] for r in records)
        summary["max_identity_gap"] = gap
        failures += sum(r["identity_gap"] > IDENTITY_TOL for r in records)
    if check == "t1":
        cond = np.array([r["min_cond_linear_entropy"] for r in records])
        summary["min_cond_linear_entropy"] = float(cond.min())
        summary["negative_cond_linear_entropy_count"] = int(np.sum(cond < -NONNEG_TOL))
    rec = records[worst]
    summary.update(
        tol=tol,
        failures=int(failures),
        worst_seed=rec["seed"],
        worst_rank=rec["rank"],
        worst_trial=rec["trial"],
        pass_=failures == 0,
    )
    summary["pass"] = summary.pop("pass_")
    return summary


@dataclass
class SweepReport:
    config: dict
    per_dim: list
    trials: int
    passed: bool
    records: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {"config": self.config, "per_dim": self.per_dim, "trials": self.trials, "pass": self.passed}


def run_sweep(config):
    """Generate seeded random states over the dims x ranks grid and run the checks.

    Every trial draws from its own stream seeded by
    ``spawn_seed(config.seed, d, rank, trial)``, so results do not depend on
    ``config.jobs`` and any trial can be replayed from its recorded seed.
    Unsupported dimensions are reported with an ``error`` entry and zero
    trials; the remaining dimensions still run.
    """
    checks = [c for c in CHECKS if c in config.checks]
    per_dim, records = [], []
    jobs = max(1, int(config.jobs or 1))
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for d in config.dims:
            try:
                _mub(d)
                ranks = sorted({resolve_rank(r, d) for r in config.ranks})
            except MubkitError as exc:
                per_dim.append({"d": d, "error": str(exc), "trials": 0, "checks": {}, "pass": False})
                continue
            tasks = []
            for rank in ranks:
                ids = list(range(config.trials))
                chunk = max(1, math.ceil(len(ids) / jobs))
                tasks += [(d, rank, config.seed, ids[i : i + chunk], checks) for i in range(0, len(ids), chunk)]
            blocks = pool.map(_run_block, tasks) if pool else map(_run_block, tasks)
            dim_records = [r for block in blocks for r in block]
            tols = {c: config.tol.get(c, default_tol(c, d)) for c in checks}
            summaries = {c: _aggregate(c, dim_records, tols[c]) for c in checks}
            per_dim.append(
                {
                    "d": d,
                    "ranks": ranks,
                    "trials": len(dim_records),
                    "checks": summaries,
                    "pass": all(v["pass"] for v in summaries.values()),
                }
            )
            records += dim_records
    finally:
        if pool:
            pool.shutdown()
    config_echo = asdict(config)
    config_echo["checks"] = checks
    return SweepReport(
        config=config_echo,
        per_dim=per_dim,
        trials=len(records),
        passed=all(entry["pass"] for entry in per_dim),
        records=records,
    )


def replay_trial(d, rank, seed, checks=CHECKS):
    """Recompute one sweep trial from its recorded seed."""
    return evaluate_trial(d, rank, seed, tuple(checks))


def default_seed():
    return int(os.environ.get("MUBKIT_SEED", "0"))
