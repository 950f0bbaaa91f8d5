"""Reversibility sweeps, closed-form determinants, entropy growth, probes.

The reversibility verdict for one parameter tuple comes from exact
elimination on the rule matrix; the closed-form degree-10 and degree-22
determinant polynomials are evaluated mod p as an independent check.
Entropy quantities are analytic: H_n = |V_n| * log2(p) grows like 2^n,
so H_n / n is unbounded. The partition probe is a desk-scale experiment
counting the atoms actually distinguishable by repeated observation of
the root cell.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dynamics import DEFAULT_ENUMERATION_CAP, _all_configurations, _apply_local
from .errors import FixtureMismatch
from .field import PrimeField, is_prime
from .rulematrix import Params, build_rule_matrix, linalg_report
from .tree import TreeShape


@dataclass(frozen=True)
class ReversibilityRecord:
    a: int
    b: int
    c: int
    d: int
    n: int
    p: int
    det: int
    rank: int
    reversible: bool

    @property
    def verdict(self) -> str:
        return "reversible" if self.reversible else "irreversible"

    def sort_key(self):
        return (self.p, self.n, self.a, self.b, self.c, self.d)


def classify(a: int, b: int, c: int, d: int, n: int, p: int,
             allow_zero: bool = False) -> ReversibilityRecord:
    """Build the rule matrix for one parameter tuple and judge reversibility."""
    field = PrimeField(p)
    params = Params(a=a, b=b, c=c, d=d, field=field, allow_zero=allow_zero)
    m = build_rule_matrix(TreeShape(n), params)
    rep = linalg_report(m)
    return ReversibilityRecord(
        a=a, b=b, c=c, d=d, n=n, p=p, det=rep.det, rank=rep.rank, reversible=rep.invertible
    )


# ---------------------------------------------------------------------------
# Parameter sweeps


@dataclass(frozen=True)
class SweepSpec:
    """Cartesian sweep over explicit value lists, or seeded random sampling.

    With random_count set, (a, b, c, d) are drawn uniformly from Z_p^* for
    each (p, n) combination instead of taking the cartesian product.
    """

    a_values: tuple[int, ...] = ()
    b_values: tuple[int, ...] = ()
    c_values: tuple[int, ...] = ()
    d_values: tuple[int, ...] = ()
    n_values: tuple[int, ...] = (2,)
    p_values: tuple[int, ...] = ()
    random_count: int = 0
    seed: int = 0


def _sweep_tuples(spec: SweepSpec) -> list[tuple[int, int, int, int, int, int]]:
    tuples = []
    if spec.random_count:
        rng = np.random.default_rng(spec.seed)
        for p in spec.p_values:
            for n in spec.n_values:
                draws = rng.integers(1, p, size=(spec.random_count, 4))
                tuples += [(int(a), int(b), int(c), int(d), n, p) for a, b, c, d in draws]
    else:
        for p in spec.p_values:
            for n in spec.n_values:
                for a in spec.a_values:
                    for b in spec.b_values:
                        for c in spec.c_values:
                            for d in spec.d_values:
                                tuples.append((a, b, c, d, n, p))
    return tuples


def sweep(spec: SweepSpec, threads: int = 1) -> list[ReversibilityRecord]:
    """Classify every tuple of the spec; output order is canonical
    (lexicographic over (p, n, a, b, c, d)) regardless of thread count."""
    tuples = _sweep_tuples(spec)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda t: classify(*t[:4], n=t[4], p=t[5]), tuples))
    else:
        records = [classify(a, b, c, d, n, p) for a, b, c, d, n, p in tuples]
    return sorted(records, key=ReversibilityRecord.sort_key)


def records_to_csv(records: Iterable[ReversibilityRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "c", "d", "n", "p", "det", "rank", "reversible"])
    for r in records:
        w.writerow([r.a, r.b, r.c, r.d, r.n, r.p, r.det, r.rank, str(r.reversible).lower()])
    return buf.getvalue()


def records_to_json(records: Iterable[ReversibilityRecord]) -> str:
    return json.dumps(
        [
            {
                "a": r.a, "b": r.b, "c": r.c, "d": r.d, "n": r.n, "p": r.p,
                "det": r.det, "rank": r.rank, "reversible": r.reversible,
            }
            for r in records
        ],
        indent=2,
    )


# ---------------------------------------------------------------------------
# Closed-form determinants for n = 2 and n = 3


def det_formula_n2(a: int, b: int, c: int, d: int, p: int) -> int:
    """Degree-10 determinant polynomial of the level-2 rule matrix, mod p."""
    v = -(d**4) * (c * (2 * (a + b) + c) - d**2) * (-(a + b) * c + d**2) ** 2
    return v % p


def det_formula_n3(a: int, b: int, c: int, d: int, p: int) -> int:
    """Degree-22 determinant polynomial of the level-3 rule matrix, mod p."""
    s = a + b
    v = (
        -(d**8)
        * (s * c - d**2) ** 3
        * (-2 * s * c + d**2) ** 2
        * (s * c**2 * (s + c) - c * (3 * s + c) * d**2 + d**4)
    )
    return v % p


# ---------------------------------------------------------------------------
# Entropy growth


@dataclass(frozen=True)
class EntropySequence:
    p: int
    terms: tuple[tuple[int, float, float], ...]  # (n, H_n, H_n / n)


def ball_size(n: int) -> int:
    return 1 + 3 * (2**n - 1)


def entropy_sequence(p: int, max_n: int) -> EntropySequence:
    """H_n = |V_n| * log2(p): the entropy of the n-step refinement of the
    root partition under the uniform Bernoulli measure, and its growth
    rate H_n / n."""
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    if not is_prime(p):
        from .errors import NonPrimeModulus

        raise NonPrimeModulus(f"modulus {p} is not prime")
    log2p = math.log2(p)
    terms = tuple((n, ball_size(n) * log2p, ball_size(n) * log2p / n) for n in range(1, max_n + 1))
    return EntropySequence(p=p, terms=terms)


def entropy_csv(seq: EntropySequence) -> str:
    lines = ["n,H_n,H_n_over_n"]
    lines += [f"{n},{h:.12g},{hn:.12g}" for n, h, hn in seq.terms]
    return "\n".join(lines) + "\n"


def partition_entropy(pi: Sequence[float]) -> float:
    """Shannon entropy (base 2) of a probability vector; 0*log0 = 0."""
    total = sum(pi)
    if not math.isclose(total, 1.0, abs_tol=1e-9):
        raise ValueError(f"probabilities sum to {total}, not 1")
    return -sum(q * math.log2(q) for q in pi if q > 0)


# ---------------------------------------------------------------------------
# Partition probe


@dataclass(frozen=True)
class PartitionProbe:
    steps: int
    truncation_level: int
    p: int
    a: int
    b: int
    c: int
    d: int
    mode: str  # "root" or "ball"
    atom_count: int
    claimed_atom_count: int


def partition_atom_count(
    params: Params,
    steps: int,
    truncation: TreeShape,
    mode: str = "root",
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> PartitionProbe:
    """Count the atoms of the joined partition obtained by observing the
    root cell (or the radius-1 ball) at times 0 .. steps-1, exhaustively
    over all configurations on the truncation.

    The claimed count p^(1+3(2^steps-1)) is reported alongside for
    comparison; no equality is asserted.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if mode not in ("root", "ball"):
        raise ValueError(f"mode must be 'root' or 'ball', got {mode!r}")
    p = params.p
    observed_cols = [0] if mode == "root" else list(range(min(4, truncation.total_vertices)))
    configs = _all_configurations(truncation.total_vertices, p, cap)
    observations = []
    cur = configs
    for _ in range(steps):
        observations.append(cur[:, observed_cols])
        cur = _apply_local(cur, truncation, params)
    stacked = np.hstack(observations)
    atom_count = len(np.unique(stacked, axis=0))
    return PartitionProbe(
        steps=steps,
        truncation_level=truncation.n,
        p=p,
        a=params.a,
        b=params.b,
        c=params.c,
        d=params.d,
        mode=mode,
        atom_count=atom_count,
        claimed_atom_count=p ** ball_size(steps),
    )


# ---------------------------------------------------------------------------
# Reversibility reference table (fixture-backed)


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(lo, hi + 1) if is_prime(q)]

# Reference rows: (a, b, c, d, n, list of primes, expected verdict).
# The p=3..101 row expands to every prime in [3, 101].
TABLE1_ROWS: tuple[tuple[int, int, int, int, int, tuple[int, ...], str], ...] = (
    (1, 1, 1, 1, 2, (2,), "irreversible"),
    (1, 1, 1, 1, 2, tuple(primes_between(3, 101)), "reversible"),
    (2, 1, 5, 2, 2, (17,), "irreversible"),
    (2, 1, 3, 2, 2, (17,), "reversible"),
    (2, 3, 4, 3, 2, (11,), "irreversible"),
    (1, 1, 1, 1, 3, (3,), "irreversible"),
    (2, 2, 3, 3, 3, (5,), "irreversible"),
    (2, 1, 1, 3, 3, (5,), "reversible"),
    (2, 2, 3, 3, 3, (7, 11, 13, 19, 23, 29), "reversible"),
)


def table1_expected() -> list[tuple[int, int, int, int, int, int, str]]:
    """Expanded fixture rows (a, b, c, d, n, p, verdict) in table order."""
    out = []
    for a, b, c, d, n, ps, verdict in TABLE1_ROWS:
        out += [(a, b, c, d, n, p, verdict) for p in ps]
    return out


def table1_fixture_csv() -> str:
    lines = ["a,b,c,d,n,p,reversibility"]
    lines += [f"{a},{b},{c},{d},{n},{p},{v}" for a, b, c, d, n, p, v in table1_expected()]
    return "\n".join(lines) + "\n"


def table1_check(fixture_text: str) -> list[ReversibilityRecord]:
    """Recompute every fixture row and diff verdicts; raises FixtureMismatch
    with per-row diffs if anything disagrees."""
    reader = csv.DictReader(io.StringIO(fixture_text))
    diffs = []
    records = []
    for row in reader:
        a, b, c, d = int(row["a"]), int(row["b"]), int(row["c"]), int(row["d"])
        n, p = int(row["n"]), int(row["p"])
        rec = classify(a, b, c, d, n, p)
        records.append(rec)
        if rec.verdict != row["reversibility"]:
            diffs.append(
                f"(a={a},b={b},c={c},d={d},n={n},p={p}): "
                f"computed {rec.verdict}, fixture says {row['reversibility']}"
            )
    if diffs:
        raise FixtureMismatch(diffs)
    return records
