"""Simulated worker-pool runs, collusion views, and an exhaustive secrecy audit.

Workers are honest but curious and run in-process: "sending" a share is a
recorded function call. Worker i only ever sees its own pair of shares; the
transcript keeps every share and response keyed by worker index so collusion
views can be extracted after the fact.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from pathlib import Path

import numpy as np

from .field import PrimeField
from .function_field import HyperellipticCurve, Place
from .scheme import SchemeInstance, derive_parameters, resolve_orientation

AUDIT_SUBSET_CAP = 10_000
AUDIT_STATE_CAP = 2_000_000


@dataclass
class WorkerRecord:
    """Everything one worker saw and returned."""

    index: int
    place: Place
    a_share: np.ndarray
    b_share: np.ndarray
    response: np.ndarray


@dataclass
class Transcript:
    """Full record of one protocol run."""

    q: int
    m: int
    n: int
    x: int
    records: list[WorkerRecord]

    @property
    def n_workers(self) -> int:
        return len(self.records)

    def responses(self) -> list[tuple[int, np.ndarray]]:
        return [(rec.index, rec.response) for rec in self.records]

    def to_jsonl_lines(self) -> list[str]:
        lines = []
        for rec in self.records:
            lines.append(json.dumps({
                "index": rec.index,
                "place": {"x": rec.place.x.value, "y": rec.place.y.value},
                "a_share": rec.a_share.tolist(),
                "b_share": rec.b_share.tolist(),
                "response": rec.response.tolist(),
            }))
        return lines

    def to_jsonl(self, path) -> None:
        Path(path).write_text("\n".join(self.to_jsonl_lines()) + "\n")


@dataclass
class CollusionView:
    """The pooled incoming shares of one set of colluding workers."""

    indices: tuple[int, ...]
    a_shares: list[np.ndarray]
    b_shares: list[np.ndarray]


def run_protocol(a, b, instance: SchemeInstance, rng=None):
    """Encode, fan out to all workers, decode; returns (product, transcript)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError(f"expected 2-D matrices, got shapes {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions disagree: {a.shape} x {b.shape}")
    if rng is None:
        rng = np.random.default_rng(instance.params.seed)
    shares_a = instance.encode("A", a, rng)
    shares_b = instance.encode("B", b, rng)
    responses = instance.worker_products(shares_a, shares_b)
    result = instance.decode(responses)
    records = [
        WorkerRecord(i, instance.places[i], shares_a.shares[i], shares_b.shares[i], responses[i])
        for i in range(instance.n_workers)
    ]
    transcript = Transcript(
        q=instance.q, m=instance.params.m, n=instance.params.n,
        x=instance.params.x, records=records,
    )
    return result, transcript


def decode_response_pairs(pairs, instance: SchemeInstance) -> np.ndarray:
    """Decode from (worker index, response) pairs given in any order."""
    by_index = {}
    for idx, resp in pairs:
        if idx in by_index:
            raise ValueError(f"duplicate response for worker {idx}")
        by_index[idx] = resp
    if sorted(by_index) != list(range(instance.n_workers)):
        raise ValueError(f"need exactly one response from each of {instance.n_workers} workers")
    return instance.decode([by_index[i] for i in range(instance.n_workers)])


def collude_view(transcript: Transcript, indices) -> CollusionView:
    """The shares visible to the colluding workers named by indices (|indices| = x)."""
    idx = tuple(indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"colluding indices must be distinct, got {idx}")
    if len(idx) != transcript.x:
        raise ValueError(f"expected {transcript.x} colluding workers, got {len(idx)}")
    n = transcript.n_workers
    if any(i < 0 or i >= n for i in idx):
        raise ValueError(f"worker indices must lie in [0, {n}), got {idx}")
    return CollusionView(
        indices=idx,
        a_shares=[transcript.records[i].a_share for i in idx],
        b_shares=[transcript.records[i].b_share for i in idx],
    )


# -- empirical secrecy audit --------------------------------------------------


@dataclass
class SecrecyAuditReport:
    """Outcome of the exhaustive view-distribution comparison."""

    m: int
    n: int
    x: int
    q: int
    n_workers: int
    place_xs: list[int]
    subsets: list[tuple[int, ...]]
    subsets_exhaustive: bool
    plaintext_count: int
    randomness_count: int
    views_uniform: bool
    passed: bool
    failure: str | None = None

    def summary_lines(self) -> list[str]:
        status = "PASS" if self.passed else f"FAIL ({self.failure})"
        scope = "all" if self.subsets_exhaustive else f"first {len(self.subsets)} (lex order)"
        return [
            f"secrecy audit for m={self.m} n={self.n} x={self.x} q={self.q}: {status}",
            f"  workers audited: {self.n_workers}; collusion subsets: {scope}",
            f"  plaintext pairs: {self.plaintext_count}; mask assignments each: {self.randomness_count}",
            f"  colluder views uniform: {self.views_uniform}",
        ]


def empirical_secrecy_audit(
    m: int,
    n: int,
    x: int,
    q: int,
    subset_cap: int = AUDIT_SUBSET_CAP,
    state_cap: int = AUDIT_STATE_CAP,
) -> SecrecyAuditReport:
    """Prove perfect secrecy at tiny scale by exact distribution comparison.

    Uses scalar (1x1) blocks and enumerates every plaintext pair and every
    mask assignment. For each collusion subset the exact histogram of the
    colluders' view is tabulated per plaintext; secrecy holds iff all
    plaintexts induce the identical histogram. Workers sit at every usable
    place of the curve; decodability is deliberately not required here, so q
    may be far below what a full scheme build needs.
    """
    if q > 7:
        raise ValueError(f"audit supports q <= 7, got {q} (state space must stay enumerable)")
    if m * n > 4 or x > 2:
        raise ValueError(f"audit supports m*n <= 4 and x <= 2, got m={m}, n={n}, x={x}")
    swapped = resolve_orientation(m, n)
    me, ne = (n, m) if swapped else (m, n)
    poles = derive_parameters(me, ne, x)
    field = PrimeField(q)
    if q <= poles.d:
        raise ValueError(f"field order {q} too small for curve degree d={poles.d}")
    state = q ** (m + n + 2 * x)
    if state > state_cap:
        raise ValueError(
            f"state space {state} exceeds the cap {state_cap}; use smaller parameters"
        )

    curve = HyperellipticCurve(field, range(poles.d))
    places = curve.select_distinct_x_places()
    n_aud = len(places)
    if n_aud < x:
        raise ValueError(f"only {n_aud} usable places; need at least x={x}")

    phi_eval = [
        [curve.evaluate(curve.monomial_for_pole_number(w), p).value for p in places]
        for w in poles.phi
    ]
    gamma_eval = [
        [curve.evaluate(curve.monomial_for_pole_number(w), p).value for p in places]
        for w in poles.gamma
    ]
    # shares of the user's A side use phi unless the orientation is swapped
    a_eval = gamma_eval if swapped else phi_eval
    b_eval = phi_eval if swapped else gamma_eval

    all_subsets = math.comb(n_aud, x)
    exhaustive = all_subsets <= subset_cap
    subsets = []
    for i, sub in enumerate(combinations(range(n_aud), x)):
        if i >= subset_cap:
            break
        subsets.append(sub)

    def share_vectors(data, eval_rows):
        # every mask assignment applied to one fixed plaintext vector
        vectors = []
        for masks in product(range(q), repeat=x):
            coeffs = list(masks) + list(data)
            vectors.append(tuple(
                sum(c * eval_rows[t][i] for t, c in enumerate(coeffs)) % q
                for i in range(n_aud)
            ))
        return vectors

    reference: list[Counter] | None = None
    views_uniform = True
    failure = None
    plaintexts = list(product(
        product(range(q), repeat=m),
        product(range(q), repeat=n),
    ))
    for a_data, b_data in plaintexts:
        a_vecs = share_vectors(a_data, a_eval)
        b_vecs = share_vectors(b_data, b_eval)
        counters = []
        for sub in subsets:
            pa = [tuple(v[i] for i in sub) for v in a_vecs]
            pb = [tuple(v[i] for i in sub) for v in b_vecs]
            counters.append(Counter(product(pa, pb)))
        if reference is None:
            reference = counters
            views_uniform = all(
                len(c) == q ** (2 * x) and len(set(c.values())) == 1 for c in counters
            )
        elif counters != reference:
            bad = next(i for i, (c, r) in enumerate(zip(counters, reference)) if c != r)
            failure = (
                f"view distribution of subset {subsets[bad]} differs between "
                f"plaintexts {(a_data, b_data)} and {plaintexts[0]}"
            )
            break

    return SecrecyAuditReport(
        m=m, n=n, x=x, q=q,
        n_workers=n_aud,
        place_xs=[p.x.value for p in places],
        subsets=subsets,
        subsets_exhaustive=exhaustive,
        plaintext_count=len(plaintexts),
        randomness_count=q ** (2 * x),
        views_uniform=views_uniform,
        passed=failure is None,
        failure=failure,
    )
