"""Synchronous best-response dynamics.

Every round, every player simultaneously adopts the behaviour that would
have cost the least in the configuration just played, with costs from
:mod:`peerpressure.model`. Cost comparisons are exact float comparisons;
no tolerance is applied, so ties are genuine equalities.

Randomness contract
-------------------
All randomness flows through a single draw source per run, consumed in a
fixed documented order so that equal seeds reproduce runs bit for bit:

* Greedy rules consume exactly one uniform draw per (player, round)
  decision, and only when that decision is tied. Draws are consumed in
  ascending player index within a round.
* When a decision over ``m`` tied behaviours consumes the uniform ``r``,
  the tied behaviours are laid out in the fixed preference order
  (cooperator, hypocrite, defector, private cooperator) over ``m`` equal
  consecutive sub-intervals of [0, 1], the first closed and the rest
  half-open on the left; the behaviour whose sub-interval contains ``r``
  is adopted. With two tied behaviours the first is chosen iff r <= 0.5.
* The noisy rule additionally consumes one noise draw per player per
  round, always, before any tie draw of that round: at the start of the
  round noise draws for players 0..n-1 are taken, then tie draws follow
  ascending player index. A player whose noise draw ``r`` exceeds the
  greedy probability skips cost minimisation (and consumes no tie draw);
  its behaviour is instead chosen uniformly over all available
  behaviours by rescaling the same noise draw onto (0, 1] and applying
  the sub-interval layout above.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graphs import Network
from .model import (
    Behavior,
    MainParams,
    TwoOrderParams,
    MAIN_BEHAVIORS,
    TWO_ORDER_BEHAVIORS,
    BINARY_BEHAVIORS,
    TIE_PRIORITY,
)


class TieBreakStream:
    """Sequential uniform draws from a seeded generator.

    The stream is position-based: values are handed out in the order they
    are requested, regardless of which player they are for. Equal seeds
    give equal streams, and a block request equals that many single
    requests.
    """

    def __init__(self, seed: int | np.random.SeedSequence):
        self._rng = np.random.default_rng(seed)

    def draw(self) -> float:
        return float(self._rng.random())

    def take_for(self, vertices: np.ndarray) -> np.ndarray:
        """Next ``len(vertices)`` values; the indices only fix the count."""
        return self._rng.random(len(vertices))


class TieAssignment:
    """Pre-assigned per-player draw values, for oracle comparisons.

    Unlike a stream, the value a player receives is fixed up front, so the
    outcome is independent of how many other players happen to tie. Only
    meaningful for single greedy rounds.
    """

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    def take_for(self, vertices: np.ndarray) -> np.ndarray:
        return self.values[vertices]


class RuleKind(Enum):
    MAIN_GREEDY = "main-greedy"
    MAIN_NOISY = "main-noisy"
    MAIN_NO_HYPOCRISY = "main-no-hypocrisy"
    TWO_ORDER_GREEDY = "two-order-greedy"


@dataclass(frozen=True)
class UpdateRule:
    """A behaviour-revision rule: which model, which options, how greedy."""

    kind: RuleKind
    p_greedy: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is not RuleKind.MAIN_NOISY and self.p_greedy != 1.0:
            raise ValueError("p_greedy is only meaningful for the noisy rule")
        if not 0.0 <= self.p_greedy <= 1.0:
            raise ValueError(f"p_greedy must lie in [0, 1], got {self.p_greedy}")

    @classmethod
    def main_greedy(cls) -> "UpdateRule":
        return cls(RuleKind.MAIN_GREEDY)

    @classmethod
    def main_noisy(cls, p_greedy: float) -> "UpdateRule":
        return cls(RuleKind.MAIN_NOISY, p_greedy=p_greedy)

    @classmethod
    def main_no_hypocrisy(cls) -> "UpdateRule":
        return cls(RuleKind.MAIN_NO_HYPOCRISY)

    @classmethod
    def two_order_greedy(cls) -> "UpdateRule":
        return cls(RuleKind.TWO_ORDER_GREEDY)

    @property
    def available(self) -> tuple[Behavior, ...]:
        if self.kind is RuleKind.MAIN_NO_HYPOCRISY:
            return BINARY_BEHAVIORS
        if self.kind is RuleKind.TWO_ORDER_GREEDY:
            return TWO_ORDER_BEHAVIORS
        return MAIN_BEHAVIORS

    @property
    def is_two_order(self) -> bool:
        return self.kind is RuleKind.TWO_ORDER_GREEDY


class Termination(Enum):
    MAX_ROUNDS = "max-rounds"
    FIXED_POINT = "fixed-point"
    TWO_CYCLE = "two-cycle"


@dataclass
class Trace:
    """Per-round behaviour counts of one run, plus how the run ended.

    ``counts[t]`` holds the number of players in each behaviour (column
    order: defector, hypocrite, cooperator, and private cooperator for
    two-order runs) after round ``t``; row 0 is the initial configuration.
    ``round_reached`` is the first round of the detected terminal pattern
    for early-stopped runs (the repeated round for a fixed point, the
    first provably periodic round for a two-cycle) and the last simulated
    round otherwise. ``snapshots``, when recorded, holds every
    configuration including the initial one.
    """

    counts: np.ndarray
    round_reached: int
    termination: Termination
    rule: UpdateRule
    params: MainParams | TwoOrderParams
    snapshots: list[np.ndarray] | None = None

    @property
    def n(self) -> int:
        return int(self.counts[0].sum())

    @property
    def rounds(self) -> int:
        """Number of simulated rounds (rows minus the initial one)."""
        return self.counts.shape[0] - 1


def punishing_counts(network: Network, config: np.ndarray) -> np.ndarray:
    """Per-vertex count of neighbours currently punishing.

    Hypocrites and cooperators punish, defectors and private cooperators
    do not; in the main model this is exactly the non-defector neighbour
    count.
    """
    mask = (config == Behavior.HYPOCRITICAL) | (config == Behavior.COOPERATOR)
    if network.neighbor_flat.size == 0:
        return np.zeros(network.vertex_count, dtype=np.int64)
    weights = mask[network.neighbor_flat].astype(np.float64)
    return np.bincount(network.neighbor_src, weights=weights,
                       minlength=network.vertex_count).astype(np.int64)


def _validate_config(config: np.ndarray, n: int, rule: UpdateRule) -> np.ndarray:
    config = np.asarray(config, dtype=np.int8)
    if config.shape != (n,):
        raise ValueError(f"configuration shape {config.shape} does not match n={n}")
    limit = 4 if rule.is_two_order else 3
    if config.size and (config.min() < 0 or config.max() >= limit):
        raise ValueError(f"behaviour codes out of range for rule {rule.kind.value}")
    return config


def _validate_params(params, rule: UpdateRule) -> None:
    if rule.is_two_order:
        if not isinstance(params, TwoOrderParams):
            raise ValueError("two-order rule requires TwoOrderParams")
    elif not isinstance(params, MainParams):
        raise ValueError(f"rule {rule.kind.value} requires MainParams")


def _cost_table(k: np.ndarray, params, rule: UpdateRule) -> tuple[np.ndarray, np.ndarray]:
    """Cost rows in tie-preference order; returns (codes, costs)."""
    n = k.shape[0]
    kf = k.astype(np.float64)
    if rule.is_two_order:
        rows = {
            Behavior.COOPERATOR: np.full(n, params.alpha1 + params.alpha2),
            Behavior.HYPOCRITICAL: params.alpha2 + kf * params.beta1,
            Behavior.DEFECTOR: kf * (params.beta1 + params.beta2),
            Behavior.PRIVATE_COOPERATOR: params.alpha1 + kf * params.beta2,
        }
    else:
        rows = {
            Behavior.COOPERATOR: np.ones(n),
            Behavior.HYPOCRITICAL: params.e_h + kf * params.rho_h,
            Behavior.DEFECTOR: kf * params.rho_d,
        }
    codes = [b for b in TIE_PRIORITY if b in rule.available]
    costs = np.stack([rows[b] for b in codes])
    return np.array(codes, dtype=np.int8), costs


def _interval_pick(r: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Index of the sub-interval of [0, 1] split into m equal parts hit by r.

    Intervals are [0, 1/m], (1/m, 2/m], ..., ((m-1)/m, 1], so r = 0.5 with
    m = 2 selects index 0.
    """
    return np.clip(np.ceil(r * m).astype(np.int64) - 1, 0, m - 1)


def step(network: Network, config: np.ndarray, params, rule: UpdateRule,
         ties) -> np.ndarray:
    """One synchronous revision round; returns the next configuration.

    Every player evaluates the cost of each behaviour available under
    ``rule`` against the punishing-neighbour counts of ``config`` and
    adopts a cheapest one, resolving exact-tie sets through ``ties`` as
    described in the module docstring. ``ties`` is a
    :class:`TieBreakStream` or, for greedy rules only, a
    :class:`TieAssignment`.
    """
    _validate_params(params, rule)
    n = network.vertex_count
    config = _validate_config(config, n, rule)
    noisy = rule.kind is RuleKind.MAIN_NOISY
    if noisy and isinstance(ties, TieAssignment):
        raise ValueError("the noisy rule requires a TieBreakStream")

    k = punishing_counts(network, config)
    codes, costs = _cost_table(k, params, rule)

    if noisy:
        noise = ties.take_for(np.arange(n))
        random_mask = noise > rule.p_greedy

    is_min = costs == costs.min(axis=0, keepdims=True)
    n_min = is_min.sum(axis=0)
    choice = np.argmax(is_min, axis=0)  # first minimiser in preference order

    tied = np.flatnonzero(n_min > 1)
    if noisy and tied.size:
        tied = tied[~random_mask[tied]]
    if tied.size:
        r = ties.take_for(tied)
        m = n_min[tied]
        picked = _interval_pick(r, m)
        rank = np.cumsum(is_min[:, tied], axis=0)
        choice[tied] = np.argmax(is_min[:, tied] & (rank == picked + 1), axis=0)

    out = codes[choice]
    if noisy and random_mask.any():
        idx = np.flatnonzero(random_mask)
        rescaled = (noise[idx] - rule.p_greedy) / (1.0 - rule.p_greedy)
        out[idx] = codes[_interval_pick(rescaled, np.full(idx.shape, len(codes)))]
    return out


def run(network: Network, initial: np.ndarray, params, rule: UpdateRule, ties,
        max_rounds: int, early_stop: bool = False,
        record_snapshots: bool = False) -> Trace:
    """Iterate :func:`step` for up to ``max_rounds`` rounds.

    With ``early_stop`` the run halts as soon as the latest configuration
    repeats the previous one (fixed point) or the one before that
    (two-cycle); otherwise exactly ``max_rounds`` rounds are simulated,
    which keeps round counts comparable across runs.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    if not network.is_connected():
        raise ValueError("simulation requires a connected network")
    _validate_params(params, rule)
    config = _validate_config(initial, network.vertex_count, rule).copy()

    width = 4 if rule.is_two_order else 3
    counts = [np.bincount(config, minlength=width)]
    snapshots = [config.copy()] if record_snapshots else None
    prev = None
    termination = Termination.MAX_ROUNDS
    round_reached = max_rounds
    for t in range(1, max_rounds + 1):
        nxt = step(network, config, params, rule, ties)
        counts.append(np.bincount(nxt, minlength=width))
        if record_snapshots:
            snapshots.append(nxt.copy())
        if early_stop:
            if np.array_equal(nxt, config):
                termination = Termination.FIXED_POINT
                round_reached = t - 1
                config = nxt
                break
            if prev is not None and np.array_equal(nxt, prev):
                termination = Termination.TWO_CYCLE
                round_reached = t - 2
                config = nxt
                break
        prev = config
        config = nxt
    else:
        round_reached = max_rounds
    return Trace(counts=np.array(counts, dtype=np.int64), round_reached=round_reached,
                 termination=termination, rule=rule, params=params, snapshots=snapshots)


# ---------------------------------------------------------------------------
# trace serialization
# ---------------------------------------------------------------------------

_COLUMNS = ("defectors", "hypocritical", "cooperators", "private_cooperators")


def format_trace_csv(trace: Trace) -> str:
    width = trace.counts.shape[1]
    buf = io.StringIO()
    buf.write("round," + ",".join(_COLUMNS[:width]) + "\n")
    for t, row in enumerate(trace.counts):
        buf.write(f"{t}," + ",".join(str(int(x)) for x in row) + "\n")
    return buf.getvalue()


def write_trace_csv(trace: Trace, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_trace_csv(trace))
