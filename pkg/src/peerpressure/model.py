"""Behaviours, per-round costs, parameter regimes and initial configurations.

Two cost models share one behaviour encoding. In the main model a player is
a defector, a hypocrite or a cooperator; cooperating costs 1 (the
normalised contribution), while not cooperating costs a per-neighbour
pressure fee for every neighbour who currently punishes. Hypocrites
punish without contributing: they pay a fixed image cost ``e_h`` plus a
reduced pressure fee ``rho_h`` per punishing neighbour, whereas open
defectors pay ``rho_d`` per punishing neighbour.

The two-order model splits a behaviour into two independent choices,
contributing and punishing. Contributing costs ``alpha1``; punishing costs
``alpha2``; every punishing neighbour charges ``beta1`` to players who do
not contribute and ``beta2`` to players who do not punish. The four
combinations are: cooperator (contributes, punishes), defector (neither),
hypocrite (punishes only) and private cooperator (contributes only).

Configurations are numpy int8 vectors of behaviour codes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from enum import Enum, IntEnum

import numpy as np


class Behavior(IntEnum):
    """Behaviour codes. Order matches trace-count columns."""

    DEFECTOR = 0
    HYPOCRITICAL = 1
    COOPERATOR = 2
    PRIVATE_COOPERATOR = 3

    @property
    def contributes(self) -> bool:
        return self in (Behavior.COOPERATOR, Behavior.PRIVATE_COOPERATOR)

    @property
    def punishes(self) -> bool:
        return self in (Behavior.COOPERATOR, Behavior.HYPOCRITICAL)


MAIN_BEHAVIORS = (Behavior.DEFECTOR, Behavior.HYPOCRITICAL, Behavior.COOPERATOR)
TWO_ORDER_BEHAVIORS = MAIN_BEHAVIORS + (Behavior.PRIVATE_COOPERATOR,)
BINARY_BEHAVIORS = (Behavior.DEFECTOR, Behavior.COOPERATOR)

# Fixed preference order used whenever several behaviours cost the same.
TIE_PRIORITY = (
    Behavior.COOPERATOR,
    Behavior.HYPOCRITICAL,
    Behavior.DEFECTOR,
    Behavior.PRIVATE_COOPERATOR,
)


class ConditionStatus(Enum):
    """Outcome of the main-model convergence-regime check."""

    SATISFIED = "satisfied"
    PRESSURE_TOO_LOW = "pressure-too-low"
    PRESSURE_TOO_HIGH = "pressure-too-high"
    BOTH_VIOLATED = "both-violated"


class TwoOrderConditionStatus(Enum):
    """Outcome of the two-order convergence-regime check."""

    SATISFIED = "satisfied"
    PUNISHING_TOO_COSTLY = "punishing-too-costly"
    CONTRIBUTING_TOO_COSTLY = "contributing-too-costly"
    BOTH_VIOLATED = "both-violated"


@dataclass(frozen=True)
class MainParams:
    """Main-model parameters.

    The model regime is ``0 < e_h < 1`` with positive pressures, but
    boundary and degenerate values are accepted so that parameter sweeps
    can cover full axis ranges; :meth:`regime_notes` reports anything out
    of regime instead of rejecting it.
    """

    e_h: float
    rho_h: float
    rho_d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.e_h <= 1.0:
            raise ValueError(f"e_h must lie in [0, 1], got {self.e_h}")
        if self.rho_h < 0.0:
            raise ValueError(f"rho_h must be non-negative, got {self.rho_h}")
        if self.rho_d <= 0.0:
            raise ValueError(f"rho_d must be positive, got {self.rho_d}")

    def regime_notes(self) -> tuple[str, ...]:
        notes = []
        if self.e_h == 0.0 or self.e_h == 1.0:
            notes.append(f"e_h={self.e_h} is on the regime boundary (0 < e_h < 1)")
        if self.rho_h == 0.0:
            notes.append("rho_h=0 disables hypocrite pressure")
        if self.rho_h >= self.rho_d:
            notes.append(f"rho_h={self.rho_h} >= rho_d={self.rho_d}")
        return tuple(notes)


@dataclass(frozen=True)
class TwoOrderParams:
    """Two-order model parameters; all four costs must be positive."""

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


def cost_main(behavior: Behavior, punishing_neighbors: int, params: MainParams) -> float:
    """Round cost in the main model given the punishing-neighbour count.

    Cooperators pay the unit contribution and no pressure. Defectors and
    hypocrites pay their pressure rate per punishing neighbour; hypocrites
    additionally pay the flat image-keeping cost.
    """
    if punishing_neighbors < 0:
        raise ValueError("punishing_neighbors must be >= 0")
    if behavior is Behavior.COOPERATOR:
        return 1.0
    if behavior is Behavior.DEFECTOR:
        return params.rho_d * punishing_neighbors
    if behavior is Behavior.HYPOCRITICAL:
        return params.e_h + params.rho_h * punishing_neighbors
    raise ValueError(f"{behavior!r} is not a main-model behavior")


def cost_two_order(behavior: Behavior, punishing_neighbors: int,
                   params: TwoOrderParams) -> float:
    """Round cost in the two-order model.

    A player pays ``alpha1`` if contributing and ``alpha2`` if punishing;
    each punishing neighbour charges ``beta1`` if the player does not
    contribute and ``beta2`` if the player does not punish.
    """
    if punishing_neighbors < 0:
        raise ValueError("punishing_neighbors must be >= 0")
    k = punishing_neighbors
    if behavior is Behavior.COOPERATOR:
        return params.alpha1 + params.alpha2
    if behavior is Behavior.DEFECTOR:
        return k * (params.beta1 + params.beta2)
    if behavior is Behavior.HYPOCRITICAL:
        return params.alpha2 + k * params.beta1
    if behavior is Behavior.PRIVATE_COOPERATOR:
        return params.alpha1 + k * params.beta2
    raise ValueError(f"unknown behavior {behavior!r}")


# ---------------------------------------------------------------------------
# initial configurations
# ---------------------------------------------------------------------------


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")


def sample_initial_main(n: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Defector w.p. 1-epsilon, else hypocrite or cooperator (epsilon/2 each).

    One uniform per vertex; the interval [1-eps, 1-eps/2) maps to
    hypocrite and [1-eps/2, 1) to cooperator.
    """
    _check_epsilon(epsilon)
    u = rng.random(n)
    config = np.zeros(n, dtype=np.int8)
    config[u >= 1.0 - epsilon] = Behavior.HYPOCRITICAL
    config[u >= 1.0 - epsilon / 2.0] = Behavior.COOPERATOR
    return config


def sample_initial_two_order(n: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Defector w.p. 1-epsilon, else one of the other three (epsilon/3 each).

    The residual interval maps to cooperator, hypocrite, private
    cooperator in that order.
    """
    _check_epsilon(epsilon)
    u = rng.random(n)
    config = np.zeros(n, dtype=np.int8)
    config[u >= 1.0 - epsilon] = Behavior.COOPERATOR
    config[u >= 1.0 - 2.0 * epsilon / 3.0] = Behavior.HYPOCRITICAL
    config[u >= 1.0 - epsilon / 3.0] = Behavior.PRIVATE_COOPERATOR
    return config


def sample_initial_binary(n: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Defector w.p. 1-epsilon, cooperator otherwise (no hypocrites)."""
    _check_epsilon(epsilon)
    u = rng.random(n)
    config = np.zeros(n, dtype=np.int8)
    config[u >= 1.0 - epsilon] = Behavior.COOPERATOR
    return config


# ---------------------------------------------------------------------------
# reduction from the two-order model to the main model
# ---------------------------------------------------------------------------


def map_two_order_params(params: TwoOrderParams) -> MainParams:
    """Rescale two-order parameters into main-model parameters.

    Dividing every cost by the full contribution-plus-punishment price
    ``alpha1 + alpha2`` normalises the cooperator cost to 1 and yields
    ``e_h = alpha2 / s``, ``rho_h = beta1 / s``, ``rho_d = (beta1 + beta2) / s``.
    """
    s = params.alpha1 + params.alpha2
    return MainParams(e_h=params.alpha2 / s, rho_h=params.beta1 / s,
                      rho_d=(params.beta1 + params.beta2) / s)


def map_configuration(config: np.ndarray) -> np.ndarray:
    """Collapse private cooperators onto defectors, fixing everything else.

    Private cooperators do not punish, so to every neighbour they are
    indistinguishable from defectors; this is the configuration half of
    the two-order-to-main reduction.
    """
    config = np.asarray(config, dtype=np.int8)
    return np.where(config == Behavior.PRIVATE_COOPERATOR,
                    np.int8(Behavior.DEFECTOR), config)


# ---------------------------------------------------------------------------
# convergence-regime checks
# ---------------------------------------------------------------------------


def classify_main_conditions(params: MainParams, min_degree: int) -> ConditionStatus:
    """Check the strict window ``(1 - e_h)/min_degree < rho_h < rho_d - e_h``.

    Inside the window, hypocrite pressure is strong enough that a player
    whose neighbours all punish prefers contributing (lower bound) yet
    cheap enough that punishing beats open defection whenever at least one
    neighbour punishes (upper bound). Both comparisons are strict;
    boundary values do not qualify.
    """
    if min_degree < 1:
        raise ValueError(f"min_degree must be >= 1, got {min_degree}")
    lower_ok = params.rho_h > (1.0 - params.e_h) / min_degree
    upper_ok = params.rho_h < params.rho_d - params.e_h
    if lower_ok and upper_ok:
        return ConditionStatus.SATISFIED
    if not lower_ok and not upper_ok:
        return ConditionStatus.BOTH_VIOLATED
    return ConditionStatus.PRESSURE_TOO_LOW if not lower_ok else ConditionStatus.PRESSURE_TOO_HIGH


def classify_two_order_conditions(params: TwoOrderParams,
                                  min_degree: int) -> TwoOrderConditionStatus:
    """Check ``alpha2 < beta2`` and ``alpha1 < min_degree * beta1``, strictly.

    The first makes punishing cheaper than being punished for not
    punishing; the second makes contributing cheaper than being punished
    by a full neighbourhood for not contributing.
    """
    if min_degree < 1:
        raise ValueError(f"min_degree must be >= 1, got {min_degree}")
    punish_ok = params.alpha2 < params.beta2
    contribute_ok = params.alpha1 < min_degree * params.beta1
    if punish_ok and contribute_ok:
        return TwoOrderConditionStatus.SATISFIED
    if not punish_ok and not contribute_ok:
        return TwoOrderConditionStatus.BOTH_VIOLATED
    if not punish_ok:
        return TwoOrderConditionStatus.PUNISHING_TOO_COSTLY
    return TwoOrderConditionStatus.CONTRIBUTING_TOO_COSTLY


# ---------------------------------------------------------------------------
# flat key-value serialization
# ---------------------------------------------------------------------------

_MAIN_KEYS = ("e_h", "rho_h", "rho_d")
_TWO_ORDER_KEYS = ("alpha1", "alpha2", "beta1", "beta2")


def params_to_dict(params: MainParams | TwoOrderParams) -> dict[str, float]:
    return asdict(params)


def params_from_dict(record: dict) -> MainParams | TwoOrderParams:
    """Build parameters from a flat mapping; the key set picks the model."""
    keys = set(record)
    if keys >= set(_MAIN_KEYS) and not keys & set(_TWO_ORDER_KEYS):
        return MainParams(**{k: float(record[k]) for k in _MAIN_KEYS})
    if keys >= set(_TWO_ORDER_KEYS) and not keys & set(_MAIN_KEYS):
        return TwoOrderParams(**{k: float(record[k]) for k in _TWO_ORDER_KEYS})
    raise ValueError(
        f"expected keys {_MAIN_KEYS} or {_TWO_ORDER_KEYS}, got {sorted(keys)}")


def load_params(path: str) -> MainParams | TwoOrderParams:
    with open(path, "r", encoding="utf-8") as fh:
        record = json.load(fh)
    if not isinstance(record, dict):
        raise ValueError(f"{path}: expected a flat JSON object")
    return params_from_dict(record)
