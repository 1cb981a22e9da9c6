"""Entanglement-assisted training of the dressed circuit.

Each ordered pair ``(x_plus, x_minus)`` of opposite-class samples is encoded
into the two-qubit state::

    (|psi(x_plus)>|0> + |psi(x_minus)>|1>) / sqrt(2)

and scored by its gap to the Tsirelson bound, ``2*sqrt(2) - |<B>|``.  The
training objective is the mean gap over all pairs.  Gradients are central
finite differences; parameters are updated with Adam.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import kernels, qsim
from .classifier import Label, ModelParams, accuracy, batch_prob_minus, forward
from .errors import InvalidInputError, NumericError

TSIRELSON = qsim.TSIRELSON
CHSH_CLASSICAL_BOUND = 2.0


@dataclass(frozen=True, eq=False)
class TrainPair:
    x_plus: np.ndarray
    x_minus: np.ndarray

    def __post_init__(self):
        xp = np.asarray(self.x_plus, dtype=np.float64).reshape(-1)
        xm = np.asarray(self.x_minus, dtype=np.float64).reshape(-1)
        if xp.size != xm.size:
            raise InvalidInputError("pair members differ in feature dimension")
        object.__setattr__(self, "x_plus", xp)
        object.__setattr__(self, "x_minus", xm)


def make_pairs(t_plus, t_minus, seed, strict=True):
    """Match each PLUS sample with one MINUS sample via a seeded permutation.

    With ``strict=False`` unequal classes are truncated to the smaller count
    (surplus samples at the end of the longer list are dropped).
    """
    t_plus, t_minus = list(t_plus), list(t_minus)
    if not t_plus or not t_minus:
        raise InvalidInputError("both classes need at least one training sample")
    if len(t_plus) != len(t_minus):
        if strict:
            raise InvalidInputError(
                f"class sizes differ ({len(t_plus)} vs {len(t_minus)}); pairing needs equal counts"
            )
        m = min(len(t_plus), len(t_minus))
        warnings.warn(
            f"truncating classes to {m} samples each for pairing "
            f"(dropped {len(t_plus) - m} plus, {len(t_minus) - m} minus)",
            stacklevel=2,
        )
        t_plus, t_minus = t_plus[:m], t_minus[:m]
    perm = np.random.default_rng(seed).permutation(len(t_minus))
    return [TrainPair(xp, t_minus[j]) for xp, j in zip(t_plus, perm)]


def pair_state(a, b):
    """``(a|0> + b|1>) / sqrt(2)`` with the label qubit second: ``[a0, b0, a1, b1] / sqrt(2)``."""
    a = qsim.as_state(a, 1)
    b = qsim.as_state(b, 1)
    return np.array([a[0], b[0], a[1], b[1]], dtype=np.complex128) / qsim.SQRT2


def training_state(pair: TrainPair, p: ModelParams):
    return pair_state(forward(pair.x_plus, p), forward(pair.x_minus, p))


def bell_expectation(state):
    return qsim.expectation(qsim.bell_operator(), state)


def closed_form_bell(a, b):
    """``<B>`` of the paired state written directly from the two one-qubit states."""
    a = qsim.as_state(a, 1)
    b = qsim.as_state(b, 1)
    return float(TSIRELSON * (np.conj(b[0]) * a[1]).real)


def _gap(bell_values):
    return np.maximum(TSIRELSON - np.abs(bell_values), 0.0)


def pair_cost(pair: TrainPair, p: ModelParams):
    return float(_gap(bell_expectation(training_state(pair, p))))


@dataclass(frozen=True, eq=False)
class CostReport:
    raw: float
    normalized: float
    per_pair: np.ndarray


def _report(per_pair, scale=TSIRELSON):
    per_pair = np.asarray(per_pair, dtype=np.float64)
    raw = float(np.mean(per_pair))
    return CostReport(raw, raw / scale, per_pair)


def stack_pairs(pairs: Sequence[TrainPair]):
    if not pairs:
        raise InvalidInputError("need at least one training pair")
    Xp = np.array([pr.x_plus for pr in pairs])
    Xm = np.array([pr.x_minus for pr in pairs])
    return Xp, Xm


def pair_bell_values(Xp, Xm, p: ModelParams):
    """Per-pair Bell expectations via the batched kernel."""
    return kernels.pair_bell(Xp, Xm, p.w, p.rotation(), qsim.bell_operator())


def bell_pair_costs(Xp, Xm, p: ModelParams):
    return _gap(pair_bell_values(Xp, Xm, p))


def baseline_pair_costs(Xp, Xm, p: ModelParams):
    """Per-pair conventional cost ``(|f(x+) - 1| + |f(x-) + 1|) / 2`` with ``f = P- - P+``."""
    fp = 2.0 * batch_prob_minus(Xp, p) - 1.0
    fm = 2.0 * batch_prob_minus(Xm, p) - 1.0
    return (np.abs(fp - 1.0) + np.abs(fm + 1.0)) / 2.0


COST_FUNCTIONS = {"bell": bell_pair_costs, "baseline": baseline_pair_costs}
# Upper bound of each per-pair cost, used to report costs on [0, 1].
COST_SCALE = {"bell": TSIRELSON, "baseline": 2.0}


def total_cost(pairs: Sequence[TrainPair], p: ModelParams) -> CostReport:
    Xp, Xm = stack_pairs(pairs)
    return _report(bell_pair_costs(Xp, Xm, p))


def baseline_cost(t_plus, t_minus, p: ModelParams):
    """Mean absolute error of ``f = P- - P+`` against targets +1 / -1 over all samples."""
    t_plus = np.asarray(t_plus, dtype=np.float64).reshape(len(t_plus), -1) if len(t_plus) else None
    t_minus = np.asarray(t_minus, dtype=np.float64).reshape(len(t_minus), -1) if len(t_minus) else None
    if t_plus is None and t_minus is None:
        raise InvalidInputError("baseline cost needs a non-empty training set")
    total, n = 0.0, 0
    if t_plus is not None:
        total += float(np.sum(np.abs(2.0 * batch_prob_minus(t_plus, p) - 2.0)))
        n += t_plus.shape[0]
    if t_minus is not None:
        total += float(np.sum(np.abs(2.0 * batch_prob_minus(t_minus, p))))
        n += t_minus.shape[0]
    return total / n


def gradient(p: ModelParams, cost: Callable[[ModelParams], float], h=1e-4):
    """Central finite-difference gradient over ``[w..., theta...]``."""
    if not h > 0:
        raise InvalidInputError("finite-difference step must be positive")
    v = p.as_vector()
    d = p.dim
    g = np.empty_like(v)
    for j in range(v.size):
        up, down = v.copy(), v.copy()
        up[j] += h
        down[j] -= h
        c_up = cost(ModelParams.from_vector(up, d))
        c_down = cost(ModelParams.from_vector(down, d))
        if not (math.isfinite(c_up) and math.isfinite(c_down)):
            raise NumericError(f"non-finite cost while differentiating coordinate {j}")
        g[j] = (c_up - c_down) / (2.0 * h)
    return g


@dataclass(frozen=True, eq=False)
class AdamState:
    step: int
    m: np.ndarray
    v: np.ndarray
    lr: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def initial(cls, n, lr=0.1, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(0, np.zeros(n), np.zeros(n), lr, beta1, beta2, eps)


def adam_step(state: AdamState, p: ModelParams, g):
    g = np.asarray(g, dtype=np.float64)
    if g.shape != state.m.shape:
        raise InvalidInputError(f"gradient has {g.size} entries, optimizer tracks {state.m.size}")
    t = state.step + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * g
    v = state.beta2 * state.v + (1.0 - state.beta2) * g * g
    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)
    with np.errstate(over="ignore", invalid="ignore"):
        new_vec = p.as_vector() - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    if not np.all(np.isfinite(new_vec)):
        raise NumericError(f"optimizer step {t} produced non-finite parameters")
    return replace(state, step=t, m=m, v=v), ModelParams.from_vector(new_vec, p.dim)


class Mode(str, enum.Enum):
    BATCH = "batch"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    seed: int = 0
    learning_rate: float = 0.05
    fd_step: float = 1e-4
    mode: Mode = Mode.BATCH
    reshuffle_pairs: bool = False
    w_init: tuple = (-0.1, 0.1)
    theta_init: tuple = (-math.pi, math.pi)
    cost: str = "bell"
    strict_pairs: bool = True
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise InvalidInputError(f"epochs must be a positive integer, got {self.epochs!r}")
        if not self.fd_step > 0:
            raise InvalidInputError("fd_step must be positive")
        if not self.learning_rate > 0:
            raise InvalidInputError("learning_rate must be positive")
        if self.cost not in COST_FUNCTIONS:
            raise InvalidInputError(f"cost must be one of {sorted(COST_FUNCTIONS)}, got {self.cost!r}")
        for lo, hi in (self.w_init, self.theta_init):
            if not lo <= hi:
                raise InvalidInputError("init ranges need low <= high")


@dataclass(frozen=True, eq=False)
class RunRecord:
    epoch: int
    raw_cost: float
    normalized_cost: float
    train_accuracy: float
    test_accuracy: float | None
    w: tuple = field(default=())
    theta: tuple = field(default=())


def _check_finite(costs, where):
    if not np.all(np.isfinite(costs)):
        raise NumericError(f"non-finite cost encountered {where}")


def stochastic_epoch(Xp, Xm, p: ModelParams, order, cost_fn=bell_pair_costs,
                     adam: AdamState | None = None, h=1e-4):
    """Visit pairs one at a time in ``order``, stepping after each when ``adam`` is given.

    Returns ``(costs_in_visit_order, params, adam)``.  With ``adam=None`` the
    parameters stay frozen and the mean of the returned costs is the batch cost.
    """
    costs = np.empty(len(order))
    for k, i in enumerate(order):
        xp, xm = Xp[i : i + 1], Xm[i : i + 1]
        c = cost_fn(xp, xm, p)[0]
        _check_finite([c], f"on pair {i}")
        costs[k] = c
        if adam is not None:
            g = gradient(p, lambda q: float(cost_fn(xp, xm, q)[0]), h)
            adam, p = adam_step(adam, p, g)
    return costs, p, adam


def _streams(seed):
    """Independent generators for initialization, pairing and pair visiting order."""
    return [np.random.default_rng(ss) for ss in np.random.SeedSequence(seed).spawn(3)]


def _draw_pairs(pair_rng, t_plus, t_minus, strict):
    return make_pairs(t_plus, t_minus, int(pair_rng.integers(0, 2**63 - 1)), strict=strict)


def training_pairs(t_plus, t_minus, seed, strict=True):
    """The pairing ``train`` builds before its first epoch for the same seed."""
    _, pair_rng, _ = _streams(seed)
    return _draw_pairs(pair_rng, list(t_plus), list(t_minus), strict)


def _eval_accuracy(samples, p):
    return None if not samples else accuracy(samples, p)


def train(config: TrainConfig, t_plus, t_minus, eval_sets=None):
    """Fit a classifier; returns ``(params, records)`` with one record per epoch.

    ``eval_sets`` is an optional ``(train_samples, test_samples)`` tuple of
    ``[(x, Label), ...]`` lists used for the accuracy columns; by default the
    training samples themselves are scored and the test column is ``None``.
    Each record holds the cost seen during the epoch (before its updates) and
    the accuracies of the parameters at the end of the epoch.
    """
    t_plus = [np.asarray(x, dtype=np.float64) for x in t_plus]
    t_minus = [np.asarray(x, dtype=np.float64) for x in t_minus]
    if not t_plus or not t_minus:
        raise InvalidInputError("both classes need training samples")
    d = t_plus[0].size

    init_rng, pair_rng, step_rng = _streams(config.seed)
    p = ModelParams.random(d, init_rng, config.w_init, config.theta_init)

    def new_pairs():
        return stack_pairs(_draw_pairs(pair_rng, t_plus, t_minus, config.strict_pairs))

    Xp, Xm = new_pairs()
    m = Xp.shape[0]
    if eval_sets is None:
        train_samples = [(x, Label.PLUS) for x in t_plus] + [(x, Label.MINUS) for x in t_minus]
        test_samples = None
    else:
        train_samples, test_samples = eval_sets

    cost_fn = COST_FUNCTIONS[config.cost]
    adam = AdamState.initial(d + 3, config.learning_rate, config.beta1, config.beta2, config.eps)
    records = []
    for epoch in range(1, config.epochs + 1):
        if config.reshuffle_pairs and epoch > 1:
            Xp, Xm = new_pairs()
        if config.mode is Mode.BATCH:
            costs = cost_fn(Xp, Xm, p)
            _check_finite(costs, f"at epoch {epoch}")

            def objective(q):
                return float(np.mean(cost_fn(Xp, Xm, q)))

            adam, p = adam_step(adam, p, gradient(p, objective, config.fd_step))
        else:
            order = step_rng.permutation(m)
            costs, p, adam = stochastic_epoch(Xp, Xm, p, order, cost_fn, adam, config.fd_step)
        report = _report(costs, COST_SCALE[config.cost])
        records.append(
            RunRecord(
                epoch=epoch,
                raw_cost=report.raw,
                normalized_cost=report.normalized,
                train_accuracy=accuracy(train_samples, p),
                test_accuracy=_eval_accuracy(test_samples, p),
                w=tuple(float(v) for v in p.w),
                theta=p.theta,
            )
        )
    return p, records
