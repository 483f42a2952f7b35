"""
First-order trainers for the feedforward network.

* backprop: plain full-batch gradient descent, w <- w - rate * g
* rprop+:   sign-based per-weight step sizes with weight-backtracking on sign flips
* irprop+:  as rprop+, but a flip only reverts the previous step if the epoch
            error went up

All three work on the canonical weight vector of ``MlpNetwork``.
"""
import time
from typing import Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import settings
from src.core.errors import DomainError, NumericError, ShapeError
from src.models.network import Gradient, MlpNetwork
from src.models.series import SupervisedSet
from src.models.training import (
    Algorithm,
    RpropConstants,
    RpropState,
    StopCriteria,
    StopReason,
    TrainingReport,
)
from src.services.mlp import mlp_gradient
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def _vectors(net: MlpNetwork, grad: Gradient) -> Tuple[np.ndarray, np.ndarray]:
    if net.shapes() != grad.shapes():
        raise ShapeError(f"gradient shapes {grad.shapes()} do not match network {net.shapes()}")
    return net.to_vector(), grad.to_vector()


def _rebuild(net: MlpNetwork, w: np.ndarray) -> MlpNetwork:
    if not np.all(np.isfinite(w)):
        raise NumericError("update produced non-finite weights")
    return MlpNetwork.from_vector(w, net.shapes())


def _gd(w: np.ndarray, g: np.ndarray, rate: float) -> np.ndarray:
    return w - rate * g


def _rprop(w: np.ndarray, g: np.ndarray, state: RpropState,
           error_t: Optional[float]) -> Tuple[np.ndarray, RpropState]:
    """Shared RPROP+ / iRPROP+ rule; ``error_t`` None selects unconditional backtracking."""
    n = w.shape[0]
    if state.step_sizes.shape != (n,):
        raise ShapeError(f"state tracks {state.step_sizes.shape[0]} weights, network has {n}")
    c = state.constants
    product = g * state.prev_grad
    grow, shrink, keep = product > 0, product < 0, product == 0

    delta = state.step_sizes.copy()
    delta[grow] = np.minimum(delta[grow] * c.eta_plus, c.delta_max)
    delta[shrink] = np.maximum(delta[shrink] * c.eta_minus, c.delta_min)

    dw = np.zeros(n)
    moving = grow | keep
    dw[moving] = -np.sign(g[moving]) * delta[moving]
    if error_t is None or error_t > state.prev_error:
        dw[shrink] = -state.prev_delta_w[shrink]

    stored = g.copy()
    stored[shrink] = 0.0
    new_state = RpropState(
        step_sizes=delta,
        prev_grad=stored,
        prev_delta_w=dw,
        prev_error=state.prev_error if error_t is None else error_t,
        constants=c,
    )
    return w + dw, new_state


def gd_step(net: MlpNetwork, grad: Gradient, rate: float) -> MlpNetwork:
    """One backpropagation step."""
    if not rate > 0:
        raise DomainError(f"learning rate must be positive, got {rate}")
    w, g = _vectors(net, grad)
    return _rebuild(net, _gd(w, g, rate))


def rprop_plus_step(net: MlpNetwork, grad: Gradient,
                    state: RpropState) -> Tuple[MlpNetwork, RpropState]:
    """One RPROP+ step; a gradient sign flip reverts the previous weight change."""
    w, g = _vectors(net, grad)
    w_new, new_state = _rprop(w, g, state, None)
    return _rebuild(net, w_new), new_state


def irprop_plus_step(net: MlpNetwork, grad: Gradient, state: RpropState,
                     error_t: float) -> Tuple[MlpNetwork, RpropState]:
    """One iRPROP+ step; reverts on a sign flip only when ``error_t`` exceeds the last error."""
    w, g = _vectors(net, grad)
    w_new, new_state = _rprop(w, g, state, float(error_t))
    return _rebuild(net, w_new), new_state


def train_feedforward(net: MlpNetwork, train: SupervisedSet,
                      algorithm: Algorithm = Algorithm.IRPROP_PLUS,
                      stop: Optional[StopCriteria] = None,
                      learning_rate: float = 0.01,
                      constants: Optional[RpropConstants] = None) -> Tuple[MlpNetwork, TrainingReport]:
    """Full-batch epochs of gradient -> step -> record MSE until a stop rule fires.

    ``error_curve[k]`` is the training MSE at the start of epoch k, i.e. the loss
    the epoch's gradient was evaluated at. Divergence (non-finite loss or weights)
    ends the run with ``StopReason.DIVERGED`` instead of raising.
    """
    algorithm = Algorithm(algorithm)
    if algorithm == Algorithm.EKF:
        raise DomainError("the ekf trainer applies to Elman networks only")
    stop = stop or StopCriteria()
    if len(train) == 0:
        raise DomainError("training set is empty")
    if not learning_rate > 0:
        raise DomainError(f"learning rate must be positive, got {learning_rate}")

    shapes = net.shapes()
    w = net.to_vector()
    state = RpropState.initial(w.shape[0], constants or RpropConstants())
    curve = []
    reason = StopReason.MAX_EPOCHS
    current = net
    started = time.perf_counter()

    logger.info(f"Training {net.layer_sizes} with {algorithm.value} on {len(train)} samples")
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in tqdm(range(stop.max_epochs), desc=algorithm.value,
                          disable=not settings.show_progress):
            loss, grad = mlp_gradient(current, train)
            g = grad.to_vector()
            if not (np.isfinite(loss) and np.all(np.isfinite(g))):
                reason = StopReason.DIVERGED
                break
            curve.append(loss)
            logger.debug(f"epoch {epoch}: mse={loss:.6e}")
            if loss <= stop.target_mse:
                reason = StopReason.TARGET_REACHED
                break

            if algorithm == Algorithm.BACKPROP:
                w = _gd(w, g, learning_rate)
            elif algorithm == Algorithm.RPROP_PLUS:
                w, state = _rprop(w, g, state, None)
            else:
                w, state = _rprop(w, g, state, loss)

            if not np.all(np.isfinite(w)):
                reason = StopReason.DIVERGED
                break
            current = MlpNetwork.from_vector(w, shapes)

    if reason == StopReason.DIVERGED:
        logger.warning(f"{algorithm.value} diverged after {len(curve)} epochs")
    report = TrainingReport(
        algorithm=algorithm,
        epochs_run=len(curve),
        error_curve=curve,
        stop_reason=reason,
        wall_time=time.perf_counter() - started,
    )
    logger.info(f"{algorithm.value} stopped ({reason.value}) after {report.epochs_run} epochs, "
                f"mse={report.final_mse:.6e}")
    return current, report
