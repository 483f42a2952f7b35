"""
Multistream global Extended Kalman Filter training for the Elman network.

The weights are the filter state. At every step each of the N_s streams (an
instance of the same network with its own hidden state) contributes one output
derivative column to H and one residual, and a single global update is applied:

    A  = (I / eta + H^T P H)^-1
    K  = P H A
    w' = w + K r
    P' = P - K H^T P + q I,   then P' <- (P' + P'^T) / 2

Streams are contiguous segments of the training series; their start offsets are
resampled every epoch from a seed derived from (master seed, epoch) unless
``resample_streams`` is off, in which case the epoch-0 plan is reused.
"""
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from tqdm import tqdm

from config.settings import settings
from src.core.errors import DomainError, NumericError, ShapeError
from src.core.kernels import derive_seed, make_rng
from src.models.network import ElmanNetwork, elman_shapes
from src.models.series import NormalizedSeries
from src.models.training import (
    Algorithm,
    EkfState,
    MultistreamConfig,
    StopReason,
    StreamPlan,
    TrainingReport,
)
from src.services.elman import StreamBuffer, elman_advance, tbptt_jacobian
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def sample_streams(n_train: int, config: MultistreamConfig,
                   epoch: Optional[int] = None) -> StreamPlan:
    """Draw N_s stream starts uniformly, with replacement, from [0, n_train - length].

    With ``epoch`` given the draw uses the seed derived from (config.seed, epoch);
    otherwise config.seed itself.
    """
    length = config.stream_length
    if n_train < length:
        raise DomainError(f"{n_train} training points cannot hold a stream of {length}")
    seed = config.seed if epoch is None else derive_seed(config.seed, epoch)
    rng = make_rng(seed)
    starts = rng.integers(0, n_train - length, size=config.n_streams, endpoint=True)
    return StreamPlan(starts=tuple(int(s) for s in starts), stream_length=length)


def ekf_update(weights: np.ndarray, ekf: EkfState, H: np.ndarray, residuals: np.ndarray,
               pivot_tolerance: float = 1e-12) -> Tuple[np.ndarray, EkfState]:
    """One global EKF step over m simultaneous outputs (columns of H)."""
    w = np.asarray(weights, dtype=np.float64)
    H = np.ascontiguousarray(H, dtype=np.float64)
    r = np.atleast_1d(np.asarray(residuals, dtype=np.float64))
    n_w = w.shape[0]
    if H.ndim == 1:
        H = np.ascontiguousarray(H[:, None])
    if H.shape[0] != n_w or ekf.covariance.shape != (n_w, n_w):
        raise ShapeError(f"H {H.shape} / P {ekf.covariance.shape} disagree with {n_w} weights")
    m = H.shape[1]
    if m < 1 or r.shape != (m,):
        raise ShapeError(f"{r.shape[0]} residuals for {m} derivative columns")

    P = ekf.covariance
    PH = P @ H
    S = np.eye(m) / ekf.learning_rate + H.T @ PH
    S = 0.5 * (S + S.T)
    try:
        factor = cho_factor(S, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as e:
        raise NumericError(f"innovation matrix is not positive definite: {e}") from e
    pivots = np.diag(factor[0]) ** 2
    if np.min(pivots) < pivot_tolerance:
        raise NumericError(f"innovation matrix pivot {np.min(pivots):.3e} below tolerance")

    K = cho_solve(factor, PH.T).T                  # P H A, with A = S^-1
    w_new = w + K @ r
    P_new = P - K @ PH.T
    if ekf.process_noise:
        P_new[np.diag_indices(n_w)] += ekf.process_noise
    P_new = 0.5 * (P_new + P_new.T)

    new_state = EkfState(covariance=P_new, process_noise=ekf.process_noise,
                         learning_rate=ekf.learning_rate, step=ekf.step + 1,
                         aborted=ekf.aborted)
    return w_new, new_state


def audit_covariance(P: np.ndarray) -> Tuple[float, float]:
    """(max |P - P^T|, minimum eigenvalue) of a covariance matrix."""
    asym = float(np.max(np.abs(P - P.T)))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (P + P.T))))
    return asym, min_eig


def _check_inputs(net: ElmanNetwork, values: np.ndarray, config: MultistreamConfig) -> None:
    n_in = net.layer_sizes[0]
    if config.stream_length <= n_in:
        raise DomainError(f"stream length {config.stream_length} leaves no step after "
                          f"the first {n_in}-value window")
    if values.shape[0] < config.stream_length:
        raise DomainError(f"{values.shape[0]} training points cannot hold a stream of "
                          f"{config.stream_length}")


class _EpochResult:
    __slots__ = ("weights", "ekf", "sq_error", "count", "aborted", "diverged")

    def __init__(self, weights, ekf):
        self.weights, self.ekf = weights, ekf
        self.sq_error, self.count, self.aborted, self.diverged = 0.0, 0, 0, False


def _run_epoch(weights: np.ndarray, ekf: EkfState, shapes, values: np.ndarray,
               starts: Sequence[int], n_in: int, n_hidden: int,
               config: MultistreamConfig) -> _EpochResult:
    """Advance every stream in lock-step, one global update per step."""
    result = _EpochResult(weights, ekf)
    n_streams = len(starts)
    n_w = weights.shape[0]
    hidden: List[np.ndarray] = [np.zeros(n_hidden) for _ in range(n_streams)]
    buffers = [StreamBuffer(config.tbptt_window) for _ in range(n_streams)]
    net = ElmanNetwork.from_vector(weights, shapes)

    for t in range(config.stream_length - n_in):
        H = np.empty((n_w, n_streams))
        r = np.empty(n_streams)
        for s, start in enumerate(starts):
            x = values[start + t:start + t + n_in]
            y, hidden[s] = elman_advance(net, hidden[s], buffers[s], x)
            H[:, s] = tbptt_jacobian(net, buffers[s], config.tbptt_window)
            r[s] = values[start + t + n_in] - y
        result.sq_error += float(r @ r)
        result.count += n_streams

        try:
            w_new, ekf_new = ekf_update(result.weights, result.ekf, H, r, config.pivot_tolerance)
        except NumericError as e:
            result.aborted += 1
            result.ekf = result.ekf.model_copy(update={"aborted": result.ekf.aborted + 1})
            logger.warning(f"EKF update aborted at step {t}: {e}")
            continue
        if not (np.all(np.isfinite(w_new)) and np.all(np.isfinite(ekf_new.covariance))):
            result.diverged = True
            return result
        result.weights, result.ekf = w_new, ekf_new
        net = ElmanNetwork.from_vector(w_new, shapes)
    return result


def _train(net: ElmanNetwork, values: np.ndarray, config: MultistreamConfig,
           plan_for_epoch) -> Tuple[ElmanNetwork, TrainingReport]:
    n_in, n_hidden, _ = net.layer_sizes
    shapes = elman_shapes(net.layer_sizes)
    weights = net.to_vector()
    ekf = EkfState.initial(weights.shape[0], p0=config.p0,
                           process_noise=config.process_noise,
                           learning_rate=config.learning_rate)
    steps_per_epoch = config.stream_length - n_in
    curve: List[float] = []
    reason = StopReason.MAX_EPOCHS
    started = time.perf_counter()

    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in tqdm(range(config.epochs), desc="ekf", disable=not settings.show_progress):
            starts = plan_for_epoch(epoch)
            result = _run_epoch(weights, ekf, shapes, values, starts, n_in, n_hidden, config)
            if result.diverged:
                reason = StopReason.DIVERGED
                break
            if result.aborted == steps_per_epoch:
                raise NumericError(f"every EKF update of epoch {epoch} was aborted")
            weights, ekf = result.weights, result.ekf
            mse = result.sq_error / result.count
            if not np.isfinite(mse):
                reason = StopReason.DIVERGED
                break
            curve.append(mse)
            logger.debug(f"epoch {epoch}: mse={mse:.6e} trace(P)={np.trace(ekf.covariance):.4e}")
            if mse <= config.target_mse:
                reason = StopReason.TARGET_REACHED
                break

    if reason == StopReason.DIVERGED:
        logger.warning(f"EKF training diverged after {len(curve)} epochs")
    report = TrainingReport(
        algorithm=Algorithm.EKF,
        epochs_run=len(curve),
        error_curve=curve,
        stop_reason=reason,
        wall_time=time.perf_counter() - started,
        aborted_updates=ekf.aborted,
    )
    return ElmanNetwork.from_vector(weights, shapes), report


def train_elman_multistream(net: ElmanNetwork, train: NormalizedSeries,
                            config: MultistreamConfig) -> Tuple[ElmanNetwork, TrainingReport]:
    """Multistream EKF training over contiguous segments of ``train``."""
    values = train.values
    _check_inputs(net, values, config)
    fixed = None if config.resample_streams else sample_streams(values.shape[0], config)

    def plan_for_epoch(epoch: int) -> Sequence[int]:
        if fixed is not None:
            return fixed.starts
        return sample_streams(values.shape[0], config, epoch).starts

    logger.info(f"Training Elman {net.layer_sizes} by {config.n_streams}-stream EKF, "
                f"stream length {config.stream_length}, tbptt window {config.tbptt_window}")
    trained, report = _train(net, values, config, plan_for_epoch)
    logger.info(f"EKF stopped ({report.stop_reason.value}) after {report.epochs_run} epochs, "
                f"mse={report.final_mse:.6e}")
    return trained, report


def single_stream_ekf(net: ElmanNetwork, segment: NormalizedSeries,
                      config: MultistreamConfig) -> Tuple[ElmanNetwork, TrainingReport]:
    """Plain single-stream EKF over one fixed segment, reset to a zero state every epoch.

    Multistream training with one stream whose plan always starts at offset 0 of
    ``segment`` reproduces this loop exactly.
    """
    values = segment.values
    n_in, n_hidden, _ = net.layer_sizes
    length = values.shape[0]
    if length <= n_in:
        raise DomainError(f"segment of {length} points leaves no step after the first window")
    shapes = elman_shapes(net.layer_sizes)
    weights = net.to_vector()
    ekf = EkfState.initial(weights.shape[0], p0=config.p0,
                           process_noise=config.process_noise,
                           learning_rate=config.learning_rate)
    curve: List[float] = []
    reason = StopReason.MAX_EPOCHS
    started = time.perf_counter()

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(config.epochs):
            current = ElmanNetwork.from_vector(weights, shapes)
            h = np.zeros(n_hidden)
            buffer = StreamBuffer(config.tbptt_window)
            sq_error, aborted, diverged = 0.0, 0, False
            for t in range(length - n_in):
                y, h = elman_advance(current, h, buffer, values[t:t + n_in])
                H = tbptt_jacobian(current, buffer, config.tbptt_window)[:, None]
                residual = values[t + n_in] - y
                sq_error += residual * residual
                try:
                    w_new, ekf_new = ekf_update(weights, ekf, H, np.array([residual]),
                                                config.pivot_tolerance)
                except NumericError as e:
                    aborted += 1
                    ekf = ekf.model_copy(update={"aborted": ekf.aborted + 1})
                    logger.warning(f"EKF update aborted at step {t}: {e}")
                    continue
                if not (np.all(np.isfinite(w_new)) and np.all(np.isfinite(ekf_new.covariance))):
                    diverged = True
                    break
                weights, ekf = w_new, ekf_new
                current = ElmanNetwork.from_vector(weights, shapes)
            if diverged:
                reason = StopReason.DIVERGED
                break
            if aborted == length - n_in:
                raise NumericError("every EKF update of the epoch was aborted")
            mse = sq_error / (length - n_in)
            if not np.isfinite(mse):
                reason = StopReason.DIVERGED
                break
            curve.append(mse)
            if mse <= config.target_mse:
                reason = StopReason.TARGET_REACHED
                break

    report = TrainingReport(algorithm=Algorithm.EKF, epochs_run=len(curve), error_curve=curve,
                            stop_reason=reason, wall_time=time.perf_counter() - started,
                            aborted_updates=ekf.aborted)
    return ElmanNetwork.from_vector(weights, shapes), report
