"""
Tests for the end-to-end training pipeline.
"""
import math

import pytest

from src.models.run_config import ModelKind, RunConfig, SyntheticSpec
from src.models.training import Algorithm, StopReason
from src.services.elman import init_elman
from src.services.evaluation import score_elman
from src.services.pipeline import (
    comparison_configs,
    elman_warmup_rows,
    load_series,
    prepare,
    train_model,
)


def test_comparison_configs_share_data_settings():
    base = RunConfig(synthetic=SyntheticSpec(n=300, seed=2), window=5, seed=9)
    configs = comparison_configs(base)
    assert [name for name, _ in configs] == ["ff-backprop", "ff-rprop+", "ff-irprop+", "elman-ekf"]
    assert all(c.window == 5 and c.seed == 9 for _, c in configs)
    assert configs[-1][1].model == ModelKind.ELMAN
    assert configs[-1][1].trainer == Algorithm.EKF


@pytest.mark.slow
def test_elman_ekf_against_irprop_plus_on_nonlinear_ar():
    """Full-size networks on 2,000 points. The generator's map depends on the last
    two returns, which a 20-lag feedforward net already sees, so the recurrent net
    is held to the same error level rather than a fixed margin below it."""
    base = RunConfig(synthetic=SyntheticSpec(kind="nonlinear-ar", n=2000, seed=0), seed=0)
    prepared = prepare(base, load_series(base))
    ff = train_model(base, prepared, "ff-irprop+")
    elman_config = RunConfig(**base.model_dump(exclude={"model", "trainer", "hidden"}),
                             model=ModelKind.ELMAN)
    elman = train_model(elman_config, prepared, "elman-ekf")

    assert ff.config.layer_sizes == (20, 40, 1)
    assert elman.config.layer_sizes == (20, 10, 1)
    assert elman.report.stop_reason != StopReason.DIVERGED
    assert math.isfinite(ff.metrics.mse) and math.isfinite(elman.metrics.mse)
    assert elman.metrics.mse / ff.metrics.mse < 2.0

    untrained = init_elman(elman_config.layer_sizes, elman_config.seed, elman_config.init_scale)
    warmup = elman_warmup_rows(prepared, elman_config.stream_length)
    _, baseline = score_elman(untrained, warmup, prepared.test, prepared.params)
    assert elman.metrics.mse < baseline.mse
