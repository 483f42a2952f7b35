"""
Configuration settings for the exchange-rate forecasting toolkit.
"""
from typing import Optional

try:
    from pydantic_settings import BaseSettings, SettingsConfigDict
except ImportError:  # pragma: no cover
    from pydantic import BaseSettings
    SettingsConfigDict = dict


class Settings(BaseSettings):
    """Toolkit settings. Defaults give the 20-40-1 feedforward and 20-10-1 Elman setup."""

    # Output Configuration
    output_dir: str = "runs"

    # Logging Configuration
    log_level: str = "INFO"
    log_dir: Optional[str] = None
    show_progress: bool = False

    # Preprocessing Configuration
    return_mode: str = "log-diff"
    window: int = 20
    split_ratio: float = 0.8
    fit_on: str = "full"

    # Network Configuration
    ff_hidden: int = 40
    elman_hidden: int = 10
    init_scale: float = 0.1
    seed: int = 0

    # Feedforward Training Configuration
    target_mse: float = 1e-3
    max_epochs: int = 1000
    learning_rate: float = 0.01
    rprop_delta0: float = 0.1
    rprop_eta_plus: float = 1.2
    rprop_eta_minus: float = 0.5
    rprop_delta_min: float = 1e-6
    rprop_delta_max: float = 50.0

    # Multistream EKF Configuration
    n_streams: int = 20
    stream_length: int = 200
    tbptt_window: int = 20
    ekf_epochs: int = 10
    ekf_p0: float = 100.0
    ekf_learning_rate: float = 0.5
    ekf_process_noise: float = 1e-6
    ekf_pivot_tolerance: float = 1e-12
    resample_streams: bool = True

    # Forecast Configuration
    clamp_epsilon: float = 1e-9

    model_config = SettingsConfigDict(
        env_prefix="FXNN_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
