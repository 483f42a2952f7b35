"""
Shared command-line options and RunConfig assembly.

Precedence, lowest first: Settings defaults, the ``--config`` JSON file, explicit flags.
Every flag defaults to ``None`` so that only options actually given override the file.
"""
import argparse
import json
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.core.errors import UsageError
from src.models.run_config import ModelKind, RunConfig
from src.models.series import ReturnMode
from src.models.training import Algorithm
from src.services.data_io import SYNTHETIC_DEFAULTS
from src.utils.file_utils import read_text

RPROP_FLAGS = {
    "rprop_delta0": "delta0",
    "rprop_eta_plus": "eta_plus",
    "rprop_eta_minus": "eta_minus",
    "rprop_delta_min": "delta_min",
    "rprop_delta_max": "delta_max",
}

RUN_FLAGS = (
    "label", "return_mode", "window", "split_ratio", "fit_on",
    "model", "trainer", "hidden", "init_scale", "seed",
    "target_mse", "max_epochs", "learning_rate",
    "n_streams", "stream_length", "tbptt_window", "ekf_epochs",
    "ekf_p0", "ekf_learning_rate", "ekf_process_noise", "resample_streams",
    "output_dir",
)


def parse_params(pairs: Optional[List[str]]) -> Dict[str, float]:
    """``key=value`` pairs into a dict of floats."""
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"--param expects key=value, got {pair!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise UsageError(f"--param {key}: {value!r} is not a number") from e
    return params


def add_config_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run configuration; flags override its values")


def add_data_options(parser: argparse.ArgumentParser, multiple: bool = False) -> None:
    group = parser.add_argument_group("data")
    if multiple:
        group.add_argument("--data", action="append",
                           help="date,rate CSV file (repeat for several series)")
    else:
        group.add_argument("--data", help="date,rate CSV file")
    group.add_argument("--synthetic", choices=sorted(SYNTHETIC_DEFAULTS),
                       help="generate a synthetic series instead of reading --data")
    group.add_argument("--n", type=int, help="synthetic series length")
    group.add_argument("--synth-seed", type=int, help="synthetic series seed")
    group.add_argument("--param", action="append", metavar="KEY=VALUE",
                       help="synthetic generator parameter")
    group.add_argument("--label", help="series label used in reports")


def add_preprocess_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("preprocessing")
    group.add_argument("--mode", dest="return_mode", choices=[m.value for m in ReturnMode],
                       help="return definition")
    group.add_argument("--window", type=int, help="input window length")
    group.add_argument("--split", dest="split_ratio", type=float,
                       help="fraction of rows used for training")
    group.add_argument("--fit-on", choices=["full", "train"],
                       help="returns the normalizer is fitted on")


def add_training_options(parser: argparse.ArgumentParser, with_model: bool = True) -> None:
    group = parser.add_argument_group("training")
    if with_model:
        group.add_argument("--model", choices=[m.value for m in ModelKind])
        group.add_argument("--trainer", choices=[a.value for a in Algorithm])
        group.add_argument("--hidden", type=int, help="hidden layer size")
    group.add_argument("--init-scale", type=float, help="initial weights drawn from U(-s, s)")
    group.add_argument("--seed", type=int, help="weight and stream sampling seed")
    group.add_argument("--target-mse", type=float)
    group.add_argument("--max-epochs", type=int)
    group.add_argument("--learning-rate", type=float, help="backprop learning rate")
    group.add_argument("--rprop-delta0", type=float)
    group.add_argument("--rprop-eta-plus", type=float)
    group.add_argument("--rprop-eta-minus", type=float)
    group.add_argument("--rprop-delta-min", type=float)
    group.add_argument("--rprop-delta-max", type=float)

    ekf = parser.add_argument_group("multistream EKF")
    ekf.add_argument("--streams", dest="n_streams", type=int)
    ekf.add_argument("--stream-length", type=int)
    ekf.add_argument("--tbptt-window", type=int)
    ekf.add_argument("--ekf-epochs", type=int)
    ekf.add_argument("--ekf-p0", type=float, help="initial covariance scale")
    ekf.add_argument("--ekf-rate", dest="ekf_learning_rate", type=float)
    ekf.add_argument("--ekf-q", dest="ekf_process_noise", type=float, help="process noise")
    ekf.add_argument("--fixed-streams", dest="resample_streams", action="store_const",
                     const=False, help="keep the epoch-0 stream starts for every epoch")


def add_output_option(parser: argparse.ArgumentParser, required: bool = False,
                      help: str = "output directory") -> None:
    parser.add_argument("--out", dest="output_dir", required=required, help=help)


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        payload = json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise UsageError(f"config file {path} is not valid JSON: {e}") from e
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e}") from e
    if not isinstance(payload, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return payload


def _explicit(args: argparse.Namespace, name: str) -> Any:
    return getattr(args, name, None)


def build_run_config(args: argparse.Namespace, data: Optional[str] = None,
                     **overrides: Any) -> RunConfig:
    """Merge config file and flags into a validated RunConfig.

    ``data`` replaces ``--data`` (used when one invocation covers several files);
    keyword overrides take precedence over everything else.
    """
    merged = load_config_file(_explicit(args, "config"))

    for name in RUN_FLAGS:
        value = _explicit(args, name)
        if value is not None:
            merged[name] = value

    rprop = dict(merged.get("rprop") or {})
    for flag, key in RPROP_FLAGS.items():
        value = _explicit(args, flag)
        if value is not None:
            rprop[key] = value
    if rprop:
        merged["rprop"] = rprop

    data_path = data if data is not None else _explicit(args, "data")
    if isinstance(data_path, list):
        data_path = data_path[0] if data_path else None
    synthetic = dict(merged.get("synthetic") or {})
    if _explicit(args, "synthetic"):
        synthetic["kind"] = args.synthetic
    if _explicit(args, "n") is not None:
        synthetic["n"] = args.n
    if _explicit(args, "synth_seed") is not None:
        synthetic["seed"] = args.synth_seed
    params = parse_params(_explicit(args, "param"))
    if params:
        synthetic["params"] = {**synthetic.get("params", {}), **params}

    if data_path:
        if _explicit(args, "synthetic"):
            raise UsageError("give either --data or --synthetic, not both")
        merged["data"] = data_path
        merged.pop("synthetic", None)
    elif synthetic:
        merged["synthetic"] = synthetic
        merged.pop("data", None)

    merged.update(overrides)
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as e:
        raise UsageError(f"invalid run configuration: {e}") from e
