# -*- coding: UTF-8 -*-

"""
TOML configuration with command-line overrides.

Files have ``[code]``, ``[channel]``, ``[nll]``, ``[sweep]`` and ``[hmm]`` sections.
Every key can also be given as ``--key`` on the command line; flags win.
"""

import logging
import math
from os import environ
from typing import Any, Dict, List, Optional

import numpy as np
import toml

from trellisml.channel import NoiseModel, SymbolMapper
from trellisml.convcode import GeneratorMatrix
from trellisml.exceptions import ConfigurationError, UsageError
from trellisml.experiments import TrialConfig
from trellisml.galois import GF
from trellisml.hmm import HmmSystem

logger = logging.getLogger(__name__)

ENV_THREADS = "TRELLIS_ML_THREADS"
DEFAULT_N = 1000

SECTIONS = ("code", "channel", "nll", "sweep", "hmm")

# flag name -> (section, key, parser)
FLAGS = {
    "q": ("code", "q", int),
    "k": ("code", "k", int),
    "n": ("code", "n", int),
    "nu": ("code", "nu", int),
    "octal": ("code", "octal", lambda text: split_list(text, str)),
    "taps": ("code", "taps", lambda text: split_list(text, int)),
    "snr": ("channel", "snr", lambda text: split_list(text, float)),
    "sigma2": ("channel", "sigma2", float),
    "seed": ("channel", "seed", int),
    "map": ("channel", "map", lambda text: split_list(text, float)),
    "xi": ("nll", "xi", float),
    "M": ("nll", "M", int),
    "condition_a": ("nll", "condition_a", str),
    "boundary": ("nll", "boundary", str),
    "kind": ("sweep", "kind", str),
    "N": ("sweep", "N", lambda text: split_list(text, int)),
    "trials": ("sweep", "trials", int),
    "decoders": ("sweep", "decoders", lambda text: split_list(text, str)),
    "guess_mode": ("sweep", "guess_mode", str),
    "strategy": ("sweep", "strategy", str),
    "list_size": ("sweep", "list_size", int),
    "perturb_count": ("sweep", "perturb_count", int),
    "perturb_fraction": ("sweep", "perturb_fraction", float),
    "oracle_budget": ("sweep", "oracle_budget", int),
    "threads": ("sweep", "threads", int),
}


def split_list(text, kind=float) -> List[Any]:
    """
    ``"7,5"`` -> ``[7, 5]``; also accepts whitespace and newlines as separators.
    """
    if isinstance(text, (list, tuple)):
        return [kind(v) for v in text]
    parts = [p for p in str(text).replace("\n", ",").replace(" ", ",").split(",") if p.strip()]
    try:
        return [kind(p.strip()) for p in parts]
    except ValueError:
        raise ConfigurationError("malformed list %r" % (text,))


class Settings:
    """
    Configuration values by section.
    """

    def __init__(self, sections: Optional[Dict[str, Dict[str, Any]]] = None):
        self.sections = {name: {} for name in SECTIONS}
        for name, values in (sections or {}).items():
            if name not in SECTIONS:
                raise ConfigurationError("unknown section [%s]" % name, key=name)
            if not isinstance(values, dict):
                raise ConfigurationError("section [%s] must be a table" % name, key=name)
            self.sections[name].update(values)

    @classmethod
    def load(cls, path: Optional[str] = None) -> "Settings":
        if path is None:
            return cls()
        try:
            data = toml.load(path)
        except toml.TomlDecodeError as e:
            raise ConfigurationError("cannot parse %s: %s" % (path, e), key="config")
        logger.debug("loaded configuration from %s", path)
        return cls(data)

    def override(self, flags: Dict[str, Any]) -> "Settings":
        """
        Apply parsed ``--flag`` values; ``None`` means the flag was not given.
        """
        for name, value in flags.items():
            if value is None or name not in FLAGS:
                continue
            section, key, parse = FLAGS[name]
            self.sections[section][key] = parse(value) if isinstance(value, str) else value
        return self

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.sections[section].get(key, default)

    def require(self, section: str, key: str) -> Any:
        value = self.get(section, key)
        if value is None:
            raise UsageError("missing required setting `%s` (use --%s or [%s] %s = ...)" % (key, key, section, key))
        return value


def _int_value(value, key: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError("expected an integer, got %r" % (value,), key=key)


def build_code(settings: Settings) -> GeneratorMatrix:
    q = _int_value(settings.require("code", "q"), "q")
    octal = settings.get("code", "octal")
    check = bool(settings.get("code", "check_observability", True))
    if octal is not None:
        return GeneratorMatrix.from_octal(split_list(octal, str), q=q, check_observability=check)
    taps = settings.get("code", "taps")
    if taps is None:
        raise UsageError("missing generator: give `octal` or `taps` (--octal / --taps)")
    k = _int_value(settings.require("code", "k"), "k")
    n = _int_value(settings.require("code", "n"), "n")
    nu = _int_value(settings.require("code", "nu"), "nu")
    return GeneratorMatrix.from_rows(q, k, n, nu, split_list(taps, int), check_observability=check)


def build_mapper(settings: Settings, field: GF) -> SymbolMapper:
    table = settings.get("channel", "map")
    return SymbolMapper(field, None if table is None else split_list(table, float))


def snr_grid(settings: Settings) -> List[float]:
    snr = settings.get("channel", "snr")
    sigma2 = settings.get("channel", "sigma2")
    if snr is not None and sigma2 is not None:
        raise ConfigurationError("snr and sigma2 are mutually exclusive", key="snr")
    if sigma2 is not None:
        return [NoiseModel(float(sigma2)).snr]
    if snr is None:
        raise UsageError("missing required setting `snr` (use --snr or --sigma2)")
    values = split_list(snr, float) if not isinstance(snr, (int, float)) else [float(snr)]
    if not values:
        raise ConfigurationError("empty snr grid", key="snr")
    return values


def build_noise(settings: Settings) -> NoiseModel:
    return NoiseModel.from_snr(snr_grid(settings)[0])


def nll_overrides(settings: Settings) -> Dict[str, Any]:
    values = settings.sections["nll"]
    out = {key: values[key] for key in ("xi", "M", "condition_a", "boundary") if key in values}
    if "M" in out:
        out["M"] = _int_value(out["M"], "M")
    return out


def thread_count(settings: Settings) -> int:
    """
    ``--threads``, else ``TRELLIS_ML_THREADS``, else 1.
    """
    value = settings.get("sweep", "threads")
    if value is None:
        value = environ.get(ENV_THREADS)
    if value is None:
        return 1
    return _int_value(value, "threads")


def build_trial_config(settings: Settings, code: GeneratorMatrix, mapper: SymbolMapper) -> TrialConfig:
    sweep = settings.sections["sweep"]
    N = sweep.get("N", DEFAULT_N)
    N = split_list(N, int) if not isinstance(N, int) else [N]
    decoders = sweep.get("decoders", ["viterbi", "three_step"])
    seed = settings.get("channel", "seed", 0)
    return TrialConfig(
        code=code,
        mapper=mapper,
        N=tuple(N),
        snrs=tuple(snr_grid(settings)),
        trials=_int_value(sweep.get("trials", 100), "trials"),
        seed=_int_value(seed, "seed"),
        decoders=tuple(split_list(decoders, str)),
        guess_mode=str(sweep.get("guess_mode", "suboptimal")),
        strategy=str(sweep.get("strategy", "decision_feedback")),
        list_size=sweep.get("list_size"),
        perturb_count=_int_value(sweep.get("perturb_count", 1), "perturb_count"),
        perturb_fraction=float(sweep.get("perturb_fraction", 0.5)),
        oracle_budget=_int_value(sweep.get("oracle_budget", 2 ** 16), "oracle_budget"),
        threads=thread_count(settings),
        **nll_overrides(settings)
    )


def build_hmm_system(settings: Settings, mapper: SymbolMapper, snr: float) -> HmmSystem:
    """
    System from ``[hmm] transitions``, ``process`` and ``observation = "gaussian"``.
    """
    hmm = settings.sections["hmm"]
    family = hmm.get("observation", "gaussian")
    if family != "gaussian":
        raise ConfigurationError("unsupported observation family %r" % family, key="observation")
    if "transitions" not in hmm or "process" not in hmm:
        raise UsageError("[hmm] needs `transitions` and `process` tables")
    if not math.isfinite(snr):
        raise ConfigurationError("the gaussian family needs a finite snr", key="snr")
    return HmmSystem.from_tables(np.array(hmm["transitions"], dtype=np.float64),
                                 np.array(hmm["process"], dtype=np.int64), mapper, snr,
                                 terminate_at_zero=bool(hmm.get("terminate_at_zero", False)))
