# -*- coding: UTF-8 -*-

"""
Seeded Monte-Carlo sweeps over SNR and block length.

Every trial draws its message and noise from ``trial_rng(seed, N, trial)``, so a
trial gives the same record in any order, in any worker and at every SNR of the
grid (the unit-variance noise is shared and only scaled).
"""

import functools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from progress.bar import Bar

from trellisml.channel import NoiseModel, ReceivedSequence, SymbolMapper, modulate, transmit, trial_rng
from trellisml.convcode import GeneratorMatrix, Message, Trellis, encode
from trellisml.decoders import (NllParams, brute_force_ml, nll_confirm, parse_strategy,
                                sll_augmented_viterbi, sphere_branch_lower_bound, three_step_decode,
                                viterbi_decode)
from trellisml.decoders.suboptimal import run_suboptimal
from trellisml.exceptions import ConfigurationError, OracleMismatch
from trellisml.metrics import negative_sll

logger = logging.getLogger(__name__)

DECODERS = ("viterbi", "sll_viterbi", "three_step", "suboptimal", "brute_force")
ML_DECODERS = ("viterbi", "sll_viterbi", "three_step", "brute_force")
GUESS_MODES = ("ideal", "suboptimal")
SWEEP_KINDS = ("complexity", "opt-prob", "sll")

ORACLE_BUDGET = 2 ** 16
ORACLE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TrialConfig:
    code: GeneratorMatrix
    mapper: SymbolMapper
    N: Tuple[int, ...]
    snrs: Tuple[float, ...]
    trials: int
    seed: int
    decoders: Tuple[str, ...] = ("viterbi", "three_step")
    xi: Optional[float] = None
    M: Optional[int] = None
    condition_a: str = "literal"
    boundary: str = "clip"
    guess_mode: str = "suboptimal"
    strategy: str = "decision_feedback"
    list_size: Optional[int] = None
    perturb_count: int = 1
    perturb_fraction: float = 0.5
    oracle_budget: int = ORACLE_BUDGET
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("need at least one trial", key="trials")
        if not self.N or min(self.N) < 1:
            raise ConfigurationError("block length grid must be nonempty and positive", key="N")
        if not self.snrs or min(self.snrs) <= 0:
            raise ConfigurationError("snr grid must be nonempty and positive", key="snr")
        for name in self.decoders:
            if name not in DECODERS:
                raise ConfigurationError("unknown decoder %r, expected one of %s"
                                         % (name, ", ".join(DECODERS)), key="decoders")
        if self.guess_mode not in GUESS_MODES:
            raise ConfigurationError("guess mode must be one of %s" % ", ".join(GUESS_MODES), key="guess_mode")
        if self.perturb_count < 1:
            raise ConfigurationError("perturbation needs at least one symbol", key="perturb_count")
        if not 0 <= self.perturb_fraction < 1:
            raise ConfigurationError("perturbation position must lie in [0, 1)", key="perturb_fraction")
        if self.threads < 1:
            raise ConfigurationError("threads must be positive", key="threads")
        parse_strategy(self.strategy, self.list_size)

    def nll_params(self) -> NllParams:
        return NllParams.for_code(self.code, self.mapper, xi=self.xi, M=self.M,
                                  condition_a=self.condition_a, boundary=self.boundary)


@dataclass
class DecoderOutcome:
    labels: Tuple[int, ...]
    metric: float
    visited_states: int
    normalized: float
    stage_costs: Dict[str, float] = field(default_factory=dict)


@dataclass
class TrialRecord:
    trial: int
    snr: float
    N: int
    outcomes: Dict[str, DecoderOutcome] = field(default_factory=dict)
    oracle_checked: bool = False
    sub_symbol_err: Optional[float] = None
    opt_m: Optional[bool] = None
    sll_accept: Optional[bool] = None


@dataclass
class CellResult:
    decoder: str
    snr: float
    N: int
    trials: int
    seed: int
    mean_visited_per_t: Optional[float] = None
    std_visited_per_t: Optional[float] = None
    ml_match_rate: Optional[float] = None
    sub_symbol_err: Optional[float] = None
    opt_m_rate: Optional[float] = None
    sll_accept_rate: Optional[float] = None
    samples: Tuple[float, ...] = ()
    ratios: Tuple[float, ...] = ()

    @property
    def key(self):
        return self.decoder, self.snr, self.N


@dataclass
class SweepResult:
    kind: str
    cells: List[CellResult] = field(default_factory=list)

    def sorted_cells(self) -> List[CellResult]:
        return sorted(self.cells, key=lambda c: c.key)

    def cell(self, decoder: str, snr: float, N: int) -> CellResult:
        for c in self.cells:
            if c.key == (decoder, snr, N):
                return c
        raise KeyError((decoder, snr, N))


def _outcome(result) -> DecoderOutcome:
    return DecoderOutcome(tuple(int(v) for v in result.message.indices()), float(result.metric),
                          result.stats.visited_states, result.stats.normalized, dict(result.stats.stage_costs))


def _draw(cfg: TrialConfig, snr: float, N: int, trial: int):
    rng = trial_rng(cfg.seed, N, trial)
    labels = rng.integers(0, cfg.code.symbol_count, size=N)
    msg = Message.from_indices(labels, cfg.code.field, cfg.code.k)
    cw = encode(msg, cfg.code)
    rx = transmit(modulate(cw, cfg.mapper), NoiseModel.from_snr(snr), rng)
    return msg, cw, rx


def _perturb(msg: Message, start: int, count: int, Q: int, k: int) -> Message:
    labels = msg.indices().copy()
    stop = min(start + count, labels.size)
    labels[start:stop] = (labels[start:stop] + 1) % Q
    return Message.from_indices(labels, msg.field, k)


def _check_oracle(record: TrialRecord, oracle: DecoderOutcome) -> None:
    for name, outcome in record.outcomes.items():
        if name not in ML_DECODERS or name == "brute_force":
            continue
        if abs(outcome.metric - oracle.metric) > ORACLE_TOLERANCE or outcome.labels != oracle.labels:
            raise OracleMismatch("%s disagrees with brute force at snr=%g N=%d trial=%d: metric %.12g vs %.12g"
                                 % (name, record.snr, record.N, record.trial, outcome.metric, oracle.metric))


def run_trial(cfg: TrialConfig, trial_index: int, snr: Optional[float] = None, N: Optional[int] = None,
              kind: str = "complexity") -> TrialRecord:
    """
    One seeded trial: draw, encode, transmit, decode and measure.

    :param kind: ``complexity`` runs the configured decoders, ``opt-prob`` tests the
        transmitted codeword at a random interior index, ``sll`` measures the
        prefix-bound test against the transmitted message
    """
    snr = cfg.snrs[0] if snr is None else snr
    N = cfg.N[0] if N is None else N
    if kind not in SWEEP_KINDS:
        raise ConfigurationError("unknown sweep kind %r" % kind, key="kind")

    code, mapper = cfg.code, cfg.mapper
    msg, cw, rx = _draw(cfg, snr, N, trial_index)
    record = TrialRecord(trial_index, snr, N)

    if kind == "opt-prob":
        params = cfg.nll_params()
        lo, hi = params.reach, N - params.reach
        if lo >= hi:
            raise ConfigurationError("N=%d leaves no interior index for a window of reach %d"
                                     % (N, params.reach), key="N")
        m = int(trial_rng(cfg.seed, N, trial_index, 1).integers(lo, hi))
        record.opt_m = nll_confirm(rx, cw, m, params, mapper)
        return record

    trellis = Trellis(code, N)
    if kind == "sll":
        p = int(math.floor(cfg.perturb_fraction * N))
        count = min(cfg.perturb_count, N - p)
        wrong = _perturb(msg, p, count, code.symbol_count, code.k)
        bound = sphere_branch_lower_bound(rx, Message(wrong.symbols[:p + count], code.field), code, mapper)
        record.sll_accept = bound > negative_sll(rx, cw, mapper)
        record.outcomes["viterbi"] = _outcome(viterbi_decode(rx, trellis, mapper))
        record.outcomes["sll_viterbi"] = _outcome(sll_augmented_viterbi(rx, trellis, mapper, msg))
    else:
        _decode_configured(cfg, record, msg, rx, trellis)

    if code.symbol_count ** N <= cfg.oracle_budget:
        oracle = _outcome(brute_force_ml(rx, code, mapper, N, budget=cfg.oracle_budget))
        if "brute_force" in cfg.decoders:
            record.outcomes["brute_force"] = oracle
        _check_oracle(record, oracle)
        record.oracle_checked = True
    return record


def _decode_configured(cfg: TrialConfig, record: TrialRecord, msg: Message, rx: ReceivedSequence,
                       trellis: Trellis) -> None:
    code, mapper, N = cfg.code, cfg.mapper, record.N
    guess = msg if cfg.guess_mode == "ideal" else None
    sub_labels = None
    needs_guess = guess is None and ("three_step" in cfg.decoders or "sll_viterbi" in cfg.decoders)
    if "suboptimal" in cfg.decoders or needs_guess:
        sub_labels, visits = run_suboptimal(rx, code, mapper, N, cfg.strategy, cfg.list_size)
        sub_msg = Message.from_indices(sub_labels, code.field, code.k)
        record.outcomes["suboptimal"] = DecoderOutcome(tuple(int(v) for v in sub_labels),
                                                       negative_sll(rx, encode(sub_msg, code), mapper),
                                                       visits, visits / N)
        record.sub_symbol_err = float(np.mean(sub_labels != msg.indices()))
        if guess is None:
            guess = sub_msg

    for name in cfg.decoders:
        if name == "viterbi":
            record.outcomes[name] = _outcome(viterbi_decode(rx, trellis, mapper))
        elif name == "sll_viterbi":
            record.outcomes[name] = _outcome(sll_augmented_viterbi(rx, trellis, mapper, guess))
        elif name == "three_step":
            result = three_step_decode(rx, code, mapper, cfg.nll_params(), strategy=cfg.strategy,
                                       list_size=cfg.list_size, trellis=trellis, guess=guess)
            if sub_labels is not None:
                result.stats.stage_costs["suboptimal"] = record.outcomes["suboptimal"].normalized
            record.outcomes[name] = _outcome(result)


def run_trials(cfg: TrialConfig, snr: float, N: int, kind: str = "complexity",
               show_progress: bool = False) -> List[TrialRecord]:
    """
    All trials of one cell, ordered by trial index. Runs on a process pool when
    ``cfg.threads > 1``.
    """
    work = functools.partial(run_trial, cfg, snr=snr, N=N, kind=kind)
    bar = Bar("%s snr=%g N=%d" % (kind, snr, N), max=cfg.trials) if show_progress else None
    records = []
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            for record in pool.map(work, range(cfg.trials)):
                records.append(record)
                if bar:
                    bar.next()
    else:
        for i in range(cfg.trials):
            records.append(work(i))
            if bar:
                bar.next()
    if bar:
        bar.finish()
    return records


def _mean(values: Sequence[float]) -> Optional[float]:
    return float(np.mean(values)) if len(values) else None


def _std(values: Sequence[float]) -> Optional[float]:
    if not len(values):
        return None
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def _decoder_cell(cfg: TrialConfig, name: str, snr: float, N: int, records: List[TrialRecord]) -> CellResult:
    samples = [r.outcomes[name].normalized for r in records]
    checked = [r for r in records if r.oracle_checked]
    cell = CellResult(name, snr, N, len(records), cfg.seed, _mean(samples), _std(samples), samples=tuple(samples))
    if checked and name in ML_DECODERS:
        cell.ml_match_rate = 1.0
    if name in ("suboptimal", "three_step"):
        errors = [r.sub_symbol_err for r in records if r.sub_symbol_err is not None]
        cell.sub_symbol_err = _mean(errors)
    return cell


def complexity_sweep(cfg: TrialConfig, show_progress: bool = False) -> SweepResult:
    """
    Visited states per index of every configured decoder on the SNR x N grid.
    Cells whose message space fits the oracle budget are checked against brute force.
    """
    result = SweepResult("complexity")
    for N in cfg.N:
        for snr in cfg.snrs:
            records = run_trials(cfg, snr, N, "complexity", show_progress)
            for name in cfg.decoders:
                result.cells.append(_decoder_cell(cfg, name, snr, N, records))
            logger.info("complexity snr=%g N=%d: %s", snr, N,
                        ", ".join("%s=%.4g" % (c.decoder, c.mean_visited_per_t) for c in result.cells[-len(cfg.decoders):]))
    return result


def opt_probability_sweep(cfg: TrialConfig, show_progress: bool = False) -> SweepResult:
    """
    Rate at which the transmitted codeword passes the window test at a random
    interior index.
    """
    result = SweepResult("opt-prob")
    for N in cfg.N:
        for snr in cfg.snrs:
            records = run_trials(cfg, snr, N, "opt-prob", show_progress)
            hits = [1.0 if r.opt_m else 0.0 for r in records]
            cell = CellResult("nll_test", snr, N, len(records), cfg.seed, opt_m_rate=_mean(hits), samples=tuple(hits))
            result.cells.append(cell)
            logger.info("opt-prob snr=%g N=%d: rate=%.4g", snr, N, cell.opt_m_rate)
    return result


def sll_inefficiency_sweep(cfg: TrialConfig, show_progress: bool = False) -> SweepResult:
    """
    Acceptance rate of the prefix-bound test for a message perturbed at
    ``perturb_fraction*N``, and the visited-state ratio of the bound-pruned Viterbi
    search to the full one. The guess is always the transmitted message.
    """
    result = SweepResult("sll")
    for N in cfg.N:
        for snr in cfg.snrs:
            records = run_trials(cfg, snr, N, "sll", show_progress)
            accepts = [1.0 if r.sll_accept else 0.0 for r in records]
            ratios = tuple(r.outcomes["sll_viterbi"].visited_states / r.outcomes["viterbi"].visited_states
                           for r in records)
            for name in ("viterbi", "sll_viterbi"):
                cell = _decoder_cell(cfg, name, snr, N, records)
                cell.sll_accept_rate = _mean(accepts)
                if name == "sll_viterbi":
                    cell.ratios = ratios
                result.cells.append(cell)
            logger.info("sll snr=%g N=%d: accept=%.4g mean C_sll/C_va=%.4g", snr, N, _mean(accepts), _mean(ratios))
    return result


SWEEPS = {
    "complexity": complexity_sweep,
    "opt-prob": opt_probability_sweep,
    "sll": sll_inefficiency_sweep,
}


def run_sweep(kind: str, cfg: TrialConfig, show_progress: bool = False) -> SweepResult:
    try:
        sweep = SWEEPS[kind]
    except KeyError:
        raise ConfigurationError("unknown sweep kind %r, expected one of %s" % (kind, ", ".join(SWEEP_KINDS)),
                                 key="kind")
    return sweep(cfg, show_progress=show_progress)
