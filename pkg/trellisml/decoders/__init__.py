# -*- coding: UTF-8 -*-

from trellisml.decoders.base import ComplexityStats, DecodeResult, SymbolSetSequence
from trellisml.decoders.brute_force import BRUTE_FORCE_BUDGET, brute_force_ml
from trellisml.decoders.nll import NllParams, build_symbol_sets, nll_confirm, window_multiplier
from trellisml.decoders.sphere import (codeword_distance_bound, free_distance, sll_augmented_viterbi,
                                       sphere_branch_lower_bound, whole_codeword_optimality_test)
from trellisml.decoders.suboptimal import parse_strategy, suboptimal_decode
from trellisml.decoders.three_step import three_step_decode
from trellisml.decoders.viterbi import modified_viterbi, viterbi_decode

__all__ = [
    "ComplexityStats", "DecodeResult", "SymbolSetSequence",
    "BRUTE_FORCE_BUDGET", "brute_force_ml",
    "NllParams", "build_symbol_sets", "nll_confirm", "window_multiplier",
    "codeword_distance_bound", "free_distance", "sll_augmented_viterbi", "sphere_branch_lower_bound",
    "whole_codeword_optimality_test",
    "parse_strategy", "suboptimal_decode",
    "three_step_decode",
    "modified_viterbi", "viterbi_decode",
]
