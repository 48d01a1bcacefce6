# -*- coding: UTF-8 -*-

from trellisml.__version__ import __version__
from trellisml.channel import NoiseModel, ReceivedSequence, SymbolMapper, modulate, transmit
from trellisml.convcode import Codeword, GeneratorMatrix, Message, Trellis, encode
from trellisml.exceptions import TrellisException
from trellisml.galois import GF

__all__ = [
    "__version__",
    "GF",
    "GeneratorMatrix", "Message", "Codeword", "Trellis", "encode",
    "SymbolMapper", "NoiseModel", "ReceivedSequence", "modulate", "transmit",
    "TrellisException",
]
