"""Citation extraction for Cyrillic (GOST-style) scholarly references.

Typical use::

    from cyrcite import Config, Model, parse_reference

    cfg = Config()
    ref = parse_reference(line, Model.default(), cfg.lexicons())
"""
from .config import Config
from .labeler import Model, predict, train
from .lexicons import Lexicons, NameLexicon, mine_candidate_names
from .normalize import ScriptClass, classify_script, repair_homoglyphs, tokenize
from .ref_parser import ParsedReference, parse_reference
from .training_data import LabeledSequence, parse_annotation

__version__ = "0.1.0"

__all__ = [
    "Config",
    "LabeledSequence",
    "Lexicons",
    "Model",
    "NameLexicon",
    "ParsedReference",
    "ScriptClass",
    "classify_script",
    "mine_candidate_names",
    "parse_annotation",
    "parse_reference",
    "predict",
    "repair_homoglyphs",
    "tokenize",
    "train",
]
