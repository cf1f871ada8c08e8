from .types import Example, LabeledSet, UnlabeledPool, PUSplit, ExtendedSet, crop_or_pad
from .idx import parse_idx, serialize_idx, load_idx, save_idx
from .synthetic import synth_generate, save_synthetic_cache, load_synthetic_cache
from .splits import make_pu_split, EpochShuffler
from .glyphs import GLYPH_DIGITS, GLYPH_LETTERS, render_glyph_set, write_glyph_corpus

__all__ = [
    "Example",
    "LabeledSet",
    "UnlabeledPool",
    "PUSplit",
    "ExtendedSet",
    "crop_or_pad",
    "parse_idx",
    "serialize_idx",
    "load_idx",
    "save_idx",
    "synth_generate",
    "save_synthetic_cache",
    "load_synthetic_cache",
    "make_pu_split",
    "EpochShuffler",
    "GLYPH_DIGITS",
    "GLYPH_LETTERS",
    "render_glyph_set",
    "write_glyph_corpus",
]
