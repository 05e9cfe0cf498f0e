"""Python bindings for the paratok parallel tokenizer library."""

from ._paratok import *  # noqa: F401,F403
from ._paratok import ParatokError, load, load_vocab, xsim  # noqa: F401
