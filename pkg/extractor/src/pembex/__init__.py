"""Embedding extraction and mask filling for the paraphrase curation engine.

Emits the engine's PEMB binary store and mask-fill wire formats; the
"mock" backend runs fully offline, pretrained encoders are optional.
"""

from .extract import ExtractorConfig, extract
from .fill import fill_requests, make_fill_model
from .mockmodel import MockEncoder, MockFillModel

__version__ = "0.1.0"
