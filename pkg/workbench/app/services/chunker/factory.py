# app/services/chunker/factory.py

from typing import Optional, Type
import logging

from .backend import resolve_backend
from .base import BaseChunker
from .seqcdc_accel import AcceleratedSeqChunker
from ...core.exceptions import ConfigurationError
from ...models import Algorithm, ChunkerConfig

logger = logging.getLogger(__name__)


class ChunkerFactory:
    """
    Factory class to create the chunker for a configured algorithm.
    """

    _chunkers = {}

    @classmethod
    def register_chunker(cls, algorithm: Algorithm, chunker_class: Type[BaseChunker]):
        """
        Register a chunker class for an algorithm.

        Args:
            algorithm: Algorithm the class implements
            chunker_class: BaseChunker subclass
        """
        logger.debug(f"Registering chunker {chunker_class.__name__} for {algorithm.value}")
        cls._chunkers[Algorithm(algorithm)] = chunker_class

    @classmethod
    def get_chunker(cls, cfg: ChunkerConfig, backend: Optional[str] = None) -> BaseChunker:
        """
        Get a chunker instance for one stream.

        Args:
            cfg: Validated chunker configuration
            backend: auto|scalar|w16|w32|w64; only SeqCDC has lane-parallel backends

        Returns:
            Chunker instance; ``chunker.backend`` names the backend actually used

        Raises:
            ConfigurationError: If no chunker is registered or the backend is unknown
        """
        chunker_class = cls._chunkers.get(cfg.algorithm)
        if not chunker_class:
            raise ConfigurationError(
                f"Unsupported algorithm: {cfg.algorithm}. "
                f"Supported: {[a.value for a in cls._chunkers]}"
            )

        if cfg.algorithm == Algorithm.SEQ and backend is not None:
            choice = resolve_backend(backend)
            if choice.width is not None:
                return AcceleratedSeqChunker(cfg, choice.width)
        elif backend is not None:
            resolve_backend(backend)

        return chunker_class(cfg)
