# models/model_chunking.py
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..core import constants
from ..core.exceptions import ConfigurationError


class Algorithm(str, Enum):
    FIXED = "fixed"
    RABIN = "rabin"
    GEAR = "gear"
    FASTCDC = "fastcdc"
    AE = "ae"
    RAM = "ram"
    SEQ = "seq"


class SeqMode(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class BoundaryKind(str, Enum):
    SEQUENCE = "sequence"  # content condition matched
    MAX_FORCED = "max_forced"
    END_OF_STREAM = "end_of_stream"


class SeqParams(BaseModel):
    mode: SeqMode = Field(SeqMode.INCREASING, description="Direction of boundary runs")
    seq_length: int = Field(5, description="Bytes in a boundary sequence")
    skip_trigger: Optional[int] = Field(
        50, description="Opposing pairs that trigger a skip; None never skips"
    )
    skip_size: int = Field(256, description="Bytes skipped per trigger; 0 disables")

    @field_validator("seq_length")
    @classmethod
    def validate_seq_length(cls, v):
        if v < 2:
            raise ConfigurationError(f"seq_length must be >= 2, got {v}")
        return v

    @field_validator("skip_trigger")
    @classmethod
    def validate_skip_trigger(cls, v):
        if v is not None and v < 1:
            raise ConfigurationError(f"skip_trigger must be >= 1, got {v}")
        return v

    @field_validator("skip_size")
    @classmethod
    def validate_skip_size(cls, v):
        if v < 0:
            raise ConfigurationError(f"skip_size must be >= 0, got {v}")
        return v

    @property
    def skips_enabled(self) -> bool:
        return self.skip_trigger is not None and self.skip_size > 0


class HashChunkerParams(BaseModel):
    window_size: int = Field(
        constants.RABIN_WINDOW, description="Rolling window in bytes (Rabin)"
    )
    mask_bits: int = Field(13, description="Hash bits matched at a candidate boundary")
    strict_bits: Optional[int] = Field(
        None, description="FastCDC mask bits before the target size"
    )
    relaxed_bits: Optional[int] = Field(
        None, description="FastCDC mask bits after the target size"
    )

    @model_validator(mode="after")
    def validate_bits(self):
        for name in ("window_size", "mask_bits"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        for name in ("mask_bits", "strict_bits", "relaxed_bits"):
            value = getattr(self, name)
            if value is not None and not 1 <= value <= 63:
                raise ConfigurationError(f"{name} must be within [1, 63], got {value}")
        return self


class ExtremumParams(BaseModel):
    window_size: int = Field(..., description="Extremum window in bytes (AE/RAM)")

    @field_validator("window_size")
    @classmethod
    def validate_window(cls, v):
        if v < 1:
            raise ConfigurationError(f"window_size must be >= 1, got {v}")
        return v


AlgoParams = Union[SeqParams, HashChunkerParams, ExtremumParams]


def default_limits(target_avg: int) -> tuple:
    """Half/double min and max, with the 1 KiB minimum at a 4 KiB target."""
    if target_avg == 4 * constants.KIB:
        return constants.KIB, 2 * target_avg
    return max(1, target_avg // 2), 2 * target_avg


class ChunkerConfig(BaseModel):
    algorithm: Algorithm = Field(..., description="Chunking algorithm")
    target_avg: int = Field(8192, description="Target average chunk size in bytes")
    min_size: Optional[int] = Field(None, description="Minimum chunk size in bytes")
    max_size: Optional[int] = Field(None, description="Maximum chunk size in bytes")
    seq: Optional[SeqParams] = Field(None, description="SeqCDC parameters")
    hashing: Optional[HashChunkerParams] = Field(
        None, description="Rabin/Gear/FastCDC parameters"
    )
    extremum: Optional[ExtremumParams] = Field(None, description="AE/RAM parameters")

    @model_validator(mode="after")
    def fill_and_validate(self):
        if self.target_avg <= 0:
            raise ConfigurationError(f"target_avg must be positive, got {self.target_avg}")

        default_min, default_max = default_limits(self.target_avg)
        if self.min_size is None:
            self.min_size = min(default_min, self.target_avg)
        if self.max_size is None:
            self.max_size = max(default_max, self.target_avg)
        if not 0 < self.min_size <= self.target_avg <= self.max_size:
            raise ConfigurationError(
                "Chunk sizes must satisfy 0 < min_size <= target_avg <= max_size, "
                f"got {self.min_size}/{self.target_avg}/{self.max_size}"
            )

        anchor = constants.nearest_target(self.target_avg)
        if self.algorithm == Algorithm.SEQ:
            if self.seq is None:
                seq_length, trigger, skip = constants.SEQ_PARAMS[anchor]
                self.seq = SeqParams(
                    seq_length=seq_length, skip_trigger=trigger, skip_size=skip
                )
            if self.seq.seq_length > self.min_size:
                raise ConfigurationError(
                    f"seq_length {self.seq.seq_length} exceeds min_size {self.min_size}"
                )
        elif self.algorithm in (Algorithm.RABIN, Algorithm.GEAR):
            if self.hashing is None:
                self.hashing = HashChunkerParams(
                    mask_bits=constants.scaled_bits(
                        constants.HASH_MASK_BITS, self.target_avg
                    )
                )
            if (
                self.algorithm == Algorithm.RABIN
                and self.hashing.window_size > self.min_size
            ):
                raise ConfigurationError(
                    f"Rabin window {self.hashing.window_size} exceeds min_size {self.min_size}"
                )
        elif self.algorithm == Algorithm.FASTCDC:
            if self.hashing is None:
                base = constants.scaled_bits(constants.FASTCDC_BASE_BITS, self.target_avg)
                level = constants.FASTCDC_NORMALIZATION_LEVEL
                self.hashing = HashChunkerParams(
                    mask_bits=base,
                    strict_bits=min(63, base + level),
                    relaxed_bits=max(1, base - level),
                )
            if self.hashing.strict_bits is None:
                self.hashing.strict_bits = self.hashing.mask_bits
            if self.hashing.relaxed_bits is None:
                self.hashing.relaxed_bits = self.hashing.mask_bits
        elif self.algorithm in (Algorithm.AE, Algorithm.RAM):
            if self.extremum is None:
                if self.algorithm == Algorithm.AE:
                    window = constants.scaled_window(
                        constants.AE_WINDOW, self.target_avg, proportional=True
                    )
                else:
                    window = constants.scaled_window(
                        constants.RAM_WINDOW, self.target_avg, proportional=False
                    )
                self.extremum = ExtremumParams(window_size=window)
        return self

    @property
    def params(self) -> Optional[AlgoParams]:
        """The algorithm-specific parameter record in use."""
        if self.algorithm == Algorithm.SEQ:
            return self.seq
        if self.algorithm in (Algorithm.RABIN, Algorithm.GEAR, Algorithm.FASTCDC):
            return self.hashing
        if self.algorithm in (Algorithm.AE, Algorithm.RAM):
            return self.extremum
        return None

    def params_dict(self) -> Dict[str, Any]:
        """Flat description used by reports and the CSV export."""
        out: Dict[str, Any] = {
            "target_avg": self.target_avg,
            "min_size": self.min_size,
            "max_size": self.max_size,
        }
        params = self.params
        if params is not None:
            out.update(params.model_dump(mode="json"))
        return out


def make_config(algorithm: Union[str, Algorithm], **kwargs) -> ChunkerConfig:
    """
    Build a ChunkerConfig from loose input.

    Raises:
        ConfigurationError: If any field is missing, mistyped or out of range
    """
    try:
        return ChunkerConfig(algorithm=algorithm, **kwargs)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid chunker configuration: {e}") from e


@dataclass(frozen=True)
class BoundaryEvent:
    """Exclusive end offset of one chunk and why the chunk ended there."""

    kind: BoundaryKind
    position: int


@dataclass(frozen=True)
class ChunkRecord:
    offset: int
    length: int
    fingerprint: bytes

    @property
    def end(self) -> int:
        return self.offset + self.length
