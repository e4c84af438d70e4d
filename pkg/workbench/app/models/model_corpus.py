# models/model_corpus.py
from enum import Enum
from pydantic import BaseModel, Field, field_validator
from typing import List

from ..core.exceptions import ConfigurationError


class MutationOp(str, Enum):
    INSERT = "insert"
    DELETE = "delete"
    REPLACE = "replace"


class MutationSpec(BaseModel):
    op: MutationOp = Field(..., description="Edit applied to the previous version")
    count: int = Field(..., description="Edits of this kind per version")
    mean_length: float = Field(
        1.0, description="Mean of the geometric edit-length distribution"
    )

    @field_validator("count")
    @classmethod
    def validate_count(cls, v):
        if v < 0:
            raise ConfigurationError(f"Mutation count must be >= 0, got {v}")
        return v

    @field_validator("mean_length")
    @classmethod
    def validate_mean_length(cls, v):
        if v < 1.0:
            raise ConfigurationError(f"Mean edit length must be >= 1, got {v}")
        return v


class CorpusManifest(BaseModel):
    seed: int = Field(..., description="64-bit seed of the corpus generator")
    versions: int = Field(1, description="Number of versions in the chain")
    base_size: int = Field(..., description="Size of version 0 in bytes")
    mutation_spec: List[MutationSpec] = Field(default_factory=list)
    paths: List[str] = Field(
        default_factory=list, description="Generated files, relative to the manifest"
    )

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v):
        if not 0 <= v < 2**64:
            raise ConfigurationError(f"Seed must fit in 64 bits, got {v}")
        return v

    @field_validator("versions")
    @classmethod
    def validate_versions(cls, v):
        if v < 1:
            raise ConfigurationError(f"A corpus needs at least one version, got {v}")
        return v

    @field_validator("base_size")
    @classmethod
    def validate_base_size(cls, v):
        if v < 1:
            raise ConfigurationError(f"base_size must be positive, got {v}")
        return v

    @property
    def corpus_id(self) -> str:
        return f"synthetic-{self.seed:x}-{self.versions}v-{self.base_size}b"
