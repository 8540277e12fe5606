"""Pydantic models for the JSON documents the command line reads and writes.

Metric files are validated on load; reports are validated on export.  The
models mirror the dicts built in pipeline.py, so `Model.model_json_schema()`
is the published schema for each document.
"""
from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------- input

class MetricFile(_Strict):
    dimension: int = Field(ge=1, le=6)
    kind: Literal["riemannian_matrix_field", "randers", "custom_expression"]
    parameters: dict[str, Any] = Field(default_factory=dict)


# ---------------------------------------------------------------- equal rank

class GroupLabel(_Strict):
    type: str
    rank: int


class EqualRankCandidate(_Strict):
    h_type: str
    verdict: Literal["Pass", "Fail"]
    failing_rule: Optional[str]
    witness: Optional[list]
    h_root_count: int
    merged_classes: Optional[int] = None
    coset_space: Optional[str] = None


class EqualRankSurvivor(_Strict):
    h_type: str
    coset_space: Optional[str]
    key: Optional[str]


class EqualRankReport(_Strict):
    g: GroupLabel
    candidates: list[EqualRankCandidate]
    survivors: list[EqualRankSurvivor]
    diffs: list[dict]


# ---------------------------------------------------------------- corank one

class Seed(_Strict):
    kind: str
    z: str
    label: str
    alpha: Optional[str] = None
    beta: Optional[str] = None


class CaseVerdict(_Strict):
    status: Literal["Contradiction", "Saturated"]
    rule: Optional[str]
    witness: Any
    derived_h_type: Optional[str]
    note: str


class CaseRow(_Strict):
    seed: Seed
    verdict: CaseVerdict
    k_bound: Optional[str]
    coset_space: Optional[str]
    needs_explicit_model_oracle: bool
    outcome: str
    oracle: Optional[dict] = None
    trace: Optional[list[dict]] = None


class CorankReport(_Strict):
    g: str
    rows: list[CaseRow]
    rejected_case_one: list[str]
    angle_pruned: list[str]
    survivors: list[str]
    diffs: list[dict]


# ---------------------------------------------------------------- condition R

class ConditionRReport(BaseModel):
    # sample payloads differ between families, so extra keys are allowed here
    space: str
    samples: list[dict]
    dependent_pairs: int
    fails_condition_R: bool
    verdict: str
    membership_unverified: bool
    diffs: list[dict]


# ---------------------------------------------------------------- finsler

class CurvatureRow(_Strict):
    x: list[float]
    y: list[float]
    v: list[float]
    K: float
    G: list[float]
    R: list[list[float]]
    diagnostics: dict[str, float]


class CurvatureReport(_Strict):
    metric: str
    dimension: int
    rows: list[CurvatureRow]


# ---------------------------------------------------------------- verification

class SurvivorName(_Strict):
    key: str
    name: str


class VerifyReport(_Strict):
    command: Literal["verify theorem1"]
    inputs: dict[str, Any]
    equal_rank: list[EqualRankReport]
    corank_one: list[CorankReport]
    condition_r: list[ConditionRReport]
    survivors: list[SurvivorName]
    riemannian_forced: list[str]
    non_riemannian: list[str]
    diffs: list[dict]
    exit_code: Literal[0, 2]


AnyReport = Union[VerifyReport, EqualRankReport, CorankReport, CurvatureReport, ConditionRReport]
_ANY = TypeAdapter(AnyReport)


def validate_report(doc: dict) -> BaseModel:
    """Validate a saved report of any kind; raises pydantic.ValidationError."""
    return _ANY.validate_python(doc)
