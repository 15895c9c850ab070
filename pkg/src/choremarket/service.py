"""Request/response models and handlers shared by the HTTP API and the CLI.

The CLI invokes these handlers in-process; the FastAPI app exposes the same
handlers over HTTP. Both therefore produce byte-identical reports for the
same request.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from . import __version__
from .core import ValidatedInstance, validate_instance
from .errors import CertificateError
from .formats import instance_from_payload, round_dict, solution_dict, to_rational
from .oracle import brute_force_cu
from .plotting import render_utility_svg
from .rounding import (
    IndivisibleAllocation,
    budgets_close,
    check_ef11,
    check_prop1,
    round_fair_report,
)
from .solver import all_allocations, solve_all

RationalIn = Union[int, float, str]


class InstancePayload(BaseModel):
    values: list[list[RationalIn]]
    budgets: list[RationalIn]


class SolveRequest(InstancePayload):
    mode: Literal["direct", "dual", "auto"] = "auto"
    all_allocations: bool = False
    oracle_check: bool = False


class RoundRequest(InstancePayload):
    weights: Optional[list[RationalIn]] = Field(
        default=None, description="strictly positive fairness weights; defaults to |budgets|"
    )


class PlotRequest(InstancePayload):
    pass


class OutcomePayload(BaseModel):
    u: list[str]
    z: list[list[str]]
    p: list[str]


class PreassignmentPayload(BaseModel):
    chore: int
    agent: int
    price: str


class SolveMetaPayload(BaseModel):
    graphs_enumerated: int
    mode: str
    degenerate: Optional[bool]
    rejected: dict[str, int]
    preassignments: list[PreassignmentPayload]


class OraclePayload(BaseModel):
    match: bool
    profiles: int


class SolveResponse(BaseModel):
    profiles: list[list[str]]
    outcomes: list[OutcomePayload]
    meta: SolveMetaPayload
    allocations: Optional[list[list[list[str]]]]
    allocation_refusal: Optional[str]
    oracle: Optional[OraclePayload]


class RoundCertificates(BaseModel):
    ef11: bool
    prop1: bool
    budgets_close: bool


class RoundResponse(BaseModel):
    owner: list[int]
    b_prime: list[str]
    p: list[str]
    certificates: RoundCertificates


class HealthResponse(BaseModel):
    status: str
    version: str


def _validated(payload: InstancePayload) -> ValidatedInstance:
    raw = instance_from_payload(payload.values, payload.budgets)
    return validate_instance(raw)


def handle_solve(req: SolveRequest) -> SolveResponse:
    validated = _validated(req)
    sol = solve_all(validated.instance, mode=req.mode)
    allocations = None
    if req.all_allocations:
        allocations = all_allocations(validated.instance, sol)
    oracle_match = oracle_profiles = None
    if req.oracle_check:
        report = brute_force_cu(validated.instance)
        oracle_match = report.profiles == sol.profiles
        oracle_profiles = len(report.profiles)
    payload = solution_dict(
        validated,
        sol,
        allocations=allocations,
        oracle_match=oracle_match,
        oracle_profiles=oracle_profiles,
    )
    return SolveResponse.model_validate(payload)


def handle_round(req: RoundRequest) -> RoundResponse:
    raw = instance_from_payload(req.values, req.budgets)
    validated = validate_instance(raw)
    if req.weights is not None:
        weights = tuple(to_rational(w) for w in req.weights)
    else:
        weights = tuple(abs(b) for b in raw.budgets)
    report = round_fair_report(validated.instance, weights)
    # fold preassigned zero-price chores back into the original indexing
    m_orig = raw.m
    owner = [-1] * m_orig
    p_full = [Fraction(0)] * m_orig
    for j, orig in enumerate(validated.kept_chores):
        owner[orig] = report.allocation.owner[j]
        p_full[orig] = report.prices[j]
    for pre in validated.preassignments:
        owner[pre.chore] = pre.agent
    alloc = IndivisibleAllocation(owner=tuple(owner), b_prime=report.allocation.b_prime)
    budgets = tuple(-w for w in weights)
    certificates = {
        "ef11": check_ef11(raw, alloc, weights),
        "prop1": check_prop1(raw, alloc, weights),
        "budgets_close": budgets_close(alloc, tuple(p_full), budgets),
    }
    if not all(certificates.values()):
        raise CertificateError(
            f"rounding certificates failed: {certificates}; this is a bug"
        )
    return RoundResponse.model_validate(
        round_dict(alloc.owner, alloc.b_prime, tuple(p_full), certificates)
    )


def handle_plot(req: PlotRequest) -> str:
    validated = _validated(req)
    sol = solve_all(validated.instance)
    return render_utility_svg(validated.instance, sol.profiles)


def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)
