"""FastAPI application exposing the solver as a service.

Run with: uvicorn choremarket.api:app

Domain errors map to structured HTTP errors carrying a machine-readable code:
invalid-instance (400), cap-exceeded (409), certificate-failure (500).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .errors import CapExceededError, CertificateError, InvalidInstanceError
from .service import (
    HealthResponse,
    PlotRequest,
    RoundRequest,
    RoundResponse,
    SolveRequest,
    SolveResponse,
    handle_plot,
    handle_round,
    handle_solve,
    health,
)

app = FastAPI(
    title="choremarket",
    description=(
        "Exact competitive-equilibrium solver for divisible chore division, "
        "with rounding to approximately fair indivisible assignments."
    ),
    version="0.1.0",
)

_ERROR_CODES = {
    InvalidInstanceError: ("invalid-instance", 400),
    CapExceededError: ("cap-exceeded", 409),
    CertificateError: ("certificate-failure", 500),
}


@app.exception_handler(InvalidInstanceError)
@app.exception_handler(CapExceededError)
@app.exception_handler(CertificateError)
async def _domain_error(request: Request, exc: Exception) -> JSONResponse:
    code, status = next(
        (pair for cls, pair in _ERROR_CODES.items() if isinstance(exc, cls))
    )
    return JSONResponse(
        status_code=status, content={"detail": {"code": code, "message": str(exc)}}
    )


@app.get("/health", response_model=HealthResponse)
def get_health() -> HealthResponse:
    return health()


@app.post("/solve", response_model=SolveResponse)
def post_solve(req: SolveRequest) -> SolveResponse:
    return handle_solve(req)


@app.post("/round", response_model=RoundResponse)
def post_round(req: RoundRequest) -> RoundResponse:
    return handle_round(req)


@app.post("/plot")
def post_plot(req: PlotRequest) -> Response:
    return Response(content=handle_plot(req), media_type="image/svg+xml")
