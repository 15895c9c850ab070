"""Command-line front end.

Thin client over the service layer: each command builds the same request model
the HTTP API accepts and either calls the handler in-process (default) or
POSTs it to a running server (--server). Reports are byte-identical either
way.

Exit codes: 0 success; 1 parse/validation error; 2 enumeration cap exceeded;
3 oracle cross-check mismatch; 4 internal certificate failure (a bug).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .errors import CapExceededError, CertificateError, InvalidInstanceError
from .formats import emit_json, parse_instance_text
from .service import (
    PlotRequest,
    RoundRequest,
    SolveRequest,
    handle_plot,
    handle_round,
    handle_solve,
)

EXIT_INVALID = 1
EXIT_CAP = 2
EXIT_ORACLE_MISMATCH = 3
EXIT_CERTIFICATE = 4

_REMOTE_CODES = {
    "invalid-instance": EXIT_INVALID,
    "cap-exceeded": EXIT_CAP,
    "certificate-failure": EXIT_CERTIFICATE,
}


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_payload(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}", EXIT_INVALID)
    try:
        inst = parse_instance_text(text)
    except InvalidInstanceError as exc:
        _fail(str(exc), EXIT_INVALID)
    return {
        "values": [[f"{x.numerator}/{x.denominator}" for x in row] for row in inst.values],
        "budgets": [f"{x.numerator}/{x.denominator}" for x in inst.budgets],
    }


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _post(server: str, endpoint: str, body: dict):
    import httpx

    response = httpx.post(f"{server.rstrip('/')}{endpoint}", json=body, timeout=600.0)
    if response.status_code >= 400:
        try:
            detail = response.json()["detail"]
            code = detail.get("code", "")
            message = detail.get("message", response.text)
        except Exception:
            code, message = "", response.text
        _fail(message, _REMOTE_CODES.get(code, EXIT_INVALID))
    return response


@click.group()
def main():
    """Exact competitive-equilibrium solver for chore division."""


@main.command()
@click.argument("path", type=click.Path())
@click.option("--mode", type=click.Choice(["direct", "dual", "auto"]), default="auto",
              show_default=True, help="Graph-family enumeration side.")
@click.option("--all-allocations", is_flag=True,
              help="Also emit the unique allocation of every profile (refused for degenerate instances).")
@click.option("--oracle-check", is_flag=True,
              help="Cross-check the profile set against exhaustive graph search.")
@click.option("--out", type=click.Path(), default=None, help="Write the report here instead of stdout.")
@click.option("--server", default=None, metavar="URL", help="POST to a running service instead of solving in-process.")
def solve(path, mode, all_allocations, oracle_check, out, server):
    """Compute all competitive utility profiles of the instance in PATH."""
    body = _read_payload(path)
    body.update(mode=mode, all_allocations=all_allocations, oracle_check=oracle_check)
    if server:
        response = _post(server, "/solve", body)
        payload = response.json()
    else:
        try:
            payload = handle_solve(SolveRequest.model_validate(body)).model_dump()
        except InvalidInstanceError as exc:
            _fail(str(exc), EXIT_INVALID)
        except CapExceededError as exc:
            _fail(str(exc), EXIT_CAP)
    _write(emit_json(payload), out)
    if oracle_check and payload["oracle"] and not payload["oracle"]["match"]:
        _fail("solver and exhaustive oracle disagree on the profile set", EXIT_ORACLE_MISMATCH)


@main.command("round")
@click.argument("path", type=click.Path())
@click.option("--weights", default=None, metavar="W1,W2,...",
              help="Strictly positive fairness weights; defaults to |budgets|.")
@click.option("--out", type=click.Path(), default=None, help="Write the report here instead of stdout.")
@click.option("--server", default=None, metavar="URL", help="POST to a running service instead of solving in-process.")
def round_cmd(path, weights, out, server):
    """Round the instance in PATH to whole chores with fairness certificates."""
    body = _read_payload(path)
    if weights is not None:
        body["weights"] = [w.strip() for w in weights.split(",") if w.strip()]
    if server:
        payload = _post(server, "/round", body).json()
    else:
        try:
            payload = handle_round(RoundRequest.model_validate(body)).model_dump()
        except InvalidInstanceError as exc:
            _fail(str(exc), EXIT_INVALID)
        except CapExceededError as exc:
            _fail(str(exc), EXIT_CAP)
        except CertificateError as exc:
            _fail(str(exc), EXIT_CERTIFICATE)
    _write(emit_json(payload), out)


@main.command()
@click.argument("path", type=click.Path())
@click.option("--out", type=click.Path(), default=None, help="Write the SVG here instead of stdout.")
@click.option("--server", default=None, metavar="URL", help="POST to a running service instead of solving in-process.")
def plot(path, out, server):
    """Render the 2-agent feasible utility region of PATH as an SVG."""
    body = _read_payload(path)
    if server:
        svg = _post(server, "/plot", body).text
    else:
        try:
            svg = handle_plot(PlotRequest.model_validate(body))
        except InvalidInstanceError as exc:
            _fail(str(exc), EXIT_INVALID)
        except CapExceededError as exc:
            _fail(str(exc), EXIT_CAP)
    _write(svg, out)


if __name__ == "__main__":
    main()
