"""Exact JSON instance/solution formats.

Rationals cross the I/O boundary losslessly: inputs may be integers, finite
decimals, or "p/q" strings (decimals are read digit-exactly, -0.5 becomes
-1/2); every rational emitted is a "p/q" string. Agents and chores are
1-indexed in files and responses.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import Instance, Matrix, ValidatedInstance, Vector
from .errors import InvalidInstanceError
from .solver import Refusal, SolutionSet


def to_rational(x) -> Fraction:
    """Exact conversion of a JSON-borne number or string to a Fraction.

    Floats arrive only through non-file paths (e.g. HTTP clients sending JSON
    numbers); they are read back through their shortest decimal representation,
    which matches the literal the client wrote whenever that literal
    round-trips through a double.
    """
    if isinstance(x, bool):
        raise InvalidInstanceError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        try:
            return Fraction(repr(x))
        except ValueError as exc:
            raise InvalidInstanceError(f"cannot read {x!r} as an exact rational") from exc
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInstanceError(
                f"cannot parse {x!r} as a rational; use an integer, a finite "
                "decimal, or a 'p/q' string"
            ) from exc
    raise InvalidInstanceError(f"cannot read {type(x).__name__} as a rational")


def rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _vector_str(xs) -> list[str]:
    return [rational_str(x) for x in xs]


def _matrix_str(rows) -> list[list[str]]:
    return [[rational_str(x) for x in row] for row in rows]


def instance_from_payload(values, budgets) -> Instance:
    """Build a raw (not yet validated) instance from parsed JSON content."""
    if not isinstance(values, list) or not values or not all(isinstance(r, list) for r in values):
        raise InvalidInstanceError('"values" must be a non-empty list of rows')
    if not isinstance(budgets, list) or not budgets:
        raise InvalidInstanceError('"budgets" must be a non-empty list')
    return Instance(
        values=tuple(tuple(to_rational(x) for x in row) for row in values),
        budgets=tuple(to_rational(x) for x in budgets),
    )


def parse_instance_text(text: str) -> Instance:
    """Parse an instance file: {"values": [[...]], "budgets": [...]}."""
    try:
        data = json.loads(text, parse_float=Fraction, parse_int=int)
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"invalid JSON: {exc}") from exc
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInstanceError(f"invalid numeric literal: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInstanceError("instance file must hold a JSON object")
    missing = {"values", "budgets"} - set(data)
    if missing:
        raise InvalidInstanceError(f"instance file lacks keys: {sorted(missing)}")
    return instance_from_payload(data["values"], data["budgets"])


def _expanded_price(validated: ValidatedInstance, p: Vector) -> list[Fraction]:
    m_orig = len(validated.kept_chores) + len(validated.preassignments)
    full = [Fraction(0)] * m_orig
    for j, orig in enumerate(validated.kept_chores):
        full[orig] = p[j]
    return full


def _expanded_allocation(validated: ValidatedInstance, z: Matrix) -> list[list[Fraction]]:
    n = len(z)
    m_orig = len(validated.kept_chores) + len(validated.preassignments)
    full = [[Fraction(0)] * m_orig for _ in range(n)]
    for i in range(n):
        for j, orig in enumerate(validated.kept_chores):
            full[i][orig] = z[i][j]
    for pre in validated.preassignments:
        full[pre.agent][pre.chore] = Fraction(1)
    return full


def solution_dict(
    validated: ValidatedInstance,
    sol: SolutionSet,
    allocations: list[Matrix] | Refusal | None = None,
    oracle_match: bool | None = None,
    oracle_profiles: int | None = None,
) -> dict:
    """Solution report as a JSON-ready dict with a fixed key layout.

    Preassigned zero-value chores are folded back into every allocation (the
    indifferent agent takes the whole chore at price 0), so allocations and
    prices use the original chore indexing.
    """
    outcomes = [
        {
            "u": _vector_str(out.u),
            "z": _matrix_str(_expanded_allocation(validated, out.z)),
            "p": _vector_str(_expanded_price(validated, out.p)),
        }
        for out in sol.outcomes
    ]
    alloc_field = None
    refusal_field = None
    if isinstance(allocations, Refusal):
        refusal_field = allocations.reason
    elif allocations is not None:
        alloc_field = [_matrix_str(_expanded_allocation(validated, z)) for z in allocations]
    oracle_field = None
    if oracle_match is not None:
        oracle_field = {"match": oracle_match, "profiles": oracle_profiles}
    return {
        "profiles": [_vector_str(u) for u in sol.profiles],
        "outcomes": outcomes,
        "meta": {
            "graphs_enumerated": sol.meta.graphs_enumerated,
            "mode": sol.meta.mode,
            "degenerate": sol.meta.degenerate,
            "rejected": dict(sol.meta.rejected),
            "preassignments": [
                {"chore": pre.chore + 1, "agent": pre.agent + 1, "price": rational_str(pre.price)}
                for pre in validated.preassignments
            ],
        },
        "allocations": alloc_field,
        "allocation_refusal": refusal_field,
        "oracle": oracle_field,
    }


def round_dict(
    owner: tuple[int, ...], b_prime: Vector, p: Vector, certificates: dict[str, bool]
) -> dict:
    """Rounding report as a JSON-ready dict (owner entries 1-indexed)."""
    return {
        "owner": [i + 1 for i in owner],
        "b_prime": _vector_str(b_prime),
        "p": _vector_str(p),
        "certificates": {
            "ef11": certificates["ef11"],
            "prop1": certificates["prop1"],
            "budgets_close": certificates["budgets_close"],
        },
    }


def emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def parse_solution_text(text: str) -> dict:
    """Read a solution file back with exact rationals (round-trip checks)."""
    data = json.loads(text)
    out = dict(data)
    out["profiles"] = [tuple(Fraction(x) for x in u) for u in data["profiles"]]
    out["outcomes"] = [
        {
            "u": tuple(Fraction(x) for x in o["u"]),
            "z": tuple(tuple(Fraction(x) for x in row) for row in o["z"]),
            "p": tuple(Fraction(x) for x in o["p"]),
        }
        for o in data["outcomes"]
    ]
    if data.get("allocations") is not None:
        out["allocations"] = [
            tuple(tuple(Fraction(x) for x in row) for row in z) for z in data["allocations"]
        ]
    return out
