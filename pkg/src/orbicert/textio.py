"""JSON file formats. Rationals are always strings such as "-3/4"."""

from __future__ import annotations

import json
from pathlib import Path

from .arrangement import INF, Arrangement, NormalizedArrangement
from .exactalg import Matrix, format_rational, parse_rational
from .fermat import FermatCover
from .mpoly import MPoly


class InputError(ValueError):
    pass


def _rational(x, where: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError(f"{where}: expected a rational string, got {x!r}")
    try:
        return parse_rational(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _multiplicity(x, where: str):
    if x == "inf":
        return INF
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: multiplicity must be an integer or \"inf\", got {x!r}")
    return x


def read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def write_json(path: str | Path | None, data) -> str:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def arrangement_to_dict(arr: Arrangement) -> dict:
    out = {"n": arr.n, "covectors": [[format_rational(x) for x in v] for v in arr.covectors]}
    if arr.multiplicities is not None:
        out["multiplicities"] = ["inf" if m == INF else m for m in arr.multiplicities]
    return out


def arrangement_from_dict(data: dict) -> Arrangement:
    if not isinstance(data.get("n"), int) or isinstance(data.get("n"), bool):
        raise InputError("field 'n' must be an integer")
    covs = data.get("covectors")
    if not isinstance(covs, list) or not all(isinstance(v, list) for v in covs):
        raise InputError("field 'covectors' must be an array of arrays")
    parsed = [[_rational(x, f"covectors[{r}][{c}]") for c, x in enumerate(v)] for r, v in enumerate(covs)]
    ms = data.get("multiplicities")
    if ms is not None:
        if not isinstance(ms, list):
            raise InputError("field 'multiplicities' must be an array")
        ms = [_multiplicity(x, f"multiplicities[{i}]") for i, x in enumerate(ms)]
    try:
        return Arrangement(data["n"], parsed, ms)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_arrangement(path: str | Path) -> Arrangement:
    return arrangement_from_dict(read_json(path))


def matrix_to_lists(M: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in M.rows]


def normalized_to_dict(na: NormalizedArrangement) -> dict:
    return {
        "n": na.n,
        "k": na.k,
        "pivot": list(na.pivot),
        "others": list(na.others),
        "change": matrix_to_lists(na.change),
        "A": matrix_to_lists(na.A),
    }


def cover_to_dict(cov: FermatCover) -> dict:
    return {"n": cov.n, "k": cov.k, "m": cov.m, "A": matrix_to_lists(cov.A)}


def cover_from_dict(data: dict) -> FermatCover:
    try:
        n, k, m, A = data["n"], data["k"], data["m"], data["A"]
    except KeyError as exc:
        raise InputError(f"cover file lacks field {exc.args[0]!r}") from None
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (n, k, m)):
        raise InputError("fields n, k, m must be integers")
    if not isinstance(A, list) or len(A) != k or any(not isinstance(r, list) or len(r) != n + 1 for r in A):
        raise InputError("field 'A' must be a k x (n+1) array")
    M = Matrix([[_rational(x, f"A[{j}][{i}]") for i, x in enumerate(r)] for j, r in enumerate(A)], ncols=n + 1)
    try:
        return FermatCover(n, k, m, M)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def is_cover_record(data: dict) -> bool:
    return "A" in data and "m" in data


def poly_to_dict(f: MPoly) -> dict:
    return {"terms": f.to_records(), "pretty": f.pretty()}


def poly_from_dict(data: dict) -> MPoly:
    try:
        return MPoly.from_records(data["terms"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad polynomial record: {exc}") from None
