"""File schemas shared by the command-line tools.

All files are UTF-8 JSON with fixed key sets; unknown keys are rejected
(fail-closed).  Field elements are written as comma-joined coefficient
strings "c0,c1,...."; rationals as "a/b" in lowest terms (integers without
the "/1").  Fields are referenced by (p, degree) and always use the canonical
smallest modulus, so a file round-trips to the identical object.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .artin_schreier import ASSystem, as_system
from .connection import ConnectionInput, LieBasis, connection_input, lie_basis
from .crystal import CycleType
from .errors import UsageError
from .fields import FFElement, FieldDesc, make_field


def elem_to_str(x: FFElement) -> str:
    return ",".join(str(c) for c in x.coeffs)


def str_to_elem(s: str, field: FieldDesc) -> FFElement:
    try:
        coeffs = [int(t) for t in str(s).split(",")]
    except ValueError as exc:
        raise UsageError(f"bad field element {s!r}") from exc
    if len(coeffs) != field.degree:
        raise UsageError(f"element {s!r} has wrong coefficient count for {field!r}")
    return field.element(coeffs)


def frac_to_str(x: Fraction) -> str:
    return str(x)


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1) + "\n").encode()


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load_json(path: str) -> Tuple[dict, bytes]:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path} is not valid UTF-8 JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: top level must be an object")
    return obj, data


def _require_keys(obj: dict, required: Sequence[str], optional: Sequence[str], what: str):
    keys = set(obj)
    missing = [k for k in required if k not in keys]
    unknown = keys - set(required) - set(optional)
    if missing:
        raise UsageError(f"{what}: missing keys {missing}")
    if unknown:
        raise UsageError(f"{what}: unknown keys {sorted(unknown)}")


# ---------------------------------------------------------------------------
# module spec files
# ---------------------------------------------------------------------------

def parse_module_spec(obj: dict) -> Tuple[int, int, int, CycleType]:
    _require_keys(obj, ["p", "field_degree", "precision", "cycles", "epsilon"],
                  [], "module spec")
    p = int(obj["p"])
    degree = int(obj["field_degree"])
    precision = int(obj["precision"])
    if precision < 1:
        raise UsageError("precision must be >= 1")
    cycles = obj["cycles"]
    epsilon = obj["epsilon"]
    if (not isinstance(cycles, list) or not all(isinstance(c, list) for c in cycles)
            or not isinstance(epsilon, list)):
        raise UsageError("cycles must be a list of integer lists, epsilon an integer list")
    ctype = CycleType([[int(i) for i in c] for c in cycles], [int(e) for e in epsilon])
    return p, degree, precision, ctype


def load_module_spec(path: str) -> Tuple[int, int, int, CycleType, bytes]:
    obj, raw = _load_json(path)
    p, degree, precision, ctype = parse_module_spec(obj)
    return p, degree, precision, ctype, raw


def dump_module_spec(p: int, field_degree: int, precision: int, ctype: CycleType) -> bytes:
    return canonical_json_bytes({
        "p": p,
        "field_degree": field_degree,
        "precision": precision,
        "cycles": [list(c) for c in ctype.cycles],
        "epsilon": list(ctype.eps),
    })


# ---------------------------------------------------------------------------
# Frobenius-linear system files
# ---------------------------------------------------------------------------

def parse_as_system(obj: dict) -> ASSystem:
    _require_keys(obj, ["p", "field_degree", "nvars", "B", "C"], [], "system file")
    p = int(obj["p"])
    degree = int(obj["field_degree"])
    n = int(obj["nvars"])
    field = make_field(p, degree)
    B = obj["B"]
    C = obj["C"]
    if (not isinstance(B, list) or len(B) != n or any(not isinstance(r, list) or len(r) != n for r in B)
            or not isinstance(C, list) or len(C) != n):
        raise UsageError("B must be nvars x nvars and C length nvars")
    Bm = [[str_to_elem(e, field) for e in row] for row in B]
    Cv = [str_to_elem(e, field) for e in C]
    return as_system(field, Bm, Cv)


def load_as_system(path: str) -> Tuple[ASSystem, bytes]:
    obj, raw = _load_json(path)
    return parse_as_system(obj), raw


def as_system_to_obj(sys: ASSystem) -> dict:
    return {
        "p": sys.field.p,
        "field_degree": sys.field.degree,
        "nvars": sys.nvars,
        "B": [[elem_to_str(e) for e in row] for row in sys.B],
        "C": [elem_to_str(e) for e in sys.C],
    }


def dump_as_system(sys: ASSystem) -> bytes:
    return canonical_json_bytes(as_system_to_obj(sys))


# ---------------------------------------------------------------------------
# connection input files
# ---------------------------------------------------------------------------

def parse_connection_input(obj: dict) -> Tuple[ConnectionInput, Optional[LieBasis]]:
    _require_keys(obj, ["p", "field_degree", "eps", "a_bar", "da_bar",
                        "phi_images", "z_point"], ["lie_basis"], "connection input")
    p = int(obj["p"])
    degree = int(obj["field_degree"])
    field = make_field(p, degree)
    eps = [int(e) for e in obj["eps"]]
    dm = len(eps)
    z_point = [str_to_elem(e, field) for e in obj["z_point"]]
    d = len(z_point)

    def mat(rows, what):
        if not isinstance(rows, list) or len(rows) != dm or any(len(r) != dm for r in rows):
            raise UsageError(f"{what} must be d_M x d_M")
        return [[str_to_elem(e, field) for e in row] for row in rows]

    a_bar = mat(obj["a_bar"], "a_bar")
    phi_images = mat(obj["phi_images"], "phi_images")
    da = obj["da_bar"]
    if (not isinstance(da, list) or len(da) != dm
            or any(len(r) != dm for r in da)
            or any(len(c) != d for r in da for c in r)):
        raise UsageError("da_bar must be d_M x d_M x d")
    da_bar = [[[str_to_elem(e, field) for e in cell] for cell in row] for row in da]
    inp = connection_input(field, eps, a_bar, da_bar, phi_images, z_point)
    lie = None
    if "lie_basis" in obj:
        mats = obj["lie_basis"]
        if not isinstance(mats, list) or not mats:
            raise UsageError("lie_basis must be a nonempty list of matrices")
        parsed = [mat(m, "lie_basis entry") for m in mats]
        lie = lie_basis(field, parsed)
    return inp, lie


def load_connection_input(path: str) -> Tuple[ConnectionInput, Optional[LieBasis], bytes]:
    obj, raw = _load_json(path)
    inp, lie = parse_connection_input(obj)
    return inp, lie, raw
