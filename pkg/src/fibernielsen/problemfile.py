"""JSON problem files.

Layout::

    {"m": 2, "n": 2, "base_dim": 1,
     "gluing_M": [[0, 1], [1, 0]], "gluing_N": [[0, 1], [1, 0]],
     "map1": {"L": [[2, 1], [1, 2]], "v": [0, 0]},
     "map2": {"L": [[0, 0], [0, 0]], "v": [0, 0]}}

For ``base_dim >= 2`` the gluing keys may be omitted.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import NielsenError
from .intlin import IntMatrix
from .nielsen import StraightMap, TorusBundleProblem


class ProblemFileError(NielsenError, ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(path, f"expected an integer, got {json.dumps(value)}")
    return value


def _vector(value, length, path):
    if not isinstance(value, list):
        raise ProblemFileError(path, "expected an array of integers")
    if len(value) != length:
        raise ProblemFileError(path, f"expected length {length}, got {len(value)}")
    return tuple(_int(x, f"{path}[{i}]") for i, x in enumerate(value))


def _matrix(value, rows, cols, path):
    if not isinstance(value, list):
        raise ProblemFileError(path, "expected an array of rows")
    if len(value) != rows:
        raise ProblemFileError(path, f"expected {rows} rows, got {len(value)}")
    return IntMatrix.from_rows(
        [_vector(r, cols, f"{path}[{i}]") for i, r in enumerate(value)], cols
    )


def _key(data, key, path=""):
    if key not in data:
        raise ProblemFileError(f"{path}{key}", "missing key")
    return data[key]


def parse_problem(data) -> TorusBundleProblem:
    if not isinstance(data, dict):
        raise ProblemFileError("$", "expected a JSON object")
    m = _int(_key(data, "m"), "m")
    n = _int(_key(data, "n"), "n")
    b = _int(_key(data, "base_dim"), "base_dim")
    for name, x in (("m", m), ("n", n), ("base_dim", b)):
        if x < 1:
            raise ProblemFileError(name, "must be at least 1")
    if b >= 2 and "gluing_M" not in data:
        a_m = IntMatrix.identity(m)
    else:
        a_m = _matrix(_key(data, "gluing_M"), m, m, "gluing_M")
    if b >= 2 and "gluing_N" not in data:
        a_n = IntMatrix.identity(n)
    else:
        a_n = _matrix(_key(data, "gluing_N"), n, n, "gluing_N")
    maps = []
    for name in ("map1", "map2"):
        f = _key(data, name)
        if not isinstance(f, dict):
            raise ProblemFileError(name, "expected an object with keys L and v")
        maps.append(StraightMap(
            _matrix(_key(f, "L", f"{name}."), n, m, f"{name}.L"),
            _vector(_key(f, "v", f"{name}."), n, f"{name}.v"),
        ))
    if b == 1:
        for name, a in (("gluing_M", a_m), ("gluing_N", a_n)):
            if abs(a.det()) != 1:
                raise ProblemFileError(name, f"gluing matrix must be unimodular, determinant is {a.det()}")
    return TorusBundleProblem(m, n, b, a_m, a_n, maps[0], maps[1])


def load_problem(path) -> TorusBundleProblem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(str(path), f"cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ProblemFileError("$", f"invalid JSON: {exc}") from exc
    return parse_problem(data)


def _reject_float(s):
    raise ProblemFileError("$", f"floating point value {s} is not allowed")


def problem_to_dict(p: TorusBundleProblem) -> dict:
    return {
        "m": p.m,
        "n": p.n,
        "base_dim": p.b,
        "gluing_M": p.a_m.tolist(),
        "gluing_N": p.a_n.tolist(),
        "map1": {"L": p.map1.l.tolist(), "v": list(p.map1.v)},
        "map2": {"L": p.map2.l.tolist(), "v": list(p.map2.v)},
    }
