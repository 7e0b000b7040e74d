"""JSON forms of laws and joint laws.

Law:   {"atoms": [{"v": "1/2", "p": "1/3"}, ...]}
Joint: {"x": [...], "y": [...], "p": [[...], ...], "tags": [...]}

Numbers are JSON integers, "p/q" strings, or (float mode only) JSON floats.
A joint's ``tags`` are recomputed on write and re-verified on read.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .coupling import JointDist, verify_tags
from .dist import DiscreteDist
from .numeric import EXACT, NumericMode, from_json_number, to_json_number


class InputError(ValueError):
    """A JSON document does not describe a valid law or joint law."""


def dist_to_json(d: DiscreteDist) -> dict:
    return {"atoms": [{"v": to_json_number(v), "p": to_json_number(p)} for v, p in d.atoms()]}


def dist_from_json(obj: Any, mode: NumericMode = EXACT, where: str = "law") -> DiscreteDist:
    if isinstance(obj, dict) and "atoms" in obj:
        atoms = obj["atoms"]
    else:
        raise InputError(f"{where}: expected an object with an 'atoms' list")
    if not isinstance(atoms, list) or not atoms:
        raise InputError(f"{where}: 'atoms' must be a nonempty list")
    pairs = []
    for i, a in enumerate(atoms):
        if not isinstance(a, dict) or set(a) != {"v", "p"}:
            raise InputError(f"{where}: atom {i} must be an object with keys 'v' and 'p'")
        try:
            pairs.append(
                (
                    from_json_number(a["v"], mode, f"{where}: atom {i} value"),
                    from_json_number(a["p"], mode, f"{where}: atom {i} probability"),
                )
            )
        except (ValueError, TypeError) as exc:
            raise InputError(str(exc)) from None
    try:
        return DiscreteDist.from_atoms(pairs, mode)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def joint_to_json(J: JointDist) -> dict:
    return {
        "x": [to_json_number(v) for v in J.x_values],
        "y": [to_json_number(v) for v in J.y_values],
        "p": [[to_json_number(p) for p in row] for row in J.probs],
        "tags": sorted(t.value for t in J.tags),
    }


def joint_from_json(obj: Any, mode: NumericMode = EXACT, where: str = "joint") -> JointDist:
    if not isinstance(obj, dict) or not {"x", "y", "p"} <= set(obj):
        raise InputError(f"{where}: expected an object with 'x', 'y' and 'p'")
    try:
        xs = [from_json_number(v, mode, f"{where}: x[{i}]") for i, v in enumerate(obj["x"])]
        ys = [from_json_number(v, mode, f"{where}: y[{j}]") for j, v in enumerate(obj["y"])]
        rows = obj["p"]
        if not isinstance(rows, list) or len(rows) != len(xs):
            raise InputError(f"{where}: 'p' must have one row per x value")
        probs = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != len(ys):
                raise InputError(f"{where}: row {i} of 'p' must have one entry per y value")
            probs.append([from_json_number(p, mode, f"{where}: p[{i}][{j}]") for j, p in enumerate(row)])
        J = JointDist.from_matrix(xs, ys, probs, mode)
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from None
    try:
        verify_tags(J, obj.get("tags", []))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None
    return J


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_dist(path, mode: NumericMode = EXACT) -> DiscreteDist:
    return dist_from_json(read_json(path), mode, str(path))


def load_joint(path, mode: NumericMode = EXACT) -> JointDist:
    return joint_from_json(read_json(path), mode, str(path))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
