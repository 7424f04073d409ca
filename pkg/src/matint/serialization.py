"""Instance and result files: strict JSON with rationals as exact strings."""
from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from typing import Mapping

from .affine import AffineForm, Point
from .errors import InputError
from .geometry import Cell, Polytope
from .instance import Instance, Strategy
from .matroids import GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid

FORMAT_VERSION = 1

_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_rational(text) -> Fraction:
    """Parse 'num', '-num', or 'num/den' exactly; anything else is rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise InputError(f"malformed rational {text!r} (expected 'num' or 'num/den')")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise InputError(f"malformed rational {text!r}: zero denominator")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    return str(value)


def _expect_keys(obj: Mapping, keys: set[str], context: str) -> None:
    if not isinstance(obj, dict):
        raise InputError(f"{context}: expected an object")
    extra = set(obj) - keys
    missing = keys - set(obj)
    if extra:
        raise InputError(f"{context}: unknown fields {sorted(extra)}")
    if missing:
        raise InputError(f"{context}: missing fields {sorted(missing)}")


def _int(value, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{context}: expected an integer, got {value!r}")
    return value


def _point(values, context: str) -> Point:
    if not isinstance(values, list):
        raise InputError(f"{context}: expected a list of rationals")
    return tuple(parse_rational(v) for v in values)


def _form_to_dict(form: AffineForm) -> dict:
    return {
        "constant": format_rational(form.constant),
        "gradient": [format_rational(g) for g in form.gradient],
    }


def _form_from_dict(obj, context: str) -> AffineForm:
    _expect_keys(obj, {"constant", "gradient"}, context)
    return AffineForm(parse_rational(obj["constant"]), _point(obj["gradient"], context))


def matroid_to_dict(matroid: Matroid) -> dict:
    if isinstance(matroid, UniformMatroid):
        return {"kind": "uniform", "k": matroid.k}
    if isinstance(matroid, PartitionMatroid):
        return {
            "kind": "partition",
            "parts": [list(part) for part in matroid.parts],
            "capacities": list(matroid.capacities),
        }
    return {
        "kind": "graphic",
        "nodes": matroid.nodes,
        "edges": [list(edge) for edge in matroid.edges],
    }


def matroid_from_dict(obj, m: int) -> Matroid:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("matroid: expected an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "uniform":
        _expect_keys(obj, {"kind", "k"}, "matroid")
        return UniformMatroid(m, _int(obj["k"], "matroid.k"))
    if kind == "partition":
        _expect_keys(obj, {"kind", "parts", "capacities"}, "matroid")
        parts = tuple(
            tuple(_int(e, "matroid.parts") for e in part) for part in obj["parts"]
        )
        capacities = tuple(_int(c, "matroid.capacities") for c in obj["capacities"])
        return PartitionMatroid(parts, capacities)
    if kind == "graphic":
        _expect_keys(obj, {"kind", "nodes", "edges"}, "matroid")
        edges = []
        for edge in obj["edges"]:
            if not isinstance(edge, list) or len(edge) != 2:
                raise InputError("matroid.edges: each edge is a [u, v] pair")
            edges.append((_int(edge[0], "edge"), _int(edge[1], "edge")))
        return GraphicMatroid(_int(obj["nodes"], "matroid.nodes"), tuple(edges))
    raise InputError(f"matroid: unknown kind {kind!r}")


def instance_to_dict(instance: Instance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "matroid": matroid_to_dict(instance.matroid),
        "p": instance.p,
        "ell": instance.ell,
        "weights": [
            {
                "a": format_rational(form.constant),
                "b": [format_rational(g) for g in form.gradient],
            }
            for form in instance.weights
        ],
        "polytope": [
            {
                "gradient": [format_rational(g) for g in form.gradient],
                "constant": format_rational(form.constant),
                "sense": "ge",
            }
            for form in instance.polytope
        ],
    }


def instance_from_dict(obj) -> Instance:
    _expect_keys(
        obj,
        {"format_version", "matroid", "p", "ell", "weights", "polytope"},
        "instance",
    )
    if obj["format_version"] != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {obj['format_version']!r}")
    p = _int(obj["p"], "p")
    weights = []
    for i, record in enumerate(obj["weights"]):
        _expect_keys(record, {"a", "b"}, f"weights[{i}]")
        weights.append(AffineForm(parse_rational(record["a"]), _point(record["b"], "b")))
    constraints = []
    for i, record in enumerate(obj["polytope"]):
        _expect_keys(record, {"gradient", "constant", "sense"}, f"polytope[{i}]")
        if record["sense"] != "ge":
            raise InputError(f"polytope[{i}]: only sense 'ge' is supported")
        constraints.append(
            AffineForm(parse_rational(record["constant"]), _point(record["gradient"], "gradient"))
        )
    matroid = matroid_from_dict(obj["matroid"], len(weights))
    return Instance(
        matroid=matroid,
        weights=tuple(weights),
        ell=_int(obj["ell"], "ell"),
        p=p,
        polytope=tuple(constraints),
    )


def instance_fingerprint(instance: Instance) -> str:
    canonical = json.dumps(
        instance_to_dict(instance), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def result_to_dict(result) -> dict:
    cells = []
    for solution in result.cells:
        poly = solution.cell.polytope
        cells.append(
            {
                "constraints": [_form_to_dict(c) for c in poly.constraints],
                "vertices": [[format_rational(x) for x in v] for v in poly.vertices],
                "interior": [format_rational(x) for x in solution.cell.interior_point],
                "oracle_calls": solution.oracle_calls,
                "iterations": solution.iterations,
                "strategies": [
                    {
                        "removed": list(entry.strategy.removed),
                        "value_form": _form_to_dict(entry.value_form),
                    }
                    for entry in solution.strategies
                ],
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "fingerprint": result.fingerprint,
        "epsilon": format_rational(result.epsilon),
        "beta": format_rational(result.beta),
        "oracle": result.oracle,
        "metadata": {
            "hyperplanes": result.hyperplane_count,
            "cells": result.cell_count,
            "oracle_calls": result.oracle_calls,
        },
        "cells": cells,
    }


def result_from_dict(obj):
    from .cellapprox import CellSolution, StrategyEntry
    from .solver import ApproximationResult

    _expect_keys(
        obj,
        {"format_version", "fingerprint", "epsilon", "beta", "oracle", "metadata", "cells"},
        "result",
    )
    if obj["format_version"] != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {obj['format_version']!r}")
    _expect_keys(obj["metadata"], {"hyperplanes", "cells", "oracle_calls"}, "metadata")
    epsilon = parse_rational(obj["epsilon"])
    beta = parse_rational(obj["beta"])
    solutions = []
    for i, record in enumerate(obj["cells"]):
        _expect_keys(
            record,
            {"constraints", "vertices", "interior", "oracle_calls", "iterations", "strategies"},
            f"cells[{i}]",
        )
        constraints = tuple(
            _form_from_dict(c, f"cells[{i}].constraints") for c in record["constraints"]
        )
        if not constraints:
            raise InputError(f"cells[{i}]: empty constraint list")
        dim = constraints[0].dim
        poly = Polytope(dim, constraints, trusted_bounded=True)
        poly.__dict__["vertices"] = tuple(
            _point(v, f"cells[{i}].vertices") for v in record["vertices"]
        )
        interior = _point(record["interior"], f"cells[{i}].interior")
        entries = []
        for j, strat in enumerate(record["strategies"]):
            _expect_keys(strat, {"removed", "value_form"}, f"cells[{i}].strategies[{j}]")
            entries.append(
                StrategyEntry(
                    Strategy(tuple(_int(e, "removed") for e in strat["removed"])),
                    _form_from_dict(strat["value_form"], "value_form"),
                )
            )
        solutions.append(
            CellSolution(
                cell=Cell(poly, interior),
                anchor=interior,
                strategies=tuple(entries),
                epsilon=epsilon,
                beta=beta,
                oracle_calls=_int(record["oracle_calls"], "oracle_calls"),
                iterations=_int(record["iterations"], "iterations"),
            )
        )
    if _int(obj["metadata"]["cells"], "metadata.cells") != len(solutions):
        raise InputError("metadata.cells disagrees with the number of cell records")
    return ApproximationResult(
        fingerprint=obj["fingerprint"],
        epsilon=epsilon,
        beta=beta,
        oracle=obj["oracle"],
        cells=tuple(solutions),
        hyperplane_count=_int(obj["metadata"]["hyperplanes"], "metadata.hyperplanes"),
        oracle_calls=_int(obj["metadata"]["oracle_calls"], "metadata.oracle_calls"),
    )


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(instance_to_dict(instance)))


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        return instance_from_dict(json.load(handle))


def save_result(result, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(result_to_dict(result)))


def load_result(path):
    with open(path, "r", encoding="utf-8") as handle:
        return result_from_dict(json.load(handle))
