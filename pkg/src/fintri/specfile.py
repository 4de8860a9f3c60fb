"""YAML algebra-spec files.

    field: 3            # prime p or "Q"
    vertices: [1]
    arrows:
      - [x, 1, 1]       # name, source, target, optional degree
    relations: ["x*x"]
    bound: 1
    automorphism:       # optional: arrow name -> expression
      x: "-x"

Paths ``a*b`` compose like functions: b first, then a.
"""
from __future__ import annotations

from pathlib import Path
from typing import Optional

import yaml

from .algebra import Algebra, AlgebraMorphism, PresentationError, QuiverPresentation, build_algebra, check_morphism


class SpecError(ValueError):
    pass


def _arrow(entry):
    if isinstance(entry, dict):
        missing = {"name", "src", "tgt"} - set(entry)
        if missing:
            raise SpecError(f"arrow {entry!r} lacks {sorted(missing)}")
        return entry
    if isinstance(entry, (list, tuple)) and len(entry) in (3, 4):
        return tuple(entry)
    raise SpecError(f"cannot read arrow {entry!r}")


def parse_spec(data: dict, name: str = "algebra") -> tuple[Algebra, Optional[AlgebraMorphism]]:
    if not isinstance(data, dict):
        raise SpecError("spec must be a mapping")
    for key in ("field", "vertices"):
        if key not in data:
            raise SpecError(f"missing key {key!r}")
    unknown = set(data) - {"field", "vertices", "arrows", "relations", "bound", "automorphism", "name", "graded"}
    if unknown:
        raise SpecError(f"unknown keys {sorted(unknown)}")
    arrows = [_arrow(e) for e in data.get("arrows") or []]
    graded = bool(data.get("graded", any(
        (a.get("degree", 0) if isinstance(a, dict) else (a[3] if len(a) > 3 else 0)) for a in arrows
    )))
    try:
        pres = QuiverPresentation(
            data["field"],
            [str(v) for v in data["vertices"]],
            arrows,
            [str(r) for r in data.get("relations") or []],
            bound=int(data.get("bound", 1)),
            graded=graded,
            name=str(data.get("name", name)),
        )
        a = build_algebra(pres)
    except (PresentationError, KeyError, TypeError) as e:
        raise SpecError(str(e)) from None
    sigma = None
    if data.get("automorphism"):
        sigma = parse_automorphism(a, data["automorphism"])
    return a, sigma


def parse_automorphism(a: Algebra, images: dict) -> AlgebraMorphism:
    try:
        sigma = AlgebraMorphism.from_images(a, {str(k): str(v) for k, v in images.items()})
    except (PresentationError, KeyError, ValueError) as e:
        raise SpecError(f"bad automorphism: {e}") from None
    if not check_morphism(sigma) or a.field.rank(sigma.matrix) != a.dim:
        raise SpecError("automorphism images do not define an algebra automorphism")
    return sigma


def load_spec(path) -> tuple[Algebra, Optional[AlgebraMorphism]]:
    p = Path(path)
    try:
        data = yaml.safe_load(p.read_text())
    except (OSError, yaml.YAMLError) as e:
        raise SpecError(f"cannot read {path}: {e}") from None
    return parse_spec(data, name=p.stem)


def load_automorphism(path, a: Algebra) -> AlgebraMorphism:
    """Read an automorphism either from a bare mapping or from the
    ``automorphism`` key of a spec file."""
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as e:
        raise SpecError(f"cannot read {path}: {e}") from None
    if isinstance(data, dict) and "automorphism" in data:
        data = data["automorphism"]
    if not isinstance(data, dict):
        raise SpecError("automorphism must be a mapping from arrow names to expressions")
    return parse_automorphism(a, data)


def dump_spec(pres: QuiverPresentation, sigma: Optional[dict] = None) -> str:
    data = {
        "field": "Q" if pres.field.characteristic == 0 else pres.field.characteristic,
        "vertices": list(pres.vertices),
        "arrows": [[a.name, a.source, a.target] + ([a.degree] if a.degree else []) for a in pres.arrows],
        "relations": [r if isinstance(r, str) else str(r) for r in pres.relations],
        "bound": pres.bound,
    }
    if sigma:
        data["automorphism"] = dict(sigma)
    return yaml.safe_dump(data, sort_keys=False)
