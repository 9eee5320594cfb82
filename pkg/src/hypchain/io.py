"""File formats: presentations, chains, corpora, reports and run manifests.

Everything is JSON with sorted keys except presentation files, which may
also be TOML.  Rationals are written as ``"num/den"`` strings, integers as
plain JSON numbers (Python ints are unbounded, so nothing is truncated).
"""

from __future__ import annotations

import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .chains import Chain
from .errors import PresentationInvalid
from .group import BACKENDS, GroupPresentation

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

_FIELDS = {"generators", "relators", "backend", "ball_radius", "delta", "max_elements"}


def parse_rational(x: Any, field: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise PresentationInvalid(f"{field} must be a number", field=field)
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise PresentationInvalid(f"{field} is not a rational: {x!r}", field=field) from None


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def presentation_from_dict(data: Any, radius: int | None = None) -> GroupPresentation:
    if not isinstance(data, dict):
        raise PresentationInvalid("presentation must be an object", field="")
    extra = sorted(set(data) - _FIELDS)
    if extra:
        raise PresentationInvalid(f"unknown field {extra[0]!r}", field=extra[0])
    if "generators" not in data:
        raise PresentationInvalid("missing generators", field="generators")
    gens = data["generators"]
    if not isinstance(gens, list):
        raise PresentationInvalid("generators must be a list", field="generators")
    rels = data.get("relators", [])
    if not isinstance(rels, list):
        raise PresentationInvalid("relators must be a list", field="relators")
    backend = data.get("backend", "free")
    if backend not in BACKENDS:
        raise PresentationInvalid(f"backend must be one of {list(BACKENDS)}", field="backend")
    r = data.get("ball_radius", 8) if radius is None else radius
    if isinstance(r, bool) or not isinstance(r, int):
        raise PresentationInvalid("ball_radius must be an integer", field="ball_radius")
    delta = data.get("delta")
    if delta is not None:
        delta = parse_rational(delta, "delta")
    kw = {}
    if "max_elements" in data:
        kw["max_elements"] = data["max_elements"]
    return GroupPresentation(tuple(gens), tuple(rels), backend, r, delta, **kw)


def presentation_to_dict(p: GroupPresentation) -> dict:
    out = {
        "generators": list(p.generators),
        "relators": list(p.relators),
        "backend": p.backend,
        "ball_radius": p.ball_radius,
    }
    if p.delta is not None:
        out["delta"] = format_rational(p.delta)
    return out


def read_bytes(path: str | Path) -> bytes:
    return Path(path).read_bytes()


def load_presentation(path: str | Path, radius: int | None = None) -> tuple[GroupPresentation, str]:
    """Presentation plus the sha256 of the file bytes."""
    raw = read_bytes(path)
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8")
    try:
        if str(path).endswith(".toml"):
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise PresentationInvalid(f"cannot parse {path}: {exc}", field="") from None
    return presentation_from_dict(data, radius), digest


def chain_to_json(c: Chain) -> dict:
    return {"dim": c.dim, "terms": [{"simplex": list(s), "coeff": k} for s, k in c]}


def chain_from_json(data: dict) -> Chain:
    return Chain({tuple(t["simplex"]): int(t["coeff"]) for t in data["terms"]}, int(data["dim"]))


def simplex_from_json(data: Any, field: str = "simplex") -> tuple:
    if not isinstance(data, list) or not data or not all(isinstance(x, str) for x in data):
        raise PresentationInvalid(f"{field} must be a nonempty list of words", field=field)
    return tuple(data)


def load_corpus(path: str | Path) -> tuple[list[tuple], dict]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, list):
        items, meta = data, {}
    elif isinstance(data, dict) and "simplices" in data:
        items, meta = data["simplices"], {k: v for k, v in data.items() if k != "simplices"}
    else:
        raise PresentationInvalid("corpus must be a list or have a 'simplices' list", field="simplices")
    return [simplex_from_json(s, f"simplices[{k}]") for k, s in enumerate(items)], meta


def dumps(data: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path | None, data: Any) -> str:
    text = dumps(data)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text


def manifest(group_hash: str, params, seed, corpus: dict, max_ratios: dict) -> dict:
    return {
        "group_sha256": group_hash,
        "schedule": params.to_json(),
        "seed": seed,
        "corpus": corpus,
        "max_ratios": {str(k): format_rational(v) for k, v in sorted(max_ratios.items())},
        "version": __version__,
    }
