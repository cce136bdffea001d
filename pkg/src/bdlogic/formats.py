"""JSON readers and writers for models and proof files, plus one-line model summaries."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Union

from .hilbert import MP, Axiom, Gen, Hyp, Proof, Step
from .kripke import KripkeModel
from .matrices import DunnModel, DunnValue, FourValue, ThreeValue
from .star import StarModel
from .syntax import Const, Formula, Var, is_variable_name, parse, render


class FormatError(ValueError):
    pass


def _tuples(ts) -> list:
    return [list(t) for t in sorted(ts)]


def _ext(table: Mapping) -> dict:
    return {p: _tuples(ts) for p, ts in sorted(table.items()) if ts}


# ----------------------------------------------------------------- kripke

def kripke_to_json(m: KripkeModel) -> dict:
    return {
        "kind": "kripke",
        "worlds": list(m.worlds),
        "order": [[a, b] for a, b in sorted(m.order) if a != b],
        "domains": {w: sorted(m.domains[w]) for w in m.worlds},
        "arities": dict(sorted(m.arities.items())),
        "constants": sorted(m.constants),
        "pos": {w: _ext(m.pos[w]) for w in m.worlds},
        "neg": {w: _ext(m.neg[w]) for w in m.worlds},
    }


def kripke_from_json(obj: Mapping) -> KripkeModel:
    try:
        worlds = obj["worlds"]
    except KeyError:
        raise FormatError("kripke model needs 'worlds'") from None
    domains = obj.get("domains")
    return KripkeModel.build(
        worlds,
        order=[tuple(p) for p in obj.get("order", ())],
        domains=domains,
        pos=obj.get("pos"),
        neg=obj.get("neg"),
        constants=obj.get("constants", ()),
        arities=obj.get("arities"),
    )


# ------------------------------------------------------------------- dunn

def dunn_to_json(m: DunnModel) -> dict:
    return {
        "kind": "dunn",
        "domain": list(m.domain),
        "arities": dict(sorted(m.arities.items())),
        "constants": sorted(m.constants),
        "pos": _ext(m.pos),
        "neg": _ext(m.neg),
    }


def dunn_from_json(obj: Mapping) -> DunnModel:
    if "assignment" in obj:
        return DunnModel.from_assignment({a: DunnValue.parse(v) for a, v in obj["assignment"].items()})
    ar = dict(obj.get("arities", {}))
    pos = {p: frozenset(tuple(t) for t in ts) for p, ts in obj.get("pos", {}).items()}
    neg = {p: frozenset(tuple(t) for t in ts) for p, ts in obj.get("neg", {}).items()}
    for table in (pos, neg):
        for p, ts in table.items():
            for t in ts:
                ar.setdefault(p, len(t))
    for p in ar:
        pos.setdefault(p, frozenset())
        neg.setdefault(p, frozenset())
    return DunnModel(tuple(obj.get("domain", ("d",))), ar, pos, neg, frozenset(obj.get("constants", ())))


# ------------------------------------------------------------------- star

def star_to_json(m: StarModel) -> dict:
    return {
        "kind": "star",
        "worlds": list(m.worlds),
        "star": {w: m.star[w] for w in m.worlds},
        "domain": list(m.domain),
        "arities": dict(sorted(m.arities.items())),
        "constants": sorted(m.constants),
        "ext": {w: _ext(m.ext[w]) for w in m.worlds},
    }


def star_from_json(obj: Mapping) -> StarModel:
    return StarModel.build(obj["worlds"], obj.get("star"), obj.get("domain", ("d",)),
                           obj.get("ext"), obj.get("constants", ()), obj.get("arities"))


_READERS = {"kripke": kripke_from_json, "dunn": dunn_from_json, "star": star_from_json}


def model_from_json(obj: Mapping):
    kind = obj.get("kind")
    if kind is None:
        kind = "dunn" if ("assignment" in obj or "domain" in obj and "worlds" not in obj) else \
            "star" if "star" in obj else "kripke"
    try:
        return _READERS[kind](obj)
    except KeyError as exc:
        raise FormatError(f"bad {kind} model: missing {exc}") from None


def model_to_json(m) -> dict:
    if isinstance(m, KripkeModel):
        return kripke_to_json(m)
    if isinstance(m, DunnModel):
        return dunn_to_json(m)
    if isinstance(m, StarModel):
        return star_to_json(m)
    if isinstance(m, Mapping):
        return {"kind": "assignment", "assignment": {k: str(v) for k, v in m.items()}}
    raise TypeError(f"no JSON form for {type(m).__name__}")


def load_models(path: Union[str, Path]) -> list:
    """A file holds one model object, a list of them, or ``{"models": [...]}``."""
    data = json.loads(Path(path).read_text())
    if isinstance(data, Mapping) and "models" in data:
        data = data["models"]
    if isinstance(data, Mapping):
        data = [data]
    return [model_from_json(obj) for obj in data]


# ----------------------------------------------------------------- proofs

def _value_to_json(v) -> str:
    if isinstance(v, Formula):
        return render(v)
    if isinstance(v, (Var, Const)):
        return v.name
    return str(v)


def _just_to_json(j) -> dict:
    if isinstance(j, Hyp):
        return {"rule": "hyp", "index": j.index}
    if isinstance(j, Axiom):
        out: dict = {"rule": "axiom", "schema": j.schema}
        if j.subst is not None:
            out["subst"] = {k: _value_to_json(v) for k, v in j.subst}
        return out
    if isinstance(j, MP):
        return {"rule": "mp", "minor": j.minor, "major": j.major}
    if isinstance(j, Gen):
        return {"rule": "gen", "step": j.step, "var": j.var}
    raise TypeError(f"unknown justification {j!r}")


def _subst_value(key: str, text: str):
    if key in ("A", "B", "C"):
        return parse(text)
    if key == "t":
        return Var(text) if is_variable_name(text) else Const(text)
    return text


def _just_from_json(obj: Mapping):
    rule = obj.get("rule")
    try:
        if rule == "hyp":
            return Hyp(int(obj["index"]))
        if rule == "axiom":
            subst = obj.get("subst")
            if subst is not None:
                subst = {k: _subst_value(k, v) for k, v in subst.items()}
            return Axiom.of(obj["schema"], subst)
        if rule == "mp":
            return MP(int(obj["minor"]), int(obj["major"]))
        if rule == "gen":
            return Gen(int(obj["step"]), obj["var"])
    except KeyError as exc:
        raise FormatError(f"{rule} step lacks {exc}") from None
    raise FormatError(f"unknown rule {rule!r}")


def proof_to_json(p: Proof) -> dict:
    return {
        "name": p.name,
        "logic": p.logic,
        "minimal": p.minimal,
        "premises": [render(f) for f in p.premises],
        "steps": [{"formula": render(s.formula), **_just_to_json(s.just)} for s in p.steps],
    }


def proof_from_json(obj: Mapping) -> Proof:
    steps = []
    for k, s in enumerate(obj.get("steps", ()), start=1):
        if "formula" not in s:
            raise FormatError(f"step {k} has no formula")
        steps.append(Step(parse(s["formula"]), _just_from_json(s)))
    return Proof(tuple(steps), tuple(parse(f) for f in obj.get("premises", ())),
                 obj.get("logic", "bdi"), bool(obj.get("minimal", False)), obj.get("name", ""))


def load_proof(path: Union[str, Path]) -> Proof:
    return proof_from_json(json.loads(Path(path).read_text()))


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# -------------------------------------------------------------- summaries

def _atoms_at(table: Mapping, sign: str) -> list:
    out = []
    for p, ts in sorted(table.items()):
        for t in sorted(ts):
            out.append(f"{sign}{p}({','.join(t)})" if t else f"{sign}{p}")
    return out


def describe_kripke(m: KripkeModel, world=None) -> str:
    """Compact one-line rendering, e.g. ``w0<w1 | w0: | w1: +p``."""
    strict = sorted((a, b) for a, b in m.order if a != b)
    parts = [",".join(f"{a}<{b}" for a, b in strict) or "discrete"]
    fo = any(m.arities.values()) or m.constants
    for w in m.worlds:
        bits = _atoms_at(m.pos[w], "+") + _atoms_at(m.neg[w], "-")
        dom = f"[{','.join(sorted(m.domains[w]))}]" if fo else ""
        parts.append(f"{w}{dom}: {' '.join(bits)}".rstrip())
    text = " | ".join(parts)
    return f"{text} @ {world}" if world is not None else text


def describe_star(m: StarModel, world=None) -> str:
    parts = [",".join(f"{w}*={m.star[w]}" for w in m.worlds)]
    for w in m.worlds:
        parts.append(f"{w}: {' '.join(_atoms_at(m.ext[w], '+'))}".rstrip())
    text = " | ".join(parts)
    return f"{text} @ {world}" if world is not None else text


def describe_dunn(m: DunnModel) -> str:
    if all(n == 0 for n in m.arities.values()):
        return ", ".join(f"{p}={m.value_of(p, ())}" for p in sorted(m.arities))
    cells = []
    for p in sorted(m.arities):
        for t in sorted(set(m.pos.get(p, ())) | set(m.neg.get(p, ()))):
            name = f"{p}({','.join(t)})" if t else p
            cells.append(f"{name}={m.value_of(p, t)}")
    return f"D={{{','.join(m.domain)}}} " + ", ".join(cells)


def describe(witness) -> str:
    """Readable form of any verdict witness."""
    if witness is None:
        return ""
    if isinstance(witness, tuple) and len(witness) == 2:
        m, w = witness
        if isinstance(m, KripkeModel):
            return describe_kripke(m, w)
        if isinstance(m, StarModel):
            return describe_star(m, w)
    if isinstance(witness, DunnModel):
        return describe_dunn(witness)
    if isinstance(witness, Mapping):
        return ", ".join(f"{k}={v}" for k, v in sorted(witness.items()))
    if isinstance(witness, (FourValue, ThreeValue, DunnValue)):
        return str(witness)
    return str(witness)


def witness_to_json(witness):
    if witness is None:
        return None
    if isinstance(witness, tuple) and len(witness) == 2 and not isinstance(witness[0], str):
        m, w = witness
        return {"model": model_to_json(m), "world": w}
    if isinstance(witness, DunnModel):
        return {"model": dunn_to_json(witness)}
    if isinstance(witness, Mapping):
        return {"assignment": {k: str(v) for k, v in sorted(witness.items())}}
    return str(witness)
