"""JSON reading and writing for instances and reduction sources."""

import json

from .errors import MalformedInstance
from .model import Constraint, CspInstance, Domain, ReconfigInstance
from .transform import KKCliqueInstance, LabeledCliqueInstance, RWordSystem

INSTANCE_FIELDS = {"domain", "vertices", "hyperedges", "source", "target"}
OPTIONAL_FIELDS = {"weights"}


def _expect(obj, required, optional=frozenset(), what="object"):
    if not isinstance(obj, dict):
        raise MalformedInstance(f"{what} must be a JSON object")
    keys = set(obj)
    unknown = keys - required - set(optional)
    if unknown:
        raise MalformedInstance(f"unknown {what} field(s): {', '.join(sorted(unknown))}")
    missing = required - keys
    if missing:
        raise MalformedInstance(f"missing {what} field(s): {', '.join(sorted(missing))}")


def _string_list(value, what):
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise MalformedInstance(f"{what} must be a list of strings")
    return value


def parse_instance(obj):
    _expect(obj, INSTANCE_FIELDS, OPTIONAL_FIELDS, "instance")
    domain = Domain(_string_list(obj["domain"], "domain"))
    vertices = _string_list(obj["vertices"], "vertices")
    if len(set(vertices)) != len(vertices):
        raise MalformedInstance("duplicate vertex id")
    known = set(vertices)
    constraints = []
    if not isinstance(obj["hyperedges"], list):
        raise MalformedInstance("hyperedges must be a list")
    for edge in obj["hyperedges"]:
        _expect(edge, {"scope", "allowed"}, what="hyperedge")
        scope = _string_list(edge["scope"], "scope")
        if not scope:
            raise MalformedInstance("hyperedge scope must be non-empty")
        for v in scope:
            if v not in known:
                raise MalformedInstance(f"hyperedge uses unknown vertex {v!r}")
        if not isinstance(edge["allowed"], list):
            raise MalformedInstance("allowed must be a list of tuples")
        rows = set()
        for t in edge["allowed"]:
            t = _string_list(t, "allowed tuple")
            if len(t) != len(scope):
                raise MalformedInstance(f"tuple {t!r} does not match scope {scope!r}")
            rows.add(tuple(domain.index(x) for x in t))
        constraints.append(Constraint(tuple(scope), frozenset(rows)))
    csp = CspInstance.build(domain, vertices, constraints)

    def assignment(name):
        raw = obj[name]
        if not isinstance(raw, dict):
            raise MalformedInstance(f"{name} must map vertex ids to labels")
        return {v: domain.index(x) for v, x in raw.items()}

    weights = obj.get("weights")
    if weights is not None and not isinstance(weights, dict):
        raise MalformedInstance("weights must map vertex ids to integers")
    return ReconfigInstance(csp, assignment("source"), assignment("target"), weights)


def dump_instance(inst):
    csp = inst.csp
    labels = csp.domain.labels
    out = {
        "domain": list(labels),
        "vertices": list(csp.vertices),
        "hyperedges": [
            {
                "scope": list(c.scope),
                "allowed": [[labels[x] for x in t] for t in c.sorted_tuples()],
            }
            for c in csp.constraints
            if c.scope
        ],
        "source": {v: labels[inst.source[v]] for v in csp.vertices},
        "target": {v: labels[inst.target[v]] for v in csp.vertices},
    }
    if any(c.arity == 0 and not c.allowed for c in csp.constraints):
        raise MalformedInstance("an unsatisfiable nullary constraint cannot be written")
    if not inst.unit_weights:
        out["weights"] = {v: inst.weights[v] for v in csp.vertices}
    return out


def dumps_instance(inst):
    return json.dumps(dump_instance(inst), indent=1) + "\n"


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInstance(f"{path}: invalid JSON ({exc})") from None


def load_instance(path):
    return parse_instance(read_json(path))


def save_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))


# source formats for the reductions that do not start from a CSR instance

def parse_kkclique(obj):
    _expect(obj, {"kappa", "edges"}, what="kkclique source")
    edges = []
    for e in obj["edges"]:
        if not (isinstance(e, list) and len(e) == 2):
            raise MalformedInstance("each edge is a pair of [group, index] vertices")
        a, b = (tuple(x) for x in e)
        edges.append(frozenset((a, b)))
    return KKCliqueInstance(int(obj["kappa"]), frozenset(edges))


def dump_kkclique(src):
    edges = sorted(sorted(e) for e in src.edges)
    return {"kappa": src.kappa, "edges": [[list(a), list(b)] for a, b in edges]}


def parse_lclique(obj):
    _expect(obj, {"vertices", "edges", "source", "target"}, what="lclique source")
    return LabeledCliqueInstance(
        tuple(obj["vertices"]),
        frozenset(frozenset(e) for e in obj["edges"]),
        tuple(obj["source"]),
        tuple(obj["target"]),
    )


def dump_lclique(src):
    return {
        "vertices": list(src.vertices),
        "edges": sorted(sorted(e) for e in src.edges),
        "source": list(src.source),
        "target": list(src.target),
    }


def parse_rword(obj):
    _expect(obj, {"letters", "arcs", "source", "target"}, what="rword source")
    return RWordSystem(
        tuple(obj["letters"]),
        tuple(tuple(a) for a in obj["arcs"]),
        tuple(obj["source"]),
        tuple(obj["target"]),
    )


def dump_rword(src):
    return {
        "letters": list(src.letters),
        "arcs": [list(a) for a in src.arcs],
        "source": list(src.source),
        "target": list(src.target),
    }
