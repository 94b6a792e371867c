"""Single-field perturbations of certificate documents."""

import copy
import random
import re

_INT = re.compile(r"-?\d+")
_RAT = re.compile(r"(-?\d+)/(\d+)")


def numeric_leaves(doc, path=()):
    """Paths of every numeric leaf (decimal strings and bare ints) except the schema tag."""
    if isinstance(doc, dict):
        for k, v in doc.items():
            if path == () and k == "schema_version":
                continue
            yield from numeric_leaves(v, path + (k,))
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from numeric_leaves(v, path + (i,))
    elif isinstance(doc, bool):
        return
    elif isinstance(doc, int) or (isinstance(doc, str) and (_INT.fullmatch(doc) or _RAT.fullmatch(doc))):
        yield path


def _bump(value, delta):
    if isinstance(value, int):
        return value + delta
    m = _RAT.fullmatch(value)
    if m:
        return f"{int(m.group(1)) + delta}/{m.group(2)}"
    return str(int(value) + delta)


def perturb(doc, rng: random.Random):
    """Copy of ``doc`` with one numeric leaf moved by +-1, and the path changed."""
    paths = list(numeric_leaves(doc))
    path = rng.choice(paths)
    out = copy.deepcopy(doc)
    node = out
    for p in path[:-1]:
        node = node[p]
    node[path[-1]] = _bump(node[path[-1]], rng.choice((-1, 1)))
    return out, path
