"""Built-in groups and modules, JSON loaders, and seeded random modules."""
from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import InputError
from .modrep import (
    FiniteGroup,
    Module,
    Subgroup,
    free_module,
    group_from_permutations,
    group_from_table,
    module_radical,
    quotient_module,
    regular_module,
    submodule_hull,
    trivial_module,
)

__all__ = [
    "GROUP_NAMES",
    "catalog_group",
    "catalog_primes",
    "catalog_entries",
    "standard_module",
    "random_two_generator_module",
    "random_submodule",
    "load_group",
    "load_module",
    "parse_subgroup",
]


def _cyclic(n: int):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def _quaternion_table():
    # elements: (sign, unit) with unit in 1, i, j, k; index = 4 * (sign < 0) + unit
    units = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        for b in range(8):
            sign = (-1 if a >= 4 else 1) * (-1 if b >= 4 else 1)
            s, u = units[(a % 4, b % 4)]
            sign *= s
            table[a][b] = u + (4 if sign < 0 else 0)
    return table


_BUILDERS = {
    "C1": lambda: group_from_table("C1", [[0]]),
    "C2": lambda: group_from_table("C2", _cyclic(2)),
    "C3": lambda: group_from_table("C3", _cyclic(3)),
    "C4": lambda: group_from_table("C4", _cyclic(4)),
    "C5": lambda: group_from_table("C5", _cyclic(5)),
    "C6": lambda: group_from_permutations("C6", [[1, 2, 3, 4, 5, 0]]),
    "C8": lambda: group_from_table("C8", _cyclic(8)),
    "V4": lambda: group_from_permutations("V4", [[1, 0, 3, 2], [2, 3, 0, 1]]),
    "D4": lambda: group_from_permutations("D4", [[1, 2, 3, 0], [0, 3, 2, 1]]),
    "Q8": lambda: group_from_table("Q8", _quaternion_table()),
    "S3": lambda: group_from_permutations("S3", [[1, 2, 0], [1, 0, 2]]),
    "A4": lambda: group_from_permutations("A4", [[1, 2, 0, 3], [1, 0, 3, 2]]),
}

GROUP_NAMES = ("C2", "C3", "C4", "C5", "C6", "C8", "V4", "D4", "Q8", "S3", "A4")


@lru_cache(maxsize=None)
def catalog_group(name: str) -> FiniteGroup:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise InputError(f"unknown group {name!r}; catalog has {', '.join(GROUP_NAMES)}") from None


def _prime_divisors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def catalog_primes(name: str) -> list[int]:
    """Primes dividing the group order (the modular cases)."""
    return _prime_divisors(catalog_group(name).order)


def catalog_entries() -> list[tuple[str, int]]:
    return [(g, p) for g in GROUP_NAMES for p in catalog_primes(g)]


def random_submodule(m: Module, rng: np.random.Generator, count: int = 1) -> np.ndarray:
    """Hull of ``count`` random vectors: an RREF row basis of a random submodule."""
    vecs = rng.integers(0, m.p, size=(count, m.dim))
    return submodule_hull(m, vecs)


def random_two_generator_module(group: FiniteGroup, p: int, seed: int = 0) -> Module:
    """``F^2`` modulo the submodule generated by two random elements of ``J F^2``.

    The relations live in the radical, so the quotient still needs two
    generators; for ``p`` not dividing ``|G|`` the radical is zero and the
    result is ``F^2`` itself.
    """
    rng = np.random.default_rng(seed)
    free2 = free_module(group, p, 2)
    rad = module_radical(free2)
    if rad.shape[0] == 0:
        m = free2
    else:
        rel = (rng.integers(0, p, size=(2, rad.shape[0])) @ rad) % p
        hull = submodule_hull(free2, rel)
        m, _ = quotient_module(free2, hull)
    m.name = f"random2[{seed}]"
    return m


def standard_module(group: FiniteGroup, p: int, name: str, seed: int = 0) -> Module:
    """``trivial``, ``regular``, ``random`` (two generators, seeded) or ``perm`` (natural permutation module)."""
    if name == "trivial":
        return trivial_module(group, p)
    if name == "regular":
        return regular_module(group, p)
    if name in ("random", "random2"):
        return random_two_generator_module(group, p, seed)
    if name == "perm":
        perms = getattr(group, "permutations", None)
        if perms is None:
            raise InputError(f"{group.name} has no natural permutation representation")
        # rho(g) e_x = e_{g(x)}
        m = Module(group, p, perms=np.array(perms, dtype=np.int64), check=True, name="perm")
        return m
    raise InputError(f"unknown module {name!r}; use trivial, regular, random, perm or a JSON file")


def _read_json(source) -> dict:
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None


def load_group(source) -> FiniteGroup:
    """Group from a catalog name, a JSON file path or an already parsed dict."""
    if isinstance(source, str) and source in _BUILDERS:
        return catalog_group(source)
    if isinstance(source, str) and not source.endswith(".json") and not Path(source).exists():
        raise InputError(f"unknown group {source!r}; catalog has {', '.join(GROUP_NAMES)} or pass a JSON file")
    data = _read_json(source)
    name = data.get("name", "G")
    if "permutation_generators" in data:
        return group_from_permutations(name, data["permutation_generators"])
    if "mult_table" not in data:
        raise InputError("group file needs mult_table or permutation_generators")
    table = data["mult_table"]
    if "order" in data and int(data["order"]) != len(table):
        raise InputError(f"order {data['order']} does not match a table with {len(table)} rows")
    g = group_from_table(name, table, data.get("generators"))
    return g


def load_module(source, group: FiniteGroup | None = None, p: int | None = None) -> Module:
    data = _read_json(source)
    if "prime" not in data or "action" not in data:
        raise InputError("module file needs prime and action")
    prime = int(data["prime"])
    if p is not None and p != prime:
        raise InputError(f"module file is over F_{prime}, command asked for F_{p}")
    if "group" in data:
        group = load_group(data["group"])
    if group is None:
        raise InputError("module file names no group")
    action = {int(k): v for k, v in data["action"].items()}
    m = Module.from_generators(group, prime, action, name=data.get("name", ""))
    if "dim" in data and int(data["dim"]) != m.dim:
        raise InputError(f"declared dim {data['dim']} but action matrices are {m.dim}x{m.dim}")
    return m


def parse_subgroup(group: FiniteGroup, text: str) -> Subgroup:
    """``"C2"`` style (cyclic subgroup generated by the first element of that order),
    ``"G"``/``"all"`` or an explicit comma separated list of element indices."""
    text = text.strip()
    if text in ("G", "all", group.name):
        return Subgroup(group, range(group.order), group.name)
    if text in ("1", "C1", "trivial"):
        return Subgroup(group, [0], "C1")
    if text.startswith("C") and text[1:].isdigit():
        order = int(text[1:])
        for g in range(group.order):
            if group.element_order(g) == order:
                return Subgroup.generated_by(group, [g], text)
        raise InputError(f"{group.name} has no element of order {order}")
    try:
        elems = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse subgroup {text!r}") from None
    return Subgroup.generated_by(group, elems, f"<{text}>")
