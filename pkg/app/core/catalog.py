"""Named small groups and a name parser ("Q8", "C2xC2", "S3xC2", ...)."""
import itertools
import re
from functools import lru_cache
from typing import List, Optional

from app.config import settings
from app.core.groups import FiniteGroup, direct_product, find_isomorphism, make_group
from app.errors import UnknownGroup

_ATOM = re.compile(r"^(C|D|S)(\d+)$|^(Q8|V4)$")

# quaternion units 1, i, j, k: _QUAT[a][b] = (sign, unit) of a*b
_QUAT = [
    [(0, 0), (0, 1), (0, 2), (0, 3)],
    [(0, 1), (1, 0), (0, 3), (1, 2)],
    [(0, 2), (1, 3), (1, 0), (0, 1)],
    [(0, 3), (0, 2), (1, 1), (1, 0)],
]


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise UnknownGroup(f"cyclic order must be positive, got {n}")
    return make_group([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; r^k s^e has index k + n*e."""
    if n < 3:
        raise UnknownGroup(f"dihedral D{n} needs n >= 3")

    def mul(x: int, y: int) -> int:
        a, e = x % n, x // n
        b, f = y % n, y // n
        k = (a + (b if e == 0 else -b)) % n
        return k + n * ((e + f) % 2)

    return make_group([[mul(x, y) for y in range(2 * n)] for x in range(2 * n)], f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    """Permutations of range(n) in lexicographic order; (p*q)(i) = p[q[i]]."""
    if n < 1 or n > 5:
        raise UnknownGroup(f"S{n} is outside the catalog")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return make_group(table, f"S{n}")


def quaternion() -> FiniteGroup:
    """Q8 with index unit + 4*sign; 0 is 1 and 4 is -1."""
    table = []
    for x in range(8):
        row = []
        for y in range(8):
            sign, unit = _QUAT[x % 4][y % 4]
            row.append(unit + 4 * ((sign + x // 4 + y // 4) % 2))
        table.append(row)
    return make_group(table, "Q8")


def klein() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2)).group.renamed("V4")


def _atom(name: str) -> FiniteGroup:
    m = _ATOM.match(name)
    if not m:
        raise UnknownGroup(f"unknown group name: {name!r}")
    if m.group(3) == "Q8":
        return quaternion()
    if m.group(3) == "V4":
        return klein()
    kind, n = m.group(1), int(m.group(2))
    if kind == "C":
        return cyclic(n)
    if kind == "D":
        return dihedral(n)
    return symmetric(n)


def _atom_order(name: str) -> int:
    m = _ATOM.match(name)
    if not m:
        raise UnknownGroup(f"unknown group name: {name!r}")
    if m.group(3):
        return 8 if m.group(3) == "Q8" else 4
    kind, n = m.group(1), int(m.group(2))
    if kind == "C":
        return n
    if kind == "D":
        return 2 * n
    order = 1
    for k in range(2, n + 1):
        order *= k
    return order


def _parts(name: str) -> List[str]:
    parts = [p.strip() for p in re.split(r"[x×]", name.strip())]
    if not parts or any(not p for p in parts):
        raise UnknownGroup(f"unknown group name: {name!r}")
    return parts


def order_of(name: str) -> int:
    order = 1
    for part in _parts(name):
        order *= _atom_order(part)
    return order


@lru_cache(maxsize=256)
def group_from_name(name: str) -> FiniteGroup:
    parts = _parts(name)
    if order_of(name) > settings.catalog_max_order:
        raise UnknownGroup(f"{name} exceeds the catalog order limit {settings.catalog_max_order}")
    G = _atom(parts[0])
    for part in parts[1:]:
        G = direct_product(G, _atom(part)).group
    return G.renamed(name.strip().replace("×", "x"))


_SMALL = ["C2", "C3", "C4", "V4", "S3", "Q8", "D4"]


def catalog_names() -> List[str]:
    names = [f"C{n}" for n in range(1, 33)]
    names += ["V4", "S3", "Q8", "S4"] + [f"D{n}" for n in range(4, 17)]
    for a, b in itertools.combinations_with_replacement(["C2", "C3", "C4"] + _SMALL[3:], 2):
        if a == b == "C2":
            continue
        names.append(f"{a}x{b}")
    names += ["C2xC2xC2", "C2xC2xC3", "C2xC2xC4"]
    return names


def identify(G: FiniteGroup) -> Optional[str]:
    """Catalog name of a group isomorphic to G, if the catalog has one."""
    for name in catalog_names():
        if order_of(name) != G.order:
            continue
        if find_isomorphism(G, group_from_name(name)) is not None:
            return name
    return None
