"""String keys for the built-in group models.

    free:k  zd:d  heisenberg  bs:1:2  pgl2:p  finite:<table-file>
    product:<key>,<key>  freeprod:<key>,<key>  trivial  cyclic:n

Nested composite arguments may be wrapped in parentheses.  A parabolic
family is appended as ``#parabolic=<item>[,<item>...]``; each item is a
factor index (free products), generator indices joined by '+' (free groups,
Z^d), or ``all`` for the whole group.
"""

from functools import lru_cache

from .models import (BaumslagSolitar12, DirectProduct, FiniteGroup, FreeAbelian,
                     FreeGroup, FreeProduct, Heisenberg, PGL2Laurent)

GROUP_KEYS = (
    "bs:1:2",
    "cyclic:<n>",
    "finite:<table-file>",
    "free:<k>",
    "freeprod:<key>,<key>",
    "heisenberg",
    "pgl2:<p>",
    "product:<key>,<key>",
    "trivial",
    "zd:<d>",
)

EXAMPLE_GROUPS = (
    "bs:1:2",
    "free:2",
    "free:2#parabolic=0",
    "free:2#parabolic=0,1",
    "freeprod:zd:2,zd:1#parabolic=0",
    "freeprod:zd:2,zd:2#parabolic=0,1",
    "heisenberg",
    "pgl2:2",
    "pgl2:3",
    "trivial",
    "zd:1",
    "zd:2",
    "zd:2#parabolic=0",
    "zd:3",
)


def _strip(s):
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        return s[1:-1]
    return s


def _split_pair(args):
    depth = 0
    for i, ch in enumerate(args):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return _strip(args[:i]), _strip(args[i + 1:])
    raise ValueError(f"expected two comma-separated group keys, got {args!r}")


def _build(key):
    kind, _, rest = key.partition(":")
    if kind == "free":
        return FreeGroup(int(rest))
    if kind == "zd":
        return FreeAbelian(int(rest))
    if kind == "trivial":
        return FreeAbelian(0)
    if kind == "heisenberg":
        return Heisenberg()
    if kind == "bs":
        if rest != "1:2":
            raise ValueError("only BS(1,2) is built in")
        return BaumslagSolitar12()
    if kind == "pgl2":
        return PGL2Laurent(int(rest))
    if kind == "cyclic":
        return FiniteGroup.cyclic(int(rest))
    if kind == "finite":
        return FiniteGroup.from_file(rest)
    if kind in ("product", "freeprod"):
        a, b = _split_pair(rest)
        ga, gb = get_group(a), get_group(b)
        return DirectProduct(ga, gb) if kind == "product" else FreeProduct(ga, gb)
    raise ValueError(f"unknown group key {key!r}")


@lru_cache(maxsize=None)
def get_group(key):
    """Model for a registry key (cached, so metric caches are shared)."""
    base, _, frag = key.partition("#")
    model = _build(base.strip())
    if frag:
        name, _, value = frag.partition("=")
        if name.strip() != "parabolic":
            raise ValueError(f"unknown key fragment {frag!r}")
        model.with_parabolics([tok.strip() for tok in value.split(",") if tok.strip()])
    model.key = key
    return model
