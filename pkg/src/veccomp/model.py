"""Multi-indices, weight functions and the JSON weight-spec format.

Every counting routine in the package works inside a finite box
``[0, target]``: parts are nonnegative, so a part with any coordinate
larger than the target can never occur.  Weight functions therefore only
need to answer "which parts inside this box have nonzero weight", which
is what makes infinite-support rules such as the product weight usable.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "MultiIndex",
    "WeightFunction",
    "WeightSpecError",
    "box_points",
    "box_volume",
    "parse_weight_function",
    "load_weight_function",
    "weight_to_spec",
    "support_within",
    "PRESETS",
    "preset",
]


class WeightSpecError(ValueError):
    """Raised for malformed weight-function documents."""


class MultiIndex(tuple):
    """Immutable vector of nonnegative integers.

    Arithmetic is componentwise (unlike plain tuples).  Subtraction raises
    ``ValueError`` when a component would become negative; use
    :meth:`fits_in` first if that is an expected case.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable[int] = ()):
        coords = tuple(int(c) for c in coords)
        if not coords:
            raise ValueError("a MultiIndex needs at least one coordinate")
        if any(c < 0 for c in coords):
            raise ValueError(f"negative coordinate in {coords}")
        return super().__new__(cls, coords)

    @classmethod
    def zeros(cls, dim: int) -> "MultiIndex":
        return cls((0,) * dim)

    @classmethod
    def ones(cls, dim: int) -> "MultiIndex":
        return cls((1,) * dim)

    @property
    def dim(self) -> int:
        return len(self)

    def _check_dim(self, other: Sequence[int]) -> None:
        if len(other) != len(self):
            raise ValueError(f"dimension mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: Sequence[int]) -> "MultiIndex":  # type: ignore[override]
        self._check_dim(other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other: Sequence[int]) -> "MultiIndex":
        self._check_dim(other)
        return MultiIndex(a - b for a, b in zip(self, other))

    def __mul__(self, scalar: int) -> "MultiIndex":  # type: ignore[override]
        return MultiIndex(scalar * a for a in self)

    __rmul__ = __mul__

    def fits_in(self, box: Sequence[int]) -> bool:
        """True when ``self <= box`` componentwise."""
        self._check_dim(box)
        return all(a <= b for a, b in zip(self, box))

    def is_zero(self) -> bool:
        return not any(self)

    def divisible_by(self, d: int) -> bool:
        return all(c % d == 0 for c in self)

    def __floordiv__(self, d: int) -> "MultiIndex":
        return MultiIndex(c // d for c in self)

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"


def box_points(box: Sequence[int]) -> Iterator[MultiIndex]:
    """All points ``0 <= x <= box`` in lexicographic order."""
    for pt in itertools.product(*(range(b + 1) for b in box)):
        yield MultiIndex(pt)


def box_volume(box: Sequence[int]) -> int:
    return math.prod(b + 1 for b in box)


def _as_index(coords: Sequence[int], dim: int | None = None) -> MultiIndex:
    idx = coords if isinstance(coords, MultiIndex) else MultiIndex(coords)
    if dim is not None and idx.dim != dim:
        raise ValueError(f"expected dimension {dim}, got {idx.dim}")
    return idx


@dataclass(frozen=True)
class WeightFunction:
    """A weighting ``f: N^dim -> N``.

    ``kind`` is one of ``"explicit"`` (finite table), ``"indicator"``
    (finite table of ones), ``"product"`` (``f(s) = s_1 * ... * s_N``) or
    ``"custom"`` (arbitrary rule; the rule must return nonnegative ints).
    Table kinds never store zero weights.
    """

    dim: int
    kind: str
    table: Mapping[MultiIndex, int] = field(default_factory=dict)
    rule: Callable[[MultiIndex], int] | None = field(default=None, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise WeightSpecError("dim must be >= 1")
        if self.kind not in ("explicit", "indicator", "product", "custom"):
            raise WeightSpecError(f"unknown kind {self.kind!r}")
        if self.kind == "custom" and self.rule is None:
            raise WeightSpecError("custom weight functions need a rule")
        clean = {}
        for s, w in self.table.items():
            s = _as_index(s, self.dim)
            w = int(w)
            if w < 0:
                raise WeightSpecError(f"negative weight {w} at {tuple(s)}")
            if w:
                clean[s] = w
        object.__setattr__(self, "table", clean)

    def __hash__(self):
        return hash((self.dim, self.kind, frozenset(self.table.items()), id(self.rule)))

    # construction helpers ------------------------------------------------
    @classmethod
    def explicit(cls, weights: Mapping[Sequence[int], int], name: str = "") -> "WeightFunction":
        weights = {MultiIndex(s): w for s, w in weights.items()}
        dims = {s.dim for s in weights}
        if len(dims) != 1:
            raise WeightSpecError("explicit weights need entries of one common dimension")
        return cls(dims.pop(), "explicit", weights, name=name)

    @classmethod
    def indicator(cls, parts: Iterable[Sequence[int]], name: str = "") -> "WeightFunction":
        parts = [MultiIndex(s) for s in parts]
        dims = {s.dim for s in parts}
        if len(dims) != 1:
            raise WeightSpecError("indicator set needs entries of one common dimension")
        return cls(dims.pop(), "indicator", {s: 1 for s in parts}, name=name)

    @classmethod
    def product(cls, dim: int) -> "WeightFunction":
        return cls(dim, "product", name="product")

    @classmethod
    def custom(cls, dim: int, rule: Callable[[MultiIndex], int], name: str = "") -> "WeightFunction":
        return cls(dim, "custom", rule=rule, name=name)

    # evaluation ----------------------------------------------------------
    @property
    def finite(self) -> bool:
        return self.kind in ("explicit", "indicator")

    def __call__(self, s: Sequence[int]) -> int:
        s = _as_index(s, self.dim)
        if self.finite:
            return self.table.get(s, 0)
        if self.kind == "product":
            return math.prod(s)
        w = int(self.rule(s))
        if w < 0:
            raise ValueError(f"custom rule returned negative weight at {tuple(s)}")
        return w

    def support_within(self, box: Sequence[int]) -> list[tuple[MultiIndex, int]]:
        """``(part, weight)`` pairs with ``part <= box`` and nonzero weight, lex order."""
        box = _as_index(box, self.dim)
        if self.finite:
            items = [(s, w) for s, w in self.table.items() if s.fits_in(box)]
            return sorted(items)
        if self.kind == "product":
            ranges = (range(1, b + 1) for b in box)
            return [(MultiIndex(s), math.prod(s)) for s in itertools.product(*ranges)]
        out = []
        for s in box_points(box):
            w = self(s)
            if w:
                out.append((s, w))
        return out

    def max_part(self) -> MultiIndex:
        """Componentwise maximum over the (finite) support."""
        if not self.finite:
            raise ValueError(f"{self.kind} weight has infinite support")
        if not self.table:
            return MultiIndex.zeros(self.dim)
        return MultiIndex(max(col) for col in zip(*self.table))

    def total_weight(self) -> int:
        if not self.finite:
            raise ValueError(f"{self.kind} weight has infinite support")
        return sum(self.table.values())

    def without(self, m: Sequence[int]) -> "WeightFunction":
        """Copy of this weighting with ``f(m)`` set to zero."""
        m = _as_index(m, self.dim)
        if self.finite:
            table = {s: w for s, w in self.table.items() if s != m}
            return WeightFunction(self.dim, "explicit", table, name=self.name)
        base = self
        return WeightFunction.custom(
            self.dim, lambda s: 0 if s == m else base(s), name=f"{self.name}|f({tuple(m)})=0"
        )

    def restricted_to(self, box: Sequence[int]) -> "WeightFunction":
        """Finite table agreeing with this weighting inside ``box`` (zero outside)."""
        return WeightFunction(self.dim, "explicit", dict(self.support_within(box)), name=self.name)


def support_within(f: WeightFunction, box: Sequence[int]) -> list[MultiIndex]:
    """Part sizes ``s <= box`` with ``f(s) != 0``, lexicographically sorted.

    The zero part is included exactly when ``f(0) != 0``.
    """
    return [s for s, _ in f.support_within(box)]


# JSON weight specs -------------------------------------------------------

def _int_list(obj, what: str) -> list[int]:
    if not isinstance(obj, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in obj):
        raise WeightSpecError(f"{what} must be a list of integers")
    if any(c < 0 for c in obj):
        raise WeightSpecError(f"{what} has a negative coordinate")
    return obj


def parse_weight_function(spec: Mapping) -> WeightFunction:
    """Build a :class:`WeightFunction` from a decoded JSON document."""
    if not isinstance(spec, Mapping):
        raise WeightSpecError("weight spec must be a JSON object")
    dim = spec.get("dim")
    kind = spec.get("kind")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise WeightSpecError("'dim' must be an integer >= 1")
    if kind == "product":
        return WeightFunction.product(dim)
    if kind == "explicit":
        entries = spec.get("entries")
        if not isinstance(entries, list):
            raise WeightSpecError("kind 'explicit' requires an 'entries' list")
        table: dict[MultiIndex, int] = {}
        for e in entries:
            if not isinstance(e, Mapping) or "s" not in e or "w" not in e:
                raise WeightSpecError("each entry needs 's' and 'w'")
            s = _int_list(e["s"], "entry 's'")
            w = e["w"]
            if not isinstance(w, int) or isinstance(w, bool):
                raise WeightSpecError("entry 'w' must be an integer")
            if w < 0:
                raise WeightSpecError(f"negative weight {w}")
            if len(s) != dim:
                raise WeightSpecError(f"entry {s} does not have dimension {dim}")
            key = MultiIndex(s)
            if key in table:
                raise WeightSpecError(f"duplicate entry {s}")
            table[key] = w
        return WeightFunction(dim, "explicit", table)
    if kind == "indicator":
        parts = spec.get("set")
        if not isinstance(parts, list):
            raise WeightSpecError("kind 'indicator' requires a 'set' list")
        table = {}
        for s in parts:
            s = _int_list(s, "set element")
            if len(s) != dim:
                raise WeightSpecError(f"set element {s} does not have dimension {dim}")
            table[MultiIndex(s)] = 1
        return WeightFunction(dim, "indicator", table)
    raise WeightSpecError(f"unknown kind {kind!r}")


def weight_to_spec(f: WeightFunction) -> dict:
    """Canonical JSON document for ``f`` (entries sorted lexicographically)."""
    if f.kind == "product":
        return {"dim": f.dim, "kind": "product"}
    if f.kind == "indicator":
        return {"dim": f.dim, "kind": "indicator", "set": [list(s) for s in sorted(f.table)]}
    if f.kind == "explicit":
        return {
            "dim": f.dim,
            "kind": "explicit",
            "entries": [{"s": list(s), "w": w} for s, w in sorted(f.table.items())],
        }
    raise WeightSpecError("custom rules cannot be serialized")


# Named weightings used throughout the examples and tests.
def _build_presets() -> dict[str, Callable[[], WeightFunction]]:
    unit2 = [(0, 1), (1, 0), (1, 1)]
    return {
        # f((1,1)) = 2, f((1,0)) = f((0,1)) = 1
        "intro": lambda: WeightFunction.explicit({(1, 1): 2, (1, 0): 1, (0, 1): 1}, name="intro"),
        "delannoy": lambda: WeightFunction.indicator(unit2, name="delannoy"),
        "ex170": lambda: WeightFunction.indicator(
            [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)], name="ex170"
        ),
        "parity3": lambda: WeightFunction.explicit(
            {(0, 1, 0): 3, (1, 0, 0): 1, (0, 0, 1): 1, (1, 1, 0): 1,
             (1, 0, 1): 1, (0, 1, 1): 1, (1, 1, 1): 1},
            name="parity3",
        ),
        "divisibility": lambda: WeightFunction.indicator(
            [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (0, 0)], name="divisibility"
        ),
        # f(s) = s1 + s2 + 1 on {0,1}^2
        "nonmultiple": lambda: WeightFunction.explicit(
            {s: s[0] + s[1] + 1 for s in itertools.product((0, 1), repeat=2)}, name="nonmultiple"
        ),
        "whitney": lambda: WeightFunction.indicator(
            [(1, 1), (1, 2), (2, 1), (2, 2)], name="whitney"
        ),
        "unitcube3": lambda: WeightFunction.indicator(
            [s for s in itertools.product((0, 1), repeat=3) if any(s)], name="unitcube3"
        ),
        "onetwo3": lambda: WeightFunction.indicator(
            list(itertools.product((1, 2), repeat=3)), name="onetwo3"
        ),
        "fibonacci": lambda: WeightFunction.indicator([(1,), (2,)], name="fibonacci"),
        "product2": lambda: WeightFunction.product(2),
    }


PRESETS = _build_presets()


def preset(name: str) -> WeightFunction:
    try:
        return PRESETS[name]()
    except KeyError:
        raise WeightSpecError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def load_weight_function(source) -> WeightFunction:
    """Resolve a weight function from a preset name, a JSON string, a path, or a dict."""
    if isinstance(source, WeightFunction):
        return source
    if isinstance(source, Mapping):
        return parse_weight_function(source)
    if not isinstance(source, str):
        raise WeightSpecError(f"cannot interpret weights {source!r}")
    text = source.strip()
    if text.startswith("{"):
        try:
            return parse_weight_function(json.loads(text))
        except json.JSONDecodeError as exc:
            raise WeightSpecError(f"invalid JSON: {exc}") from None
    if text in PRESETS:
        return preset(text)
    try:
        with open(text, encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise WeightSpecError(f"no such weight file or preset: {text!r}") from None
    except json.JSONDecodeError as exc:
        raise WeightSpecError(f"invalid JSON in {text}: {exc}") from None
    return parse_weight_function(doc)
