"""Configuration files: an algebra, an order, and two embeddings, all exact.

A config is a JSON object::

    {
      "name": "disc14",
      "a": "-1", "b": "7",
      "order_basis": [["1/2", "1/2", "1/2", "1/2"], ["0", "-1", "-1", "-1"], ...],
      "D1": 5, "w1": ["0", "3", "1", "1"], "f1": 1,
      "D2": 3, "w2": ["0", "2", "1", "0"], "f2": 1,
      "options": {"n_max": 50, "sign_convention": 1, "box_slack": 0.01, "precision_bits": 128}
    }

Rationals are strings ``"p/q"`` or ``"p"`` (bare integers are accepted too);
floats are rejected everywhere except ``box_slack``.  The conductors ``f1``,
``f2`` are optional; when present they are checked.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional

from .exact import as_fraction, set_precision_floor
from .fform import DegenerateConfiguration, FFormContext
from .orbits import DEFAULT_BOX_SLACK
from .quaternion import EichlerOrderLattice, EmbeddingData, EmbeddingError, OrderError, QuatAlgebra

BUNDLED = ("disc14", "disc15", "disc6_level5", "disc6")


class ConfigError(ValueError):
    """A configuration fails one of its invariants; the message names it."""


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Config:
    raw: Dict[str, Any]
    source: str = "<dict>"
    checks: List[Check] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.raw.get("name", Path(self.source).stem)

    @property
    def options(self) -> Dict[str, Any]:
        return self.raw.get("options", {})

    @property
    def n_max(self) -> int:
        return int(self.options.get("n_max", 50))

    @property
    def box_slack(self) -> float:
        return float(self.options.get("box_slack", DEFAULT_BOX_SLACK))

    def config_hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def _check(self, name: str, fn):
        try:
            detail = fn()
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError, ArithmeticError, AssertionError) as exc:
            self.checks.append(Check(name, False, str(exc)))
            raise ConfigError(f"{name}: {exc}") from exc
        self.checks.append(Check(name, True, detail if isinstance(detail, str) else ""))
        return detail

    def build(self) -> FFormContext:
        """Verify every invariant in order and return the derived context.

        Raises ConfigError naming the first failed invariant.
        """
        self.checks = []
        r = self.raw

        def rational_list(key, length):
            vals = r[key]
            if not isinstance(vals, list) or len(vals) != length:
                raise ConfigError(f"parse: {key} must be a list of {length} rationals")
            return [as_fraction(v) for v in vals]

        def parse():
            for key in ("a", "b", "order_basis", "D1", "w1", "D2", "w2"):
                if key not in r:
                    raise KeyError(f"missing field {key!r}")
            a, b = as_fraction(r["a"]), as_fraction(r["b"])
            basis = r["order_basis"]
            if not isinstance(basis, list) or len(basis) != 4:
                raise ValueError("order_basis must have 4 rows")
            rows = [[as_fraction(v) for v in row] for row in basis]
            if any(len(row) != 4 for row in rows):
                raise ValueError("order_basis rows must have 4 entries")
            return a, b, rows

        a, b, rows = self._check("parse", parse)
        alg = self._check("algebra", lambda: QuatAlgebra(a, b))

        def algebra_type():
            if not alg.is_indefinite():
                raise ValueError("algebra is definite")
            if not alg.is_division():
                raise ValueError("algebra is split (not a division algebra)")
            return f"D_B = {alg.discriminant()}"

        self._check("indefinite division algebra", algebra_type)
        order = self._check("order basis", lambda: EichlerOrderLattice(alg, rows))

        def order_axioms():
            d = order.verify()
            return f"reduced discriminant {d}"

        self._check("order axioms", order_axioms)

        def eichler():
            D_B = alg.discriminant()
            N = order.level()
            if math.gcd(N, D_B) != 1:
                raise OrderError(f"level {N} is not coprime to D_B = {D_B}")
            return f"level {N}"

        self._check("level", eichler)

        def parse_d(key):
            d = r[key]
            if isinstance(d, bool) or not isinstance(d, (int, str)):
                raise TypeError(f"{key} must be an integer")
            return int(d)

        D1, D2 = parse_d("D1"), parse_d("D2")
        w1, w2 = rational_list("w1", 4), rational_list("w2", 4)
        e1 = self._check("embedding 1 square", lambda: EmbeddingData(D1, alg(*w1), r.get("f1")))
        e2 = self._check("embedding 2 square", lambda: EmbeddingData(D2, alg(*w2), r.get("f2")))

        def coprime():
            if math.gcd(D1, D2) != 1:
                raise ValueError(f"gcd(D1, D2) = {math.gcd(D1, D2)} != 1")

        self._check("coprime discriminants", coprime)
        sign = self.options.get("sign_convention", 1)
        if sign not in (1, -1):
            raise ConfigError("options: sign_convention must be 1 or -1")
        bits = self.options.get("precision_bits")
        if bits is not None:
            set_precision_floor(int(bits))

        def context():
            try:
                return FFormContext(alg, order, e1, e2, sign)
            except DegenerateConfiguration as exc:
                raise ValueError(f"degenerate configuration: {exc}") from None
            except EmbeddingError as exc:
                raise ValueError(f"conductor: {exc}") from None

        ctx = self._check("conductors, M invertible, Tr(alpha) = 1", context)
        ctx.box_slack = self.box_slack
        self.checks[-1].detail = f"f1 = {ctx.f1}, f2 = {ctx.f2}, alpha = {ctx.alpha}"
        return ctx


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("shimura_geodesics") / "data" / f"{name}.json"))


def resolve(path_or_name: str) -> Path:
    p = Path(path_or_name)
    if p.exists():
        return p
    if path_or_name in BUNDLED:
        return bundled_path(path_or_name)
    raise ConfigError(f"no such config file or bundled config: {path_or_name}")


def load_config(path_or_name: str) -> Config:
    path = resolve(path_or_name)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"parse: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("parse: config must be a JSON object")
    return Config(raw, str(path))


def load_context(path_or_name: str, sign_convention: Optional[int] = None) -> FFormContext:
    cfg = load_config(path_or_name)
    if sign_convention is not None:
        cfg.raw.setdefault("options", {})["sign_convention"] = sign_convention
    return cfg.build()
