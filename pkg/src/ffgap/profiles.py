"""Coefficient families ``c_0..c_{l-1}`` and ``d_0..d_l`` for weighted boxes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .scalars import QuadraticScalar, ScalarVector


class ProfileError(ValueError):
    pass


def euclid_c(ell: int) -> list[QuadraticScalar]:
    """``c_j = l + (l-1) j - j^2``: a discrete parabola vanishing at ``j = -1`` and ``j = l``."""
    if ell < 2:
        raise ProfileError(f"ell must be >= 2, got {ell}")
    return [QuadraticScalar(ell + (ell - 1) * j - j * j) for j in range(ell)]


def quadratic_d(ell: int, lam) -> list[QuadraticScalar]:
    """Interpolate between the parabola ``l+1+l j-j^2`` and the constant ``(l+2)^2/4``."""
    if ell < 2:
        raise ProfileError(f"ell must be >= 2, got {ell}")
    lam = QuadraticScalar.coerce(lam)
    flat4 = (ell + 2) ** 2
    alpha, beta = lam.a / 4, lam.b / 4
    out = []
    for j in range(ell + 1):
        p = ell + 1 + ell * j - j * j
        m = flat4 - 4 * p  # 4 * (flat - p)
        out.append(QuadraticScalar(p + alpha * m, beta * m, lam.k))
    return out


@dataclass(frozen=True)
class ValidationReport:
    positive: bool
    symmetric: bool
    monotone: bool
    first_violation: Optional[tuple[str, str, int]] = None  # (requirement, sequence, index)

    @property
    def ok(self) -> bool:
        return self.positive and self.symmetric and self.monotone


@dataclass(frozen=True)
class CoefficientProfile:
    ell: int
    c: tuple
    d: tuple
    lam: Optional[QuadraticScalar] = None
    _vectors: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        c = tuple(QuadraticScalar.coerce(x) for x in self.c)
        d = tuple(QuadraticScalar.coerce(x) for x in self.d)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        if self.lam is not None:
            object.__setattr__(self, "lam", QuadraticScalar.coerce(self.lam))
        if len(c) != self.ell or len(d) != self.ell + 1:
            raise ProfileError(
                f"expected {self.ell} c-values and {self.ell + 1} d-values, got {len(c)} and {len(d)}"
            )

    @classmethod
    def from_lambda(cls, ell: int, lam) -> "CoefficientProfile":
        lam = QuadraticScalar.coerce(lam)
        return cls(ell, tuple(euclid_c(ell)), tuple(quadratic_d(ell, lam)), lam)

    @classmethod
    def uniform(cls, ell: int) -> "CoefficientProfile":
        return cls(ell, (1,) * ell, (1,) * (ell + 1))

    @property
    def field(self) -> int:
        ks = {x.k for x in self.c + self.d} - {1}
        return ks.pop() if ks else 1

    @property
    def cvec(self) -> ScalarVector:
        if "c" not in self._vectors:
            self._vectors["c"] = ScalarVector(self.c)
        return self._vectors["c"]

    @property
    def dvec(self) -> ScalarVector:
        if "d" not in self._vectors:
            self._vectors["d"] = ScalarVector(self.d)
        return self._vectors["d"]

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "lambda": None if self.lam is None else self.lam.to_json(),
            "c": [x.to_json() for x in self.c],
            "d": [x.to_json() for x in self.d],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CoefficientProfile":
        lam = obj.get("lambda")
        return cls(
            int(obj["ell"]),
            tuple(QuadraticScalar.from_json(x) for x in obj["c"]),
            tuple(QuadraticScalar.from_json(x) for x in obj["d"]),
            None if lam is None else QuadraticScalar.from_json(lam),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def validate_profile(p: CoefficientProfile) -> ValidationReport:
    if len(p.c) != p.ell or len(p.d) != p.ell + 1:
        raise ProfileError("length mismatch")
    flags = {"positivity": True, "symmetry": True, "monotonicity": True}
    first = None
    for name, vec in (("c", p.cvec), ("d", p.dvec)):
        n = len(vec)
        for i in range(n):
            if vec.sign(i) <= 0:
                flags["positivity"] = False
                first = first or ("positivity", name, i)
                break
        for i in range(n // 2):
            if vec.sign_diff(i, n - 1 - i) != 0:
                flags["symmetry"] = False
                first = first or ("symmetry", name, i)
                break
        for i in range(_last_rising_index(n) + 1):
            if vec.sign_diff(i + 1, i) < 0:
                flags["monotonicity"] = False
                first = first or ("monotonicity", name, i)
                break
    return ValidationReport(flags["positivity"], flags["symmetry"], flags["monotonicity"], first)


def _last_rising_index(n: int) -> int:
    """Largest ``i`` with ``x_i <= x_{i+1}`` required for a length-``n`` sequence.

    Both ``i`` and ``i+1`` must lie at or before the midpoint ``(n-1)/2`` up to
    the one step that straddles it, i.e. ``2i + 1 <= n - 1``.
    """
    return (n - 2) // 2


def is_valid(p: CoefficientProfile) -> bool:
    return validate_profile(p).ok
