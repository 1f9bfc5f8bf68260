#!/usr/bin/env python3
"""
Cost function catalogue.

Every cost is a continuous nondecreasing map c: [0, inf) -> [0, inf). Besides
evaluation each kind exposes the exact antiderivative C(x) = int_0^x c(z) dz
(the Beckmann term), the generalized inverse

    inv(lam) = sup{x >= 0 : c(x) < lam}    (0 when lam <= c(0))

and the Fenchel conjugate C*(tau) = sup_x {tau*x - C(x)} used by the dual.
"""

import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import StructuralError

# Upper end of the geometric bracket search used by the generic inverse
_BRACKET_LIMIT = 1e150


class CostFunction(ABC):
    """Base class of the catalogued cost kinds."""

    kind = "abstract"

    @abstractmethod
    def __call__(self, x: float) -> float:
        ...

    @abstractmethod
    def integral(self, x: float) -> float:
        ...

    @property
    @abstractmethod
    def strictly_increasing(self) -> bool:
        ...

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        ...

    @property
    def supremum(self) -> float:
        """sup of c over [0, inf)."""
        return math.inf

    @property
    def sample_scale(self) -> float:
        """Range over which monotonicity is sampled."""
        return 10.0

    def parameter_violations(self) -> List[str]:
        return []

    def inverse(self, lam: float) -> float:
        return self._bracketed_inverse(lam)

    def conjugate(self, tau: float) -> float:
        if tau <= self(0.0):
            return 0.0
        if tau > self.supremum:
            return math.inf
        x = self.inverse(tau)
        if math.isinf(x):
            return math.inf
        return tau * x - self.integral(x)

    def sampled_monotonicity_violation(self, samples: int = 65) -> str:
        """Return a message if sampled differences show a decrease, else ''."""
        grid = np.linspace(0.0, self.sample_scale, samples)
        values = [self(float(x)) for x in grid]
        for i in range(len(values) - 1):
            if not (math.isfinite(values[i]) and math.isfinite(values[i + 1])):
                return f"non-finite value near x={grid[i]:.6g}"
            if values[i + 1] < values[i] - 1e-12:
                return f"decreases between x={grid[i]:.6g} and x={grid[i + 1]:.6g}"
        return ""

    def _bracketed_inverse(self, lam: float) -> float:
        if lam <= self(0.0):
            return 0.0
        hi = 1.0
        while self(hi) < lam:
            hi *= 2.0
            if hi > _BRACKET_LIMIT:
                return math.inf
        return brentq(lambda x: self(x) - lam, 0.0, hi, xtol=1e-15, rtol=1e-15, maxiter=200)

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items() if k != "kind")
        return f"{type(self).__name__}({params})"

    def __eq__(self, other):
        return isinstance(other, CostFunction) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self))


def _finite(name: str, value: float) -> List[str]:
    if not math.isfinite(value):
        return [f"parameter {name} is not finite"]
    return []


class AffineCost(CostFunction):
    """c(x) = a*x + b"""

    kind = "affine"

    def __init__(self, a: float, b: float = 0.0):
        self.a = float(a)
        self.b = float(b)

    def __call__(self, x):
        return self.a * x + self.b

    def integral(self, x):
        return 0.5 * self.a * x * x + self.b * x

    def inverse(self, lam):
        if lam <= self.b:
            return 0.0
        if self.a <= 0.0:
            return math.inf
        return (lam - self.b) / self.a

    @property
    def supremum(self):
        return math.inf if self.a > 0.0 else self.b

    @property
    def strictly_increasing(self):
        return self.a > 0.0

    def parameter_violations(self):
        issues = _finite("a", self.a) + _finite("b", self.b)
        if self.a < 0.0:
            issues.append(f"affine slope a={self.a} is negative")
        if self.b < 0.0:
            issues.append(f"affine intercept b={self.b} is negative")
        return issues

    def to_dict(self):
        return {"kind": self.kind, "a": self.a, "b": self.b}


class MonomialCost(CostFunction):
    """c(x) = coeff * x**exponent + constant"""

    kind = "monomial"

    def __init__(self, coeff: float, exponent: float, constant: float = 0.0):
        self.coeff = float(coeff)
        self.exponent = float(exponent)
        self.constant = float(constant)

    def __call__(self, x):
        return self.coeff * x ** self.exponent + self.constant

    def integral(self, x):
        p = self.exponent + 1.0
        return self.coeff * x ** p / p + self.constant * x

    def inverse(self, lam):
        if lam <= self.constant:
            return 0.0
        if self.coeff <= 0.0:
            return math.inf
        return ((lam - self.constant) / self.coeff) ** (1.0 / self.exponent)

    @property
    def supremum(self):
        return math.inf if self.coeff > 0.0 else self.constant

    @property
    def strictly_increasing(self):
        return self.coeff > 0.0

    def parameter_violations(self):
        issues = (_finite("coeff", self.coeff) + _finite("exponent", self.exponent)
                  + _finite("constant", self.constant))
        if self.coeff < 0.0:
            issues.append(f"monomial coeff={self.coeff} is negative")
        if self.exponent < 1.0:
            issues.append(f"monomial exponent={self.exponent} is below 1")
        if self.constant < 0.0:
            issues.append(f"monomial constant={self.constant} is negative")
        return issues

    def to_dict(self):
        return {"kind": self.kind, "coeff": self.coeff, "exponent": self.exponent,
                "constant": self.constant}


class BPRCost(CostFunction):
    """Bureau of Public Roads link cost t0*(1 + alpha*(x/capacity)**beta)."""

    kind = "bpr"

    def __init__(self, t0: float, alpha: float = 0.15, beta: float = 4.0, capacity: float = 1.0):
        self.t0 = float(t0)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.capacity = float(capacity)

    def __call__(self, x):
        return self.t0 * (1.0 + self.alpha * (x / self.capacity) ** self.beta)

    def integral(self, x):
        ratio = x / self.capacity
        return self.t0 * x + self.t0 * self.alpha * self.capacity * ratio ** (self.beta + 1.0) / (self.beta + 1.0)

    def inverse(self, lam):
        if lam <= self.t0:
            return 0.0
        if self.alpha <= 0.0:
            return math.inf
        return self.capacity * ((lam / self.t0 - 1.0) / self.alpha) ** (1.0 / self.beta)

    @property
    def supremum(self):
        return math.inf if self.alpha > 0.0 else self.t0

    @property
    def sample_scale(self):
        return 3.0 * self.capacity if self.capacity > 0 else 10.0

    @property
    def strictly_increasing(self):
        return self.alpha > 0.0

    def parameter_violations(self):
        issues = []
        for name in ("t0", "alpha", "beta", "capacity"):
            issues += _finite(name, getattr(self, name))
        if self.t0 <= 0.0:
            issues.append(f"bpr free-flow time t0={self.t0} must be positive")
        if self.alpha < 0.0:
            issues.append(f"bpr alpha={self.alpha} is negative")
        if self.beta < 1.0:
            issues.append(f"bpr beta={self.beta} is below 1")
        if self.capacity <= 0.0:
            issues.append(f"bpr capacity={self.capacity} must be positive")
        return issues

    def to_dict(self):
        return {"kind": self.kind, "t0": self.t0, "alpha": self.alpha, "beta": self.beta,
                "capacity": self.capacity}


class ConstantCost(CostFunction):
    """c(x) = b"""

    kind = "constant"

    def __init__(self, b: float = 0.0):
        self.b = float(b)

    def __call__(self, x):
        return self.b

    def integral(self, x):
        return self.b * x

    def inverse(self, lam):
        return 0.0 if lam <= self.b else math.inf

    @property
    def supremum(self):
        return self.b

    @property
    def strictly_increasing(self):
        return False

    def parameter_violations(self):
        issues = _finite("b", self.b)
        if self.b < 0.0:
            issues.append(f"constant cost b={self.b} is negative")
        return issues

    def to_dict(self):
        return {"kind": self.kind, "b": self.b}


class PiecewiseLinearCost(CostFunction):
    """
    Linear interpolation through knots (x_0=0, y_0), (x_1, y_1), ...

    Beyond the last knot the last segment's slope is extended.
    """

    kind = "piecewise-linear"

    def __init__(self, knots: Sequence[Sequence[float]]):
        pairs = [(float(x), float(y)) for x, y in knots]
        if not pairs:
            raise StructuralError("piecewise-linear cost needs at least one knot")
        if pairs[0][0] != 0.0:
            raise StructuralError("piecewise-linear cost must start at x=0")
        xs = [p[0] for p in pairs]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise StructuralError("piecewise-linear knot abscissae must be strictly increasing")
        self.knots: Tuple[Tuple[float, float], ...] = tuple(pairs)
        self._xs = np.array(xs)
        self._ys = np.array([p[1] for p in pairs])
        if len(pairs) > 1:
            self._slopes = np.diff(self._ys) / np.diff(self._xs)
            self._tail_slope = float(self._slopes[-1])
            areas = 0.5 * (self._ys[:-1] + self._ys[1:]) * np.diff(self._xs)
            self._areas = np.concatenate(([0.0], np.cumsum(areas)))
        else:
            self._slopes = np.array([])
            self._tail_slope = 0.0
            self._areas = np.array([0.0])

    def __call__(self, x):
        x_last = self._xs[-1]
        if x <= x_last:
            return float(np.interp(x, self._xs, self._ys))
        return float(self._ys[-1] + self._tail_slope * (x - x_last))

    def integral(self, x):
        i = int(np.searchsorted(self._xs, x, side="right")) - 1
        i = max(0, min(i, len(self._xs) - 1))
        x_i = float(self._xs[i])
        return float(self._areas[i]) + 0.5 * (x - x_i) * (float(self._ys[i]) + self(x))

    def inverse(self, lam):
        ys = self._ys
        if lam <= ys[0]:
            return 0.0
        for i, slope in enumerate(self._slopes):
            if ys[i + 1] >= lam:
                if slope <= 0.0:
                    return float(self._xs[i])
                return float(self._xs[i] + (lam - ys[i]) / slope)
        if self._tail_slope > 0.0:
            return float(self._xs[-1] + (lam - ys[-1]) / self._tail_slope)
        return math.inf

    @property
    def supremum(self):
        return math.inf if self._tail_slope > 0.0 else float(np.max(self._ys))

    @property
    def sample_scale(self):
        return 2.0 * float(self._xs[-1]) if self._xs[-1] > 0 else 10.0

    @property
    def strictly_increasing(self):
        return len(self._slopes) > 0 and bool(np.all(self._slopes > 0.0))

    def parameter_violations(self):
        issues = []
        if not np.all(np.isfinite(self._ys)) or not np.all(np.isfinite(self._xs)):
            issues.append("piecewise-linear knots are not finite")
        if self._ys[0] < 0.0:
            issues.append(f"piecewise-linear value at 0 is negative ({self._ys[0]})")
        decreasing = [f"[{self._xs[i]:g}, {self._xs[i + 1]:g}]"
                      for i, slope in enumerate(self._slopes) if slope < 0.0]
        if decreasing:
            issues.append(f"piecewise-linear cost decreases on {', '.join(decreasing)}")
        return issues

    def to_dict(self):
        return {"kind": self.kind, "knots": [[x, y] for x, y in self.knots]}


class RegularizedCost(CostFunction):
    """Tikhonov-perturbed cost c(x) + 2*eps*x with antiderivative C(x) + eps*x**2."""

    kind = "regularized"

    def __init__(self, base: CostFunction, epsilon: float):
        self.base = base
        self.epsilon = float(epsilon)

    def __call__(self, x):
        return self.base(x) + 2.0 * self.epsilon * x

    def integral(self, x):
        return self.base.integral(x) + self.epsilon * x * x

    def inverse(self, lam):
        if self.epsilon == 0.0:
            return self.base.inverse(lam)
        return self._bracketed_inverse(lam)

    @property
    def supremum(self):
        return math.inf if self.epsilon > 0.0 else self.base.supremum

    @property
    def sample_scale(self):
        return self.base.sample_scale

    @property
    def strictly_increasing(self):
        return self.epsilon > 0.0 or self.base.strictly_increasing

    def parameter_violations(self):
        issues = self.base.parameter_violations()
        if self.epsilon < 0.0:
            issues.append(f"regularization epsilon={self.epsilon} is negative")
        return issues

    def to_dict(self):
        return {"kind": self.kind, "epsilon": self.epsilon, "base": self.base.to_dict()}


COST_KINDS = {
    AffineCost.kind: AffineCost,
    MonomialCost.kind: MonomialCost,
    BPRCost.kind: BPRCost,
    ConstantCost.kind: ConstantCost,
    PiecewiseLinearCost.kind: PiecewiseLinearCost,
}


def cost_from_dict(data: Dict[str, Any]) -> CostFunction:
    """Build a cost from its JSON form, e.g. {"kind": "affine", "a": 1, "b": 0}."""
    kind = data.get("kind")
    params = {k: v for k, v in data.items() if k != "kind"}
    if kind == RegularizedCost.kind:
        return RegularizedCost(cost_from_dict(params["base"]), params["epsilon"])
    if kind not in COST_KINDS:
        raise StructuralError(f"unknown cost kind: {kind!r}")
    try:
        return COST_KINDS[kind](**params)
    except TypeError as e:
        raise StructuralError(f"bad parameters for {kind} cost: {e}") from e
