"""Problem instances, the s0 threshold formulas, and Parsell's baseline."""

from __future__ import annotations

import ast
import warnings
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from math import ceil

from . import constants as K
from .errors import DomainError, PrecisionError, ValidationError
from .interval import DEFAULT_DIGITS, RealInterval
from .singular import sprime_of

RATIO_CLASSES = ("algebraic", "transcendental")
B_VARIANTS = {"chen": K.B_CHEN, "conjectural": K.B_CONJECTURAL}
NU = {"algebraic": K.NU_ALGEBRAIC, "transcendental": K.NU_TRANSCENDENTAL, "parsell": K.NU_PARSELL}
PARSELL_VARIANTS = ("published", "refined")
MAX_PRECISION = 400


class ConfigWarning(UserWarning):
    pass


# ------------------------------------------------------------ literals
_FUNCS = {"sqrt": RealInterval.sqrt, "log": RealInterval.log, "exp": RealInterval.exp}


@dataclass(frozen=True)
class Coefficient:
    """A real coefficient given as text.

    Plain decimals are exact.  Expressions built from decimals, + - * / **,
    sqrt, log, exp, pi and e are enclosed by interval evaluation, so their
    width shrinks as the requested precision grows.
    """

    text: str

    def __post_init__(self):
        self.interval(20)  # fail early on malformed input

    @property
    def is_decimal(self) -> bool:
        try:
            Decimal(self.text.strip())
            return True
        except Exception:
            return False

    @property
    def significant_digits(self) -> int | None:
        """Significant digits of a decimal literal; None for symbolic input."""
        if not self.is_decimal:
            return None
        digits = Decimal(self.text.strip()).normalize().as_tuple().digits
        return len(digits)

    def interval(self, precision: int = DEFAULT_DIGITS) -> RealInterval:
        if self.is_decimal:
            return RealInterval.exact(self.text, precision)
        try:
            tree = ast.parse(self.text.strip(), mode="eval")
            return _eval(tree.body, self.text, precision)
        except (SyntaxError, ValueError, KeyError, TypeError) as exc:
            raise ValidationError(f"cannot parse coefficient {self.text!r}: {exc}") from exc

    def __str__(self) -> str:
        return self.text


def _eval(node, src, d):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return RealInterval.exact(ast.get_source_segment(src.strip(), node), d)
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return RealInterval.pi(d)
        if node.id == "e":
            return RealInterval.exact(1, d).exp()
        raise KeyError(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, src, d)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, src, d)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("only integer powers are allowed")
            return a ** node.right.value
        b = _eval(node.right, src, d)
        ops = {ast.Add: a.__add__, ast.Sub: a.__sub__, ast.Mult: a.__mul__, ast.Div: a.__truediv__}
        return ops[type(node.op)](b)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
        return _FUNCS[node.func.id](_eval(node.args[0], src, d))
    raise ValueError(f"unsupported expression element {ast.dump(node)}")


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (list, tuple)):
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(str(value).strip())


# --------------------------------------------------------------- config
@dataclass(frozen=True)
class CoefficientConfig:
    lambda1: Coefficient
    lambda2: Coefficient
    mus: tuple
    ratio1: Fraction
    ratio2: Fraction
    gamma: Coefficient = Coefficient("0")
    eta: Coefficient = Coefficient("0.1")
    epsilon: Fraction = Fraction(1, 10)
    ratio_class: str | None = None
    warnings: tuple = field(default=(), compare=False)

    @property
    def q1(self) -> int:
        return self.ratio1.denominator

    @property
    def q2(self) -> int:
        return self.ratio2.denominator

    @property
    def s(self) -> int:
        return len(self.mus)

    def mu_norm(self, precision: int = DEFAULT_DIGITS) -> RealInterval:
        total = RealInterval.exact(0, precision)
        for mu in self.mus:
            total = total + mu.interval(precision).abs()
        return total

    def abs_l1l2(self, precision: int = DEFAULT_DIGITS) -> RealInterval:
        return (self.lambda1.interval(precision) * self.lambda2.interval(precision)).abs()

    def to_json(self) -> dict:
        return {
            "lambda1": str(self.lambda1), "lambda2": str(self.lambda2),
            "mus": [str(m) for m in self.mus],
            "ratio1": f"{self.ratio1.numerator}/{self.ratio1.denominator}",
            "ratio2": f"{self.ratio2.numerator}/{self.ratio2.denominator}",
            "gamma": str(self.gamma), "eta": str(self.eta),
            "epsilon": str(self.epsilon), "ratio_class": self.ratio_class,
            "warnings": list(self.warnings),
        }


def _ratio_tolerance(*coeffs: Coefficient) -> Fraction:
    digits = [c.significant_digits for c in coeffs if c.significant_digits is not None]
    if not digits:
        return Fraction(1, 10**25)
    return Fraction(1, 10 ** max(min(digits) - 2, 1))


def _derive_ratio(lam: Coefficient, mu: Coefficient, which: int) -> Fraction:
    r = Fraction((lam.interval(60) / mu.interval(60)).mid)
    tol = _ratio_tolerance(lam, mu) * max(abs(r), 1)
    # smallest denominator within tolerance
    q = 1
    while q <= 10**6:
        guess = r.limit_denominator(q)
        if abs(r - guess) <= tol:
            return guess
        q *= 2
    raise ValidationError(f"lambda{which}/mu{which} = {float(r)} is not recognisably rational; supply ratio{which}")


def validate_config(raw: dict, mode: str = "s0") -> CoefficientConfig:
    """Build a checked :class:`CoefficientConfig` from loosely typed input.

    ``mode="s0"`` treats the theorem hypotheses as errors; ``mode="search"``
    downgrades them to warnings (stored on the config and emitted).
    """
    if mode not in ("s0", "search"):
        raise ValueError(f"unknown mode {mode!r}")
    try:
        lam1 = Coefficient(str(raw["lambda1"]))
        lam2 = Coefficient(str(raw["lambda2"]))
        mus_raw = raw["mus"]
    except KeyError as exc:
        raise ValidationError(f"missing required field {exc.args[0]}") from None
    if isinstance(mus_raw, str):
        mus_raw = [m for m in mus_raw.split(",") if m.strip()]
    mus = tuple(Coefficient(str(m)) for m in mus_raw)
    if len(mus) < 2:
        raise ValidationError("need at least two mu coefficients (mu1, mu2 pair with lambda1, lambda2)")
    for i, mu in enumerate(mus, 1):
        iv = mu.interval(40)
        if iv.contains(0):
            raise ValidationError(f"mu{i} = {mu} is zero (or not certifiably nonzero)")
    ratios = []
    for i, (lam, mu) in enumerate(((lam1, mus[0]), (lam2, mus[1])), 1):
        given = raw.get(f"ratio{i}")
        r = _fraction(given) if given not in (None, "") else _derive_ratio(lam, mu, i)
        if r == 0:
            raise ValidationError(f"ratio{i} must be nonzero")
        actual = lam.interval(60) / mu.interval(60)
        tol = _ratio_tolerance(lam, mu) * abs(r)
        if abs(Fraction(actual.mid) - r) > tol:
            raise ValidationError(f"ratio{i} = {r} disagrees with lambda{i}/mu{i} = {actual.mid}")
        ratios.append(r)
    gamma = Coefficient(str(raw.get("gamma", "0")))
    eta = Coefficient(str(raw.get("eta", "0.1")))
    eps = _fraction(raw.get("epsilon", "0.1"))
    ratio_class = raw.get("ratio_class")
    if ratio_class is not None and ratio_class not in RATIO_CLASSES:
        raise ValidationError(f"ratio_class must be one of {RATIO_CLASSES}, got {ratio_class!r}")
    if not eta.interval(30).certainly_gt(0):
        raise ValidationError(f"eta must be positive, got {eta}")
    if not 0 < eps < 1:
        raise ValidationError(f"epsilon must lie in (0,1), got {eps}")

    problems = []
    l1 = lam1.interval(40)
    l2 = lam2.interval(40)
    if not l1.certainly_gt(1):
        problems.append("theorem hypothesis lambda1 > 1 fails")
    if not l2.certainly_lt(-1):
        problems.append("theorem hypothesis lambda2 < -1 fails")
    if l2.contains(0) or (l1 / l2).abs().certainly_lt(1):
        problems.append("theorem hypothesis |lambda1/lambda2| >= 1 fails")
    b1 = (l1 / ratios[0].numerator).abs()
    b2 = (l2 / ratios[1].numerator).abs()
    bound = b1 if b1.hi <= b2.hi else b2
    if not eta.interval(40).certainly_lt(bound):
        problems.append(f"eta = {eta} violates eta < min(lambda1/a1, |lambda2/a2|) = {float(bound.mid):.12g}")
    if mode == "s0" and problems:
        raise ValidationError("; ".join(problems))
    for msg in problems:
        warnings.warn(msg, ConfigWarning, stacklevel=2)
    return CoefficientConfig(lam1, lam2, mus, ratios[0], ratios[1], gamma, eta, eps,
                             ratio_class, tuple(problems))


# ------------------------------------------------------------ constants
def big_C(B_variant="chen", a1_estimate: RealInterval | None = None,
          precision: int = DEFAULT_DIGITS) -> RealInterval:
    """2 B (1 + A(1)).  ``B_variant`` is "chen", "conjectural" or a number."""
    B = B_VARIANTS.get(B_variant, B_variant)
    a1 = a1_estimate if a1_estimate is not None else RealInterval.exact(K.A1_UPPER, precision)
    return 2 * RealInterval.exact(str(B), precision) * (1 + a1)


def big_C_exact(B_variant="chen", a1_estimate="0.2792521041") -> Fraction:
    """2 B (1 + A(1)) as an exact rational; every input is a decimal literal."""
    B = Fraction(str(B_VARIANTS.get(B_variant, B_variant)))
    return 2 * B * (1 + Fraction(str(a1_estimate)))


def printed_C(B_variant="chen", places: int = 10) -> str:
    """The constant as it is quoted: the exact product rounded up at ``places`` decimals."""
    q = big_C_exact(B_variant, K.A1_UPPER)
    return str((Decimal(q.numerator) / Decimal(q.denominator)).quantize(Decimal(1).scaleb(-places),
                                                                        rounding=ROUND_CEILING))


def rounded(iv: RealInterval, places: int) -> str:
    """Midpoint of ``iv`` rounded half-even to ``places`` decimals."""
    mid = (iv.lo_fraction + iv.hi_fraction) / 2
    d = Decimal(mid.numerator) / Decimal(mid.denominator)
    return str(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def c_of_q(q1: int, q2: int, C: RealInterval | None = None, precision: int = DEFAULT_DIGITS) -> RealInterval:
    """(log 2 + C S'(q1))^(1/2) (log 2 + C S'(q2))^(1/2)."""
    C = C if C is not None else big_C(precision=precision)
    ln2 = RealInterval.ln2(precision)
    a = ln2 + C * sprime_of(q1, precision).sprime_interval
    b = ln2 + C * sprime_of(q2, precision).sprime_interval
    return a.sqrt() * b.sqrt()


def parsell_C1(q1: int, q2: int, variant: str = "published", precision: int = DEFAULT_DIGITS) -> RealInterval:
    if variant == "published":
        f = RealInterval.exact(K.PARSELL_PUBLISHED_FACTOR, precision)
        return f * (RealInterval.exact(2 * q1, precision).log() * RealInterval.exact(2 * q2, precision).log()).sqrt()
    if variant == "refined":
        c1 = RealInterval.exact(K.C1_PARSELL, precision)
        a = 1 + c1 * sprime_of(q1, precision).sprime_interval
        b = 1 + c1 * sprime_of(q2, precision).sprime_interval
        return a.sqrt() * b.sqrt()
    raise ValidationError(f"unknown Parsell variant {variant!r}; use one of {PARSELL_VARIANTS}")


# ------------------------------------------------------------------ s0
@dataclass(frozen=True)
class S0Result:
    s0: int
    case: str
    C_interval: RealInterval
    Cq_interval: RealInterval
    numerator: RealInterval
    denominator_constant: str
    B_variant: str
    quotient: RealInterval
    precision_used: int

    def to_json(self) -> dict:
        return {
            "s0": self.s0, "case": self.case, "B_variant": self.B_variant,
            "denominator_constant": self.denominator_constant,
            "C_interval": self.C_interval.to_json(20),
            "Cq_interval": self.Cq_interval.to_json(20),
            "numerator": self.numerator.to_json(20),
            "quotient": self.quotient.to_json(20),
            "precision_used": self.precision_used,
        }


def _certified_threshold(make, precision, max_precision):
    """Evaluate ``make(precision)`` until ceil(quotient) is certified."""
    d = precision
    while True:
        parts = make(d)
        q = parts["quotient"]
        lo_c = ceil(q.lo_fraction)
        hi_c = ceil(q.hi_fraction)
        if lo_c == hi_c:
            return 2 + lo_c, parts, d
        if d >= max_precision:
            raise PrecisionError(f"ceiling undecided at {d} digits: quotient in [{q.lo}, {q.hi}]",
                                 candidates=[2 + lo_c, 2 + hi_c])
        d = min(2 * d, max_precision)


def s0_from_parts(q1: int, q2: int, abs_l1l2, eta, ratio_class: str, B_variant="chen",
                  precision: int = DEFAULT_DIGITS, max_precision: int = MAX_PRECISION) -> S0Result:
    """s0 = 2 + ceil((log(2 C(q1,q2) |l1 l2|) - log eta) / (-log nu)).

    ``abs_l1l2`` and ``eta`` may be decimal strings, expressions or
    :class:`Coefficient` objects.
    """
    if ratio_class not in RATIO_CLASSES:
        raise ValidationError(f"ratio_class must be one of {RATIO_CLASSES}, got {ratio_class!r}")
    ll = abs_l1l2 if isinstance(abs_l1l2, Coefficient) else Coefficient(str(abs_l1l2))
    et = eta if isinstance(eta, Coefficient) else Coefficient(str(eta))
    nu = NU[ratio_class]

    def make(d):
        C = big_C(B_variant, precision=d)
        Cq = c_of_q(q1, q2, C, d)
        num = (2 * Cq * ll.interval(d).abs()).log() - et.interval(d).log()
        den = -RealInterval.exact(nu, d).log()
        if not num.certainly_gt(0):
            raise DomainError(f"s0 numerator {num} is not positive")
        return {"C": C, "Cq": Cq, "num": num, "quotient": num / den}

    s0, parts, d = _certified_threshold(make, precision, max_precision)
    label = B_variant if B_variant in B_VARIANTS else f"B={B_variant}"
    return S0Result(s0, ratio_class, parts["C"], parts["Cq"], parts["num"], nu, label, parts["quotient"], d)


def compute_s0(cfg: CoefficientConfig, B_variant="chen", precision: int = DEFAULT_DIGITS,
               max_precision: int = MAX_PRECISION) -> S0Result:
    if cfg.ratio_class is None:
        raise ValidationError("compute_s0 needs a declared ratio_class (algebraic or transcendental)")
    return s0_from_parts(cfg.q1, cfg.q2, _AbsProduct(cfg), cfg.eta, cfg.ratio_class,
                         B_variant, precision, max_precision)


class _AbsProduct(Coefficient):
    """|lambda1 lambda2| of a config, behaving like a Coefficient."""

    def __init__(self, cfg: CoefficientConfig):
        object.__setattr__(self, "text", f"abs(({cfg.lambda1})*({cfg.lambda2}))")
        object.__setattr__(self, "_cfg", cfg)

    def interval(self, precision: int = DEFAULT_DIGITS) -> RealInterval:
        return self._cfg.abs_l1l2(precision)


def parsell_from_parts(q1: int, q2: int, abs_l1l2, eta, variant: str = "published",
                       precision: int = DEFAULT_DIGITS, max_precision: int = MAX_PRECISION) -> S0Result:
    """Parsell's s0 with C_1(q1, q2) per ``variant`` and denominator -log(0.954).

    The additive epsilon in the refined C_1 is taken as 0.
    """
    ll = abs_l1l2 if isinstance(abs_l1l2, Coefficient) else Coefficient(str(abs_l1l2))
    et = eta if isinstance(eta, Coefficient) else Coefficient(str(eta))

    def make(d):
        C1q = parsell_C1(q1, q2, variant, d)
        num = (2 * C1q * ll.interval(d).abs()).log() - et.interval(d).log()
        den = -RealInterval.exact(K.NU_PARSELL, d).log()
        if not num.certainly_gt(0):
            raise DomainError(f"s0 numerator {num} is not positive")
        return {"Cq": C1q, "num": num, "quotient": num / den}

    s0, parts, d = _certified_threshold(make, precision, max_precision)
    const = RealInterval.exact(K.PARSELL_PUBLISHED_FACTOR if variant == "published" else K.C1_PARSELL, d)
    return S0Result(s0, "parsell", const, parts["Cq"], parts["num"], K.NU_PARSELL,
                    f"parsell_{variant}", parts["quotient"], d)


def parsell_s0(cfg: CoefficientConfig, variant: str = "published", precision: int = DEFAULT_DIGITS,
               max_precision: int = MAX_PRECISION) -> S0Result:
    return parsell_from_parts(cfg.q1, cfg.q2, _AbsProduct(cfg), cfg.eta, variant, precision, max_precision)


# ------------------------------------------------------ worked examples
PAPER_INSTANCES = (
    {"name": "sqrt3_sqrt2", "lambda1": "sqrt(3)", "lambda2": "-sqrt(2)",
     "abs_l1l2": "sqrt(6)", "q1": 1, "q2": 1, "eta": "1", "ratio_class": "algebraic",
     "reported": K.REPORTED_S0["sqrt3_sqrt2_algebraic"]},
    {"name": "pi_sqrt2", "lambda1": "pi", "lambda2": "-sqrt(2)",
     "abs_l1l2": "pi*sqrt(2)", "q1": 1, "q2": 1, "eta": "1", "ratio_class": "transcendental",
     "reported": K.REPORTED_S0["pi_sqrt2_transcendental"]},
)


def paper_examples(precision: int = DEFAULT_DIGITS) -> list[dict]:
    """Evaluate the worked instances literally (q1 = q2 = 1, eta = 1) beside the reported values."""
    rows = []
    for inst in PAPER_INSTANCES:
        ours = s0_from_parts(inst["q1"], inst["q2"], inst["abs_l1l2"], inst["eta"],
                             inst["ratio_class"], "chen", precision)
        rows.append({"instance": inst["name"], "formula": f"s0 ({inst['ratio_class']})",
                     "computed": ours.s0, "reported": inst["reported"],
                     "discrepancy": ours.s0 != inst["reported"], "quotient": ours.quotient.to_json(12)})
        par = parsell_from_parts(inst["q1"], inst["q2"], inst["abs_l1l2"], inst["eta"], "published", precision)
        rows.append({"instance": inst["name"], "formula": "parsell (published C_1)",
                     "computed": par.s0, "reported": K.REPORTED_S0["parsell_published"],
                     "discrepancy": par.s0 != K.REPORTED_S0["parsell_published"],
                     "quotient": par.quotient.to_json(12)})
    return rows
