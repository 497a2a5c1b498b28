"""Exception hierarchy shared by every module of the package."""


class TangentRuleError(Exception):
    pass


class DivisionByZero(TangentRuleError, ZeroDivisionError):
    """A denominator vanished during exact evaluation."""


class DivisionByZeroConst(DivisionByZero):
    """Constant folding produced a zero denominator."""


class NotExactlyEvaluable(TangentRuleError):
    def __init__(self, node):
        super().__init__(f"not exactly evaluable: {type(node).__name__}")
        self.node = node


class DomainError(TangentRuleError, ValueError):
    def __init__(self, expr, value, reason=""):
        msg = f"{type(expr).__name__} undefined at {value!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.expr = expr
        self.value = value


class OutsideDomainError(TangentRuleError, ValueError):
    """The point is not in the closure of the expression's domain."""


class EmptyCommonDomain(TangentRuleError, ValueError):
    pass


class ParseError(TangentRuleError, ValueError):
    def __init__(self, position, expected, found):
        shown = repr(found) if found else "end of input"
        super().__init__(f"at offset {position}: expected {expected}, found {shown}")
        self.position = position
        self.expected = expected
        self.found = found


class NonRationalExponent(ParseError):
    pass


class NotPolynomial(TangentRuleError):
    def __init__(self, node):
        super().__init__(f"not a polynomial: {type(node).__name__} node")
        self.node = node


class NotRegisteredInvertible(TangentRuleError):
    pass


class ZeroDerivativeOnBranch(TangentRuleError):
    pass
