"""Exception hierarchy. Every error carries a ``kind`` used by the CLI's structured error output."""

from __future__ import annotations


class ExactHarmonicError(Exception):
    kind = "Error"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": str(self)}


class ExprSyntaxError(ExactHarmonicError):
    kind = "SyntaxError"

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["offset"] = self.offset
        d["expected"] = sorted(self.expected)
        return d


class UnsupportedConstruct(ExprSyntaxError):
    kind = "UnsupportedConstruct"


class DomainError(ExactHarmonicError, ValueError):
    kind = "DomainError"


class UnsupportedIntegral(ExactHarmonicError):
    kind = "UnsupportedIntegral"

    def __init__(self, subterm: str, variable: str):
        self.subterm = subterm
        self.variable = variable
        super().__init__(f"no closed-form antiderivative of {subterm} with respect to {variable}")


class NotExact(ExactHarmonicError):
    kind = "NotExact"

    def __init__(self, witness: str):
        self.witness = witness
        super().__init__(f"form is not exact: M_y - N_x = {witness}")

    def to_dict(self) -> dict:
        return {**super().to_dict(), "witness": self.witness}


class NotHarmonicAdmissible(ExactHarmonicError):
    kind = "NotHarmonicAdmissible"

    def __init__(self, witness: str):
        self.witness = witness
        super().__init__(f"exact form has no harmonic solution: M_x + N_y = {witness}")

    def to_dict(self) -> dict:
        return {**super().to_dict(), "witness": self.witness}


class IntegrandDependsOnY(ExactHarmonicError):
    kind = "IntegrandDependsOnY"

    def __init__(self, integrand: str):
        self.integrand = integrand
        super().__init__(f"conjugate integrand {integrand} depends on y")


class DegeneratePoint(ExactHarmonicError):
    kind = "DegeneratePoint"


class DegenerateSeed(ExactHarmonicError):
    kind = "DegenerateSeed"
