"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""


class PFormsError(Exception):
    code = "Error"


class DivisionByZero(PFormsError, ZeroDivisionError):
    code = "DivisionByZero"


class NotAPthPower(PFormsError, ValueError):
    code = "NotAPthPower"


class FieldMismatch(PFormsError, ValueError):
    code = "FieldMismatch"


class InputNotPIndependent(PFormsError, ValueError):
    code = "InputNotPIndependent"


class InputNot2Independent(InputNotPIndependent):
    code = "InputNot2Independent"


class HypothesisViolated(PFormsError, ValueError):
    code = "HypothesisViolated"


class EmptyNormSet(HypothesisViolated):
    code = "EmptyNormSet"


class NormDegreeCollapsed(HypothesisViolated):
    code = "NormDegreeCollapsed"


class CaseNotCovered(HypothesisViolated):
    code = "CaseNotCovered"


class ZeroArgument(PFormsError, ValueError):
    code = "ZeroArgument"


class ZeroForm(PFormsError, ValueError):
    code = "ZeroForm"


class ZeroSlot(ZeroArgument):
    code = "ZeroSlot"


class DegreeMismatch(PFormsError, ValueError):
    code = "DegreeMismatch"


class WrongCharacteristic(PFormsError, ValueError):
    code = "WrongCharacteristic"


class ParseError(PFormsError, ValueError):
    code = "ParseError"

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SemanticError(PFormsError, ValueError):
    code = "SemanticError"


class InternalCheckFailed(PFormsError, AssertionError):
    code = "InternalCheckFailed"
