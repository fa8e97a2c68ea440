


class KZDKException(Exception):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class ModuleSpecException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class SuperLinalgException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class JordanException(SuperLinalgException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class ExcludedParameterException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class DecompositionException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class VerificationException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class CorrelatorException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class ExporterException(KZDKException):
    def __init__(self, *args: object) -> None:
        super().__init__(*args)


__all__ = (
    "KZDKException",
    "ModuleSpecException",
    "SuperLinalgException",
    "JordanException",
    "ExcludedParameterException",
    "DecompositionException",
    "VerificationException",
    "CorrelatorException",
    "ExporterException",
)
