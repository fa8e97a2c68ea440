import logging

from functools import wraps
from time import perf_counter

from .exceptions import VerificationException
from .utils import AXIOM_TOL


logger = logging.getLogger(__name__)



# region ClassProperty
class ClassProperty:
    """
    A decorator to create a class property that can be accessed like an attribute.
    """
    def __init__(self, fget):
        self.fget = fget

    def __get__(self, instance, owner):
        return self.fget(owner)


# region CheckWrapper
class CheckWrapper:
    def axiom_report(axiom: str, *, report_cls):
        """
        Turn a function returning ``{"residual", "operands", "details"}`` into one
        returning ``report_cls``. The wrapped function gains a keyword ``tol``.
        """
        def decorator(func):
            @wraps(func)
            def wrapper(*args, tol: float = AXIOM_TOL, **kwargs):
                if tol <= 0:
                    raise VerificationException(
                        f"Tolerance for {axiom!r} must be positive, received {tol = }."
                    )
                outcome = func(*args, **kwargs)
                missing = {"residual", "operands"} - set(outcome)
                if missing:
                    raise VerificationException(
                        f"The check {func.__name__!r} did not report {sorted(missing)!r}."
                    )
                residual = float(outcome["residual"])
                report = report_cls(
                    axiom=axiom,
                    operands=tuple(outcome["operands"]),
                    residual=residual,
                    tolerance=tol,
                    passed=bool(residual <= tol),
                    details=outcome.get("details", {}),
                )
                logger.info(
                    "%s on %s: residual %.3e (%s)",
                    axiom, ", ".join(report.operands), residual, "pass" if report.passed else "FAIL"
                )
                return report
            return wrapper
        return decorator


# region ReportWrapper
class ReportWrapper:
    def timed(func):
        @wraps(func)
        def wrapper(self, *args, **kwargs):
            start = perf_counter()
            try:
                return func(self, *args, **kwargs)
            finally:
                timings = getattr(self, "_timings", None)
                if timings is not None:
                    timings[func.__name__] = perf_counter() - start
        return wrapper


# region CoreWrappers
WRAPPERS = {
    "Axiom": CheckWrapper.axiom_report,
    "Timed": ReportWrapper.timed,
}


# ------------------------------------------------------------------------------------
