from collections.abc import Sequence
from enum import StrEnum
from fractions import Fraction
import logging
import pathlib
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ulrich_lib.qexact import AffineForm, render_exact

ULRICH_CERTIFY_DIR = pathlib.Path(__file__).parent.parent.parent

INSTRUMENTATION_NAME = "ulrich-certify"
INSTRUMENTATION_VERSION = "1.0.0"
TRACE_ENDPOINT_PATH = "/traces/collector/{}/v1/traces"
SERVICE_NAME = "ulrich-certify"

SPAN_PREFIX = "ulrich.certify."
ATTR_CERTIFICATE_ID = "ulrich.certificate.id"
ATTR_CERTIFICATE_STATUS = "ulrich.certificate.status"
ATTR_CHECKS_TOTAL = "ulrich.checks.total"
ATTR_CHECKS_FAILED = "ulrich.checks.failed"
ATTR_FAILED_CHECK_NAMES = "ulrich.checks.failed_names"

logger = logging.getLogger(__name__)

type Renderable = int | Fraction | bool | str | AffineForm | None | Sequence["Renderable"]


def render_value(value: Renderable) -> str:
    """Exact text form of a check value; fractions are written "p/q", tuples as "(x, y, ...)"."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int | Fraction):
        return render_exact(value)
    if isinstance(value, str):
        return value
    if isinstance(value, AffineForm):
        return value.render()
    if value is None:
        return "none"
    return "(" + ", ".join(render_value(v) for v in value) + ")"


class CertificateStatus(StrEnum):
    VERIFIED = "verified"
    REFUTED_AS_EXPECTED = "refuted-as-expected"
    MISMATCH = "mismatch"
    ERROR = "error"

    @property
    def is_success(self) -> bool:
        return self in (CertificateStatus.VERIFIED, CertificateStatus.REFUTED_AS_EXPECTED)


class Check(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    expected: str
    got: str
    passed: bool


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    status: CertificateStatus
    checks: list[Check]
    witnesses: dict[str, str] = Field(default_factory=dict)

    @property
    def failed_checks(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    @classmethod
    def from_checks(cls, certificate_id: str, checks: list[Check], witnesses: dict[str, str], refutation: bool) -> Self:
        if any(not check.passed for check in checks):
            status = CertificateStatus.MISMATCH
        elif refutation:
            status = CertificateStatus.REFUTED_AS_EXPECTED
        else:
            status = CertificateStatus.VERIFIED
        return cls(id=certificate_id, status=status, checks=checks, witnesses=witnesses)

    @classmethod
    def merge(cls, certificate_id: str, parts: Sequence["Certificate"], refutation: bool) -> Self:
        checks = [check for part in parts for check in part.checks]
        witnesses = {name: value for part in parts for name, value in part.witnesses.items()}
        return cls.from_checks(certificate_id, checks, witnesses, refutation)

    @classmethod
    def from_error(cls, certificate_id: str, error: Exception) -> Self:
        return cls(
            id=certificate_id,
            status=CertificateStatus.ERROR,
            checks=[],
            witnesses={"error": f"{type(error).__name__}: {error}"},
        )


class CheckLog:
    """Accumulates the checks of one certificate while it is being built."""

    def __init__(self) -> None:
        self.checks: list[Check] = []
        self.witnesses: dict[str, str] = {}

    def expect(self, name: str, expected: Renderable, got: Renderable) -> bool:
        passed = render_value(expected) == render_value(got)
        self.checks.append(Check(name=name, expected=render_value(expected), got=render_value(got), passed=passed))
        if not passed:
            logger.warning("Check %s failed: expected %s, got %s", name, render_value(expected), render_value(got))
        return passed

    def holds(self, name: str, condition: bool) -> bool:
        return self.expect(name, True, condition)

    def witness(self, name: str, value: Renderable) -> None:
        self.witnesses[name] = render_value(value)

    def certificate(self, certificate_id: str, refutation: bool) -> Certificate:
        return Certificate.from_checks(certificate_id, self.checks, self.witnesses, refutation)


class VarietyParams(BaseModel):
    """Numerical data of a polarized variety (X, H) with the twist k.

    Optional invariants are explicit absences, never zero: KH = K_X·H^{n-1}, K2 = K_X²·H^{n-2},
    c2 = c₂(X)·H^{n-2}, chi = χ(O_X).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(ge=1)
    d: int = Field(ge=1)
    g: int
    k: int
    KH: int | None = None
    K2: int | None = None
    c2: int | None = None
    chi: int | None = None

    @model_validator(mode="after")
    def _sectional_genus_matches(self) -> Self:
        if self.KH is not None and 2 * (self.g - 1) != self.KH + (self.n - 1) * self.d:
            raise ValueError(
                f"sectional genus {self.g} is inconsistent with KH={self.KH}, n={self.n}, d={self.d}: "
                f"expected 2(g-1) = KH + (n-1)d"
            )
        return self

    def require(self, *names: str) -> tuple[int, ...]:
        """The named optional invariants, raising when any is absent."""
        values = tuple(getattr(self, name) for name in names)
        missing = [name for name, value in zip(names, values, strict=True) if value is None]
        if missing:
            raise ValueError(f"missing invariants {missing} for this operation")
        return tuple(v for v in values if isinstance(v, int))


class CertificationLimits(BaseModel):
    """Enumeration bounds resolved once from settings and command-line flags."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    amax: int = Field(ge=9)
    extended_amax: int = Field(ge=9)
    max_c: int = Field(ge=1)
    max_odd_k: int = Field(ge=3)
    grado_d_max: int = Field(ge=4)
