from dataclasses import dataclass, field
from typing import Any, Dict, Optional


# -------- Ошибки --------
@dataclass(slots=True)
class FloydError(Exception):
    message: str = "Internal error"
    exit_code: int = 1
    code: str = "internal_error"
    details: Optional[Dict[str, Any]] = field(default=None)

    def __post_init__(self):
        Exception.__init__(self, self.message)

@dataclass(slots=True)
class ParseError(FloydError):
    message: str = "Parse error"
    exit_code: int = 2
    code: str = "parse_error"

@dataclass(slots=True)
class InvalidConfig(FloydError):
    message: str = "Invalid configuration"
    exit_code: int = 2
    code: str = "invalid_config"

@dataclass(slots=True)
class InvalidAddress(FloydError):
    message: str = "Invalid address"
    exit_code: int = 3
    code: str = "invalid_address"

@dataclass(slots=True)
class ToleranceUnattainable(FloydError):
    message: str = "Tolerance unattainable within the term budget"
    exit_code: int = 4
    code: str = "tolerance_unattainable"

@dataclass(slots=True)
class OutputError(FloydError):
    message: str = "Output path is not writable"
    exit_code: int = 5
    code: str = "output_error"

@dataclass(slots=True)
class PreconditionFailed(FloydError):
    message: str = "Precondition failed"
    exit_code: int = 6
    code: str = "precondition_failed"

@dataclass(slots=True)
class VerificationError(FloydError):
    message: str = "Verification failed"
    exit_code: int = 1
    code: str = "verification_failed"
