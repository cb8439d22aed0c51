"""
Verdicts, reason codes and telescoper witnesses.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra import FIELD, RatFun, format_ratfun
from .operators import OrePoly, ore_lclm_many, right_quotient


class Reason(str, Enum):
    """Why a telescoper or an exactness certificate does not exist, or why no decision was made."""

    NOT_INTEGER_LINEAR = "NOT_INTEGER_LINEAR"
    NOT_Q_INTEGER_LINEAR = "NOT_Q_INTEGER_LINEAR"
    NOT_SPLIT = "NOT_SPLIT"
    DEN_DEPENDS_ON_X = "DEN_DEPENDS_ON_X"
    DEN_DEPENDS_ON_Y = "DEN_DEPENDS_ON_Y"
    NO_ORBIT_RELATION = "NO_ORBIT_RELATION"
    NOT_INVARIANT = "NOT_INVARIANT"
    NOT_SUMMABLE = "NOT_SUMMABLE"
    SCALAR_NOT_SUMMABLE = "SCALAR_NOT_SUMMABLE"
    RESIDUE_NOT_INTEGRABLE = "RESIDUE_NOT_INTEGRABLE"
    REMAINDER_NOT_EXACT = "REMAINDER_NOT_EXACT"
    NONSEPARABLE_RESIDUE = "NONSEPARABLE_RESIDUE"
    ALG_SEPARABILITY_UNDECIDED = "ALG_SEPARABILITY_UNDECIDED"
    BOUND_EXCEEDED = "BOUND_EXCEEDED"
    NONPRIMITIVE_ORBIT = "NONPRIMITIVE_ORBIT"


EXISTS = "exists"
NOT_EXISTS = "not_exists"
UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class Witness:
    """L(f) = Theta_y(g) + Theta_z(h) for the part it was built for."""

    telescoper: OrePoly
    g: RatFun = FIELD.zero
    h: RatFun = FIELD.zero


def combine_witnesses(witnesses: Sequence[Witness]) -> Witness:
    """
    A common witness for the sum of the parts.

    L is the LCLM of the parts' telescopers; with L = Q_i * L_i the
    certificates are sum Q_i(g_i) and sum Q_i(h_i).
    """
    operator = ore_lclm_many([w.telescoper for w in witnesses])
    g, h = FIELD.zero, FIELD.zero
    for w in witnesses:
        quotient = right_quotient(operator, w.telescoper)
        g += quotient.apply(w.g)
        h += quotient.apply(w.h)
    return Witness(operator, g, h)


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of a telescoper decision.

    Attributes:
        status: exists, not_exists or unsupported
        telescoper: Verified telescoper when one was built
        certificates: (g, h) with L(f) = Theta_y(g) + Theta_z(h)
        reason: Reason code for not_exists
        branch: Branch code for unsupported
        verified: Whether the witness was checked; None without witness
        detail: The offending factor or block, printed
    """

    status: str
    telescoper: Optional[OrePoly] = None
    certificates: Optional[Tuple[RatFun, RatFun]] = None
    reason: Optional[Reason] = None
    branch: Optional[Reason] = None
    verified: Optional[bool] = None
    detail: Optional[str] = None

    @classmethod
    def exists(cls, witness: Optional[Witness] = None) -> "Verdict":
        """A positive verdict; a witness must already be verified."""
        if witness is None:
            return cls(EXISTS)
        operator = witness.telescoper.normalized()
        scale = operator.leading / witness.telescoper.leading
        return cls(EXISTS, operator, (scale * witness.g, scale * witness.h), verified=True)

    @classmethod
    def not_exists(cls, reason: Reason, detail: Optional[str] = None) -> "Verdict":
        return cls(NOT_EXISTS, reason=reason, detail=detail)

    @classmethod
    def unsupported(cls, branch: Reason, detail: Optional[str] = None) -> "Verdict":
        return cls(UNSUPPORTED, branch=branch, detail=detail)

    @property
    def decided(self) -> bool:
        return self.status != UNSUPPORTED

    def to_dict(self, type_name: str) -> Dict[str, Any]:
        """JSON-ready mapping; absent fields are omitted."""
        result: Dict[str, Any] = {"type": type_name, "verdict": self.status}
        if self.telescoper is not None:
            result["telescoper"] = str(self.telescoper)
        if self.certificates is not None:
            result["certificates"] = [format_ratfun(c) for c in self.certificates]
        if self.reason is not None:
            result["reason"] = self.reason.value
        if self.branch is not None:
            result["branch"] = self.branch.value
        if self.verified is not None:
            result["verified"] = self.verified
        if self.detail is not None:
            result["detail"] = self.detail
        return result


def merge_parts(parts: List[Verdict]) -> Optional[Verdict]:
    """First not_exists part, else first unsupported part, else None."""
    for part in parts:
        if part.status == NOT_EXISTS:
            return part
    for part in parts:
        if part.status == UNSUPPORTED:
            return part
    return None
