"""
Report Models for ECFCensus
Row records emitted by verification suites
"""
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class CheckRow(BaseModel):
    """One comparison or property check of a verification suite"""

    suite: str
    label: str
    exact: Optional[float] = None
    predicted: Optional[float] = None
    abs_error: Optional[float] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    gated: bool = True
    payload: Dict[str, Any] = Field(default_factory=dict)

    @property
    def failed(self) -> bool:
        """A gated row that ran and did not pass"""
        return self.gated and self.passed is False
