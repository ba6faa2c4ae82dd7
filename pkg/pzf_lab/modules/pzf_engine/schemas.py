from __future__ import annotations

from typing import Optional

from pydantic import BaseModel

from pzf_lab.core.types import Trajectory


class CoupledRun(BaseModel):
    """Two processes driven by the same edge draws.

    ``subset_ok`` holds when ``lower`` stayed inside ``upper`` at every step.
    """

    lower: Trajectory
    upper: Trajectory
    subset_ok: bool
    first_violation: Optional[int] = None
