"""Family tags for the matrix-beta generator laws."""

from __future__ import annotations

import enum


class Family(str, enum.Enum):
    """Kernel type (1/2/3) crossed with the generator argument (trace/det)."""

    MBG1 = "MBG1"
    MBG2 = "MBG2"
    MBG3 = "MBG3"
    DETGEN1 = "DETGEN1"
    DETGEN2 = "DETGEN2"
    DETGEN3 = "DETGEN3"

    @property
    def kernel_type(self) -> int:
        return int(self.value[-1])

    @property
    def det_argument(self) -> bool:
        """True when h acts on det(Phi X) instead of tr(Phi X)."""
        return self.value.startswith("DET")

    @property
    def bounded(self) -> bool:
        """Support is 0 < X < I (types 1 and 3) rather than X > 0."""
        return self.kernel_type != 2

    @classmethod
    def coerce(cls, value) -> "Family":
        if isinstance(value, Family):
            return value
        if isinstance(value, int) or (isinstance(value, str) and value.isdigit()):
            return cls(f"MBG{int(value)}")
        return cls(str(value).upper())
