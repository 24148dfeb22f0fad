import logging
import os

from common.util import optional_int, str_to_bool

logger = logging.getLogger(__name__)


class SettingsHelper:
    def __init__(self):
        self.nodeBudget = int(os.getenv("CFL_NODE_BUDGET", "2000000"))
        # None means "use the grammar's nonterminal count"
        self.extraFormLength = optional_int(os.getenv("CFL_EXTRA_FORM_LENGTH"))
        self.iMax = int(os.getenv("CFL_IMAX", "4"))
        self.jobs = int(os.getenv("CFL_JOBS", "1"))
        self.logLevel = os.getenv("CFL_LOG_LEVEL", "WARNING").upper()
        self.tokens = str_to_bool(os.getenv("CFL_TOKENS", "False"))
        if self.nodeBudget <= 0:
            raise ValueError(f"CFL_NODE_BUDGET must be positive, got {self.nodeBudget}")
        if self.iMax < 0:
            raise ValueError(f"CFL_IMAX must be non-negative, got {self.iMax}")
        if self.jobs < 1:
            raise ValueError(f"CFL_JOBS must be at least 1, got {self.jobs}")

    def get_log_level(self) -> int:
        level = logging.getLevelName(self.logLevel)
        if not isinstance(level, int):
            logger.warning(f"Unknown CFL_LOG_LEVEL {self.logLevel}, falling back to WARNING")
            return logging.WARNING
        return level

    def __str__(self):
        return (f"nodeBudget={self.nodeBudget}, extraFormLength={self.extraFormLength}, "
                f"iMax={self.iMax}, jobs={self.jobs}, logLevel={self.logLevel}, tokens={self.tokens}")
