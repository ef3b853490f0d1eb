import os
from dataclasses import dataclass, replace


def _env_int(name, default):
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got '{value}'")


# /////////////////////////////////////////////////////////////////////////////
# Runtime settings for solvers, oracles and the command line
@dataclass(frozen=True)
class Settings:
    """
    Tunable limits of the toolbox.

    Attributes:
        dispatch_oracle_max_n (int): largest n for which dispatch falls back to
            the exhaustive oracle on cells without a polynomial/FPT solver.
        oracle_link_max_n (int): default size guard of oracle_link.
        oracle_agent_max_n (int): default size guard of oracle_agent.
        oracle_max_bribed (int): default bribed-set bound of oracle_agent.
        max_terminals (int): cap on |A+| (Steiner terminals, subset guesses).
        workers (int): threads used by guess loops; 1 means sequential.
    """
    dispatch_oracle_max_n: int = 12
    oracle_link_max_n: int = 8
    oracle_agent_max_n: int = 6
    oracle_max_bribed: int = 3
    max_terminals: int = 20
    workers: int = 1

    @classmethod
    def from_env(cls):
        """
        Build settings from GID_* environment variables, falling back to the
        defaults for anything unset.
        """
        return cls(
            dispatch_oracle_max_n=_env_int("GID_DISPATCH_ORACLE_MAX_N", cls.dispatch_oracle_max_n),
            oracle_link_max_n=_env_int("GID_ORACLE_LINK_MAX_N", cls.oracle_link_max_n),
            oracle_agent_max_n=_env_int("GID_ORACLE_AGENT_MAX_N", cls.oracle_agent_max_n),
            oracle_max_bribed=_env_int("GID_ORACLE_MAX_BRIBED", cls.oracle_max_bribed),
            max_terminals=_env_int("GID_MAX_TERMINALS", cls.max_terminals),
            workers=max(1, _env_int("GID_WORKERS", cls.workers)),
        )

    def single_threaded(self):
        return replace(self, workers=1)


DEFAULT_SETTINGS = Settings()
