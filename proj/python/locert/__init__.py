from ._locert import *  # noqa: F401,F403
