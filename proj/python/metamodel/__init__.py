"""Complex-systems metamodelling engine.

Declare a model's structures and operations (virtual), bind concrete
parameters (metastable), execute it (actual); instantiate cellular
automata and layered neural networks as system models; adapt update
rules or weights against a target; check two models for conditional
equivalence.
"""

from metamodel._core import *  # noqa: F401,F403
from metamodel._core import __version__  # noqa: F401
