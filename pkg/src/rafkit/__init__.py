"""rafkit: reasoning with rejection-augmented argumentation frameworks.

The package covers base AF semantics, rejection-condition evaluation in
classical and answer-set modes, simulation translators, hardness instance
generators, tree decompositions, and decomposition-guided QBF encodings
with QDIMACS/QCIR output.
"""

from .config import Caps, DEFAULT_CAPS
from .errors import (CapExceeded, InputShapeError, ParseError, RafkitError,
                     ValidationError)
from .model import (AF, ASP, CAF, CLASSICAL, RAF, RcClass, Rule, Semantics,
                    classify_rc, validate_caf, validate_raf)
from .parsing import parse_caf, parse_raf, render_caf, render_raf

__all__ = [
    "AF", "ASP", "CAF", "CLASSICAL", "Caps", "CapExceeded", "DEFAULT_CAPS",
    "InputShapeError", "ParseError", "RAF", "RafkitError", "RcClass", "Rule",
    "Semantics", "ValidationError", "classify_rc", "parse_caf", "parse_raf",
    "render_caf", "render_raf", "validate_caf", "validate_raf",
]

__version__ = "0.1.0"
