"""Make the package importable from a plain checkout (no install needed)."""

import sys
from pathlib import Path

_SRC = Path(__file__).resolve().parents[1] / "src"
if str(_SRC) not in sys.path:
    try:
        import wkreg  # noqa: F401
    except ImportError:
        sys.path.insert(0, str(_SRC))
