"""Backend selection: the compiled kernel when available, the pure-Python
twin otherwise. Set FOLIM_PURE_PYTHON=1 to force the fallback."""

from __future__ import annotations

import os

from ._pykernel import EvalError  # noqa: F401 (re-export)

if os.environ.get("FOLIM_PURE_PYTHON"):
    from . import _pykernel as _backend
else:
    try:
        from . import _ckernel as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as _backend

BACKEND: str = _backend.BACKEND
eval_env = _backend.eval_env
count_all = _backend.count_all
eval_batch = _backend.eval_batch
