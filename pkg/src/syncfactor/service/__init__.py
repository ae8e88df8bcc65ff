"""HTTP service facade: pydantic schemas, handlers, and the FastAPI app.

The handlers are plain functions over the schema models and raise the
package's own errors; the app module translates those to HTTP statuses.
The CLI calls the handlers in-process by default, so everything here must
stay importable without a running server (and without importing FastAPI —
only :mod:`syncfactor.service.app` does that).
"""

from . import handlers, schemas

__all__ = ["handlers", "schemas"]
