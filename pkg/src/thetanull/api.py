"""HTTP front end: classification and self-test as a small JSON service.

Error mapping mirrors the CLI exit codes: domain errors (bad input, matrix
not in the Siegel space, bad characteristics) become 422 responses, numerical
failures (unreachable targets, lost Newton iterations) become 409 responses,
both with a `code` naming the exception class.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import DomainError, NumericalError
from .service import InputDocument, ReportDocument, SelftestReport, classify, selftest

__all__ = ["app", "create_app"]


def create_app() -> FastAPI:
    app = FastAPI(title="thetanull", version=__version__)

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"detail": str(exc), "code": type(exc).__name__},
        )

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError) -> JSONResponse:
        return JSONResponse(
            status_code=409,
            content={"detail": str(exc), "code": type(exc).__name__},
        )

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/classify", response_model=ReportDocument)
    async def classify_endpoint(
        doc: InputDocument, threads: int = Query(default=1, ge=1, le=64)
    ) -> ReportDocument:
        return classify(doc, threads=threads)

    @app.post("/selftest", response_model=SelftestReport)
    async def selftest_endpoint(
        filter: str | None = Query(default=None),
        seed: int = Query(default=0, ge=0),
        threads: int = Query(default=1, ge=1, le=64),
    ) -> SelftestReport:
        return selftest(name_filter=filter, seed=seed, threads=threads)

    return app


app = create_app()
