"""HTTP service over the workbench (FastAPI).

Every endpoint answers with a :class:`~mucalc.report.RunReport`.  Parse, type
and usage errors give status 400 with the report's ``error`` field set.
Run with ``uvicorn mucalc.service:app``.
"""
from __future__ import annotations

from typing import Callable, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from mucalc import __version__, ops
from mucalc.demo import demo_nat, demo_tree
from mucalc.report import EXIT_USAGE, RunReport
from mucalc.script import BUNDLED, Options, _load, check_script, run_text
from mucalc.syntax.parser import ParseError
from mucalc.typecheck import MuTypeError


class TermRequest(BaseModel):
    decls: Optional[str] = Field(None, description="script text whose declarations are in scope")
    vars: dict[str, str] = Field(default_factory=dict, description="variable name -> type")
    cvars: dict[str, str] = Field(default_factory=dict, description="control variable -> type")
    fuel: Optional[int] = None

    def context(self) -> ops.TermContext:
        return ops.TermContext(self.decls, self.vars, self.cvars)


class EquivRequest(TermRequest):
    left: str
    right: str


class NormalizeRequest(TermRequest):
    exprs: list[str]
    eta: bool = False


class FocalRequest(TermRequest):
    exprs: list[str]
    samples: int = 20
    seed: int = 0


class CpsRequest(TermRequest):
    types: list[str] = Field(default_factory=list)
    exprs: list[str] = Field(default_factory=list)
    symbols: bool = False


class ScriptRequest(BaseModel):
    script: str
    fuel: Optional[int] = None
    samples: int = 20
    seed: int = 0


class DemoRequest(BaseModel):
    max: int = Field(20, ge=0, le=200)
    len: int = Field(8, ge=0, le=50)
    elem: Optional[str] = None
    depth: int = Field(3, ge=1, le=4)
    fuel: Optional[int] = None


app = FastAPI(title="mucalc", version=__version__,
              description="Call-by-name lambda-mu calculus with coinductive types")


def _guard(command: str, fn: Callable[[], RunReport]):
    try:
        report = fn()
        if report.exit_code != EXIT_USAGE:
            return report
    except (ops.UsageError, ParseError) as exc:
        report = RunReport(command=command).fail(str(exc))
    except MuTypeError as exc:
        report = RunReport(command=command).fail(f"type error: {exc}")
    return JSONResponse(status_code=400, content=report.model_dump(mode="json"))


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/scripts")
def scripts() -> dict[str, str]:
    """The bundled scripts by name."""
    return {name: _load(name) for name in BUNDLED}


@app.post("/equiv", response_model=RunReport)
def equiv(req: EquivRequest):
    return _guard("equiv", lambda: ops.equiv_terms(req.context(), req.left, req.right, req.fuel))


@app.post("/normalize", response_model=RunReport)
def normalize(req: NormalizeRequest):
    return _guard("normalize",
                  lambda: ops.normalize_terms(req.context(), req.exprs, req.fuel, req.eta)[0])


@app.post("/focal", response_model=RunReport)
def focal(req: FocalRequest):
    return _guard("focal", lambda: ops.focal_terms(req.context(), req.exprs, req.samples,
                                                   req.seed, req.fuel))


@app.post("/cps", response_model=RunReport)
def cps(req: CpsRequest):
    return _guard("cps", lambda: ops.cps_report(req.context(), req.types, req.exprs,
                                                req.symbols))


@app.post("/check", response_model=RunReport)
def check(req: ScriptRequest):
    return _guard("check", lambda: check_script(req.script))


@app.post("/run", response_model=RunReport)
def run(req: ScriptRequest):
    return _guard("run", lambda: run_text(req.script, Options(req.fuel, req.samples, req.seed)))


@app.post("/demo/{kind}", response_model=RunReport)
def demo(kind: str, req: DemoRequest):
    match kind:
        case "nat":
            return _guard("demo nat", lambda: demo_nat(req.max, req.fuel))
        case "list":
            return _guard("demo list", lambda: ops.list_demo(req.len, req.elem, None, req.fuel))
        case "tree":
            return _guard("demo tree", lambda: demo_tree(req.depth, fuel=req.fuel))
    return _guard("demo", lambda: _unknown_demo(kind))


def _unknown_demo(kind: str) -> RunReport:
    raise ops.UsageError(f"unknown demo {kind}; expected nat, list or tree")
