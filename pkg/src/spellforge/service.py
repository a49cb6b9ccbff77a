"""HTTP JSON API over forge and simulate; optionally serves the UI bundle.

Endpoints are stateless: the model is loaded once and shared read-only, and
every /api/simulate request builds its own arena. Schemas in docs/api.md.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import EngineConfig, default_config, load_config
from .core import spec_from_dict, validate_spec
from .forge import ForgeValidationError, forge
from .sim import run_duel
from .textmodel.backend import BackendError, BackendHandle, BuiltinBackend
from .textmodel.linear import load_model

MAX_TICKS_CAP = 2400


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(
    backend: BackendHandle,
    config: EngineConfig | None = None,
    static_dir: str | Path | None = None,
    cors_origin: str | None = None,
    max_ticks_cap: int = MAX_TICKS_CAP,
) -> FastAPI:
    config = config or default_config()
    app = FastAPI(title="spellforge", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "model_id": backend.model_id}

    @app.post("/api/forge")
    async def forge_endpoint(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_json", "request body is not valid JSON")
        if not isinstance(body, dict) or not isinstance(body.get("prompt"), str):
            return _error(400, "bad_request", "body must be an object with a string 'prompt'")
        prompt = body["prompt"]
        if not prompt.strip():
            return _error(400, "empty_prompt", "prompt is empty")
        try:
            forged = forge(
                prompt,
                backend,
                config.registry,
                config.ranges,
                config.cost,
                config.effect,
            )
        except BackendError as exc:
            return _error(502, "backend_failure", str(exc))
        except ForgeValidationError as exc:
            return _error(502, "invalid_prediction", str(exc))
        payload = forged.to_dict()
        payload["type_name"] = config.registry[forged.spec.type_index].name
        return payload

    @app.post("/api/simulate")
    async def simulate_endpoint(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_json", "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be a JSON object")
        specs = {}
        for key in ("spell_a", "spell_b"):
            if key not in body:
                return _error(400, "missing_field", f"missing field {key!r}")
            try:
                specs[key] = spec_from_dict(body[key])
            except ValueError as exc:
                return _error(400, "bad_spell", f"{key}: {exc}")
            violations = validate_spec(specs[key], config.registry, config.ranges)
            if violations:
                return _error(400, "invalid_spell", f"{key}: {'; '.join(violations)}")
        seed = body.get("seed")
        if not isinstance(seed, int):
            return _error(400, "bad_seed", "field 'seed' must be an integer")
        max_ticks = body.get("max_ticks", max_ticks_cap)
        if not isinstance(max_ticks, int) or max_ticks <= 0:
            return _error(400, "bad_max_ticks", "field 'max_ticks' must be a positive integer")
        max_ticks = min(max_ticks, max_ticks_cap)
        policy = body.get("policy", "chase")
        if isinstance(policy, dict) and "a" in policy and "b" in policy:
            policy_arg = (policy["a"], policy["b"])
        elif policy == "chase":
            policy_arg = "chase"
        else:
            return _error(400, "bad_policy", "policy must be 'chase' or {'a': [...], 'b': [...]}")
        try:
            result = run_duel(
                specs["spell_a"],
                specs["spell_b"],
                seed=seed,
                max_ticks=max_ticks,
                policy=policy_arg,
                registry=config.registry,
                effect_config=config.effect,
            )
        except ValueError as exc:
            return _error(400, "bad_duel", str(exc))
        return result.to_dict()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    port: int,
    model_path: str | Path,
    static_dir: str | Path | None = None,
    config_path: str | Path | None = None,
    cors_origin: str | None = None,
    host: str = "127.0.0.1",
) -> None:
    """Load the model once and block serving the API."""
    import uvicorn

    model = load_model(model_path)
    config = load_config(config_path) if config_path else default_config()
    app = create_app(
        BuiltinBackend(model),
        config=config,
        static_dir=static_dir,
        cors_origin=cors_origin,
    )
    uvicorn.run(app, host=host, port=port, log_level="info")
