"""
FastAPI entrypoint for Wind Causality Studio
"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import validate_environment

from . import scenarios

app = FastAPI(
    title="Wind Causality Studio API",
    description="Wind Finslerian structures, reachability fronts and causal ladder checks.",
    version="1.0.0",
)

# CORS middleware (adjust origins as needed)
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Health check endpoint
@app.get("/health", tags=["Health"])
def health_check():
    return {"status": "ok" if validate_environment() else "degraded"}


app.include_router(scenarios.router)
