"""
heisgeom HTTP service - FastAPI application

Curvatures of curves and surfaces in the Heisenberg group, Gauss–Bonnet and
tube-volume runs on scenes, and the gallery of worked examples.
"""
from contextlib import asynccontextmanager
import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app import __version__
from app.config import settings, initialize_settings
from app.api.routes import curve, gallery, gauss_bonnet, health

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Log the effective configuration at startup"""
    logger.info("=" * 60)
    logger.info("Starting heisgeom service")
    logger.info("=" * 60)
    initialize_settings()
    logger.info(f"Service ready on port {settings.SERVICE_PORT}")

    yield

    logger.info("Shutdown complete")


app = FastAPI(
    title="heisgeom",
    description="""
Sub-Riemannian geometry of the first Heisenberg group.

## Endpoints

| Route | Computes |
|-------|----------|
| `curve` | k⁰, k^{0,s} and k^L along a curve |
| `surface` | K₀, H₀, K_L, H_L at points of {u = 0} |
| `gauss-bonnet` | Gauss–Bonnet defect of a scene, or the finite-L sum |
| `steiner` | Tube-volume series of a scene |
| `gallery` | Worked examples checked against closed forms |

Input errors return 422, other engine errors 400; both carry
`{"schema": 1, "error": {...}}` as detail.
""",
    version=__version__,
    lifespan=lifespan,
    docs_url=f"{settings.API_PREFIX}/docs",
    redoc_url=f"{settings.API_PREFIX}/redoc",
    openapi_url=f"{settings.API_PREFIX}/openapi.json"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

API_PREFIX = settings.API_PREFIX

app.include_router(health.router, prefix=API_PREFIX, tags=["Health"])
app.include_router(curve.router, prefix=API_PREFIX, tags=["Curvature"])
app.include_router(gauss_bonnet.router, prefix=API_PREFIX, tags=["Scenes"])
app.include_router(gallery.router, prefix=f"{API_PREFIX}/gallery", tags=["Gallery"])


# Root health check (for direct container health checks)
@app.get("/health")
async def root_health():
    return {"status": "UP", "service": settings.SERVICE_NAME}


@app.get("/")
async def root():
    return {
        "service": settings.SERVICE_NAME,
        "version": __version__,
        "port": settings.SERVICE_PORT,
        "endpoints": {
            "health": f"{API_PREFIX}/health",
            "curve": f"{API_PREFIX}/curve",
            "surface": f"{API_PREFIX}/surface",
            "gauss_bonnet": f"{API_PREFIX}/gauss-bonnet",
            "steiner": f"{API_PREFIX}/steiner",
            "gallery": f"{API_PREFIX}/gallery",
            "docs": f"{API_PREFIX}/docs"
        }
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "app.main:app",
        host="0.0.0.0",
        port=settings.SERVICE_PORT,
        reload=False
    )
