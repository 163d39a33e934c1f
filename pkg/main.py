from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from contextlib import asynccontextmanager
from dotenv import load_dotenv
import os
import logging

# Charger les variables d'environnement
load_dotenv()

from src.routes import orthogonality_routes, mapping_routes, solver_routes, claim_routes
from src.services.claim_service import get_claim_service
from src.utils import get_default_seed, get_default_tolerance

# Configuration du logging
logging.basicConfig(level=os.getenv("ORTHO_LOG_LEVEL", "INFO").upper())
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Gestion du cycle de vie de l'application"""
    logger.info("🚀 Initialisation du registre des assertions...")
    claim_service = get_claim_service()
    tolerance = get_default_tolerance()
    logger.info(
        f"📊 {len(claim_service.claims)} assertions, lots de {claim_service.batch_size} essais, "
        f"tolérance abs={tolerance.abs_tol:g} rel={tolerance.rel_tol:g}, graine {get_default_seed()}"
    )

    yield

    logger.info("👋 Application arrêtée")

# Créer l'application FastAPI
app = FastAPI(
    title=os.getenv("APP_NAME", "HH-I Orthogonality API"),
    version=os.getenv("APP_VERSION", "1.0.0"),
    description="Orthogonalité de type Hermite–Hadamard : relations, applications linéaires et audit des assertions",
    lifespan=lifespan
)

# Configuration CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Enregistrer les routes
app.include_router(orthogonality_routes.router)
app.include_router(mapping_routes.router)
app.include_router(solver_routes.router)
app.include_router(claim_routes.router)


@app.get("/")
async def root():
    """Route racine de l'API"""
    return {
        "message": "Bienvenue sur l'API d'orthogonalité HH-I",
        "version": os.getenv("APP_VERSION", "1.0.0"),
        "docs": "/docs",
        "claims": len(get_claim_service().claims)
    }


@app.get("/health")
async def health_check():
    """Vérification de l'état de l'API"""
    return {
        "status": "healthy"
    }

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "main:app",
        host=os.getenv("HOST", "0.0.0.0"),
        port=int(os.getenv("PORT", 8000)),
        reload=os.getenv("DEBUG", "True") == "True"
    )
