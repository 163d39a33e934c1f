"""
Routes pour l'analyse des applications linéaires
"""

from fastapi import APIRouter

from src.controllers.mapping_controller import MappingController
from src.models.mapping_model import MapAnalysisModel, MapRequestModel

router = APIRouter(prefix="/api/mapping", tags=["Applications linéaires"])
controller = MappingController()


@router.post("/analyze", response_model=MapAnalysisModel)
async def analyser_application(request: MapRequestModel):
    """
    Profil (‖g‖, [g], κ, ε*), plus petit ε de la condition (11) et,
    si ε est fourni, vérification des bornes (12) et de la condition (17)
    """
    return await controller.analyser_application(request)
