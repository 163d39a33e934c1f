"""
Contrôleur de l'analyse des applications linéaires.
"""

from fastapi import HTTPException
from fastapi.concurrency import run_in_threadpool

from src.exceptions import OrthogonalityError
from src.models.mapping_model import MapAnalysisModel, MapRequestModel
from src.services.mapping_service import analyze


class MappingController:
    """Contrôleur pour le profil d'une application et ses conditions de préservation"""

    async def analyser_application(self, request: MapRequestModel) -> MapAnalysisModel:
        """
        Analyse complète d'une application : ‖g‖, [g], ε*, condition (11)
        et, si ε est fourni, les bornes (12) et la condition (17)
        """
        try:
            return await run_in_threadpool(analyze, request.map, request.eps, request.seed, request.samples)
        except HTTPException:
            raise
        except OrthogonalityError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            raise HTTPException(
                status_code=500,
                detail=f"Erreur analyse de l'application: {str(e)}"
            )
