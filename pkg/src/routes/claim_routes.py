"""
Routes pour le banc d'audit des assertions
"""

from typing import List

from fastapi import APIRouter

from src.controllers.claim_controller import ClaimController
from src.models.claim_model import ClaimInfo, ClaimReport, ClaimRunRequestModel

router = APIRouter(prefix="/api/claims", tags=["Audit des assertions"])
controller = ClaimController()


@router.get("", response_model=List[ClaimInfo])
async def lister_assertions():
    """Liste les assertions du registre avec leur budget par défaut"""
    return await controller.lister_assertions()


@router.post("/run", response_model=List[ClaimReport])
async def executer_assertions(request: ClaimRunRequestModel):
    """
    Exécute une ou plusieurs assertions ; un contre-exemple est toujours
    accompagné d'un témoin revérifié
    """
    return await controller.executer_assertions(request)
