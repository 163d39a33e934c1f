"""
Routes pour les relations d'orthogonalité et les intégrales HH-I
"""

from fastapi import APIRouter

from src.controllers.orthogonality_controller import OrthogonalityController
from src.models.hh_model import HHRequestModel, HHValues
from src.models.orthogonality_model import EvalRequestModel, OrthoVerdict

router = APIRouter(prefix="/api/orthogonality", tags=["Orthogonalité"])
controller = OrthogonalityController()


@router.post("/eval", response_model=OrthoVerdict)
async def evaluer_relation(request: EvalRequestModel):
    """
    Évalue une relation (classic, birkhoff, isosceles, eps_inner, dragomir_birkhoff,
    chmielinski_birkhoff, iso_additive, iso_multiplicative, hh_exact, hh_relative, hh_absolute)
    """
    return await controller.evaluer_relation(request)


@router.post("/hh", response_model=HHValues)
async def calculer_integrales(request: HHRequestModel):
    """
    Calcule I₊(x, y) et I₋(x, y) (forme close ou quadrature de Gauss–Legendre)
    """
    return await controller.calculer_integrales(request)
