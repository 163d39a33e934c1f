"""
Routes pour les solveurs unidimensionnels
"""

from typing import Union

from fastapi import APIRouter

from src.controllers.solver_controller import SolverController
from src.models.solver_model import BetaResult, LineMinResult, RootResult, SolveRequestModel

router = APIRouter(prefix="/api/solvers", tags=["Solveurs"])
controller = SolverController()


@router.post("/{kind}", response_model=Union[RootResult, BetaResult, LineMinResult])
async def resoudre(kind: str, request: SolveRequestModel):
    """
    - pencil : s tel que x ⊥_HH-I y + s·x
    - beta / beta-numeric : min sur β de ‖x/β‖² + ‖βy‖²
    - line-min : min sur t de ‖x + t·y‖
    """
    return await controller.resoudre(kind, request)
