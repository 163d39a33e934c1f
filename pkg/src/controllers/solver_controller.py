"""
Contrôleur des solveurs unidimensionnels.
"""

from typing import Union

from fastapi import HTTPException
from fastapi.concurrency import run_in_threadpool

from src.exceptions import OrthogonalityError
from src.models.solver_model import BetaResult, LineMinResult, RootResult, SolveRequestModel
from src.services.solver_service import solve


class SolverController:
    """Contrôleur pour la racine du pinceau HH-I, la fonctionnelle β et la minimisation sur une droite"""

    async def resoudre(self, kind: str, request: SolveRequestModel) -> Union[RootResult, BetaResult, LineMinResult]:
        """
        Args:
            kind: pencil, beta, beta-numeric ou line-min
            request: Norme et couple (x, y)
        """
        try:
            return await run_in_threadpool(solve, kind, request.norm, request.x, request.y, request.tolerance)
        except OrthogonalityError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            raise HTTPException(
                status_code=500,
                detail=f"Erreur solveur {kind}: {str(e)}"
            )
