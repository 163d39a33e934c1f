"""
Contrôleur des relations d'orthogonalité et des intégrales HH-I.
"""

import logging

from fastapi import HTTPException
from fastapi.concurrency import run_in_threadpool

from src.exceptions import OrthogonalityError
from src.models.hh_model import HHRequestModel, HHValues
from src.models.orthogonality_model import EvalRequestModel, OrthoVerdict
from src.services.hh_integral_service import hh_values
from src.services.orthogonality_service import evaluate

logger = logging.getLogger(__name__)


class OrthogonalityController:
    """Contrôleur pour l'évaluation des relations et le calcul de I₊, I₋"""

    async def evaluer_relation(self, request: EvalRequestModel) -> OrthoVerdict:
        """
        Évalue une relation d'orthogonalité pour un couple (x, y)

        Args:
            request: Relation, norme, vecteurs, ε et tolérance

        Returns:
            Verdict avec marge et tolérance
        """
        try:
            return await run_in_threadpool(
                evaluate, request.relation, request.norm, request.x, request.y, request.eps, request.tolerance
            )
        except OrthogonalityError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            logger.error(f"❌ Erreur évaluation {request.relation.value}: {e}")
            raise HTTPException(
                status_code=500,
                detail=f"Erreur évaluation de la relation: {str(e)}"
            )

    async def calculer_integrales(self, request: HHRequestModel) -> HHValues:
        """Calcule I₊, I₋, leur écart et leur somme"""
        try:
            return await run_in_threadpool(
                hh_values, request.norm, request.x, request.y, request.tolerance, request.method
            )
        except OrthogonalityError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            raise HTTPException(
                status_code=500,
                detail=f"Erreur calcul des intégrales: {str(e)}"
            )
