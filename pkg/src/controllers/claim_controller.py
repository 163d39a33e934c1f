"""
Contrôleur du banc d'audit des assertions.
"""

import logging
from typing import List

from fastapi import HTTPException
from fastapi.concurrency import run_in_threadpool

from src.exceptions import OrthogonalityError
from src.models.claim_model import ClaimInfo, ClaimReport, ClaimRunRequestModel
from src.services.claim_service import get_claim_service

logger = logging.getLogger(__name__)


class ClaimController:
    """Contrôleur pour lister et exécuter les assertions du registre"""

    def __init__(self):
        """Initialise le contrôleur avec le service d'audit"""
        self.claim_service = get_claim_service()

    async def lister_assertions(self) -> List[ClaimInfo]:
        """Retourne le registre des assertions"""
        return self.claim_service.list_claims()

    async def executer_assertions(self, request: ClaimRunRequestModel) -> List[ClaimReport]:
        """
        Exécute les assertions demandées (toutes si ids est absent)

        Returns:
            Un rapport par assertion, dans l'ordre demandé
        """
        try:
            return await run_in_threadpool(
                self.claim_service.run_claims, request.ids, request.seed, request.trials
            )
        except OrthogonalityError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            logger.error(f"❌ Erreur audit: {e}")
            raise HTTPException(
                status_code=500,
                detail=f"Erreur exécution des assertions: {str(e)}"
            )
