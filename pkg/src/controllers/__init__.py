# Package controllers

from src.controllers.claim_controller import ClaimController
from src.controllers.mapping_controller import MappingController
from src.controllers.orthogonality_controller import OrthogonalityController
from src.controllers.solver_controller import SolverController

__all__ = ['ClaimController', 'MappingController', 'OrthogonalityController', 'SolverController']
