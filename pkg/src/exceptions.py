"""
Exceptions du domaine.
Les services lèvent ces erreurs ; les contrôleurs les traduisent en HTTPException
et la CLI en codes de sortie.
"""


class OrthogonalityError(ValueError):
    """Erreur de base pour toutes les entrées invalides du domaine"""


class InvalidVectorError(OrthogonalityError):
    """Vecteur vide, non fini ou de mauvaise forme"""


class DimensionMismatchError(OrthogonalityError):
    """Dimensions incompatibles entre vecteurs, matrices et normes"""


class InvalidNormSpecError(OrthogonalityError):
    """Spécification de norme qui viole ses invariants"""


class NotInnerProductError(InvalidNormSpecError):
    """Opération réservée aux normes issues d'un produit scalaire"""


class InvalidEpsilonError(OrthogonalityError):
    """Paramètre ε hors de son domaine"""


class UnknownRelationError(OrthogonalityError):
    """Identifiant de relation inconnu"""


class UnknownClaimError(OrthogonalityError):
    """Identifiant d'assertion absent du registre"""


class ConvergenceError(RuntimeError):
    """Quadrature ou recherche de racine qui n'a pas convergé"""
