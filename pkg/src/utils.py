"""
Utilitaires partagés : lecture de la configuration d'environnement,
conversion des tableaux numpy pour les réponses JSON et chargement des matrices.
"""

import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, List

import numpy as np


def get_env_float(name: str, default: float) -> float:
    """Lire une variable d'environnement flottante (valeur par défaut si absente ou vide)"""
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return float(value)


def get_env_int(name: str, default: int) -> int:
    """Lire une variable d'environnement entière"""
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return int(value)


def get_default_seed() -> int:
    """Graine par défaut (ORTHO_SEED, sinon 0)"""
    return get_env_int("ORTHO_SEED", 0)


def get_default_tolerance():
    """
    Tolérance par défaut, surchargeable par ORTHO_ABS_TOL et ORTHO_REL_TOL
    """
    from src.models.vector_model import Tolerance

    return Tolerance(
        abs_tol=get_env_float("ORTHO_ABS_TOL", 1e-12),
        rel_tol=get_env_float("ORTHO_REL_TOL", 1e-10),
    )


def to_jsonable(value: Any) -> Any:
    """
    Convertir récursivement les types numpy en types Python sérialisables
    """
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def stable_hash(text: str) -> int:
    """Empreinte 64 bits stable d'une chaîne (indépendante de PYTHONHASHSEED)"""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def load_matrix(path: str) -> List[List[float]]:
    """
    Charger une matrice depuis un fichier JSON (tableau de tableaux)
    ou CSV (une ligne par rangée)

    Args:
        path: Chemin du fichier

    Returns:
        Matrice sous forme de listes imbriquées
    """
    fichier = Path(path)
    contenu = fichier.read_text(encoding="utf-8").strip()
    if contenu.startswith("["):
        data = json.loads(contenu)
    else:
        data = np.loadtxt(fichier, delimiter=",", ndmin=2).tolist()
    matrice = np.asarray(data, dtype=float)
    if matrice.ndim == 1:
        matrice = matrice[None, :]
    if matrice.ndim != 2:
        raise ValueError(f"Le fichier {path} ne contient pas une matrice")
    return matrice.tolist()


def format_markdown_table(headers: List[str], rows: List[List[Any]]) -> str:
    """Construire un tableau markdown simple"""
    lignes = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    for row in rows:
        lignes.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lignes)


def flatten_for_csv(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Aplatir un dictionnaire imbriqué en colonnes CSV (clés pointées)"""
    plat: Dict[str, Any] = {}
    for key, value in data.items():
        nom = f"{prefix}{key}"
        if isinstance(value, dict):
            plat.update(flatten_for_csv(value, prefix=f"{nom}."))
        elif isinstance(value, list):
            plat[nom] = json.dumps(value)
        else:
            plat[nom] = value
    return plat
