"""
Interface en ligne de commande : évaluation des relations, intégrales HH,
analyse d'applications linéaires, solveurs 1-D et audit des assertions.

Codes de sortie : 0 succès (ou relation satisfaite), 3 relation non satisfaite
(eval uniquement), 2 entrée invalide, 1 erreur interne.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError

from src.exceptions import OrthogonalityError
from src.models.claim_model import ClaimReport
from src.models.mapping_model import LinearMap
from src.models.orthogonality_model import RelationId
from src.models.run_config_model import RunConfig
from src.models.vector_model import InnerProductNormSpec, LpNormSpec, WeightedLpNormSpec
from src.services.claim_service import get_claim_service
from src.services.hh_integral_service import METHODS, hh_values
from src.services.mapping_service import DEFAULT_SAMPLES, analyze
from src.services.orthogonality_service import evaluate
from src.services.solver_service import SOLVERS, solve
from src.utils import (
    flatten_for_csv,
    format_markdown_table,
    get_default_seed,
    get_default_tolerance,
    load_matrix,
    to_jsonable,
)

logger = logging.getLogger("ortho.cli")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_FAILS = 3


class UsageError(OrthogonalityError):
    """Argument de ligne de commande incohérent"""


def parse_norm(text: str):
    """
    Mini-syntaxe des normes : lp:<p|inf>, wlp:<p>:<w1,w2,...>, ip:<fichier de Gram>

    Raises:
        UsageError: syntaxe non reconnue
    """
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "lp" and rest:
            return LpNormSpec(p=rest)
        if kind == "wlp":
            p, _, weights = rest.partition(":")
            return WeightedLpNormSpec(p=p, weights=[float(w) for w in weights.split(",") if w.strip()])
        if kind == "ip" and rest:
            return InnerProductNormSpec(gram=load_matrix(rest))
    except (ValidationError, ValueError, OSError) as e:
        raise UsageError(f"Norme invalide « {text} » : {e}")
    raise UsageError(f"Norme invalide « {text} » (attendu lp:<p|inf>, wlp:<p>:<w1,...> ou ip:<fichier>)")


def parse_vector(text: str, name: str) -> List[float]:
    """Vecteur donné en ligne sous forme de tableau JSON"""
    try:
        values = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--{name} n'est pas un tableau JSON : {e}")
    if not isinstance(values, list) or not values:
        raise UsageError(f"--{name} doit être un tableau JSON non vide")
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        raise UsageError(f"--{name} doit ne contenir que des nombres")


def read_matrix(source: str) -> List[List[float]]:
    """Matrice en ligne (JSON) ou chemin d'un fichier JSON/CSV"""
    if source.lstrip().startswith("["):
        try:
            return json.loads(source)
        except json.JSONDecodeError as e:
            raise UsageError(f"Matrice JSON invalide : {e}")
    return load_matrix(source)


def _inputs(args) -> Dict[str, Any]:
    """x, y et ε depuis --file puis surchargés par --x, --y, --eps"""
    data: Dict[str, Any] = {}
    if args.file:
        data = json.loads(Path(args.file).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise UsageError(f"{args.file} doit contenir un objet JSON avec x et y")
    if args.x is not None:
        data["x"] = parse_vector(args.x, "x")
    if args.y is not None:
        data["y"] = parse_vector(args.y, "y")
    if args.eps is not None:
        data["eps"] = args.eps
    missing = [k for k in ("x", "y") if data.get(k) is None]
    if missing:
        raise UsageError(f"Vecteur(s) manquant(s) : {', '.join(missing)} (--x/--y ou --file)")
    return data


def build_run_config(args) -> RunConfig:
    """Configuration résolue ; la validation de ε ∈ [0, 1) se fait ici"""
    specs = [args.norm_spec] if getattr(args, "norm_spec", None) is not None else []
    return RunConfig(
        command=args.command if args.command != "claims" else f"claims {args.claims_command}",
        norm_specs=specs,
        eps=getattr(args, "eps", None),
        seed=args.seed,
        trials=getattr(args, "trials", None),
        tolerance=get_default_tolerance(),
        input_paths=[p for p in (getattr(args, "file", None), getattr(args, "matrix", None)) if p and not p.lstrip().startswith("[")],
        output_format=args.format,
    )


# Sorties

def _record(item: Any) -> Dict[str, Any]:
    if isinstance(item, BaseModel):
        return item.model_dump(mode="json")
    return to_jsonable(item)


def render(items: Sequence[Any], fmt: str) -> str:
    """Une ligne JSON par élément, ou un tableau CSV / markdown aplati"""
    records = [_record(item) for item in items]
    if fmt == "json":
        return "\n".join(json.dumps(r, ensure_ascii=False) for r in records)
    rows = [flatten_for_csv(r) for r in records]
    headers: List[str] = []
    for row in rows:
        headers.extend(k for k in row if k not in headers)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=headers, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue().rstrip("\n")
    return format_markdown_table(headers, [[row.get(h, "") for h in headers] for row in rows])


def claims_summary(reports: Sequence[ClaimReport]) -> str:
    """Tableau récapitulatif d'une campagne d'audit"""
    rows = []
    for report in reports:
        witness = report.worst_witness
        rows.append([
            report.id,
            report.status.value,
            report.trials_run,
            report.premise_hits,
            report.violations,
            f"{witness.relative_margin:.3e}" if witness is not None else "",
        ])
    return format_markdown_table(
        ["id", "status", "trials", "premise_hits", "violations", "worst_relative_margin"], rows
    )


# Sous-commandes

def cmd_eval(args, config: RunConfig) -> int:
    data = _inputs(args)
    eps = data.get("eps")
    if eps is not None and not 0 <= float(eps) < 1:
        raise UsageError("ε doit appartenir à [0, 1)")
    verdict = evaluate(args.relation, args.norm_spec, data["x"], data["y"], eps, config.tolerance)
    print(render([verdict], config.output_format))
    return EXIT_OK if verdict.holds else EXIT_FAILS


def cmd_hh(args, config: RunConfig) -> int:
    data = _inputs(args)
    values = hh_values(args.norm_spec, data["x"], data["y"], config.tolerance, args.method)
    print(render([values], config.output_format))
    return EXIT_OK


def cmd_map(args, config: RunConfig) -> int:
    codomain = parse_norm(args.codomain_norm) if args.codomain_norm else args.norm_spec
    linear_map = LinearMap.of(read_matrix(args.matrix), args.norm_spec, codomain)
    analysis = analyze(linear_map, config.eps, config.seed, args.samples)
    print(render([analysis], config.output_format))
    return EXIT_OK


def cmd_solve(args, config: RunConfig) -> int:
    data = _inputs(args)
    result = solve(args.kind, args.norm_spec, data["x"], data["y"], config.tolerance)
    print(render([result], config.output_format))
    return EXIT_OK


def cmd_claims(args, config: RunConfig) -> int:
    service = get_claim_service()
    if args.claims_command == "list":
        print(render(service.list_claims(), config.output_format))
        return EXIT_OK

    if not args.all and not args.ids:
        raise UsageError("claims run attend --all ou au moins un --id")
    ids = None if args.all else args.ids
    for claim_id in ids or []:
        service.get_claim(claim_id)
    reports = service.run_claims(ids, seed=config.seed, trials=config.trials, workers=args.workers)
    if config.output_format == "markdown":
        print(claims_summary(reports))
    else:
        print(render(reports, config.output_format))
    if args.summary:
        Path(args.summary).write_text(claims_summary(reports) + "\n", encoding="utf-8")
        logger.info(f"📊 Récapitulatif écrit dans {args.summary}")
    return EXIT_OK


# Analyseur

def _add_common(parser: argparse.ArgumentParser, vectors: bool = True) -> None:
    parser.add_argument("--norm", default="lp:2", help=(
        "Norme : lp:<p|inf>, wlp:<p>:<w1,...> ou ip:<fichier> (défaut lp:2). "
        "wlp:<p> vaut (Σwᵢ|vᵢ|^p)^(1/p) ; wlp:inf:<w1,...> vaut max(wᵢ|vᵢ|), poids non élevés à une puissance"
    ))
    if vectors:
        parser.add_argument("--x", help="Vecteur x (tableau JSON)")
        parser.add_argument("--y", help="Vecteur y (tableau JSON)")
        parser.add_argument("--file", help="Fichier JSON {\"x\": [...], \"y\": [...], \"eps\": ...}")
    parser.add_argument("--eps", type=float, help="Paramètre ε ∈ [0, 1)")
    parser.add_argument("--abs-tol", type=float, dest="abs_tol", help="Tolérance absolue (ORTHO_ABS_TOL)")
    parser.add_argument("--rel-tol", type=float, dest="rel_tol", help="Tolérance relative (ORTHO_REL_TOL)")
    parser.add_argument("--seed", type=int, default=None, help="Graine (défaut : ORTHO_SEED ou 0)")
    parser.add_argument("--format", choices=["json", "csv", "markdown"], default="json", help="Format de sortie")
    parser.add_argument("--log-level", dest="log_level", default=None, help="Niveau de log (défaut : ORTHO_LOG_LEVEL ou WARNING)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ortho",
        description="Orthogonalité de type Hermite–Hadamard dans les espaces normés de dimension finie",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="Évaluer une relation d'orthogonalité pour (x, y)")
    p_eval.add_argument("relation", choices=[r.value for r in RelationId], help="Relation")
    _add_common(p_eval)
    p_eval.set_defaults(handler=cmd_eval)

    p_hh = sub.add_parser("hh", help="Calculer I₊, I₋, leur écart et leur somme")
    _add_common(p_hh)
    p_hh.add_argument("--method", choices=list(METHODS), default="auto", help="Méthode de calcul")
    p_hh.set_defaults(handler=cmd_hh)

    p_map = sub.add_parser("map", help="Analyser une application linéaire")
    p_map.add_argument("matrix", help="Matrice : tableau JSON en ligne ou fichier JSON/CSV")
    _add_common(p_map, vectors=False)
    p_map.add_argument("--codomain-norm", dest="codomain_norm", help="Norme de l'espace d'arrivée (défaut : --norm)")
    p_map.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Nombre d'échantillons des rapports")
    p_map.set_defaults(handler=cmd_map)

    p_solve = sub.add_parser("solve", help="Solveurs 1-D")
    p_solve.add_argument("kind", choices=list(SOLVERS), help="Solveur")
    _add_common(p_solve)
    p_solve.set_defaults(handler=cmd_solve)

    p_claims = sub.add_parser("claims", help="Registre des assertions")
    claims_sub = p_claims.add_subparsers(dest="claims_command", required=True)
    p_list = claims_sub.add_parser("list", help="Lister les assertions")
    _add_common(p_list, vectors=False)
    p_run = claims_sub.add_parser("run", help="Auditer des assertions")
    _add_common(p_run, vectors=False)
    p_run.add_argument("--all", action="store_true", help="Toutes les assertions du registre")
    p_run.add_argument("--id", action="append", dest="ids", default=[], help="Identifiant (répétable)")
    p_run.add_argument("--trials", type=int, help="Nombre d'essais par assertion")
    p_run.add_argument("--workers", type=int, default=None, help="Lots évalués en parallèle (ORTHO_WORKERS)")
    p_run.add_argument("--summary", help="Écrire le récapitulatif markdown dans ce fichier")
    p_claims.set_defaults(handler=cmd_claims)
    return parser


def _configure(args) -> None:
    level = (args.log_level or os.getenv("ORTHO_LOG_LEVEL") or "WARNING").upper()
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    # les surcharges de tolérance passent par l'environnement pour atteindre tous les services
    if args.abs_tol is not None:
        os.environ["ORTHO_ABS_TOL"] = repr(args.abs_tol)
    if args.rel_tol is not None:
        os.environ["ORTHO_REL_TOL"] = repr(args.rel_tol)
    if args.seed is None:
        args.seed = get_default_seed()


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    _configure(args)
    try:
        args.norm_spec = parse_norm(args.norm)
        config = build_run_config(args)
        logger.debug(f"🔄 {config.model_dump_json()}")
        return args.handler(args, config)
    except (OrthogonalityError, ValidationError, ValueError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:
        logger.exception("❌ Erreur interne")
        print(f"❌ Erreur interne : {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
