"""
Command Router - Maps CLI subcommands to their pipelines.
Each handler takes the parsed arguments and returns a report payload.
"""

import argparse
import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from app.config import resolve_order_bound
from app.constants import COMMAND_GROUPS
from modules.dihedral_catalog import dihedral_dossier
from modules.group_engine import (
    GroupAutomorphism,
    PermGroup,
    automorphism_from_images,
    generate,
    group_from_json,
    point_stabilizer,
)
from modules.nielsen import (
    BranchTuple,
    Equivalence,
    NielsenClassSpec,
    NielsenReport,
    enumerate_nielsen,
)
from modules.perm_core import Perm, parse_perm
from modules.schinzel import PairSetup, VerdictReport, charschinzel_check, is_newly_reducible
from modules.search import (
    SearchConfig,
    classify_normal_sigma_infty,
    search_schinzel,
    verify_gusic_conjecture,
)
from modules.wreath_ext import comp_branch_report
from services.cache_service import cache_key, get_result_cache
from services.report_service import survivor_summary, to_jsonable, write_candidates_csv
from utils.exceptions import MalformedPermutationError, MalformedTupleError
from utils.logger import get_logger

logger = get_logger(__name__)

Handler = Callable[[argparse.Namespace], Any]


def load_json_file(path: Path) -> Any:
    """Parsed JSON of an input file; unreadable files are usage errors."""
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedTupleError(f"Cannot read {path}: {e}", "input_file") from e


def resolve_class_labels(G: PermGroup, tokens: List[str]) -> Tuple[str, ...]:
    """Accept class labels or cycle strings of class members."""
    known = {c.label for c in G.classes}
    labels = []
    for token in tokens:
        if token in known:
            labels.append(token)
            continue
        try:
            member = parse_perm(token, G.degree)
        except MalformedPermutationError:
            raise MalformedTupleError(f"{token!r} is neither a class label nor a permutation", "classes") from None
        labels.append(G.class_of(member).label)
    return tuple(labels)


def load_gamma(G: PermGroup, t: BranchTuple, data: Dict[str, Any]) -> GroupAutomorphism:
    """
    gamma from {"images": [...]} (images of the tuple entries) or
    {"generators": [...], "generator_images": [...]}.
    """
    if "images" in data:
        images = [Perm.from_json(p) for p in data["images"]]
        return automorphism_from_images(G, images, generators=t.entries)
    gens = [Perm.from_json(p) for p in data["generators"]]
    images = [Perm.from_json(p) for p in data["generator_images"]]
    return automorphism_from_images(G, images, generators=gens)


class CommandRouter:
    """
    Command router for the CLI.
    Routes are grouped the way ``--help`` lists them.
    """

    def __init__(self):
        self.routes: Dict[str, Handler] = {
            # Catalog
            "dihedral": self._dihedral,
            "compbranch": self._compbranch,
            # Nielsen classes
            "nielsen": self._nielsen,
            "schinzel": self._schinzel,
            # Search
            "search": self._search,
            "classify": self._classify,
            "conjecture": self._conjecture,
        }
        self.command_groups = COMMAND_GROUPS

    def run(self, command: str, args: argparse.Namespace) -> Any:
        """Run one subcommand and return its JSON-ready payload."""
        if command not in self.routes:
            raise MalformedTupleError(f"Unknown command {command!r}", "command")
        logger.info(f"Running {command}")
        result = self.routes[command](args)
        return to_jsonable(result) if isinstance(result, (BaseModel, list)) else result

    def get_command_group(self, command: str) -> Optional[str]:
        for group, commands in self.command_groups.items():
            if command in commands:
                return group
        return None

    # ---- catalog ----------------------------------------------------

    def _dihedral(self, args: argparse.Namespace) -> BaseModel:
        return dihedral_dossier(args.n)

    def _compbranch(self, args: argparse.Namespace) -> BaseModel:
        return comp_branch_report(args.n, args.v)

    # ---- nielsen classes --------------------------------------------

    def _nielsen(self, args: argparse.Namespace) -> BaseModel:
        G = group_from_json(load_json_file(args.group), order_bound=args.order_bound)
        labels = resolve_class_labels(G, args.classes)
        spec = NielsenClassSpec(G, labels, Equivalence(args.equivalence))
        result = enumerate_nielsen(spec, order_bound=args.order_bound, ordered=args.ordered)
        return NielsenReport.from_enumeration(result)

    def _schinzel(self, args: argparse.Namespace) -> Dict[str, Any]:
        tuple_data = load_json_file(args.tuple)
        gamma_data = load_json_file(args.gamma)
        key = cache_key("schinzel", {
            "tuple": tuple_data,
            "gamma": gamma_data,
            "v": args.v,
            "order_bound": resolve_order_bound(args.order_bound),
        })
        cache = get_result_cache(enabled=not args.no_cache)

        def compute() -> Dict[str, Any]:
            t = BranchTuple.from_json(tuple_data)
            if t.infinity_slot is None:
                t = t.with_infinity_slot(t.r)
            G = generate(t.entries, order_bound=args.order_bound)
            gamma = load_gamma(G, t, gamma_data)
            criterion = charschinzel_check(G, None, t, gamma, args.v)
            h_f = point_stabilizer(G, 1)
            setup = PairSetup(G, h_f, gamma.image_of(h_f), gamma)
            return VerdictReport.from_verdict(is_newly_reducible(setup), criterion).model_dump(mode="json")

        return cache.get_or_compute(key, compute)

    # ---- search -----------------------------------------------------

    def _search(self, args: argparse.Namespace) -> Dict[str, Any]:
        config = SearchConfig(
            max_degree=args.max_n,
            min_degree=args.min_n,
            v=args.v,
            order_bound=args.order_bound,
            jobs=args.jobs,
            report_path=args.output,
            use_cache=not args.no_cache,
        )
        reports = search_schinzel(config)
        if args.csv is not None:
            write_candidates_csv(reports, args.csv)
        return {
            "config": config.model_dump(mode="json", include={"max_degree", "min_degree", "v"}),
            "summary": survivor_summary(reports),
            "candidates": to_jsonable(reports),
        }

    def _classify(self, args: argparse.Namespace) -> BaseModel:
        return classify_normal_sigma_infty(args.n, args.v, order_bound=args.order_bound)

    def _conjecture(self, args: argparse.Namespace) -> BaseModel:
        return verify_gusic_conjecture(
            args.max_n,
            args.v,
            jobs=args.jobs,
            order_bound=args.order_bound,
            use_cache=not args.no_cache,
        )
