"""Table-driven correlation between policy categories and law requirements."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus import CategoryLabel
from .lawmodel import ConfigError, Law, RequirementCategory
from .validation import require


@dataclass(frozen=True)
class MappingTable:
    law: Law
    edges: frozenset[tuple[CategoryLabel, RequirementCategory]]

    def __post_init__(self) -> None:
        for _, requirement in self.edges:
            require(
                requirement.law == self.law,
                f"edge references {requirement.value}, which is not a {self.law.value} requirement",
                ConfigError,
            )
        covered = {requirement for _, requirement in self.edges}
        for requirement in RequirementCategory.for_law(self.law):
            require(
                requirement in covered,
                f"requirement {requirement.value} has no incoming mapping edge",
                ConfigError,
            )


def load_mapping(config_path: str | Path) -> MappingTable:
    """Load a mapping config: ``{version, law, edges: [{policy_category, requirement}]}``."""
    path = Path(config_path)
    if not path.is_file():
        raise ConfigError(f"mapping config not found: {path}")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    require(raw.get("version") == 1, f"unsupported mapping config version: {raw.get('version')}", ConfigError)
    law = Law.parse(raw["law"])
    edges = set()
    for entry in raw["edges"]:
        try:
            category = CategoryLabel.parse(entry["policy_category"])
        except Exception as err:
            raise ConfigError(str(err)) from None
        requirement = RequirementCategory.parse(entry["requirement"])
        edges.add((category, requirement))
    return MappingTable(law=law, edges=frozenset(edges))


def requirements_for(
    table: MappingTable, labels: Iterable[CategoryLabel]
) -> set[RequirementCategory]:
    """Union of requirement categories reached from the given policy labels."""
    wanted = set(labels)
    return {requirement for category, requirement in table.edges if category in wanted}
