import os
from typing import Any, Dict

from dotenv import load_dotenv

from utils.config_manager import ConfigManager

load_dotenv()


CONFIG_SCHEMA: Dict[str, Dict[str, Any]] = {
	"default_seed": {"type": int, "default": 0, "description": "Standard-Seed für Stichproben (--seed)."},
	"fragment_budget": {"type": int, "default": 1_000_000, "description": "Maximale Größe eines Klon-Fragments."},
	"relation_budget": {"type": int, "default": 1_000_000, "description": "Maximale Größe einer erzeugten Relation."},
	"partial_budget": {"type": int, "default": 100_000, "description": "Maximale Größe eines partiellen Klons."},
	"semigroup_budget": {"type": int, "default": 10_000, "description": "Obergrenze für erzeugte Halbgruppen."},
	"group_box_radius": {"type": int, "default": 64, "description": "Box-Radius für Untergruppen mit freiem Rang."},
	"relational_generator_cap": {"type": int, "default": 2, "description": "Stelligkeit, bis zu der Pol-Klone Erzeuger bekommen."},
	"generator_seed": {"type": int, "default": 0, "description": "Seed für die Erzeugerauswahl relationaler Klone."},
	"slow_task_ms": {"type": float, "default": 10_000.0, "description": "Ab dieser Dauer gilt eine Aufgabe als langsam."},
	"log_level": {"type": str, "default": "WARNING", "description": "Log-Level der Kommandozeile.", "choices": ["DEBUG", "INFO", "WARNING", "ERROR"]},
	"report_format": {"type": str, "default": "text", "description": "Berichtsformat: text oder json.", "choices": ["text", "json"]},
}

ENV_OVERRIDES = {
	"default_seed": os.getenv("CLONEBENCH_SEED"),
	"fragment_budget": os.getenv("CLONEBENCH_FRAGMENT_BUDGET"),
	"relation_budget": os.getenv("CLONEBENCH_RELATION_BUDGET"),
	"partial_budget": os.getenv("CLONEBENCH_PARTIAL_BUDGET"),
	"semigroup_budget": os.getenv("CLONEBENCH_SEMIGROUP_BUDGET"),
	"group_box_radius": os.getenv("CLONEBENCH_GROUP_BOX_RADIUS"),
	"relational_generator_cap": os.getenv("CLONEBENCH_GENERATOR_CAP"),
	"generator_seed": os.getenv("CLONEBENCH_GENERATOR_SEED"),
	"slow_task_ms": os.getenv("CLONEBENCH_SLOW_TASK_MS"),
	"log_level": os.getenv("CLONEBENCH_LOG_LEVEL"),
	"report_format": os.getenv("CLONEBENCH_REPORT_FORMAT"),
}

config_manager = ConfigManager(CONFIG_SCHEMA, storage_path=os.getenv("CLONEBENCH_CONFIG", "data/config.json"), overrides=ENV_OVERRIDES)


__all__ = ["config_manager", "CONFIG_SCHEMA", "ENV_OVERRIDES"]
