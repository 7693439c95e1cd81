"""
Command registry for the cwres CLI.

This module provides the base CommandGroup class and the CommandRegistry
that discovers command groups under `cwres/commands/` and routes calls.
"""

import importlib
import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from cwres.errors import InputError
from cwres.field_linalg import FieldConfig

logger = logging.getLogger(__name__)

COMMANDS_DIR = Path(__file__).parent / "commands"


class CommandOutcome(BaseModel):
    ok: bool
    result: Any = None
    warnings: List[str] = Field(default_factory=list)
    inputs: Dict[str, str] = Field(default_factory=dict)


class CommandGroup(ABC):
    """
    Base class for a group of CLI commands.

    Each group lives in its own directory with a manifest.json describing
    its commands and a command.py defining `<Group>Commands`.
    """

    def __init__(self, group_name: str):
        self.group_name = group_name
        self.manifest = self._load_manifest()

    def _load_manifest(self) -> Dict[str, Any]:
        manifest_path = COMMANDS_DIR / self.group_name / "manifest.json"
        if not manifest_path.exists():
            raise FileNotFoundError(f"No manifest.json found for command group {self.group_name}")
        with open(manifest_path, "r", encoding="utf-8") as f:
            return json.load(f)

    @abstractmethod
    def execute(self, command_name: str, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        """
        Run a command.

        Args:
            command_name: name as listed in the manifest
            parameters: values keyed by the manifest parameter names
            field: coefficient field for every computation

        Returns:
            CommandOutcome with the JSON-ready result
        """

    def get_commands(self) -> List[Dict[str, Any]]:
        return self.manifest.get("commands", [])


class CommandRegistry:
    """Discovers command groups and dispatches commands by name."""

    def __init__(self):
        self.groups: Dict[str, CommandGroup] = {}
        self._load_groups()

    def _load_groups(self) -> None:
        if not COMMANDS_DIR.exists():
            return
        for group_path in sorted(COMMANDS_DIR.iterdir()):
            if group_path.is_dir() and not group_path.name.startswith("_"):
                try:
                    self._load_group(group_path.name)
                except Exception as e:
                    logger.warning("Failed to load command group %s: %s", group_path.name, e)

    def _load_group(self, group_name: str) -> None:
        module = importlib.import_module(f"cwres.commands.{group_name}.command")
        class_name = "".join(word.capitalize() for word in group_name.split("_")) + "Commands"
        if not hasattr(module, class_name):
            raise AttributeError(f"No {class_name} class found in {group_name}")
        self.groups[group_name] = getattr(module, class_name)(group_name)
        logger.info("Loaded command group: %s", group_name)

    def get_all_commands(self) -> List[Dict[str, Any]]:
        return [command for group in self.groups.values() for command in group.get_commands()]

    def get_command(self, command_name: str) -> Optional[Dict[str, Any]]:
        return next((c for c in self.get_all_commands() if c["name"] == command_name), None)

    def get_group_for_command(self, command_name: str) -> Optional[CommandGroup]:
        for group in self.groups.values():
            if any(c["name"] == command_name for c in group.get_commands()):
                return group
        return None

    def execute_command(self, command_name: str, parameters: Dict[str, Any], field: FieldConfig) -> CommandOutcome:
        group = self.get_group_for_command(command_name)
        if group is None:
            raise InputError(f"No command group provides {command_name}", location="command")
        spec = self.get_command(command_name)
        for name in spec["parameters"].get("required", []):
            if parameters.get(name) in (None, ""):
                raise InputError(f"{command_name} needs --{name.replace('_', '-')}", location=name)
        logger.info("Running %s", command_name)
        return group.execute(command_name, parameters, field)


# Global registry instance
registry = CommandRegistry()
