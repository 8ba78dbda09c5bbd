from .cli import COMMANDS, main, run_command
from .records import append_jsonl, csv_text, format_float, record_line, write_csv
from .scenario import (Campaign, Numerics, ParseError, Scenario, ScenarioError, load_scenario,
                       parse_scenario, scenario_digest, scenario_from_dict, serialize_scenario)

__all__ = ["COMMANDS", "Campaign", "Numerics", "ParseError", "Scenario", "ScenarioError",
           "append_jsonl", "csv_text", "format_float", "load_scenario", "main",
           "parse_scenario", "record_line", "run_command", "scenario_digest",
           "scenario_from_dict", "serialize_scenario", "write_csv"]
