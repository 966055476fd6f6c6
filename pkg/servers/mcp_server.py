import asyncio
import json
import logging
import os
from typing import Any, Sequence

from dotenv import load_dotenv
from mcp.server import Server
from mcp.types import Tool, TextContent
import mcp.server.stdio

from tools.lab_tools import PROPERTIES, LabTools
from tools.report_tools import ReportAnalyzer

load_dotenv()

logging.basicConfig(level=os.getenv("TMLAB_LOG_LEVEL", "INFO").upper())
logger = logging.getLogger(__name__)

server = Server("tm-lab-mcp")
lab = LabTools()

MODEL_LIST = {
    "type": "array",
    "items": {"type": "string", "enum": ["wt", "wb", "dsm"]},
    "description": "Memory models to count RMRs under",
    "default": ["wt", "wb", "dsm"],
}


@server.list_tools()
async def list_tools() -> list[Tool]:
    return [
        Tool(
            name="check_trace",
            description="Check a history (JSON array) or execution log (JSON lines) for a TM property",
            inputSchema={
                "type": "object",
                "properties": {
                    "trace": {
                        "type": "string",
                        "description": "History JSON or execution log text"
                    },
                    "property": {
                        "type": "string",
                        "enum": list(PROPERTIES)
                    },
                    "bound": {
                        "type": "integer",
                        "description": "Largest number of transactions the serialization search accepts",
                        "default": 8
                    }
                },
                "required": ["trace", "property"]
            }
        ),
        Tool(
            name="measure_lower_bound",
            description="Build the adversarial read-validation executions and report step and space costs",
            inputSchema={
                "type": "object",
                "properties": {
                    "kind": {"type": "string", "enum": ["quadratic", "space"]},
                    "tm": {"type": "string", "default": "ref"},
                    "m": {"type": "integer", "minimum": 2, "default": 4}
                },
                "required": ["kind"]
            }
        ),
        Tool(
            name="run_mutex_experiment",
            description="Run the TM-based mutual exclusion algorithm and count RMRs per passage",
            inputSchema={
                "type": "object",
                "properties": {
                    "n": {"type": "integer", "minimum": 2, "default": 2},
                    "passes": {"type": "integer", "minimum": 1, "default": 1},
                    "mode": {"type": "string", "enum": ["roundrobin", "random"], "default": "roundrobin"},
                    "seed": {"type": "integer", "default": 0},
                    "models": MODEL_LIST,
                    "exhaustive": {"type": "boolean", "default": False},
                    "depth": {"type": "integer", "default": 48}
                }
            }
        ),
        Tool(
            name="simulate_workload",
            description="Run seeded random transaction workloads on a TM and check its claimed properties",
            inputSchema={
                "type": "object",
                "properties": {
                    "tm": {"type": "string", "default": "ref"},
                    "n": {"type": "integer", "default": 2},
                    "txns": {"type": "integer", "default": 2},
                    "objects": {"type": "integer", "default": 2},
                    "seed": {"type": "integer", "default": 0},
                    "sweep": {"type": "integer", "default": 1},
                    "mode": {"type": "string", "enum": ["roundrobin", "random"], "default": "random"},
                    "models": MODEL_LIST
                }
            }
        ),
        Tool(
            name="list_tms",
            description="List the available TM implementations and the properties each is checked for",
            inputSchema={
                "type": "object",
                "properties": {},
                "additionalProperties": False
            }
        ),
        Tool(
            name="inspect_report",
            description="Summarize a CSV report written by the lab and list its failing rows",
            inputSchema={
                "type": "object",
                "properties": {
                    "report_file": {
                        "type": "string",
                        "description": "Path to the CSV report"
                    }
                },
                "required": ["report_file"]
            }
        )
    ]


def _text(result: Any) -> list[TextContent]:
    return [TextContent(type="text", text=json.dumps(result, indent=2, default=str))]


@server.call_tool()
async def call_tool(name: str, arguments: dict[str, Any]) -> Sequence[TextContent]:
    arguments = arguments or {}
    if name == "check_trace":
        trace = arguments.get("trace", "")
        prop = arguments.get("property", "")
        if not prop:
            return [TextContent(type="text", text="Please provide a property to check")]
        return _text(lab.check_trace(trace, prop, arguments.get("bound", 8)))

    elif name == "measure_lower_bound":
        return _text(lab.measure_lower_bound(arguments.get("kind", ""), arguments.get("tm", "ref"), arguments.get("m", 4)))

    elif name == "run_mutex_experiment":
        return _text(lab.run_mutex_experiment(**arguments))

    elif name == "simulate_workload":
        return _text(lab.simulate_workload(**arguments))

    elif name == "list_tms":
        return _text(lab.list_tms())

    elif name == "inspect_report":
        try:
            report_file = arguments.get("report_file", "")
            if not os.path.exists(report_file):
                return [TextContent(type="text", text=f"File '{report_file}' not found")]
            analyzer = ReportAnalyzer(report_file)
            result = {"info": analyzer.get_info(), "failing": analyzer.failing_rows()}
            return _text(result)
        except Exception as e:
            logger.error("Error inspecting report: %s", e)
            return [TextContent(type="text", text=f"Error inspecting report: {str(e)}")]

    else:
        raise ValueError(f"Unknown tool: {name}")


async def main():
    async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            server.create_initialization_options()
        )


if __name__ == "__main__":
    asyncio.run(main())
