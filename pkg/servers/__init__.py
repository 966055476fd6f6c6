"""
MCP Servers

Model Context Protocol server exposing the TM lab operations.
"""
