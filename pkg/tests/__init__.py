"""Test suite for Agent Zero."""
