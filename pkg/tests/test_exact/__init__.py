"""Tests of the exact arithmetic core."""
